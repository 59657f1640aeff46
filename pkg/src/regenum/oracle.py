"""Brute-force counters for small n.

Structures are families of *blocks* on the vertex set [n]: a block is a
tuple of vertices (an edge, a loop, a hyperedge, an ordered pair, ...),
and a vertex's degree is the number of times it occurs across all blocks.
Blocks are taken in order of their first vertex and each is either used
or not (or used several times, for multisets); once every block starting
at vertex v has been decided, v's degree is final and must lie in S.
Partial families with equal degree vectors are counted together.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product

from .species import AtomKind, Mode, SpeciesExpr, resolve_class

__all__ = [
    "GraphKind", "OracleBoundError", "count_blocks", "count_graphs_brute",
    "count_hypergraphs_brute", "count_covers_brute", "count_class_brute",
    "block_types",
]

GRAPH_MAX_N = {"simple": 8, "multi": 7}
HYPER_MAX_N = 9
COVER_MAX_N = 7


class OracleBoundError(ValueError):
    pass


@dataclass(frozen=True)
class GraphKind:
    loops_allowed: bool = False
    multiedges_allowed: bool = False

    @property
    def preset(self) -> str:
        return {(False, False): "E[e2]", (True, False): "E[h2]",
                (False, True): "H[e2]", (True, True): "H[h2]"}[(self.loops_allowed, self.multiedges_allowed)]


SIMPLE = GraphKind()


def _necklaces(n: int, k: int) -> list[tuple[int, ...]]:
    # canonical representative of each k-tuple orbit under rotation
    reps = set()
    for word in product(range(n), repeat=k):
        reps.add(min(word[i:] + word[:i] for i in range(k)))
    return sorted(reps)


def block_types(n: int, atom_kind: AtomKind, k: int, mode: Mode) -> list[tuple[int, ...]]:
    """All coloured atoms on [n] (as vertex tuples), one entry per distinct colouring."""
    verts = range(n)
    if atom_kind is AtomKind.SINGLETON:
        return [(v,) for v in verts]
    if atom_kind is AtomKind.SET:
        if mode is Mode.GAMMA:
            return list(combinations(verts, k))
        return list(combinations_with_replacement(verts, k))
    if atom_kind is AtomKind.MULTISET:
        return list(combinations_with_replacement(verts, k))
    if atom_kind is AtomKind.LIST:
        return list(product(verts, repeat=k))
    if atom_kind is AtomKind.CYCLE:
        return _necklaces(n, k)
    raise ValueError(atom_kind)


def count_blocks(n: int, blocks: list[tuple[int, ...]], S, repeat: bool, reverse: bool = False) -> int:
    """Number of families of blocks (a set if not ``repeat``, else a multiset)
    in which every vertex of [n] has degree in S.

    ``blocks`` may contain equal tuples; they count as distinct block types.
    ``reverse`` processes vertices from n-1 down to 0, an independent
    iteration order used to cross-check the count.
    """
    S = frozenset(S)
    cap = max(S)
    order = list(range(n - 1, -1, -1)) if reverse else list(range(n))
    rank = {v: i for i, v in enumerate(order)}
    by_first: list[list[tuple[tuple[int, int], ...]]] = [[] for _ in range(n)]
    for b in blocks:
        counts: dict[int, int] = {}
        for v in b:
            counts[rank[v]] = counts.get(rank[v], 0) + 1
        if max(counts.values()) > cap:
            continue
        by_first[min(counts)].append(tuple(sorted(counts.items())))

    # states: degree vector (positions already finalized are reset to 0) -> count
    states: dict[tuple[int, ...], int] = {(0,) * n: 1}
    for pos in range(n):
        for vec in by_first[pos]:
            new: dict[tuple[int, ...], int] = dict(states)
            for st, c in states.items():
                cur = list(st)
                while True:
                    if any(cur[i] + a > cap for i, a in vec):
                        break
                    for i, a in vec:
                        cur[i] += a
                    key = tuple(cur)
                    new[key] = new.get(key, 0) + c
                    if not repeat:
                        break
            states = new
        merged: dict[tuple[int, ...], int] = {}
        for st, c in states.items():
            if st[pos] in S:
                key = st[:pos] + (0,) + st[pos + 1:]
                merged[key] = merged.get(key, 0) + c
        states = merged
    return sum(states.values())


def _check(n: int, limit: int, what: str) -> None:
    if n < 0:
        raise OracleBoundError("n must be nonnegative")
    if n > limit:
        raise OracleBoundError(f"{what}: n = {n} exceeds the brute-force bound {limit}")


def count_graphs_brute(n: int, S, kind: GraphKind = SIMPLE, reverse: bool = False) -> int:
    """Labelled graphs of the given kind on n vertices with all degrees in S.

    A loop adds 2 to its vertex's degree.
    """
    limit = GRAPH_MAX_N["multi" if kind.multiedges_allowed else "simple"]
    _check(n, limit, "count_graphs_brute")
    blocks = list(combinations(range(n), 2))
    if kind.loops_allowed:
        blocks += [(v, v) for v in range(n)]
    return count_blocks(n, blocks, S, kind.multiedges_allowed, reverse)


def count_hypergraphs_brute(n: int, j: int, k: int, kind: GraphKind = SIMPLE) -> int:
    """Labelled j-uniform hypergraphs on n vertices, each vertex in exactly k edges.

    ``loops_allowed`` admits edges with repeated vertices (j-multisets);
    ``multiedges_allowed`` admits repeated edges.
    """
    _check(n, HYPER_MAX_N, "count_hypergraphs_brute")
    if kind.loops_allowed:
        blocks = list(combinations_with_replacement(range(n), j))
    else:
        blocks = list(combinations(range(n), j))
    return count_blocks(n, blocks, {k}, kind.multiedges_allowed)


def count_covers_brute(n: int, sizes, k: int) -> int:
    """Restrictive k-regular covers of [n]: distinct blocks with sizes in ``sizes``,
    each element in exactly k blocks."""
    _check(n, COVER_MAX_N, "count_covers_brute")
    blocks = [b for s in sorted(set(sizes)) for b in combinations(range(n), s)]
    return count_blocks(n, blocks, {k}, repeat=False)


def count_class_brute(expr, n: int, S, reverse: bool = False) -> int:
    """Brute-force count for any species expression E[P] / H[P]."""
    expr: SpeciesExpr = resolve_class(expr)
    blocks = []
    for atom, mult in expr.inner:
        blocks += block_types(n, atom.kind, atom.k, expr.mode) * mult
    # sets of blocks only for the asymmetry series of E
    repeat = not expr.signs_alternate
    return count_blocks(n, blocks, S, repeat, reverse)
