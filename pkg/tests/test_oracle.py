from __future__ import annotations

from itertools import combinations

import pytest

from reference_data import COVERS_2, DEGREE_SET_ROWS
from regenum.enumeration import count
from regenum.oracle import (
    SIMPLE, GraphKind, OracleBoundError, count_class_brute, count_covers_brute,
    count_graphs_brute, count_hypergraphs_brute,
)
from regenum.species import PRESETS

LOOPS = GraphKind(loops_allowed=True)
MULTI = GraphKind(multiedges_allowed=True)
BOTH = GraphKind(True, True)


def naive_simple(n, S):
    """Exhaustive count over all edge subsets, independent of the oracle's search."""
    edges = list(combinations(range(n), 2))
    total = 0
    for mask in range(1 << len(edges)):
        deg = [0] * n
        for b, (u, v) in enumerate(edges):
            if mask >> b & 1:
                deg[u] += 1
                deg[v] += 1
        total += all(d in S for d in deg)
    return total


def test_graph_examples():
    assert count_graphs_brute(4, {1}) == 3
    assert count_graphs_brute(4, {3}) == 1
    assert count_graphs_brute(3, {2}) == 1


def test_hypergraph_examples():
    assert count_hypergraphs_brute(3, 3, 1) == 1
    assert count_hypergraphs_brute(6, 3, 1) == 10
    assert count_hypergraphs_brute(4, 3, 3) == 1


def test_cover_examples():
    sizes = {1, 2, 3, 4}
    assert [count_covers_brute(n, sizes, 2) for n in range(5)] == COVERS_2[:5]
    assert count_covers_brute(1, sizes, 2) == 0


@pytest.mark.parametrize("n", range(1, 7))
def test_oracle_matches_exhaustive_subsets(n):
    for S in ({1}, {2}, {1, 2}, {1, 3}, {2, 4}, {0, 1, 2}):
        assert count_graphs_brute(n, S) == naive_simple(n, S), (n, S)


def test_complete_graph():
    for n in range(2, 9):
        assert count_graphs_brute(n, {n - 1}) == 1


@pytest.mark.parametrize("kind", [SIMPLE, LOOPS, MULTI, BOTH])
def test_two_iteration_orders_agree(kind):
    for n in range(6):
        for S in ({1}, {2}, {1, 3}, {2, 3}):
            assert count_graphs_brute(n, S, kind) == count_graphs_brute(n, S, kind, reverse=True)


def test_kind_presets():
    assert SIMPLE.preset == "E[e2]"
    assert LOOPS.preset == "E[h2]"
    assert MULTI.preset == "H[e2]"
    assert BOTH.preset == "H[h2]"


def test_loop_adds_two():
    # one vertex, one loop: degree 2
    assert count_graphs_brute(1, {2}, LOOPS) == 1
    assert count_graphs_brute(1, {1}, LOOPS) == 0


def test_bounds():
    with pytest.raises(OracleBoundError):
        count_graphs_brute(9, {2})
    with pytest.raises(OracleBoundError):
        count_graphs_brute(8, {2}, MULTI)
    with pytest.raises(OracleBoundError):
        count_covers_brute(8, {1, 2}, 2)
    with pytest.raises(OracleBoundError):
        count_hypergraphs_brute(10, 3, 1)


def test_reference_prefixes():
    for S, row in DEGREE_SET_ROWS.items():
        for n in range(8):
            assert count_graphs_brute(n, set(S)) == row[n], (S, n)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_engine_matches_oracle(name):
    for r in (1, 2):
        for S in combinations(range(1, 5), r):
            engine = count(name, S, 6).terms
            brute = [count_class_brute(name, n, S) for n in range(7)]
            assert engine == brute, (name, S)


def test_graph_kinds_match_engine():
    for kind in (SIMPLE, LOOPS, MULTI, BOTH):
        for S in ({1}, {2}, {3}, {1, 2}, {2, 4}):
            brute = [count_graphs_brute(n, S, kind) for n in range(8)]
            assert brute == count(kind.preset, S, 7).terms, (kind, S)
