"""Species expressions E[P] / H[P] and their compiled exponents.

A class is a set (outer E) or multiset (outer H) of small structures drawn
from a finite sum of atoms.  Its index series is exp(g) with

    g = sum_k sigma_k P[p_k] / k,

where P is the sum of the atom index polynomials and sigma_k is (-1)^{k-1}
for sets counted without internal symmetry and +1 otherwise.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from enum import Enum
from math import gcd

from gmpy2 import mpq

from .symkernel import PowerSumPoly, e, h, mono_weight, plethysm_pn

__all__ = [
    "AtomKind", "Outer", "Mode", "SpeciesAtom", "SpeciesExpr", "ClassPreset",
    "SpeciesError", "atom_index_poly", "inner_poly", "compile_exponent",
    "parse_species", "resolve_class", "PRESETS", "cycle_index", "preset_catalog_hash",
]


class SpeciesError(ValueError):
    pass


class AtomKind(Enum):
    SET = "e"
    MULTISET = "h"
    CYCLE = "c"
    LIST = "l"
    SINGLETON = "x"


class Outer(Enum):
    E = "E"
    H = "H"


class Mode(Enum):
    Z = "Z"
    GAMMA = "Gamma"


@dataclass(frozen=True, order=True)
class SpeciesAtom:
    kind: AtomKind
    k: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise SpeciesError("atom size must be >= 1")
        if self.kind is AtomKind.SINGLETON and self.k != 1:
            raise SpeciesError("singleton atom has k = 1")

    def __str__(self) -> str:
        if self.kind is AtomKind.SINGLETON:
            return "x"
        return f"{self.kind.value}{self.k}"


@dataclass(frozen=True)
class SpeciesExpr:
    """outer[ sum of mult * atom ] in the given counting mode."""

    inner: tuple[tuple[SpeciesAtom, int], ...]
    outer: Outer = Outer.E
    mode: Mode = Mode.GAMMA

    def __post_init__(self):
        merged: dict[SpeciesAtom, int] = {}
        for atom, mult in self.inner:
            if mult < 0:
                raise SpeciesError("negative multiplicities are not supported")
            if mult:
                merged[atom] = merged.get(atom, 0) + mult
        if not merged:
            raise SpeciesError("inner species must be nonempty")
        canon = tuple(sorted(merged.items(), key=lambda am: (am[0].k, am[0].kind.value)))
        object.__setattr__(self, "inner", canon)
        if self.mode is Mode.GAMMA:
            for atom, _ in canon:
                if atom.kind is AtomKind.CYCLE:
                    raise SpeciesError("asymmetry series of cycles is not supported")

    @property
    def signs_alternate(self) -> bool:
        return self.outer is Outer.E and self.mode is Mode.GAMMA

    def canonical(self) -> str:
        terms = "+".join(str(a) if m == 1 else f"{m}{a}" for a, m in self.inner)
        if self.mode is Mode.Z:
            if self.outer is Outer.E:
                return f"Z(E o {terms.upper()})"
            return f"ZH[{terms}]"
        return f"{self.outer.value}[{terms}]"

    def __str__(self) -> str:
        return self.canonical()


@dataclass(frozen=True)
class ClassPreset:
    name: str
    expr: SpeciesExpr
    description: str = field(default="", compare=False)


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def cycle_index(k: int) -> PowerSumPoly:
    """Z_{C_k} = (1/k) sum_{d | k} phi(d) p_d^{k/d}."""
    terms = {}
    for d in range(1, k + 1):
        if k % d == 0:
            mono = [0] * d
            mono[d - 1] = k // d
            terms[tuple(mono)] = mpq(_totient(d), k)
    return PowerSumPoly(terms)


def atom_index_poly(atom: SpeciesAtom, mode: Mode) -> PowerSumPoly:
    kind, k = atom.kind, atom.k
    if kind is AtomKind.SET:
        return e(k) if mode is Mode.GAMMA else h(k)
    if kind is AtomKind.MULTISET:
        return h(k)
    if kind is AtomKind.LIST:
        return PowerSumPoly({(k,): 1})
    if kind is AtomKind.SINGLETON:
        return PowerSumPoly({(1,): 1})
    if kind is AtomKind.CYCLE:
        if mode is Mode.GAMMA:
            raise SpeciesError("no asymmetry series for cycles")
        return cycle_index(k)
    raise SpeciesError(f"unsupported atom {atom}")


def inner_poly(expr: SpeciesExpr) -> PowerSumPoly:
    total = PowerSumPoly()
    for atom, mult in expr.inner:
        total = total + atom_index_poly(atom, expr.mode).scale(mult)
    return total


def compile_exponent(expr: SpeciesExpr, m: int, W: int | None = None) -> PowerSumPoly:
    """Exponent g with index series exp(g), restricted to p_1..p_m and weight <= W."""
    if m < 1:
        raise SpeciesError("need m >= 1")
    if W is not None and W < 0:
        raise SpeciesError("need W >= 0")
    P = inner_poly(expr)
    if P.constant_term():
        raise SpeciesError("inner species must have no constant term")
    g = PowerSumPoly()
    # P[p_k] only involves p_j with j >= k, so layers beyond m vanish
    for k in range(1, m + 1):
        sign = (-1) ** (k - 1) if expr.signs_alternate else 1
        layer = plethysm_pn(P, k).restrict(m)
        g = g + layer.scale(mpq(sign, k))
    if W is not None:
        g = PowerSumPoly({mono: c for mono, c in g.terms.items() if mono_weight(mono) <= W}, W)
    return g


# -- grammar ----------------------------------------------------------------

_ATOM_RE = re.compile(r"^(\d*)\*?([ehclxEHCLX])(\d*)$")
_KIND = {"e": AtomKind.SET, "h": AtomKind.MULTISET, "c": AtomKind.CYCLE,
         "l": AtomKind.LIST, "x": AtomKind.SINGLETON}


def _parse_inner(text: str) -> tuple[tuple[SpeciesAtom, int], ...]:
    atoms = []
    for chunk in text.split("+"):
        chunk = chunk.strip().replace(" ", "")
        m = _ATOM_RE.match(chunk)
        if not m:
            raise SpeciesError(f"cannot parse atom {chunk!r}")
        mult = int(m.group(1)) if m.group(1) else 1
        kind = _KIND[m.group(2).lower()]
        if kind is AtomKind.SINGLETON:
            if m.group(3) not in ("", "1"):
                raise SpeciesError("x takes no size")
            k = 1
        else:
            if not m.group(3):
                raise SpeciesError(f"atom {chunk!r} needs a size")
            k = int(m.group(3))
        atoms.append((SpeciesAtom(kind, k), mult))
    return tuple(atoms)


def parse_species(text: str) -> SpeciesExpr:
    """Parse ``E[e2]``, ``H[h2]``, ``E[e1+e2+e3+e4]``, ``Z(E o L2)``, ``ZH[l2]``."""
    s = text.strip()
    m = re.fullmatch(r"([EH])\s*\[(.+)\]", s)
    if m:
        try:
            return SpeciesExpr(_parse_inner(m.group(2)), Outer(m.group(1)), Mode.GAMMA)
        except SpeciesError as err:
            raise SpeciesError(f"{text!r}: {err}") from None
    m = re.fullmatch(r"(Z|G|Gamma)\s*\(\s*E\s*o\s*(.+)\)", s)
    if m:
        mode = Mode.Z if m.group(1) == "Z" else Mode.GAMMA
        return SpeciesExpr(_parse_inner(m.group(2)), Outer.E, mode)
    m = re.fullmatch(r"ZH\s*\[(.+)\]", s)
    if m:
        return SpeciesExpr(_parse_inner(m.group(1)), Outer.H, Mode.Z)
    raise SpeciesError(f"cannot parse species expression {text!r}")


def _preset(name: str, text: str, description: str) -> ClassPreset:
    return ClassPreset(name, parse_species(text), description)


PRESETS: dict[str, ClassPreset] = {p.name: p for p in [
    _preset("SIMPLE_GRAPHS", "E[e2]", "simple graphs, no loops or multiple edges"),
    _preset("GRAPHS_LOOPS", "E[h2]", "graphs with loops (a loop adds 2 to the degree)"),
    _preset("MULTIGRAPHS", "H[e2]", "multigraphs without loops"),
    _preset("MULTIGRAPHS_LOOPS", "H[h2]", "multigraphs with loops"),
    _preset("UNIFORM_HYPERGRAPHS_3", "E[e3]", "3-uniform hypergraphs, no loops or repeated edges"),
    _preset("UNIFORM_HYPERGRAPHS_3_LOOPS", "E[h3]", "3-uniform hypergraphs with repeated vertices in an edge"),
    _preset("UNIFORM_MULTIHYPERGRAPHS_3", "H[e3]", "3-uniform hypergraphs with repeated edges"),
    _preset("UNIFORM_HYPERGRAPHS_4", "E[e4]", "4-uniform hypergraphs"),
    _preset("COVERS_1234", "E[e1+e2+e3+e4]", "restrictive covers by blocks of size 1..4"),
    _preset("DIGRAPHS", "Z(E o L2)", "directed multigraphs with loops; degree = in + out"),
    _preset("YOUNG_TABLEAUX", "H[e1+e2]", "multisets of singletons and pairs"),
]}


def resolve_class(spec) -> SpeciesExpr:
    """Accept a SpeciesExpr, a preset name, or an expression string."""
    if isinstance(spec, SpeciesExpr):
        return spec
    if isinstance(spec, ClassPreset):
        return spec.expr
    key = str(spec).strip()
    if key.upper() in PRESETS:
        return PRESETS[key.upper()].expr
    return parse_species(key)


def preset_catalog_hash() -> str:
    text = "\n".join(f"{p.name}={p.expr.canonical()}" for p in PRESETS.values())
    return hashlib.sha256(text.encode()).hexdigest()[:16]
