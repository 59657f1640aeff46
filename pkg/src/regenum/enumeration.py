"""Counting sequences a_n = n! [t^n] <F, exp(t sum_{i in S} h_i)>.

Two independent routes:

* ``count_adjoint`` iterates the adjoint operator D = sum_i h_i^perp on
  A e^g, never expanding F itself.  a_n is the constant term of A_n.
* ``count_direct`` expands F = exp(g) by weight and pairs it with
  (sum_i h_i)^n under the Hall inner product.

Internally monomials are fixed-length tuples ``(weight, e_1, ..., e_m)`` so
that monomial multiplication is plain vector addition and the weight rides
along for free.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from gmpy2 import mpq

from . import __version__
from .species import compile_exponent, resolve_class
from .symkernel import h_sum, mono_weight, mono_z

__all__ = [
    "RegularityProfile", "Sequence", "IntegralityError", "ProfileError",
    "count_adjoint", "count_direct", "count", "verify_identity", "IdentityCheck",
    "DEFAULT_MAX_DEGREE",
]

DEFAULT_MAX_DEGREE = 6


class IntegralityError(ArithmeticError):
    """A counting term came out non-integral (truncation bug)."""


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class RegularityProfile:
    degrees: frozenset
    max_degree_limit: int = DEFAULT_MAX_DEGREE

    def __init__(self, degrees: Iterable[int], max_degree_limit: int = DEFAULT_MAX_DEGREE):
        degs = frozenset(int(d) for d in degrees)
        if not degs:
            raise ProfileError("degree set S must be nonempty")
        if min(degs) < 1:
            raise ProfileError("degrees must be positive")
        if max(degs) > max_degree_limit:
            raise ProfileError(f"max(S) = {max(degs)} exceeds the configured limit {max_degree_limit}")
        object.__setattr__(self, "degrees", degs)
        object.__setattr__(self, "max_degree_limit", max_degree_limit)

    @property
    def m(self) -> int:
        return max(self.degrees)

    def label(self) -> str:
        return ",".join(str(d) for d in sorted(self.degrees))


@dataclass
class Sequence:
    terms: list
    class_name: str
    profile: RegularityProfile
    method: str
    generator_version: str = __version__
    seconds: float = field(default=0.0, compare=False)

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]


def _profile(S) -> RegularityProfile:
    if isinstance(S, RegularityProfile):
        return S
    if isinstance(S, int):
        S = [S]
    return RegularityProfile(S)


def _fixed(mono: tuple, m: int) -> tuple:
    padded = tuple(mono) + (0,) * (m - len(mono))
    return (mono_weight(mono),) + padded


def _to_int(value: mpq, n: int, where: str) -> int:
    if value.denominator != 1:
        raise IntegralityError(f"{where}: term {n} = {value} is not an integer")
    return int(value)


def _prepare(expr, S):
    expr = resolve_class(expr)
    prof = _profile(S)
    m = prof.m
    g = compile_exponent(expr, m)
    return expr, prof, m, g


def count_adjoint(expr, S, N: int) -> Sequence:
    """Counting sequence a_0..a_N by repeated application of sum_{i in S} h_i^perp."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    start = time.perf_counter()
    expr, prof, m, g = _prepare(expr, S)
    degrees = sorted(prof.degrees)
    imax = degrees[-1]
    dg = []
    for j in range(1, m + 1):
        d = g.derivative(j)
        dg.append([(_fixed(mono, m), c) for mono, c in d.terms.items()])
    units = [tuple([j] + [int(i == j) for i in range(1, m + 1)]) for j in range(1, m + 1)]

    def D(A: dict, j: int, cap: int) -> dict:
        # d/dp_j on A e^g, expressed on the A side, weight-capped
        out: dict = {}
        get = out.get
        u = units[j - 1]
        terms = dg[j - 1]
        for mono, c in A.items():
            a = mono[j]
            if a:
                key = tuple([x - y for x, y in zip(mono, u)])
                out[key] = get(key, 0) + c * a
            w = mono[0]
            for gm, gc in terms:
                if w + gm[0] > cap:
                    continue
                key = tuple([x + y for x, y in zip(mono, gm)])
                out[key] = get(key, 0) + c * gc
        return out

    zero = (0,) * (m + 1)
    A = {zero: mpq(1)}
    terms = []
    for k in range(N + 1):
        terms.append(_to_int(A.get(zero, mpq(0)), k, "count_adjoint"))
        if k == N:
            break
        cap = (N - k - 1) * imax
        # h_i^perp = (1/i) sum_{j=1..i} j D_j h_{i-j}^perp
        B = [A]
        for i in range(1, imax + 1):
            acc: dict = {}
            bcap = cap + (imax - i)
            for j in range(1, i + 1):
                part = D(B[i - j], j, bcap)
                for key, c in part.items():
                    acc[key] = acc.get(key, 0) + c * j
            inv = mpq(1, i)
            B.append({key: c * inv for key, c in acc.items() if c and key[0] <= bcap})
        nxt: dict = {}
        for i in degrees:
            for key, c in B[i].items():
                if key[0] <= cap:
                    nxt[key] = nxt.get(key, 0) + c
        A = {key: c for key, c in nxt.items() if c}
    return Sequence(terms, expr.canonical(), prof, "adjoint", seconds=time.perf_counter() - start)


def count_direct(expr, S, N: int) -> Sequence:
    """Counting sequence a_0..a_N as <F, (sum_{i in S} h_i)^n> with F expanded by weight."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    start = time.perf_counter()
    expr, prof, m, g = _prepare(expr, S)
    scaled = [(_fixed(mono, m), c * mono_weight(mono)) for mono, c in g.terms.items()]
    # F by weight: w F_w = sum over g-terms of (weight * coeff) * F_{w - weight}
    comps: list[dict] = [{(0,) * (m + 1): mpq(1)}]

    def component(w: int) -> dict:
        while len(comps) <= w:
            cur = len(comps)
            acc: dict = {}
            for gm, gc in scaled:
                gw = gm[0]
                if gw > cur:
                    continue
                for fm, fc in comps[cur - gw].items():
                    key = tuple([a + b for a, b in zip(gm, fm)])
                    acc[key] = acc.get(key, 0) + gc * fc
            inv = mpq(1, cur)
            comps.append({key: c * inv for key, c in acc.items() if c})
        return comps[w]

    H = [(_fixed(mono, m), c) for mono, c in h_sum(prof.degrees).terms.items()]
    U = {(0,) * (m + 1): mpq(1)}
    terms = [1]
    for n in range(1, N + 1):
        nxt: dict = {}
        for um, uc in U.items():
            for hm, hc in H:
                key = tuple([a + b for a, b in zip(um, hm)])
                nxt[key] = nxt.get(key, 0) + uc * hc
        U = {key: c for key, c in nxt.items() if c}
        total = mpq(0)
        for key, uc in U.items():
            f = component(key[0]).get(key)
            if f is not None:
                total += f * uc * mono_z(_strip(key))
        terms.append(_to_int(total, n, "count_direct"))
    return Sequence(terms, expr.canonical(), prof, "direct", seconds=time.perf_counter() - start)


def _strip(key: tuple) -> tuple:
    mono = key[1:]
    k = len(mono)
    while k and not mono[k - 1]:
        k -= 1
    return mono[:k]


_METHODS = {"adjoint": count_adjoint, "direct": count_direct}


def count(expr, S, N: int, method: str = "adjoint") -> Sequence:
    try:
        fn = _METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(_METHODS)}") from None
    return fn(expr, S, N)


@dataclass(frozen=True)
class IdentityCheck:
    agree: bool
    first_divergence: int | None
    lhs: tuple
    rhs: tuple

    def __bool__(self) -> bool:
        return self.agree


def verify_identity(lhs, rhs, N: int, method: str = "adjoint") -> IdentityCheck:
    """Compare two (class, S) counting sequences over n = 0..N."""
    a = count(lhs[0], lhs[1], N, method).terms
    b = count(rhs[0], rhs[1], N, method).terms
    first = next((i for i, (x, y) in enumerate(zip(a, b)) if x != y), None)
    return IdentityCheck(first is None, first, tuple(a), tuple(b))
