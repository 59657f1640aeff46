"""Truncated symmetric series in the power-sum basis.

A symmetric function is stored as a sparse polynomial in p_1, p_2, ...
with exact rational coefficients (``gmpy2.mpq``).  A monomial
p_1^{e_1} p_2^{e_2} ... p_k^{e_k} is the exponent tuple ``(e_1, ..., e_k)``
with trailing zeros stripped; the empty tuple is the constant monomial.

Truncation is always by weighted degree, deg p_i = i.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence

from gmpy2 import mpq

Mono = tuple  # exponent tuple, no trailing zeros

__all__ = [
    "PowerSumPoly", "UniSeries", "Rat", "to_rat", "mono_weight", "mono_z",
    "partitions_of", "z_of", "p_lambda", "power_sum", "h", "e", "h_sum",
    "m_in_p", "exp_trunc", "plethysm_pn", "scalar_product", "theta",
    "specialize_egf", "specialize_ogf", "adjoint_h_step", "specialize_x",
]

Rat = mpq


def to_rat(c) -> mpq:
    if isinstance(c, str):
        return mpq(c)
    return mpq(c)


def _trim(mono: Sequence[int]) -> Mono:
    k = len(mono)
    while k and not mono[k - 1]:
        k -= 1
    return tuple(mono[:k])


def mono_weight(mono: Mono) -> int:
    return sum((i + 1) * a for i, a in enumerate(mono))


@lru_cache(maxsize=None)
def mono_z(mono: Mono) -> int:
    """<p_mono, p_mono>: product of i^{e_i} e_i!."""
    z = 1
    for i, a in enumerate(mono, start=1):
        if a:
            z *= i ** a * factorial(a)
    return z


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if len(a) < len(b):
        a, b = b, a
    return tuple([x + y for x, y in zip(a, b)]) + a[len(b):]


def _min_bound(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PowerSumPoly:
    """Sparse polynomial in the power sums with an optional weight bound.

    ``weight_bound`` W records that all terms of weighted degree > W were
    discarded; arithmetic propagates the smaller bound of its operands.
    Instances are treated as immutable.
    """

    __slots__ = ("terms", "weight_bound")

    def __init__(self, terms: Mapping[Sequence[int], object] | None = None,
                 weight_bound: int | None = None):
        clean: dict[Mono, mpq] = {}
        if terms:
            for mono, c in terms.items():
                c = to_rat(c)
                if not c:
                    continue
                mono = _trim(mono)
                if any(a < 0 for a in mono):
                    raise ValueError(f"negative exponent in {mono}")
                if weight_bound is not None and mono_weight(mono) > weight_bound:
                    continue
                clean[mono] = clean.get(mono, mpq(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self.terms: dict[Mono, mpq] = clean
        self.weight_bound = weight_bound

    @classmethod
    def _raw(cls, terms: dict, weight_bound: int | None) -> PowerSumPoly:
        # trusted constructor: keys already trimmed, no zeros, within bound
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.weight_bound = weight_bound
        return obj

    @classmethod
    def constant(cls, c=1) -> PowerSumPoly:
        return cls({(): c})

    @classmethod
    def zero(cls) -> PowerSumPoly:
        return cls()

    # -- inspection ---------------------------------------------------------
    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Mono, mpq]]:
        return iter(sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0])))

    def coefficient(self, mono: Sequence[int]) -> mpq:
        return self.terms.get(_trim(mono), mpq(0))

    def constant_term(self) -> mpq:
        return self.terms.get((), mpq(0))

    @property
    def nvars(self) -> int:
        """Largest index i with p_i present (0 for constants)."""
        return max((len(m) for m in self.terms), default=0)

    def max_weight(self) -> int:
        return max((mono_weight(m) for m in self.terms), default=0)

    def __eq__(self, other) -> bool:
        if isinstance(other, PowerSumPoly):
            return self.terms == other.terms
        if isinstance(other, (int, mpq)) or hasattr(other, "denominator"):
            return self.terms == PowerSumPoly.constant(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"PowerSumPoly({self.to_string()!r}, weight_bound={self.weight_bound})"

    def __str__(self) -> str:
        return self.to_string()

    # -- ring operations ----------------------------------------------------
    def _coerce(self, other) -> PowerSumPoly:
        if isinstance(other, PowerSumPoly):
            return other
        return PowerSumPoly.constant(other)

    def __add__(self, other) -> PowerSumPoly:
        other = self._coerce(other)
        bound = _min_bound(self.weight_bound, other.weight_bound)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        if bound is not None:
            out = {m: c for m, c in out.items() if mono_weight(m) <= bound}
        return PowerSumPoly._raw(out, bound)

    __radd__ = __add__

    def __neg__(self) -> PowerSumPoly:
        return PowerSumPoly._raw({m: -c for m, c in self.terms.items()}, self.weight_bound)

    def __sub__(self, other) -> PowerSumPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> PowerSumPoly:
        return self._coerce(other) - self

    def scale(self, c) -> PowerSumPoly:
        c = to_rat(c)
        if not c:
            return PowerSumPoly._raw({}, self.weight_bound)
        return PowerSumPoly._raw({m: c * v for m, v in self.terms.items()}, self.weight_bound)

    def __mul__(self, other) -> PowerSumPoly:
        if not isinstance(other, PowerSumPoly):
            return self.scale(other)
        bound = _min_bound(self.weight_bound, other.weight_bound)
        out: dict[Mono, mpq] = {}
        a_items = [(m, c, mono_weight(m)) for m, c in self.terms.items()]
        b_items = [(m, c, mono_weight(m)) for m, c in other.terms.items()]
        for ma, ca, wa in a_items:
            for mb, cb, wb in b_items:
                if bound is not None and wa + wb > bound:
                    continue
                mono = _mono_mul(ma, mb)
                out[mono] = out.get(mono, 0) + ca * cb
        return PowerSumPoly._raw({m: c for m, c in out.items() if c}, bound)

    def __rmul__(self, other) -> PowerSumPoly:
        return self.scale(other)

    def __truediv__(self, c) -> PowerSumPoly:
        return self.scale(1 / to_rat(c))

    def __pow__(self, n: int) -> PowerSumPoly:
        if n < 0:
            raise ValueError("negative power")
        result = PowerSumPoly({(): 1}, self.weight_bound)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- structural ---------------------------------------------------------
    def truncate(self, W: int) -> PowerSumPoly:
        bound = _min_bound(self.weight_bound, W)
        return PowerSumPoly._raw(
            {m: c for m, c in self.terms.items() if mono_weight(m) <= bound}, bound)

    def restrict(self, m: int) -> PowerSumPoly:
        """Set p_i = 0 for every i > m."""
        return PowerSumPoly._raw(
            {mono: c for mono, c in self.terms.items() if len(mono) <= m},
            self.weight_bound)

    def derivative(self, j: int) -> PowerSumPoly:
        """Partial derivative with respect to p_j."""
        out = {}
        for mono, c in self.terms.items():
            if len(mono) >= j and mono[j - 1]:
                a = mono[j - 1]
                new = list(mono)
                new[j - 1] = a - 1
                out[_trim(new)] = c * a
        bound = None if self.weight_bound is None else self.weight_bound - j
        return PowerSumPoly._raw(out, bound)

    def without_bound(self) -> PowerSumPoly:
        return PowerSumPoly._raw(dict(self.terms), None)

    # -- serialization ------------------------------------------------------
    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self:
            parts.append(f"{_rat_str(c)} * {_mono_str(mono)}")
        return " + ".join(parts)

    @classmethod
    def from_string(cls, text: str, weight_bound: int | None = None) -> PowerSumPoly:
        text = text.strip()
        if text == "0":
            return cls(weight_bound=weight_bound)
        terms: dict[Mono, mpq] = {}
        for chunk in text.split(" + "):
            coef, _, mono_txt = chunk.partition(" * ")
            mono_txt = mono_txt.strip()
            exps: dict[int, int] = {}
            if mono_txt != "1":
                for factor in mono_txt.split("*"):
                    m = re.fullmatch(r"p(\d+)(?:\^(\d+))?", factor.strip())
                    if not m:
                        raise ValueError(f"bad monomial {factor!r}")
                    i, a = int(m.group(1)), int(m.group(2) or 1)
                    exps[i] = exps.get(i, 0) + a
            mono = tuple(exps.get(i, 0) for i in range(1, max(exps, default=0) + 1))
            terms[mono] = terms.get(mono, 0) + mpq(coef.strip())
        return cls(terms, weight_bound)


def _grlex_key(mono: Mono):
    # graded by weight, then larger exponent on lower-index p first
    padded = tuple(-a for a in mono)
    return (mono_weight(mono), padded)


def _rat_str(c: mpq) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _mono_str(mono: Mono) -> str:
    if not mono:
        return "1"
    out = []
    for i, a in enumerate(mono, start=1):
        if a == 1:
            out.append(f"p{i}")
        elif a:
            out.append(f"p{i}^{a}")
    return "*".join(out)


@dataclass(frozen=True)
class UniSeries:
    """Truncated univariate power series sum_n c_n t^n, n = 0..order_bound."""

    coefficients: tuple

    @property
    def order_bound(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n: int) -> mpq:
        return self.coefficients[n]

    def __len__(self) -> int:
        return len(self.coefficients)

    def egf_terms(self) -> list[mpq]:
        """n! times each coefficient."""
        return [c * factorial(n) for n, c in enumerate(self.coefficients)]


# -- partitions -------------------------------------------------------------

@lru_cache(maxsize=None)
def _partitions(n: int, max_part: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n: int, max_part: int | None = None) -> list[tuple[int, ...]]:
    """All partitions of n in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return list(_partitions(n, n if max_part is None else max_part))


def partition_to_mono(lam: Iterable[int]) -> Mono:
    lam = list(lam)
    if not lam:
        return ()
    mono = [0] * max(lam)
    for part in lam:
        mono[part - 1] += 1
    return tuple(mono)


def mono_to_partition(mono: Mono) -> tuple[int, ...]:
    parts = []
    for i in range(len(mono), 0, -1):
        parts.extend([i] * mono[i - 1])
    return tuple(parts)


def z_of(lam: Iterable[int]) -> int:
    return mono_z(partition_to_mono(lam))


def p_lambda(lam: Iterable[int]) -> PowerSumPoly:
    return PowerSumPoly({partition_to_mono(lam): 1})


def power_sum(i: int) -> PowerSumPoly:
    return p_lambda((i,))


@lru_cache(maxsize=None)
def h(k: int) -> PowerSumPoly:
    """Complete homogeneous h_k = sum over lambda |- k of p_lambda / z_lambda."""
    return PowerSumPoly({partition_to_mono(lam): mpq(1, z_of(lam)) for lam in partitions_of(k)})


@lru_cache(maxsize=None)
def e(k: int) -> PowerSumPoly:
    """Elementary e_k = sum of (-1)^{k - len(lambda)} p_lambda / z_lambda."""
    return PowerSumPoly({
        partition_to_mono(lam): mpq((-1) ** (k - len(lam)), z_of(lam))
        for lam in partitions_of(k)
    })


def h_sum(degrees: Iterable[int]) -> PowerSumPoly:
    total = PowerSumPoly()
    for i in sorted(set(degrees)):
        total = total + h(i)
    return total


def _x_coefficient_of_p(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """Coefficient of x^mu in p_lambda: ways to drop each part of lambda into a box of mu."""
    @lru_cache(maxsize=None)
    def go(idx: int, residual: tuple[int, ...]) -> int:
        if idx == len(lam):
            return int(not any(residual))
        part = lam[idx]
        total = 0
        for b, r in enumerate(residual):
            if r >= part:
                nxt = residual[:b] + (r - part,) + residual[b + 1:]
                total += go(idx + 1, nxt)
        return total

    return go(0, tuple(mu))


@lru_cache(maxsize=None)
def _m_in_p_table(n: int) -> dict[tuple[int, ...], PowerSumPoly]:
    # p_lambda = sum_mu L[lambda][mu] m_mu, hence m_mu = sum_lambda Linv[mu][lambda] p_lambda
    parts = partitions_of(n)
    k = len(parts)
    T = [[mpq(_x_coefficient_of_p(lam, mu)) for mu in parts] + [mpq(int(i == j)) for j in range(k)]
         for i, lam in enumerate(parts)]
    for col in range(k):
        piv = next(r for r in range(col, k) if T[r][col])
        T[col], T[piv] = T[piv], T[col]
        inv = 1 / T[col][col]
        T[col] = [v * inv for v in T[col]]
        for r in range(k):
            if r != col and T[r][col]:
                f = T[r][col]
                T[r] = [a - f * b for a, b in zip(T[r], T[col])]
    return {
        mu: PowerSumPoly({partition_to_mono(lam): T[a][k + b] for b, lam in enumerate(parts)})
        for a, mu in enumerate(parts)
    }


def m_in_p(mu: Iterable[int]) -> PowerSumPoly:
    """Monomial symmetric function m_mu expressed in power sums."""
    mu = tuple(sorted(mu, reverse=True))
    return _m_in_p_table(sum(mu))[mu]


# -- series operations ------------------------------------------------------

def exp_trunc(g: PowerSumPoly, W: int) -> PowerSumPoly:
    """exp(g) truncated to weighted degree <= W.

    Uses the Euler-operator recursion w F_w = sum_k k g_k F_{w-k}, where
    subscripts are weight-homogeneous components.
    """
    if W < 0:
        raise ValueError("W must be nonnegative")
    if g.constant_term():
        raise ValueError("exp_trunc needs g with zero constant term")
    bound = _min_bound(g.weight_bound, W)
    m = g.nvars
    scaled: list[tuple[Mono, mpq, int]] = []
    for mono, c in g.terms.items():
        w = mono_weight(mono)
        if w <= bound:
            scaled.append((_pad(mono, m), c * w, w))
    comps = exp_components(scaled, m, bound)
    out = {}
    for comp in comps:
        for mono, c in comp.items():
            out[_trim(mono)] = c
    return PowerSumPoly._raw(out, bound)


def _pad(mono: Mono, m: int) -> tuple:
    return tuple(mono) + (0,) * (m - len(mono))


def exp_components(scaled_g, m: int, W: int, start=None) -> list[dict]:
    """Weight components F_0..F_W of exp(g) on fixed-length exponent tuples.

    ``scaled_g`` lists (mono, w * coeff, w) for the terms of g.
    """
    comps: list[dict] = [start if start is not None else {(0,) * m: mpq(1)}]
    for w in range(1, W + 1):
        acc: dict = {}
        for gm, gc, gw in scaled_g:
            if gw > w:
                continue
            for fm, fc in comps[w - gw].items():
                key = tuple([a + b for a, b in zip(gm, fm)])
                acc[key] = acc.get(key, 0) + gc * fc
        inv = mpq(1, w)
        comps.append({k: c * inv for k, c in acc.items() if c})
    return comps


def plethysm_pn(P: PowerSumPoly, n: int) -> PowerSumPoly:
    """P[p_n]: substitute p_i -> p_{i n}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return P
    out = {}
    for mono, c in P.terms.items():
        new = [0] * (len(mono) * n)
        for i, a in enumerate(mono, start=1):
            new[i * n - 1] = a
        out[tuple(new)] = c
    bound = None if P.weight_bound is None else P.weight_bound * n
    return PowerSumPoly._raw(out, bound)


def scalar_product(P: PowerSumPoly, Q: PowerSumPoly) -> mpq:
    """Hall inner product, <p_lambda, p_mu> = delta z_lambda."""
    if len(P.terms) > len(Q.terms):
        P, Q = Q, P
    total = mpq(0)
    qt = Q.terms
    for mono, c in P.terms.items():
        d = qt.get(mono)
        if d is not None:
            total += c * d * mono_z(mono)
    return total


def theta(P: PowerSumPoly, N: int) -> UniSeries:
    """Image under p_1 -> t, p_n -> 0 (n > 1), truncated at t^N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    coeffs = [mpq(0)] * (N + 1)
    for mono, c in P.terms.items():
        if len(mono) <= 1:
            k = mono[0] if mono else 0
            if k <= N:
                coeffs[k] += c
    return UniSeries(tuple(coeffs))


specialize_egf = theta


def specialize_ogf(P: PowerSumPoly, N: int) -> UniSeries:
    """Image under p_i -> t^i, truncated at t^N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    coeffs = [mpq(0)] * (N + 1)
    for mono, c in P.terms.items():
        w = mono_weight(mono)
        if w <= N:
            coeffs[w] += c
    return UniSeries(tuple(coeffs))


def conjugated_derivative(A: PowerSumPoly, dg: PowerSumPoly, j: int) -> PowerSumPoly:
    """A' with d/dp_j (A e^g) = A' e^g, given dg = d g / d p_j."""
    return A.derivative(j).without_bound() + (A.without_bound() * dg.without_bound())


def adjoint_h_step(A: PowerSumPoly, g: PowerSumPoly, i: int, m: int | None = None) -> PowerSumPoly:
    """A' with h_i^perp (A e^g) = A' e^g.

    h_i^perp = sum over lambda |- i of (1/z_lambda) prod_j lambda_j d/dp_{lambda_j}.
    ``m`` is the number of power-sum variables in play; defaults to the
    largest index occurring in A or g.
    """
    if m is None:
        m = max(A.nvars, g.nvars)
    if i > m:
        raise ValueError(f"h_{i}^perp needs p_{i}, beyond the truncation m={m}")
    if g.constant_term():
        raise ValueError("g must have zero constant term")
    dgs = {j: g.derivative(j) for j in range(1, i + 1)}
    total = PowerSumPoly()
    for lam in partitions_of(i):
        cur = A.without_bound()
        for part in lam:
            cur = conjugated_derivative(cur, dgs[part], part).scale(part)
        total = total + cur.scale(mpq(1, z_of(lam)))
    return total


def specialize_x(P: PowerSumPoly, n: int, cap: int) -> dict[tuple[int, ...], mpq]:
    """Substitute p_i = x_1^i + ... + x_n^i, keeping monomials with every exponent <= cap.

    Dropping monomials above the cap is exact for the kept ones, because
    exponents only grow under multiplication.
    """
    def mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                key = tuple([x + y for x, y in zip(ma, mb)])
                if max(key) > cap:
                    continue
                out[key] = out.get(key, 0) + ca * cb
        return out

    one = {(0,) * n: mpq(1)}
    power = {}
    for i in range(1, cap + 1):
        power[i] = {tuple(i if v == u else 0 for v in range(n)): mpq(1) for u in range(n)}

    cache: dict[Mono, dict] = {(): one}

    def spec(mono: Mono) -> dict:
        if mono in cache:
            return cache[mono]
        j = len(mono)
        if j > cap:
            cache[mono] = {}
            return cache[mono]
        lower = list(mono)
        lower[j - 1] -= 1
        res = mul(spec(_trim(lower)), power[j])
        cache[mono] = res
        return res

    total: dict = {}
    for mono, c in sorted(P.terms.items(), key=lambda kv: mono_weight(kv[0])):
        for xm, xc in spec(mono).items():
            total[xm] = total.get(xm, 0) + c * xc
    return {k: v for k, v in total.items() if v}
