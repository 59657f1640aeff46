"""P-recurrences and linear ODEs: guessing, extension, conversion, rescaling.

A recurrence is stored as polynomials c_0(n), ..., c_r(n) with

    c_0(n) a_n + c_1(n) a_{n+1} + ... + c_r(n) a_{n+r} = 0     (n >= offset).

Guessing is exact: an integer collocation matrix is built from the terms,
a modular rank test discards hopeless shapes, and surviving shapes get an
exact nullspace over Q.  A candidate is accepted only if it annihilates every
available term, including guard terms that took no part in the fit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, lcm
from typing import Iterable

import mpmath

from . import upoly as up

__all__ = [
    "PRecurrence", "LinearODE", "Singularity", "GuessError", "ExtensionError",
    "guess_recurrence", "extend", "rec_to_ode", "ode_to_rec", "borel_scale",
    "leading_singularities", "dominant_singularity", "indicial_polynomial",
    "detect_stride", "SectionedRecurrence",
]

DEFAULT_GUARD = 10
_PRIME = (1 << 61) - 1


class GuessError(ValueError):
    """Too few terms for the requested search."""


class ExtensionError(ArithmeticError):
    def __init__(self, n: int, message: str | None = None):
        super().__init__(message or f"leading coefficient vanishes at n = {n}")
        self.n = n


def _frac_list(terms: Iterable) -> list[Fraction]:
    return [Fraction(int(t.numerator), int(t.denominator)) if hasattr(t, "denominator") else Fraction(t)
            for t in terms]


def _as_number(x: Fraction):
    return int(x) if x.denominator == 1 else x


@dataclass(frozen=True)
class PRecurrence:
    coefficients: tuple
    initial_terms: tuple = ()
    offset: int = 0
    stride: int = 1
    residue: int = 0
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        coeffs = tuple(up.norm(c) for c in self.coefficients)
        if len(coeffs) < 2:
            raise ValueError("a recurrence needs order >= 1")
        if not coeffs[-1]:
            raise ValueError("leading coefficient is identically zero")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "initial_terms", tuple(_frac_list(self.initial_terms)))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def degree(self) -> int:
        return max(up.deg(c) for c in self.coefficients)

    def residual(self, terms, n: int) -> Fraction:
        return sum((up.evaluate(c, n) * terms[n + j] for j, c in enumerate(self.coefficients) if c),
                   Fraction(0))

    def first_failure(self, terms, start: int | None = None) -> int | None:
        """Smallest n >= start (default: offset) with a nonzero residual, or None."""
        terms = _frac_list(terms)
        lo = self.offset if start is None else start
        for n in range(lo, len(terms) - self.order):
            if self.residual(terms, n):
                return n
        return None

    def annihilates(self, terms, start: int | None = None) -> bool:
        return self.first_failure(terms, start) is None

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "coefficients": [[str(c) for c in p] for p in self.coefficients],
            "offset": self.offset,
            "stride": self.stride,
            "residue": self.residue,
            "initial_terms": [str(t) for t in self.initial_terms],
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PRecurrence":
        return cls(tuple(tuple(Fraction(c) for c in p) for p in d["coefficients"]),
                   tuple(Fraction(t) for t in d.get("initial_terms", ())),
                   int(d.get("offset", 0)), int(d.get("stride", 1)), int(d.get("residue", 0)),
                   tuple(d.get("notes", ())))

    def __str__(self) -> str:
        parts = []
        for j, c in enumerate(self.coefficients):
            if c:
                idx = "a(n)" if j == 0 else f"a(n+{j})"
                parts.append(f"({up.to_str(c)})*{idx}")
        return " + ".join(parts) + f" = 0  (n >= {self.offset})"


@dataclass(frozen=True)
class LinearODE:
    """q_0(t) f + q_1(t) f' + ... + q_k(t) f^(k) = 0."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = [up.norm(c) for c in self.coefficients]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if not coeffs:
            raise ValueError("zero operator")
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def apply_series(self, f: list) -> list:
        """Coefficients of L f for a truncated power series f (valid up to len(f) - order)."""
        f = _frac_list(f)
        L = len(f) - self.order
        out = [Fraction(0)] * max(L, 0)
        for i, q in enumerate(self.coefficients):
            d = f
            for _ in range(i):
                d = [k * d[k] for k in range(1, len(d))]
            for l, ql in enumerate(q):
                if not ql:
                    continue
                for s in range(l, L):
                    if s - l < len(d):
                        out[s] += ql * d[s - l]
        return out

    def to_dict(self) -> dict:
        return {"order": self.order, "coefficients": [[str(c) for c in p] for p in self.coefficients]}

    def __str__(self) -> str:
        parts = []
        for i, q in enumerate(self.coefficients):
            if q:
                parts.append(f"({up.to_str(q, 't')})*f{chr(39) * i}")
        return " + ".join(parts) + " = 0"


# -- guessing ------------------------------------------------------------------

def detect_stride(terms) -> tuple[int, int]:
    """(v, rho) such that all nonzero terms have index = rho mod v, v maximal."""
    idx = [i for i, t in enumerate(terms) if t]
    if len(idx) < 2:
        return 1, 0
    v = 0
    for i in idx[1:]:
        v = _gcd(v, i - idx[0])
    return v, idx[0] % v


def _mod_p(x: Fraction) -> int | None:
    if x.denominator % _PRIME == 0:
        return None
    return x.numerator * pow(x.denominator, -1, _PRIME) % _PRIME


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _rank_mod_p(rows: list[list[int]], ncols: int) -> int:
    M = [[x % _PRIME for x in r] for r in rows]
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][col], _PRIME - 2, _PRIME)
        pr = [(x * inv) % _PRIME for x in M[rank]]
        M[rank] = pr
        for i in range(rank + 1, len(M)):
            f = M[i][col]
            if f:
                M[i] = [(a - f * b) % _PRIME for a, b in zip(M[i], pr)]
        rank += 1
    return rank


def _nullspace(rows: list[list[int]], ncols: int) -> list[list[Fraction]]:
    M = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        pv = M[rank][col]
        M[rank] = [x / pv for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][col]:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -M[r][fc]
        basis.append(vec)
    return basis


def _integer_row(row: list[Fraction]) -> list[int]:
    den = lcm(*(x.denominator for x in row)) if row else 1
    return [int(x * den) for x in row]


def _normalize(coeffs: list) -> list:
    coeffs = up.primitive_integer(coeffs)
    if coeffs[-1][-1] < 0:
        coeffs = [up.scale(c, -1) for c in coeffs]
    return coeffs


def _integer_roots(p) -> list[int]:
    """Integer roots of a nonzero polynomial with rational coefficients."""
    if not p:
        return []
    p = up.primitive_integer([p])[0]
    k = 0
    while k < len(p) and not p[k]:
        k += 1
    roots = [0] if k else []
    q = p[k:]
    if len(q) <= 1:
        return roots
    c0 = abs(int(q[0]))
    for d in range(1, int(c0 ** 0.5) + 2):
        if c0 % d == 0:
            for cand in {d, c0 // d}:
                for s in (cand, -cand):
                    if up.evaluate(q, s) == 0 and s not in roots:
                        roots.append(s)
    return sorted(roots)


def _finish(coeffs: list, terms: list[Fraction], v: int, rho: int, notes: tuple) -> PRecurrence | None:
    # strip a common polynomial factor when that keeps the relation valid on the data
    coeffs = _normalize(coeffs)
    g = up.ZERO
    for c in coeffs:
        if c:
            g = c if not g else up.pgcd(g, c)
    if up.deg(g) >= 1:
        reduced = _normalize([up.divmod_(c, g)[0] for c in coeffs])
        ro = _min_offset(PRecurrence(tuple(reduced)), terms)
        bo = _min_offset(PRecurrence(tuple(coeffs)), terms)
        if ro is not None and (bo is None or ro <= bo):
            coeffs = reduced
    rec = PRecurrence(tuple(coeffs), stride=v, residue=rho)
    off = _min_offset(rec, terms)
    if off is None:
        return None
    # keep enough initial terms to step over integer roots of the leading polynomial
    roots = [x for x in _integer_roots(rec.coefficients[-1]) if x >= off]
    if v > 1:
        roots = [x for x in roots if (x + rec.order - rho) % v == 0]
    start = max([off] + [x + 1 for x in roots])
    init = terms[:start + rec.order]
    return PRecurrence(rec.coefficients, tuple(init), off, v, rho, notes)


def _min_offset(rec: PRecurrence, terms: list[Fraction]) -> int | None:
    bad = [n for n in range(0, len(terms) - rec.order) if rec.residual(terms, n)]
    if not bad:
        return 0
    last = bad[-1] + 1
    # require a healthy stretch of verified rows after the last exception
    if len(terms) - rec.order - last < 5:
        return None
    return last


def guess_recurrence(seq, max_order: int = 6, max_degree: int = 6, egf_mode: bool = True,
                     guard: int = DEFAULT_GUARD, starts: tuple = (0, 2, 5)) -> PRecurrence | None:
    """Minimal (order, then degree) recurrence fitted on all but ``guard`` terms
    and verified on every term.  Returns None if nothing survives.

    With ``egf_mode`` the ansatz is sum_j d_j(n) a_{n+jv}/(n+jv)! = 0, rewritten
    on the raw terms by clearing factorials.  Sequences supported on one residue
    class mod v are fitted with shifts that are multiples of v.
    """
    terms = _frac_list(getattr(seq, "terms", seq))
    if guard < DEFAULT_GUARD:
        raise GuessError(f"at least {DEFAULT_GUARD} guard terms are required")
    if len(terms) < guard + 4:
        raise GuessError(f"{len(terms)} terms is too few (need more than {guard + 3})")
    fit_len = len(terms) - guard
    v, rho = detect_stride(terms)
    notes = (f"egf_mode={egf_mode}", f"stride={v}", f"guard={guard}")
    mod = [_mod_p(t) for t in terms]

    def factor(j: int, r: int, n: int) -> int:
        out = 1
        if egf_mode:
            for k in range(j * v + 1, r * v + 1):
                out *= n + k
        return out

    for r in range(1, max_order + 1):
        for d in range(0, max_degree + 1):
            ncols = (r + 1) * (d + 1)
            for n0 in starts:
                ns = [n for n in range(n0, fit_len - r * v) if v == 1 or n % v == rho]
                if len(ns) < ncols + 1:
                    continue
                if None not in mod:
                    mrows = []
                    for n in ns:
                        row = []
                        for j in range(r + 1):
                            x = mod[n + j * v] * factor(j, r, n) % _PRIME
                            for k in range(d + 1):
                                row.append(x * pow(n, k, _PRIME) % _PRIME)
                        mrows.append(row)
                    if _rank_mod_p(mrows, ncols) == ncols:
                        continue
                rows = []
                for n in ns:
                    row = []
                    for j in range(r + 1):
                        x = terms[n + j * v] * factor(j, r, n)
                        row.extend(x * n ** k for k in range(d + 1))
                    rows.append(_integer_row(row))
                if _rank_mod_p(rows, ncols) == ncols:
                    continue
                for vec in _nullspace(rows, ncols):
                    polys = [up.norm(vec[j * (d + 1):(j + 1) * (d + 1)]) for j in range(r + 1)]
                    if not polys[-1]:
                        continue
                    raw = [up.ZERO] * (r * v + 1)
                    for j, p in enumerate(polys):
                        if egf_mode:
                            p = up.mul(p, up.rising_from(j * v + 1, (r - j) * v))
                        raw[j * v] = p
                    rec = _finish(raw, terms, v, rho, notes)
                    if rec is not None and rec.annihilates(terms):
                        return rec
    return None


# -- extension -----------------------------------------------------------------

def extend(rec: PRecurrence, N: int, integral: bool = False) -> list:
    """Terms a_0..a_N from the recurrence and its stored initial terms."""
    terms = list(rec.initial_terms[:N + 1])
    r = rec.order
    coeffs = rec.coefficients
    while len(terms) <= N:
        idx = len(terms)
        n = idx - r
        if n < rec.offset:
            raise ExtensionError(idx, f"term {idx} lies before the recurrence's validity range "
                                      f"(n >= {rec.offset}); supply more initial terms")
        if rec.stride > 1 and idx % rec.stride != rec.residue:
            terms.append(Fraction(0))
            continue
        lead = up.evaluate(coeffs[-1], n)
        if not lead:
            raise ExtensionError(n)
        acc = Fraction(0)
        for j in range(r):
            c = coeffs[j]
            if c:
                t = terms[n + j]
                if t:
                    acc += up.evaluate(c, n) * t
        val = -acc / lead
        if integral and val.denominator != 1:
            raise ArithmeticError(f"extension produced non-integral term {idx} = {val}")
        terms.append(val)
    return [_as_number(t) for t in terms]


# -- recurrence <-> ODE --------------------------------------------------------

def _to_egf_side(rec: PRecurrence) -> list:
    # u_n = a_n / n!  =>  c_j(n) a_{n+j} = c_j(n) (n+j)! u_{n+j};  divide by n!
    return [up.mul(c, up.rising_from(1, j)) for j, c in enumerate(rec.coefficients)]


def _from_egf_side(coeffs: list) -> list:
    r = len(coeffs) - 1
    return [up.mul(c, up.rising_from(j + 1, r - j)) for j, c in enumerate(coeffs)]


def _theta_poly_to_ops(p) -> list:
    """Polynomial in theta = t d/dt as a list of t-polynomials per derivative order."""
    ops = [up.ZERO]
    power = [up.ONE]  # theta^0
    for k, c in enumerate(p):
        if k > 0:
            nxt = [up.ZERO] * (len(power) + 1)
            for i, q in enumerate(power):
                # t d/dt (q(t) D^i) = t q' D^i + t q D^{i+1}
                nxt[i] = up.add(nxt[i], up.mul(up.X, up.deriv(q)))
                nxt[i + 1] = up.add(nxt[i + 1], up.mul(up.X, q))
            power = nxt
        if c:
            while len(ops) < len(power):
                ops.append(up.ZERO)
            for i, q in enumerate(power):
                ops[i] = up.add(ops[i], up.scale(q, c))
    return ops


def rec_to_ode(rec: PRecurrence, egf: bool = True) -> LinearODE:
    """Annihilating operator of sum a_n t^n (ogf) or sum a_n t^n / n! (egf)."""
    r = rec.order
    if r < 1:
        raise ValueError("degenerate recurrence")
    coeffs = _to_egf_side(rec) if egf else list(rec.coefficients)
    init = list(rec.initial_terms)
    if egf:
        init = [t / factorial(i) for i, t in enumerate(init)]
    # a common factor g(n) only costs validity at its integer roots
    offset = rec.offset
    g = up.ZERO
    for c in coeffs:
        if c:
            g = c if not g else up.pgcd(g, c)
    if up.deg(g) >= 1:
        coeffs = [up.divmod_(c, g)[0] for c in coeffs]
        offset = max([offset] + [x + 1 for x in _integer_roots(g) if x >= offset])
    # sum_n sum_j c_j(n) u_{n+j} t^{n+r} = sum_j t^{r-j} c_j(theta - j) f, up to low-order terms
    ops: list = []
    for j, c in enumerate(coeffs):
        shifted = up.shift(c, -j)
        part = _theta_poly_to_ops(shifted)
        tpow = up.norm([0] * (r - j) + [1])
        while len(ops) < len(part):
            ops.append(up.ZERO)
        for i, q in enumerate(part):
            ops[i] = up.add(ops[i], up.mul(tpow, q))
    # inhomogeneous part: coefficients of t^s, s < r + offset, of M f
    need = r + offset
    if len(init) < need:
        raise ValueError(f"need {need} initial terms to build the operator")
    P = []
    for s in range(need):
        n = s - r
        acc = Fraction(0)
        for j, c in enumerate(coeffs):
            if n + j >= 0 and c:
                acc += up.evaluate(c, n) * init[n + j]
        P.append(acc)
    P = up.norm(P)
    if P:
        # (P D - P') M f = P P' - P' P = 0
        dP = up.deriv(P)
        new = [up.ZERO] * (len(ops) + 1)
        for i, q in enumerate(ops):
            new[i] = up.add(new[i], up.sub(up.mul(P, up.deriv(q)), up.mul(dP, q)))
            new[i + 1] = up.add(new[i + 1], up.mul(P, q))
        ops = new
    while ops and not ops[-1]:
        ops.pop()
    # divide out a common power of t
    low = min(next(k for k, c in enumerate(q) if c) for q in ops if q)
    ops = [tuple(q[low:]) if q else q for q in ops]
    return LinearODE(tuple(up.primitive_integer(ops)))


def ode_to_rec(ode: LinearODE, egf: bool = True, initial_terms: Iterable = ()) -> PRecurrence:
    """Recurrence for the coefficients of a power series solution."""
    items = []  # (sigma = l - i, i, q_il)
    for i, q in enumerate(ode.coefficients):
        for l, c in enumerate(q):
            if c:
                items.append((l - i, i, c))
    smax = max(s for s, _, _ in items)
    smin = min(s for s, _, _ in items)
    r = smax - smin
    coeffs = [up.ZERO] * (r + 1)
    for s, i, c in items:
        j = smax - s
        # q_il t^l D^i f contributes q_il ff(m + j, i) u_{m+j} at t^{m + smax}
        coeffs[j] = up.add(coeffs[j], up.scale(up.falling(up.norm([j, 1]), i), c))
    offset = max(0, -smax)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    while len(coeffs) > 1 and not coeffs[0]:
        coeffs = [up.shift(c, -1) for c in coeffs[1:]]
        offset += 1
    if len(coeffs) < 2:
        raise ValueError("operator gives a degenerate recurrence")
    if egf:
        coeffs = _from_egf_side(coeffs)
    g = up.ZERO
    for c in coeffs:
        if c:
            g = c if not g else up.pgcd(g, c)
    if up.deg(g) >= 1 and not any(x >= offset for x in _integer_roots(g)):
        coeffs = [up.divmod_(c, g)[0] for c in coeffs]
    coeffs = _normalize(coeffs)
    return PRecurrence(tuple(coeffs), tuple(initial_terms), offset)


# -- factorial rescaling -------------------------------------------------------

@dataclass(frozen=True)
class SectionedRecurrence:
    """Per-residue recurrences for b_m = a_{v m + rho} / (m!)^u, q = u/v."""

    q: Fraction
    sections: dict

    def to_dict(self) -> dict:
        return {"q": str(self.q), "convention": "b_m = a_{v*m+rho} / (m!)^u",
                "sections": {str(k): (None if s is None else s.to_dict()) for k, s in self.sections.items()}}


def _borel_integer(rec: PRecurrence, q: int) -> PRecurrence:
    if q == 0:
        return rec
    r = rec.order
    if q > 0:
        coeffs = [up.mul(c, up.power(up.rising_from(1, j), q)) for j, c in enumerate(rec.coefficients)]
    else:
        coeffs = [up.mul(c, up.power(up.rising_from(j + 1, r - j), -q)) for j, c in enumerate(rec.coefficients)]
    init = [t / Fraction(factorial(i)) ** q for i, t in enumerate(rec.initial_terms)]
    return PRecurrence(tuple(_normalize(coeffs)), tuple(init), rec.offset, rec.stride, rec.residue,
                       rec.notes + (f"borel q={q}",))


def borel_scale(rec: PRecurrence, q, terms: int = 160) -> PRecurrence | SectionedRecurrence:
    """Recurrence for a_n / (n!)^q.

    Integer q is exact.  For q = u/v with v in 2..4 the result is a
    SectionedRecurrence for b_m = a_{vm+rho} / (m!)^u, one per residue rho;
    zero sections map to None.  Sections are read off directly when every
    shift of the recurrence is a multiple of v, and otherwise guessed from
    ``terms`` extended terms and verified on all of them.
    """
    q = Fraction(q)
    if q.denominator == 1:
        return _borel_integer(rec, int(q))
    u, v = q.numerator, q.denominator
    if v > 4:
        raise ValueError(f"unsupported scaling exponent {q}: denominator must be at most 4")
    aligned = all(not c or j % v == 0 for j, c in enumerate(rec.coefficients))
    seq = extend(rec, v * terms)
    sections = {}
    for rho in range(v):
        sub = [seq[v * m + rho] for m in range(terms)]
        if not any(sub):
            sections[rho] = None
            continue
        sec = None
        if aligned:
            rr = rec.order // v
            coeffs = [up.shift(_scale_var(rec.coefficients[j * v], v), rho) for j in range(rr + 1)]
            sec = _finish(coeffs, _frac_list(sub), 1, 0, (f"section rho={rho} mod {v}",))
        if sec is None:
            sec = guess_recurrence(sub, max_order=8, max_degree=8, egf_mode=False)
            if sec is None:
                raise ValueError(f"could not find a recurrence for residue {rho} mod {v}")
        sections[rho] = _borel_integer(sec, u)
    return SectionedRecurrence(q, sections)


def _scale_var(p, v: int):
    """p(v m) as a polynomial in m."""
    return up.norm([c * v ** k for k, c in enumerate(p)])


# -- singularities -------------------------------------------------------------

@dataclass(frozen=True)
class Singularity:
    value: complex
    radius: float
    multiplicity: int

    @property
    def modulus(self) -> float:
        return abs(self.value)


def leading_singularities(ode: LinearODE, dps: int = 50) -> list[Singularity]:
    """Roots of the leading coefficient with certified error radii, by modulus."""
    lead = ode.coefficients[-1]
    if up.deg(lead) < 1:
        raise ValueError("no finite singularity: leading coefficient is constant")
    out = []
    with mpmath.workdps(dps):
        for factor, mult in up.squarefree_decomposition(lead):
            coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(factor)]
            if len(coeffs) == 2:
                roots = [-coeffs[1] / coeffs[0]]
            else:
                roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=4 * dps)
            d = up.deg(factor)
            dfac = up.deriv(factor)
            for z in roots:
                pz = abs(mpmath.polyval(coeffs, z))
                dz = abs(sum(mpmath.mpf(c.numerator) / c.denominator * z ** k for k, c in enumerate(dfac)))
                rad = d * pz / dz if dz else mpmath.inf
                rad = max(float(rad), float(abs(z)) * 10.0 ** (5 - dps))
                val = complex(z)
                if abs(val.imag) < 1e-40:
                    val = complex(val.real, 0.0)
                out.append(Singularity(val, rad, mult))
    out.sort(key=lambda s: (s.modulus, s.value.imag))
    return out


def dominant_singularity(ode: LinearODE) -> Singularity:
    cands = [s for s in leading_singularities(ode) if s.modulus > s.radius]
    if not cands:
        raise ValueError("no finite nonzero singularity")
    return cands[0]


def indicial_polynomial(ode: LinearODE, point, dps: int = 60, tol: float = 1e-30) -> tuple[list, bool]:
    """Indicial polynomial at ``point`` (coefficients lowest degree first, as mpc)
    and whether the point is a regular singular point."""
    with mpmath.workdps(dps):
        z0 = mpmath.mpc(point)
        # Taylor coefficients of q_i(z0 + x)
        taylor = []
        for q in ode.coefficients:
            cs = []
            for l in range(len(q)):
                acc = mpmath.mpc(0)
                for k in range(l, len(q)):
                    acc += mpmath.binomial(k, l) * (mpmath.mpf(q[k].numerator) / q[k].denominator) * z0 ** (k - l)
                cs.append(acc)
            taylor.append(cs)
        vals = []
        for i, cs in enumerate(taylor):
            scale_ = max([abs(c) for c in cs] + [mpmath.mpf(1)])
            val = next((l for l, c in enumerate(cs) if abs(c) > tol * scale_), None)
            vals.append(val)
        mu = min(v - i for i, v in enumerate(vals) if v is not None)
        poly = [mpmath.mpc(0)]
        for i, v in enumerate(vals):
            if v is None or v - i != mu:
                continue
            ff = [mpmath.mpc(1)]
            for k in range(i):
                # multiply by (s - k)
                nxt = [mpmath.mpc(0)] * (len(ff) + 1)
                for a, c in enumerate(ff):
                    nxt[a + 1] += c
                    nxt[a] -= k * c
                ff = nxt
            while len(poly) < len(ff):
                poly.append(mpmath.mpc(0))
            for a, c in enumerate(ff):
                poly[a] += taylor[i][v] * c
        regular = len(poly) - 1 == ode.order and abs(poly[-1]) > tol
        return poly, regular
