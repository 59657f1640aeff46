"""Dense univariate polynomials over Q as tuples of Fractions, lowest degree first."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Poly = tuple  # (c_0, c_1, ..., c_d), no trailing zeros; () is zero

ZERO: Poly = ()
ONE: Poly = (Fraction(1),)
X: Poly = (Fraction(0), Fraction(1))


def norm(p: Iterable) -> Poly:
    p = [Fraction(c) for c in p]
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def deg(p: Poly) -> int:
    return len(p) - 1


def add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    return norm([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])


def sub(a: Poly, b: Poly) -> Poly:
    return add(a, scale(b, -1))


def scale(p: Poly, c) -> Poly:
    c = Fraction(c)
    return norm([x * c for x in p]) if c else ZERO


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ZERO
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return norm(out)


def power(p: Poly, k: int) -> Poly:
    out = ONE
    for _ in range(k):
        out = mul(out, p)
    return out


def evaluate(p: Poly, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def deriv(p: Poly) -> Poly:
    return norm([i * c for i, c in enumerate(p)][1:])


def divmod_(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a = list(norm(a))
    return norm(q), norm(a)


def monic(p: Poly) -> Poly:
    return scale(p, 1 / p[-1]) if p else ZERO


def pgcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def shift(p: Poly, s) -> Poly:
    """p(x + s)."""
    out = ZERO
    lin = norm([s, 1])
    for c in reversed(p):
        out = add(mul(out, lin), (Fraction(c),))
    return out


def falling(x0: Poly, k: int) -> Poly:
    """x0 (x0 - 1) ... (x0 - k + 1) for a polynomial x0."""
    out = ONE
    for i in range(k):
        out = mul(out, sub(x0, (Fraction(i),)))
    return out


def rising_from(a: int, k: int) -> Poly:
    """(n + a)(n + a + 1) ... (n + a + k - 1) as a polynomial in n."""
    out = ONE
    for i in range(k):
        out = mul(out, (Fraction(a + i), Fraction(1)))
    return out


def primitive_integer(polys: Sequence[Poly]) -> list[Poly]:
    """Scale a family of polynomials jointly to coprime integer coefficients."""
    coeffs = [c for p in polys for c in p if c]
    if not coeffs:
        return list(polys)
    den = lcm(*(c.denominator for c in coeffs))
    num = 0
    for c in coeffs:
        num = gcd(num, (c * den).numerator)
    factor = Fraction(den, num)
    return [scale(p, factor) for p in polys]


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: p = lc * prod a_i^i with a_i squarefree, pairwise coprime."""
    out = []
    if deg(p) < 1:
        return out
    dp = deriv(p)
    a = pgcd(p, dp)
    b = divmod_(p, a)[0]
    c = divmod_(dp, a)[0]
    d = sub(c, deriv(b))
    i = 1
    while deg(b) >= 1:
        a = pgcd(b, d)
        b = divmod_(b, a)[0]
        c = divmod_(d, a)[0]
        if deg(a) >= 1:
            out.append((monic(a), i))
        i += 1
        d = sub(c, deriv(b))
    return out


def to_str(p: Poly, var: str = "n") -> str:
    if not p:
        return "0"
    parts = []
    for i, c in enumerate(p):
        if not c:
            continue
        mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        cs = str(c)
        if mon:
            parts.append(mon if c == 1 else f"-{mon}" if c == -1 else f"{cs}*{mon}")
        else:
            parts.append(cs)
    return " + ".join(parts).replace("+ -", "- ")
