"""Asymptotic constants against templates of the shape

    lambda * prod ((c n)!)^e * omega^n * exp(Q(n)) * n^alpha * (log n)^k.

Everything upstream is exact; floating point (mpmath, 200 bits by default)
starts here.  The constant lambda is estimated by polynomial extrapolation of
r_n = a_n / template(n) in h = 1/n, or h = n^(-1/m) when Q has terms in n^(1/m).
"""
from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import mpmath

from .dfinite import LinearODE, PRecurrence, dominant_singularity, extend, indicial_polynomial

__all__ = [
    "AsymptoticTemplate", "ConstantEstimate", "GrowthInfo", "TemplateError",
    "parse_template", "estimate_constant", "fit_alpha", "dominant_growth",
    "exact_ratio", "PRECISION_BITS",
]

PRECISION_BITS = 200


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class AsymptoticTemplate:
    """Template with unit constant; ``factorials`` maps c to e for ((c n)!)^e."""

    factorials: tuple = ((Fraction(1), Fraction(1)),)
    log_omega: str = "0"
    alpha: Fraction | float = Fraction(0)
    q_poly: tuple = ()  # ((power p, coefficient as str), ...), 0 < p < 1
    log_power: int = 0
    prefactor_log: str = "0"
    support: tuple = (1, (0,))  # (modulus, residues)
    source: str = ""

    def __post_init__(self):
        mod, res = self.support
        if mod < 1 or not res:
            raise TemplateError("support needs a positive modulus and at least one residue")
        if self.log_power < 0:
            raise TemplateError("log power must be nonnegative")
        for p, _ in self.q_poly:
            if not 0 < p < 1:
                raise TemplateError("Q terms must have exponents strictly between 0 and 1")

    @property
    def factorial_order(self) -> Fraction:
        return sum((c * e for c, e in self.factorials), Fraction(0))

    @property
    def omega(self):
        return mpmath.exp(mpmath.mpf(self.log_omega))

    @property
    def root_degree(self) -> int:
        """m such that Q is a polynomial in n^(1/m) (1 if Q = 0)."""
        m = 1
        for p, _ in self.q_poly:
            m = m * Fraction(p).denominator // _gcd(m, Fraction(p).denominator)
        return m

    def in_support(self, n: int) -> bool:
        mod, res = self.support
        return n % mod in res

    def log_value(self, n: int):
        n_ = mpmath.mpf(n)
        acc = mpmath.mpf(self.prefactor_log) + mpmath.mpf(self.log_omega) * n_
        for c, e in self.factorials:
            arg = Fraction(c) * n
            acc += mpmath.mpf(e.numerator) / e.denominator * mpmath.loggamma(
                mpmath.mpf(arg.numerator) / arg.denominator + 1)
        if self.alpha:
            acc += _mp(self.alpha) * mpmath.log(n_)
        for p, coef in self.q_poly:
            acc += mpmath.mpf(coef) * n_ ** (mpmath.mpf(p.numerator) / p.denominator)
        if self.log_power:
            acc += self.log_power * mpmath.log(mpmath.log(n_))
        return acc

    def value(self, n: int):
        return mpmath.exp(self.log_value(n))

    def with_alpha(self, alpha) -> "AsymptoticTemplate":
        return AsymptoticTemplate(self.factorials, self.log_omega, alpha, self.q_poly, self.log_power,
                                  self.prefactor_log, self.support, self.source)

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "factorials": [[str(c), str(e)] for c, e in self.factorials],
            "factorial_order": str(self.factorial_order),
            "omega": mpmath.nstr(self.omega, 15),
            "alpha": str(self.alpha),
            "q_poly": [[str(p), mpmath.nstr(mpmath.mpf(c), 15)] for p, c in self.q_poly],
            "log_power": self.log_power,
            "prefactor": mpmath.nstr(mpmath.exp(mpmath.mpf(self.prefactor_log)), 15),
            "support": {"modulus": self.support[0], "residues": list(self.support[1])},
        }


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


# -- template mini-language ----------------------------------------------------
#
#   fact            n!
#   fact(n/2)       (n/2)!      (argument must be c*n)
#   b^(n/d)         b^(n/d) for a positive constant b
#   exp(E)          E a sum of c * n^p terms, e.g. sqrt(2*n)
#   n^a, sqrt(x), log(n), pi, e, products, quotients, powers with rational exponent
#
# ``^`` and ``**`` are both accepted; braces count as parentheses.


class _LogForm(dict):
    """log of a product: keys 'const', 'logn', 'loglogn', ('fact', c), ('pow', p)."""

    def add(self, other: "_LogForm", sign: int = 1) -> "_LogForm":
        out = _LogForm(self)
        for k, v in other.items():
            out[k] = out.get(k, 0) + sign * v
        return out

    def times(self, s) -> "_LogForm":
        return _LogForm({k: v * s for k, v in self.items()})

    def is_const(self) -> bool:
        return all(k == "const" for k in self)


def _exact(node) -> Fraction:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return Fraction(node.value).limit_denominator(10 ** 6)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_exact(node.operand)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.UAdd):
        return _exact(node.operand)
    if isinstance(node, ast.BinOp):
        a, b = _exact(node.left), _exact(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
    raise TemplateError("expected a rational constant")


def _additive(node) -> dict:
    """Sum of c * n^p as {p: c}."""
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return {Fraction(0): mpmath.mpf(node.value)}
    if isinstance(node, ast.Name):
        if node.id == "n":
            return {Fraction(1): mpmath.mpf(1)}
        if node.id == "pi":
            return {Fraction(0): +mpmath.pi}
        if node.id == "e":
            return {Fraction(0): mpmath.e}
        raise TemplateError(f"unknown name {node.id!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        s = -1 if isinstance(node.op, ast.USub) else 1
        return {p: s * c for p, c in _additive(node.operand).items()}
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        return _additive_pow(_additive(node.args[0]), Fraction(1, 2))
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, (ast.Add, ast.Sub)):
            a, b = _additive(node.left), _additive(node.right)
            s = 1 if isinstance(node.op, ast.Add) else -1
            out = dict(a)
            for p, c in b.items():
                out[p] = out.get(p, 0) + s * c
            return out
        if isinstance(node.op, ast.Mult):
            a, b = _additive(node.left), _additive(node.right)
            out: dict = {}
            for p, c in a.items():
                for q, d in b.items():
                    out[p + q] = out.get(p + q, 0) + c * d
            return out
        if isinstance(node.op, ast.Div):
            b = _additive(node.right)
            if set(b) != {Fraction(0)}:
                raise TemplateError("can only divide by constants inside exp()")
            return {p: c / b[Fraction(0)] for p, c in _additive(node.left).items()}
        if isinstance(node.op, ast.Pow):
            return _additive_pow(_additive(node.left), _exact(node.right))
    raise TemplateError(f"unsupported expression inside exp(): {ast.dump(node)}")


def _additive_pow(a: dict, e: Fraction) -> dict:
    a = {p: c for p, c in a.items() if c}
    if len(a) != 1:
        raise TemplateError("powers inside exp() need a single monomial base")
    (p, c), = a.items()
    return {p * e: c ** _mp(e)}


def _mult(node) -> _LogForm:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        if node.value <= 0:
            raise TemplateError("constants must be positive")
        return _LogForm(const=mpmath.log(mpmath.mpf(node.value)))
    if isinstance(node, ast.Name):
        if node.id == "n":
            return _LogForm(logn=Fraction(1))
        if node.id == "fact":
            return _LogForm({("fact", Fraction(1)): Fraction(1)})
        if node.id == "pi":
            return _LogForm(const=mpmath.log(mpmath.pi))
        if node.id == "e":
            return _LogForm(const=mpmath.mpf(1))
        raise TemplateError(f"unknown name {node.id!r}")
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        fn = node.func.id
        if len(node.args) != 1:
            raise TemplateError(f"{fn}() takes one argument")
        arg = node.args[0]
        if fn == "fact":
            lin = {p: c for p, c in _additive(arg).items() if c}
            if set(lin) != {Fraction(1)}:
                raise TemplateError("fact() argument must be a multiple of n")
            c = Fraction(str(mpmath.nstr(lin[Fraction(1)], 12))).limit_denominator(1000)
            return _LogForm({("fact", c): Fraction(1)})
        if fn == "exp":
            out = _LogForm()
            for p, c in _additive(arg).items():
                if p == 0:
                    out["const"] = out.get("const", 0) + c
                else:
                    out[("pow", p)] = out.get(("pow", p), 0) + c
            return out
        if fn == "sqrt":
            return _mult(arg).times(Fraction(1, 2))
        if fn == "log":
            inner = _mult(arg)
            if dict(inner) != {"logn": 1}:
                raise TemplateError("log() is only supported as log(n)")
            return _LogForm(loglogn=Fraction(1))
        raise TemplateError(f"unknown function {fn!r}")
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Mult):
            return _mult(node.left).add(_mult(node.right))
        if isinstance(node.op, ast.Div):
            return _mult(node.left).add(_mult(node.right), -1)
        if isinstance(node.op, ast.Pow):
            base = _mult(node.left)
            try:
                return base.times(_exact(node.right))
            except TemplateError:
                pass
            if not base.is_const():
                raise TemplateError("variable exponents need a constant base")
            lb = base.get("const", 0)
            out = _LogForm()
            for p, c in _additive(node.right).items():
                key = "const" if p == 0 else ("pow", p)
                out[key] = out.get(key, 0) + c * lb
            return out
    raise TemplateError(f"unsupported template expression: {ast.dump(node)}")


def parse_template(text: str, support: tuple = (1, (0,))) -> AsymptoticTemplate:
    """Parse e.g. ``fact^{3/2} * (3/2)^(n/2) / n`` or ``exp(sqrt(2*n)) * fact / n^(1/2)``."""
    with mpmath.workprec(PRECISION_BITS + 20):
        return _parse_template(text, support)


def _parse_template(text: str, support: tuple) -> AsymptoticTemplate:
    src = text.strip().replace("^", "**").replace("{", "(").replace("}", ")")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as err:
        raise TemplateError(f"cannot parse template {text!r}: {err.msg}") from None
    form = _mult(tree.body)
    facts = tuple(sorted((k[1], Fraction(v)) for k, v in form.items()
                         if isinstance(k, tuple) and k[0] == "fact" and v))
    log_omega = mpmath.mpf(0)
    q = []
    for k, v in form.items():
        if isinstance(k, tuple) and k[0] == "pow":
            if k[1] == 1:
                log_omega += v
            elif 0 < k[1] < 1:
                q.append((k[1], mpmath.nstr(mpmath.mpf(v), 60)))
            elif v:
                raise TemplateError(f"unsupported growth term n^{k[1]} in exp()")
    loglog = form.get("loglogn", 0)
    if Fraction(loglog).denominator != 1 or loglog < 0:
        raise TemplateError("log(n) must appear to a nonnegative integer power")
    return AsymptoticTemplate(
        factorials=facts,
        log_omega=mpmath.nstr(log_omega, 60),
        alpha=Fraction(form.get("logn", 0)),
        q_poly=tuple(sorted(q)),
        log_power=int(loglog),
        prefactor_log=mpmath.nstr(mpmath.mpf(form.get("const", 0)), 60),
        support=(support[0], tuple(support[1])),
        source=text.strip(),
    )


# -- estimation ----------------------------------------------------------------

@dataclass(frozen=True)
class ConstantEstimate:
    value: float
    error_estimate: float
    n_used: tuple  # (first n, last n)
    extrapolation_order: int
    ratios_tail: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {"value": repr(self.value), "error_estimate": repr(self.error_estimate),
                "n_used": list(self.n_used), "extrapolation_order": self.extrapolation_order}


def _terms(source, N: int) -> list:
    if isinstance(source, PRecurrence):
        return extend(source, N)
    terms = list(getattr(source, "terms", source))
    if len(terms) <= N:
        raise ValueError(f"need terms up to n = {N}, have {len(terms)}")
    return terms[:N + 1]


def _support_points(tmpl: AsymptoticTemplate, terms: list, lo: int, hi: int) -> list[int]:
    pts = []
    for n in range(lo, hi + 1):
        if tmpl.in_support(n):
            pts.append(n)
        elif terms[n]:
            raise ValueError(f"a_{n} = {terms[n]} is nonzero outside the template's support")
    return pts


def exact_ratio(terms: list, closed_form) -> list[Fraction]:
    """a_n / closed_form(n) as exact rationals (closed_form returns a Fraction or int)."""
    return [Fraction(terms[n]) / Fraction(closed_form(n)) for n in range(len(terms))]


def _neville(xs: list, ys: list):
    """Value at 0 of the interpolating polynomial through (xs, ys)."""
    P = list(ys)
    k = len(xs)
    for level in range(1, k):
        for i in range(k - level):
            j = i + level
            P[i] = (xs[j] * P[i] - xs[i] * P[i + 1]) / (xs[j] - xs[i])
    return P[0]


def estimate_constant(source, tmpl: AsymptoticTemplate, N: int, order: int | None = None,
                      bits: int = PRECISION_BITS) -> ConstantEstimate:
    """Limit of a_n / template(n), extrapolated from the last ``order + 1`` support points."""
    terms = _terms(source, N)
    m = tmpl.root_degree
    if order is None:
        order = 8 if m == 1 else 14
    with mpmath.workprec(bits):
        pts = _support_points(tmpl, terms, 2, N)
        if len(pts) < order + 2:
            raise ValueError("not enough support points for the requested extrapolation order")
        use = pts[-(order + 1):]
        hs, rs = [], []
        for n in use:
            a = terms[n]
            if not a:
                raise ValueError(f"a_{n} = 0 inside the support")
            lt = tmpl.log_value(n)
            r = mpmath.exp(mpmath.log(_mp(Fraction(a))) - lt) if a > 0 else -mpmath.exp(
                mpmath.log(_mp(Fraction(-a))) - lt)
            hs.append(mpmath.mpf(n) ** (-mpmath.mpf(1) / m))
            rs.append(r)
        full = _neville(hs, rs)
        prev = _neville(hs[1:], rs[1:])
        return ConstantEstimate(float(full), float(abs(full - prev)), (use[0], use[-1]), order,
                                tuple(float(r) for r in rs[-3:]))


def fit_alpha(source, partial: AsymptoticTemplate, N: int, bits: int = PRECISION_BITS) -> float:
    """Slope of log(a_n / partial(n)) against log n over the top half of the range."""
    terms = _terms(source, N)
    with mpmath.workprec(bits):
        base = partial.with_alpha(Fraction(0))
        pts = _support_points(base, terms, max(2, N // 2), N)
        xs = [mpmath.log(n) for n in pts]
        ys = [mpmath.log(_mp(Fraction(terms[n]))) - base.log_value(n) for n in pts]
        k = len(xs)
        mx, my = sum(xs) / k, sum(ys) / k
        sxx = sum((x - mx) ** 2 for x in xs)
        sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
        return float(sxy / sxx)


@dataclass(frozen=True)
class GrowthInfo:
    rho: complex
    rho_radius: float
    omega: float
    exponents: tuple
    alpha_candidates: tuple
    regular_singular: bool

    def to_dict(self) -> dict:
        return {"rho": [self.rho.real, self.rho.imag], "rho_radius": self.rho_radius,
                "omega": self.omega, "exponents": [[z.real, z.imag] for z in self.exponents],
                "alpha_candidates": [[z.real, z.imag] for z in self.alpha_candidates],
                "regular_singular": self.regular_singular}


def dominant_growth(ode: LinearODE) -> GrowthInfo:
    """Dominant singularity, local exponents there, and the implied omega and alpha.

    For a local exponent s at rho, the coefficients grow like rho^(-n) n^(-s-1).
    """
    sing = dominant_singularity(ode)
    poly, regular = indicial_polynomial(ode, sing.value)
    while len(poly) > 1 and abs(poly[-1]) < mpmath.mpf(10) ** -30:
        poly.pop()
    if len(poly) <= 1:
        exps: list = []
    elif len(poly) == 2:
        exps = [-poly[0] / poly[1]]
    else:
        exps = list(mpmath.polyroots(list(reversed(poly)), maxsteps=200, extraprec=200))
    exps_c = tuple(sorted((complex(s) for s in exps), key=lambda z: (z.real, z.imag)))
    alphas = tuple(complex(-s - 1) for s in exps_c)
    return GrowthInfo(sing.value, sing.radius, 1 / abs(sing.value), exps_c, alphas, regular)


def template_from_fields(factorials: Iterable = ((1, 1),), omega=1, alpha=0, q_poly: Iterable = (),
                         log_power: int = 0, support: tuple = (1, (0,))) -> AsymptoticTemplate:
    """Build a template from explicit fields (omega > 0)."""
    return AsymptoticTemplate(
        tuple((Fraction(c), Fraction(e)) for c, e in factorials),
        mpmath.nstr(mpmath.log(_mp(Fraction(omega)) if isinstance(omega, (int, Fraction)) else mpmath.mpf(omega)), 60),
        Fraction(alpha) if isinstance(alpha, (int, Fraction)) else alpha,
        tuple((Fraction(p), str(c)) for p, c in q_poly),
        log_power, "0", support)
