from __future__ import annotations

from math import factorial

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from regenum.symkernel import (
    PowerSumPoly, adjoint_h_step, e, exp_trunc, h, m_in_p, mono_weight, p_lambda,
    partitions_of, plethysm_pn, power_sum, scalar_product, specialize_egf, specialize_ogf,
    theta, z_of,
)
from regenum.species import compile_exponent, parse_species

P = power_sum


def all_partitions(max_weight):
    return [lam for w in range(max_weight + 1) for lam in partitions_of(w)]


# -- partitions and ring operations -------------------------------------------

def test_partitions_examples():
    assert partitions_of(0) == [()]
    assert partitions_of(3) == [(3,), (2, 1), (1, 1, 1)]
    assert len(partitions_of(5)) == 7


def test_partition_counts_match_generating_function():
    # coefficients of prod 1/(1 - t^i)
    N = 20
    c = [1] + [0] * N
    for i in range(1, N + 1):
        for n in range(i, N + 1):
            c[n] += c[n - i]
    assert [len(partitions_of(n)) for n in range(N + 1)] == c


def test_ring_examples():
    assert P(1) * P(1) == p_lambda((1, 1))
    e2 = e(2)
    assert e2 == PowerSumPoly({(2,): mpq(1, 2), (0, 1): mpq(-1, 2)})
    expected = PowerSumPoly({(4,): mpq(1, 4), (2, 1): mpq(-1, 2), (0, 2): mpq(1, 4)})
    assert e2 * e2 == expected
    assert not h(2).scale(0)


def test_weight_bounds_propagate():
    a = PowerSumPoly({(1,): 1, (3,): 1}, weight_bound=2)
    assert a == P(1)
    prod = a * (P(1) + P(2))
    assert prod.weight_bound == 2
    assert prod == p_lambda((1, 1))
    assert (a + P(5)).weight_bound == 2


def test_serialization_round_trip():
    for poly in [h(4), e(5) * P(3), PowerSumPoly(), plethysm_pn(e(3), 2) - mpq(7, 3)]:
        text = poly.to_string()
        assert PowerSumPoly.from_string(text) == poly
    assert h(2).to_string() == "1/2 * p1^2 + 1/2 * p2"


# -- exp_trunc ---------------------------------------------------------------

def test_exp_trunc_gives_complete_homogeneous():
    g = PowerSumPoly({partition_to_mono_single(i): mpq(1, i) for i in range(1, 5)})
    want = PowerSumPoly.constant(1) + h(1) + h(2) + h(3) + h(4)
    assert exp_trunc(g, 4) == want


def test_exp_trunc_gives_elementary():
    g = PowerSumPoly({partition_to_mono_single(i): mpq((-1) ** (i - 1), i) for i in range(1, 5)})
    want = PowerSumPoly.constant(1) + e(1) + e(2) + e(3) + e(4)
    assert exp_trunc(g, 4) == want


def test_exp_trunc_of_zero_and_errors():
    assert exp_trunc(PowerSumPoly(), 6) == 1
    with pytest.raises(ValueError):
        exp_trunc(PowerSumPoly.constant(1) + P(1), 3)


def partition_to_mono_single(i):
    mono = [0] * i
    mono[-1] = 1
    return tuple(mono)


monomials = st.lists(st.integers(0, 2), min_size=1, max_size=3).map(tuple)
coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=5)


@st.composite
def polys(draw, constant=True, max_weight=6):
    terms = draw(st.dictionaries(monomials, coeffs, max_size=5))
    terms = {m: c for m, c in terms.items() if mono_weight(m) <= max_weight and (constant or any(m))}
    return PowerSumPoly({m: mpq(c.numerator, c.denominator) for m, c in terms.items()})


@settings(max_examples=20, deadline=None)
@given(polys(constant=False), st.integers(0, 6))
def test_exp_trunc_matches_series_sum(g, W):
    # sum_j g^j / j!, each power truncated to weight W
    total = PowerSumPoly.constant(1)
    term = PowerSumPoly.constant(1)
    for j in range(1, W + 1):
        term = (term * g).truncate(W).scale(mpq(1, j))
        total = total + term
    assert exp_trunc(g, W) == total.truncate(W)


# -- plethysm and the scalar product -------------------------------------------

def test_plethysm_examples():
    assert plethysm_pn(P(2), 3) == P(6)
    assert plethysm_pn(e(2), 2) == PowerSumPoly({(0, 2): mpq(1, 2), (0, 0, 0, 1): mpq(-1, 2)})
    assert plethysm_pn(h(3), 1) == h(3)
    assert plethysm_pn(PowerSumPoly({(1,): 1}, 3), 2).weight_bound == 6


def test_scalar_product_examples():
    assert scalar_product(P(2), P(2)) == 2
    assert scalar_product(p_lambda((1, 1)), P(2)) == 0
    assert scalar_product(h(2), h(2)) == 1


def test_power_sum_orthogonality_to_weight_8():
    lams = all_partitions(8)
    for lam in lams:
        for mu in lams:
            val = scalar_product(p_lambda(lam), p_lambda(mu))
            assert val == (z_of(lam) if lam == mu else 0), (lam, mu)


@settings(max_examples=30, deadline=None)
@given(polys(), polys(), polys(), coeffs)
def test_scalar_product_bilinear_symmetric(a, b, c, k):
    k = mpq(k.numerator, k.denominator)
    assert scalar_product(a, b) == scalar_product(b, a)
    assert scalar_product(a.scale(k) + b, c) == k * scalar_product(a, c) + scalar_product(b, c)


def test_newton_identities_to_8():
    for k in range(1, 9):
        rhs_e = sum((P(i) * e(k - i)).scale((-1) ** (i - 1)) for i in range(1, k + 1))
        rhs_h = sum(P(i) * h(k - i) for i in range(1, k + 1))
        assert e(k).scale(k) == rhs_e, k
        assert h(k).scale(k) == rhs_h, k


def test_h_m_duality_to_weight_6():
    for w in range(1, 7):
        lams = partitions_of(w)
        for lam in lams:
            h_lam = PowerSumPoly.constant(1)
            for part in lam:
                h_lam = h_lam * h(part)
            for mu in lams:
                assert scalar_product(h_lam, m_in_p(mu)) == (1 if lam == mu else 0), (lam, mu)


# -- theta and specializations -------------------------------------------------

def test_theta_examples():
    assert list(theta(h(2), 2).coefficients) == [0, 0, mpq(1, 2)]
    assert not any(theta(P(3), 5).coefficients)
    for n in range(7):
        assert theta(p_lambda((1,) * n), 8)[n] == 1


def test_theta_linear():
    a, b = h(3) + e(2), p_lambda((1, 1, 1)) * 5 - P(2)
    assert theta(a + b, 4).coefficients == tuple(x + y for x, y in zip(theta(a, 4).coefficients, theta(b, 4).coefficients))


def test_theta_counts_perfect_matchings_to_8():
    F = exp_trunc(compile_exponent(parse_species("E[e2]"), 2), 16)
    via_theta = theta(F, 8).egf_terms()
    for n in range(9):
        want = 0 if n % 2 else factorial(n) // (2 ** (n // 2) * factorial(n // 2))
        assert via_theta[n] == want, n
        # same number as <F, h_1^n>, the coefficient of x_1...x_n
        assert scalar_product(F, p_lambda((1,) * n)) == want, n


def test_specializations():
    Z_E = exp_trunc(PowerSumPoly({partition_to_mono_single(i): mpq(1, i) for i in range(1, 7)}), 6)
    egf = specialize_egf(Z_E, 6)
    assert list(egf.coefficients) == [mpq(1, factorial(n)) for n in range(7)]
    # one unlabelled set of each size
    assert list(specialize_ogf(Z_E, 4).coefficients) == [1, 1, 1, 1, 1]
    # sets of nonempty sets: unlabelled structures are integer partitions
    inner = sum((h(j) for j in range(1, 5)), PowerSumPoly())
    g = sum((plethysm_pn(inner, k).truncate(4).scale(mpq(1, k)) for k in range(1, 5)), PowerSumPoly())
    assert list(specialize_ogf(exp_trunc(g, 4), 4).coefficients) == [1, 1, 2, 3, 5]
    assert list(specialize_ogf(P(2), 3).coefficients) == [0, 0, 1, 0]


# -- the adjoint of multiplication by h_i -------------------------------------------

@settings(max_examples=30, deadline=None)
@given(polys(max_weight=6), polys(max_weight=6), st.sampled_from([1, 2, 3]))
def test_h_perp_is_adjoint(A, B, i):
    zero = PowerSumPoly()
    lhs = scalar_product(h(i) * A, B)
    rhs = scalar_product(A, adjoint_h_step(B, zero, i, m=4))
    assert lhs == rhs


def test_adjoint_step_first_order():
    g = compile_exponent(parse_species("H[h2]"), 2)
    step = adjoint_h_step(PowerSumPoly.constant(1), g, 1)
    assert step == g.derivative(1)


def test_adjoint_step_simple_graphs():
    g = compile_exponent(parse_species("E[e2]"), 2)
    assert g == PowerSumPoly({(2,): mpq(1, 2), (0, 1): mpq(-1, 2), (0, 2): mpq(-1, 4)})
    A = adjoint_h_step(PowerSumPoly.constant(1), g, 2)
    assert A.constant_term() == 0
    # three applications evaluated at p = 0 give the single triangle
    vals = []
    A = PowerSumPoly.constant(1)
    for _ in range(4):
        vals.append(A.constant_term())
        A = adjoint_h_step(A, g, 2)
    assert vals == [1, 0, 0, 1]


def test_adjoint_step_rejects_index_beyond_truncation():
    with pytest.raises(ValueError):
        adjoint_h_step(PowerSumPoly.constant(1), P(1), 3, m=2)
