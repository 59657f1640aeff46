from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from reference_data import TWO_REGULAR
from regenum import upoly as up
from regenum.dfinite import (
    ExtensionError, GuessError, LinearODE, PRecurrence, SectionedRecurrence, borel_scale,
    detect_stride, dominant_singularity, extend, guess_recurrence, indicial_polynomial,
    leading_singularities, ode_to_rec, rec_to_ode,
)
from regenum.enumeration import count

F = Fraction


@pytest.fixture(scope="module")
def two_regular_terms():
    return count("E[e2]", {2}, 80).terms


@pytest.fixture(scope="module")
def two_regular_rec(two_regular_terms):
    rec = guess_recurrence(two_regular_terms[:40])
    assert rec is not None
    return rec


def matchings(N):
    return [0 if n % 2 else factorial(n) // (2 ** (n // 2) * factorial(n // 2)) for n in range(N + 1)]


# -- guessing -------------------------------------------------------------------

def test_guess_perfect_matchings():
    rec = guess_recurrence(matchings(40))
    assert rec.order == 2 and rec.stride == 2
    # a_{n+2} = (n+1) a_n
    assert rec.coefficients == ((F(-1), F(-1)), (), (F(1),))
    assert rec.annihilates(matchings(200))


def test_guess_two_regular(two_regular_rec, two_regular_terms):
    rec = two_regular_rec
    assert rec.order <= 3 and rec.degree <= 2
    assert rec.annihilates(two_regular_terms)
    # the classical relation 2 a_{n+1} - 2n a_n - n(n-1) a_{n-2} = 0, shifted by 2
    classical = PRecurrence(((F(-2), F(-3), F(-1)), (), (F(-4), F(-2)), (F(2),)))
    assert classical.annihilates(two_regular_terms)


def test_guess_zero_tail():
    seq = [1] + [0] * 30
    rec = guess_recurrence(seq)
    assert rec is not None and rec.order == 1
    assert rec.annihilates(seq)
    # a_{n+1} = 0 holds from n = 0; a_0 = 1 is carried as an initial term
    assert rec.coefficients == ((), (F(1),))
    assert rec.initial_terms[0] == 1
    assert extend(rec, 40) == [1] + [0] * 40


def test_guess_returns_none_when_nothing_fits():
    rng = random.Random(5)
    seq = [rng.randrange(1, 10 ** 6) for _ in range(40)]
    assert guess_recurrence(seq, max_order=2, max_degree=2) is None


def test_guess_needs_terms_and_guard():
    with pytest.raises(GuessError):
        guess_recurrence([1, 1, 2, 3, 5, 8])
    with pytest.raises(GuessError):
        guess_recurrence(list(range(40)), guard=3)


def test_guess_ogf_mode_fibonacci():
    fib = [0, 1]
    while len(fib) < 40:
        fib.append(fib[-1] + fib[-2])
    rec = guess_recurrence(fib, egf_mode=False)
    assert rec.order == 2 and rec.degree == 0
    assert rec.annihilates(fib)


def test_detect_stride():
    assert detect_stride([1, 0, 1, 0, 3]) == (2, 0)
    assert detect_stride([0, 1, 0, 0, 2, 0, 0, 7]) == (3, 1)
    assert detect_stride([1, 2, 3]) == (1, 0)
    assert detect_stride([0, 0, 0]) == (1, 0)


@settings(max_examples=15, deadline=None)
@given(st.integers(30, 60), st.sampled_from(["E[e2]:1", "E[e2]:2", "E[e2]:1,2", "H[h2]:2"]))
def test_guessed_recurrences_survive_unseen_terms(length, key):
    cls, degs = key.split(":")
    terms = _cached_terms(cls, degs)
    rec = guess_recurrence(terms[:length])
    if rec is None:
        return
    # it annihilates the guard terms it was checked on and every later engine term
    assert rec.annihilates(terms)


_CACHE: dict = {}


def _cached_terms(cls, degs):
    if (cls, degs) not in _CACHE:
        _CACHE[cls, degs] = count(cls, [int(d) for d in degs.split(",")], 100).terms
    return _CACHE[cls, degs]


# -- extension ------------------------------------------------------------------

def test_extend_two_regular(two_regular_rec, two_regular_terms):
    ext = extend(two_regular_rec, 80, integral=True)
    assert ext == two_regular_terms
    assert ext[:11] == TWO_REGULAR
    assert ext[10] == 286884


def test_extend_prefix_unchanged(two_regular_rec):
    init = list(two_regular_rec.initial_terms)
    assert extend(two_regular_rec, 2) == init[:3]


def test_extend_blocked_by_leading_root():
    # (n - 3) a_{n+1} = a_n stalls at n = 3
    rec = PRecurrence(((F(-1),), (F(-3), F(1))), (F(1),))
    with pytest.raises(ExtensionError) as err:
        extend(rec, 10)
    assert err.value.n == 3


@pytest.mark.parametrize("S", [(1,), (2,), (1, 2)])
def test_extension_matches_engine(S):
    terms = count("E[e2]", S, 70).terms
    rec = guess_recurrence(terms[:40])
    assert rec is not None
    assert extend(rec, 70) == terms


def test_recurrence_dict_round_trip(two_regular_rec):
    again = PRecurrence.from_dict(two_regular_rec.to_dict())
    assert again == two_regular_rec
    assert "a(n+" in str(two_regular_rec)


def test_degenerate_recurrence_rejected():
    with pytest.raises(ValueError):
        PRecurrence(((F(1),),))
    with pytest.raises(ValueError):
        PRecurrence(((F(1),), ()))


# -- conversions ------------------------------------------------------------------

def test_factorial_to_ode():
    rec = PRecurrence(((F(-1), F(-1)), (F(1),)), (F(1),))
    ode = rec_to_ode(rec)
    # (1 - t) f' - f = 0
    assert ode.coefficients == ((F(-1),), (F(1), F(-1)))


def test_two_regular_to_ode(two_regular_rec):
    ode = rec_to_ode(two_regular_rec)
    # 2 (1 - t) f' - t^2 f = 0, up to a constant
    assert ode.order == 1
    q0, q1 = ode.coefficients
    assert up.mul(q0, (F(2), F(-2))) == up.mul(q1, (F(0), F(0), F(-1)))


def test_ode_annihilates_series(two_regular_rec, two_regular_terms):
    ode = rec_to_ode(two_regular_rec)
    f = [F(a, factorial(n)) for n, a in enumerate(two_regular_terms)]
    assert not any(ode.apply_series(f))


def _random_rec(rng):
    r = rng.randint(1, 3)
    d = rng.randint(0, 2)
    coeffs = [tuple(F(rng.randint(-3, 3)) for _ in range(d + 1)) for _ in range(r)]
    # leading coefficient positive on n >= 0 so the terms are well defined
    coeffs.append((F(rng.randint(1, 3)), F(rng.randint(0, 2))))
    init = tuple(F(rng.randint(-5, 5)) for _ in range(r))
    return PRecurrence(tuple(coeffs), init)


@pytest.mark.parametrize("egf", [True, False])
def test_conversion_round_trip_random(egf):
    rng = random.Random(2024 + egf)
    done = 0
    while done < 20:
        rec = _random_rec(rng)
        seq = extend(rec, 60)
        if not any(seq[rec.order:]):
            continue
        full = PRecurrence(rec.coefficients, tuple(seq), 0)
        ode = rec_to_ode(full, egf=egf)
        series = [F(a) / factorial(n) for n, a in enumerate(seq)] if egf else [F(a) for a in seq]
        assert not any(ode.apply_series(series)), (rec, ode)
        back = ode_to_rec(ode, egf=egf)
        assert back.annihilates(seq), (rec, back)
        done += 1


def test_ode_to_rec_simple():
    # f' - f = 0 for the egf gives a_{n+1} = a_n
    rec = ode_to_rec(LinearODE(((F(-1),), (F(1),))))
    assert rec.annihilates([1] * 20)
    # ogf: (1 - t) f' - f = 0 has coefficients n!
    rec = ode_to_rec(LinearODE(((F(-1),), (F(1), F(-1)))), egf=False)
    assert rec.annihilates([1] * 20)


# -- factorial rescaling -------------------------------------------------------------

def test_borel_identity_and_inverse(two_regular_rec, two_regular_terms):
    assert borel_scale(two_regular_rec, 0) == two_regular_rec
    b = borel_scale(two_regular_rec, 1)
    scaled = [F(a, factorial(n)) for n, a in enumerate(two_regular_terms)]
    assert b.annihilates(scaled)
    back = borel_scale(b, -1)
    assert back.annihilates(two_regular_terms)


def test_borel_two_regular_radius_one(two_regular_rec):
    b = borel_scale(two_regular_rec, 1)
    vals = extend(b, 400)
    ratio = float(vals[400] / vals[399])
    assert abs(ratio - 1) < 5e-3
    sing = dominant_singularity(rec_to_ode(b, egf=False))
    assert abs(sing.value - 1) < 1e-12


def test_borel_three_halves_sections():
    terms = count("E[e2]", {3}, 90).terms
    rec = guess_recurrence(terms, max_order=8, max_degree=8)
    assert rec is not None
    sec = borel_scale(rec, F(3, 2), terms=120)
    assert isinstance(sec, SectionedRecurrence)
    assert sec.sections[1] is None
    s0 = sec.sections[0]
    vals = extend(s0, 119)
    # b_m = a_{2m} / (m!)^3 settles to geometric growth with a finite ratio
    r1, r2 = float(vals[118] / vals[117]), float(vals[119] / vals[118])
    assert 0 < r2 < 100 and abs(r2 - r1) < 0.05 * r2
    for m in range(len(terms) // 2):
        assert vals[m] == F(terms[2 * m], factorial(m) ** 3)


def test_borel_unsupported():
    rec = PRecurrence(((F(-1), F(-1)), (F(1),)), (F(1),))
    with pytest.raises(ValueError):
        borel_scale(rec, F(1, 5))


# -- singularities ------------------------------------------------------------------

def test_singularities_examples():
    s = leading_singularities(LinearODE(((F(0), F(0), F(-1)), (F(2), F(-2)))))
    assert len(s) == 1 and abs(s[0].value - 1) < 1e-12
    s = leading_singularities(LinearODE(((F(-1),), (F(1), F(-1)))))
    assert abs(s[0].value - 1) < 1e-12 and s[0].radius <= 1e-12
    s = leading_singularities(LinearODE(((F(1),), (F(-2), F(0), F(1)))))
    vals = sorted(x.value.real for x in s)
    assert abs(vals[0] + 2 ** 0.5) < 1e-12 and abs(vals[1] - 2 ** 0.5) < 1e-12
    assert all(x.radius <= 1e-12 for x in s)


def test_singularities_multiplicity_and_complex():
    # (t^2 + 1)^2 (t - 3)
    lead = up.mul(up.power((F(1), F(0), F(1)), 2), (F(-3), F(1)))
    s = leading_singularities(LinearODE(((F(1),), lead)))
    assert [x.multiplicity for x in s] == [2, 2, 1]
    assert abs(abs(s[0].value) - 1) < 1e-12 and abs(s[2].value - 3) < 1e-12


def test_entire_solution_has_no_singularity():
    with pytest.raises(ValueError, match="no finite singularity"):
        leading_singularities(LinearODE(((F(-1),), (F(1),))))


def test_indicial_polynomial_regular_point():
    # (1 - t) f' - f = 0 at t = 1: exponent -1
    poly, regular = indicial_polynomial(LinearODE(((F(-1),), (F(1), F(-1)))), 1)
    assert regular
    roots = [complex(-poly[0] / poly[1])]
    assert abs(roots[0] + 1) < 1e-20
