from __future__ import annotations

from itertools import combinations, product

import pytest
from gmpy2 import mpq

from regenum.species import (
    PRESETS, AtomKind, Mode, SpeciesAtom, SpeciesError, atom_index_poly, compile_exponent,
    cycle_index, parse_species, preset_catalog_hash, resolve_class,
)
from regenum.symkernel import (
    PowerSumPoly, e, exp_trunc, h, mono_weight, p_lambda, partitions_of, scalar_product,
    specialize_x, theta,
)


def h_lambda(lam):
    out = PowerSumPoly.constant(1)
    for part in lam:
        out = out * h(part)
    return out


def edge_product(n):
    """Expanded prod_{i<j} (1 + x_i x_j) as {exponent tuple: coefficient}."""
    poly = {(0,) * n: 1}
    for i, j in combinations(range(n), 2):
        new = dict(poly)
        for mono, c in poly.items():
            m = list(mono)
            m[i] += 1
            m[j] += 1
            new[tuple(m)] = new.get(tuple(m), 0) + c
        poly = new
    return poly


def test_atom_examples():
    assert atom_index_poly(SpeciesAtom(AtomKind.SET, 2), Mode.GAMMA) == PowerSumPoly({(2,): mpq(1, 2), (0, 1): mpq(-1, 2)})
    assert atom_index_poly(SpeciesAtom(AtomKind.SET, 2), Mode.Z) == h(2)
    assert atom_index_poly(SpeciesAtom(AtomKind.CYCLE, 3), Mode.Z) == PowerSumPoly({(3,): mpq(1, 3), (0, 0, 1): mpq(2, 3)})
    assert atom_index_poly(SpeciesAtom(AtomKind.LIST, 4), Mode.Z) == p_lambda((1, 1, 1, 1))
    assert atom_index_poly(SpeciesAtom(AtomKind.SINGLETON), Mode.GAMMA) == p_lambda((1,))
    with pytest.raises(SpeciesError):
        atom_index_poly(SpeciesAtom(AtomKind.CYCLE, 3), Mode.GAMMA)


def necklaces_brute(k, colours):
    """Colourings of a k-cycle up to rotation, by orbit enumeration."""
    seen = set()
    for word in product(range(colours), repeat=k):
        seen.add(min(word[r:] + word[:r] for r in range(k)))
    return len(seen)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_cycle_index_against_burnside(k):
    Z = cycle_index(k)
    for c in range(1, 4):
        # p_i -> c for every i
        value = sum(coef * c ** sum(mono) for mono, coef in Z.terms.items())
        assert value == necklaces_brute(k, c), (k, c)


def test_cycle_index_three_colours_of_triangle():
    Z = cycle_index(3)
    assert sum(coef * 3 ** sum(mono) for mono, coef in Z.terms.items()) == 11


def test_compile_simple_graphs_m2():
    g = compile_exponent(parse_species("E[e2]"), 2)
    assert g == PowerSumPoly({(2,): mpq(1, 2), (0, 1): mpq(-1, 2), (0, 2): mpq(-1, 4)})


def test_compile_cycle_index_composition_m2():
    g = compile_exponent(parse_species("Z(E o e2)"), 2)
    assert g == PowerSumPoly({(2,): mpq(1, 2), (0, 1): mpq(1, 2), (0, 2): mpq(1, 4)})
    assert g == compile_exponent(parse_species("H[h2]"), 2)


def test_compile_m1_is_labelled_egf():
    # with m = 1 only p_1 survives; theta gives the egf of labelled structures
    g = compile_exponent(parse_species("E[e2]"), 1)
    assert all(len(mono) <= 1 for mono in g.terms)
    egf = theta(exp_trunc(g, 8), 8).egf_terms()
    assert egf == [1, 0, 1, 0, 3, 0, 15, 0, 105]


def test_compile_weight_bound():
    g = compile_exponent(parse_species("E[e1+e2+e3]"), 3, W=4)
    assert g.weight_bound == 4
    assert max(mono_weight(m) for m in g.terms) <= 4
    with pytest.raises(SpeciesError):
        compile_exponent(parse_species("E[e2]"), 0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_simple_graph_series_is_edge_product(n):
    g = compile_exponent(parse_species("E[e2]"), max(n - 1, 1))
    F = exp_trunc(g, n * (n - 1))
    got = specialize_x(F, n, max(n - 1, 0))
    assert got == edge_product(n)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_have_nonnegative_integer_monomial_coefficients(name):
    expr = PRESETS[name].expr
    for m in range(1, 5):
        F = exp_trunc(compile_exponent(expr, m), 8)
        for w in range(9):
            for mu in partitions_of(w, max_part=m):
                c = scalar_product(F, h_lambda(mu))
                assert c.denominator == 1 and c >= 0, (name, m, mu, c)


@pytest.mark.parametrize("i,j", [(1, 2), (2, 3), (1, 4), (2, 2)])
def test_compile_additive(i, j):
    for m in (2, 3, 4):
        joint = compile_exponent(parse_species(f"E[e{i}+e{j}]"), m)
        split = compile_exponent(parse_species(f"E[e{i}]"), m) + compile_exponent(parse_species(f"E[e{j}]"), m)
        assert joint == split


def test_gamma_of_sets_is_sum_of_elementary():
    g = compile_exponent(parse_species("E[x]"), 5)
    want = sum((e(k) for k in range(6)), PowerSumPoly())
    assert exp_trunc(g, 5) == want


def test_parser():
    assert parse_species("E[e2]").canonical() == "E[e2]"
    assert parse_species("E[e1 + e2+e3+e4]").canonical() == "E[e1+e2+e3+e4]"
    assert parse_species("Z(E o L2)").canonical() == "Z(E o L2)"
    assert parse_species("H[2e2]").canonical() == "H[2e2]"
    assert parse_species("E[e2+e2]") == parse_species("E[2e2]")
    assert parse_species("E[x]").canonical() == "E[x]"
    assert resolve_class("simple_graphs") == parse_species("E[e2]")
    assert resolve_class("COVERS_1234") == parse_species("E[e1+e2+e3+e4]")
    for bad in ["E[]", "E[q2]", "F[e2]", "E[e]", "E[x3]", "E[c3]"]:
        with pytest.raises(SpeciesError):
            parse_species(bad)


def test_catalog_hash_stable():
    assert preset_catalog_hash() == preset_catalog_hash()
    assert len(preset_catalog_hash()) == 16
