"""Counting series: melonic T, chain and scheme series, asymptotics."""

import math

import pytest

from momaps import (
    SchemeParams,
    UnstabilizedCatalog,
    VSeries,
    asymptotic_check,
    build_scheme_catalog,
    chain_gf,
    count_by_degree,
    degree_gf,
    gen_dominant_schemes,
    melonic_T,
    rooted_gf,
    rooted_gf_by_substitution,
    scheme_gf,
)
from momaps.enumerate import SchemeCatalog, scheme_params_of
from momaps.series import (
    AsymptoticEstimate,
    fuss_catalan,
    melonic_U,
    sqrt_U,
)

# Rooted melonic graph counts by z^n (2n vertices).
MELONIC = [1, 1, 4, 22, 140, 969, 7084]


def test_melonic_T_coefficients():
    t = melonic_T(12)
    for n, c in enumerate(MELONIC):
        assert t[2 * n] == c
    for k in range(1, 13, 2):
        assert t[k] == 0


def test_fuss_catalan_closed_form():
    t = melonic_T(40)
    for n in range(0, 21):
        assert t[2 * n] == fuss_catalan(n)


def test_T_functional_equation():
    # T = 1 + z T^4 exactly, up to the truncation order.
    t = melonic_T(20)
    rhs = VSeries.one(20) + (t ** 4).shift(2)
    assert t == rhs


def test_sqrt_U_squares_to_U():
    assert sqrt_U(20) * sqrt_U(20) == melonic_U(20)


def test_vseries_arithmetic():
    one = VSeries.one(10)
    u = VSeries.monomial(2, 10)
    geo = (one - u).inverse()
    assert geo.coeffs == [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]
    assert (geo * (one - u)) == one
    assert (one - u).pow(2) == (one - u) * (one - u)
    with pytest.raises(Exception):
        (2 * one).inverse()


def test_chain_gf_values():
    # L/R chains: u^2/(1-u); u carries vertex index 2.
    for t in ("L", "R"):
        s = chain_gf(t, 12)
        assert [s[k] for k in (0, 2, 4, 6, 8)] == [0, 0, 1, 1, 1]
    se = chain_gf("Se", 12)
    assert [se[k] for k in (4, 6, 8, 10)] == [1, 0, 1, 0]
    so = chain_gf("So", 12)
    assert [so[k] for k in (4, 6, 8, 10)] == [0, 1, 0, 1]
    # Broken chains: 6u^2/((1-3u)(1-u)); u^k coefficient is
    # 3 (3^(k-1) - 1) for k >= 2.
    b = chain_gf("B", 12)
    assert [b[k] for k in (4, 6, 8, 10)] == [6, 24, 78, 240]


def test_scheme_gf_dominant_half():
    # Dominant scheme at doubled degree 1: one standard vertex, one
    # broken chain-vertex: 6 u^{5/2} / ((1-u)(1-3u)).
    params = scheme_params_of(next(iter(gen_dominant_schemes(1))))
    assert params == SchemeParams(two_p=1, b=1)
    s = scheme_gf(params, 13)
    assert [s[k] for k in (5, 7, 9, 11)] == [6, 24, 78, 240]
    assert params.min_vertices == 5


def test_rooted_gf_matches_substitution():
    # Melon-free counts at doubled degree 1 by vertex count.
    counts = {1: 2, 3: 6, 5: 18, 7: 54, 9: 162}
    by_sub = rooted_gf_by_substitution(counts, 9)
    cat = build_scheme_catalog(1, max_vertices=9)
    by_schemes = degree_gf(cat, 9)
    assert by_sub == by_schemes


def test_degree_gf_matches_enumeration():
    table = count_by_degree(8)
    cat1 = build_scheme_catalog(1, max_vertices=9)
    f1 = degree_gf(cat1, 8)
    for v in range(0, 9):
        assert f1[v] == table.count(v, 1)
    cat0 = build_scheme_catalog(0)
    f0 = degree_gf(cat0, 8)
    for v in range(0, 9):
        assert f0[v] == table.count(v, 0)


def test_degree_gf_unstabilized_warning():
    cat = SchemeCatalog(two_delta=1)
    cat.max_vertices_scanned = 5
    cat.add(next(iter(gen_dominant_schemes(1))), source_size=5)
    assert not cat.stabilized
    with pytest.warns(UnstabilizedCatalog):
        degree_gf(cat, 8)
    with pytest.raises(UnstabilizedCatalog):
        degree_gf(cat, 8, on_unstabilized="raise")
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        degree_gf(cat, 8, on_unstabilized="ignore")


def test_asymptotic_estimate_values():
    est = AsymptoticEstimate(1)
    assert est.growth_rate == 256.0 / 27.0
    assert est.exponent == -0.5
    assert math.isclose(est.prefactor,
                        2 ** 1.5 / (3 * math.sqrt(math.pi)))
    est3 = AsymptoticEstimate(3)
    assert est3.exponent == 1.5
    assert est3.value(10) > 0


def test_asymptotic_check_degree_half():
    cat = build_scheme_catalog(1, max_vertices=9)
    series = degree_gf(cat, 160)
    report = asymptotic_check(1, series)
    assert math.isclose(report.fitted_rate, 256.0 / 27.0, rel_tol=0.01)
    assert abs(report.fitted_exponent - (-0.5)) < 0.1
    assert report.trending_to_one
    # Sub-dominant parity stays bounded.
    assert all(abs(r) < 50 for _, r in report.parity_ratios)
