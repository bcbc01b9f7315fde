import math
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smallcancel.bounds import (
    CHIU_GROWTH,
    BoundParams,
    asymptotic_lower_bound,
    bounds_table,
    ceil_even,
    edge_growth_bound,
    enclose,
    eps_girth_bound,
    exact_lower_bound,
    exact_power,
    format_table,
    main_bound,
    main_formula,
    osajda_bound,
)
from smallcancel.errors import InfeasibleError, ThresholdError
from smallcancel.generators import complete_graph, cycle_graph, tutte_12_cage

BASE_PARAMS = BoundParams(3, Fraction(3, 2), Fraction(1, 6))


def decimal_main(Delta, A, lam, digits=80):
    # independent oracle: decimal arithmetic at high precision
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(Delta - 1)
        e = Decimal((2 * A / lam + 2).numerator) / Decimal((2 * A / lam + 2).denominator)
        return 2 * d + 26 * d**e


def test_main_bound_value():
    r = main_bound(BASE_PARAMS)
    assert r.exact == 27262980 and r.L_even == 27262980
    assert r.value_str() == "27262980"
    assert 4 + 26 * 2**20 == 27262980


def test_eps_girth_value():
    r = eps_girth_bound(BoundParams(3, Fraction(3, 2), Fraction(1, 6), Fraction(1, 10**6)))
    assert r.details["alpha_eps"] == 4097
    assert r.exact == 2 * 2 + 13 * 4097
    assert r.L_even == 53266


def test_edge_growth_value():
    r = edge_growth_bound(Fraction(1, 6))
    assert r.L_even == 96
    assert 94 < r.lower <= r.upper < 95
    assert r.details["ratio"] < 1
    assert r.details["gamma1_min"] >= r.details["gamma1_exponent"]


def test_edge_growth_target_mode():
    r = edge_growth_bound(Fraction(1, 6), target_L=96)
    assert r.exact == 96 and r.details["ratio"] < 1
    with pytest.raises(InfeasibleError):
        edge_growth_bound(Fraction(1, 6), growth=(Fraction(3, 2), 2, 1, Fraction(3, 2)), target_L=96)
    with pytest.raises(InfeasibleError):
        edge_growth_bound(Fraction(1, 6), target_L=94)
    with pytest.raises(InfeasibleError):
        edge_growth_bound(Fraction(1, 6), eps=0)
    with pytest.raises(ValueError):
        edge_growth_bound(Fraction(1, 6), target_L=97)


def test_asymptotic_lower_bound():
    assert asymptotic_lower_bound(3, Fraction(1, 6)).exact == 81
    assert asymptotic_lower_bound(3, Fraction(1, 4)).exact == 27
    assert asymptotic_lower_bound(4, Fraction(1, 6)).exact == 256
    assert asymptotic_lower_bound(3, Fraction(1, 6)).notes


def test_osajda_bound_enclosure():
    r = osajda_bound(BASE_PARAMS)
    assert not r.is_exact
    assert 259.3 <= float(r.log10) <= 259.5
    assert r.lower <= r.upper and r.upper / r.lower < 1 + Fraction(1, 10**20)
    assert any("discrepancy" in n for n in r.notes)
    assert r.L_even % 2 == 0 and r.L_even >= r.upper
    # independent oracle: log10 via Decimal
    with localcontext() as ctx:
        ctx.prec = 60
        e4 = Decimal(4).exp()
        lg = (Decimal(2) * e4).log10() + 20 * Decimal(3).log10() + 88 * (4 * e4 * 3).log10()
    assert abs(Decimal(r.log10) - lg) < Decimal("1e-25")


def test_exact_lower_bound_examples():
    assert exact_lower_bound(tutte_12_cage(), Fraction(1, 6)) == 28
    assert exact_lower_bound(cycle_graph(24), Fraction(1, 6)) == 3
    assert exact_lower_bound(cycle_graph(20), Fraction(1, 6)) == 4
    with pytest.raises(ThresholdError):
        exact_lower_bound(complete_graph(4), Fraction(1, 6))


@given(st.integers(1, 10**6), st.integers(1, 8))
def test_exact_lower_bound_is_minimal_root(P, k):
    import gmpy2

    r, exact = gmpy2.iroot(P, k)
    lb = int(r) if exact else int(r) + 1
    assert lb**k >= P and (lb - 1) ** k < P


@given(st.fractions(min_value=Fraction(1, 50), max_value=50, max_denominator=50), st.integers(-6, 6), st.integers(1, 4))
def test_exact_power(base, num, den):
    e = Fraction(num, den)
    v = exact_power(base, e)
    if v is not None:
        assert v ** e.denominator == base ** e.numerator
    # a perfect power built on purpose is always recognised
    assert exact_power(base**den, Fraction(1, den)) == base
    assert exact_power(base**den, Fraction(num, den)) == base**num


def test_ceil_even():
    assert ceil_even(Fraction(4)) == 4
    assert ceil_even(Fraction(9, 2)) == 6
    assert ceil_even(Fraction(5)) == 6


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 6), st.fractions(min_value=Fraction(1, 4), max_value=2, max_denominator=8),
       st.sampled_from([Fraction(1, 6), Fraction(1, 7), Fraction(1, 8), Fraction(1, 10), Fraction(2, 13)]))
def test_main_bound_even_and_above_formula(Delta, A, lam):
    r = main_bound(BoundParams(Delta, A, lam))
    assert r.L_even % 2 == 0
    oracle = decimal_main(Delta, A, lam)
    assert Decimal(r.L_even) >= oracle
    assert Decimal(r.L_even) - oracle <= 2
    # the oracle is rounded to 80 digits, the enclosure is certified
    slack = Fraction(1, 10**70) * r.upper
    assert r.lower - slack <= Fraction(oracle) <= r.upper + slack


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 5), st.fractions(min_value=Fraction(1, 4), max_value=2, max_denominator=6))
def test_intervals_shrink_and_contain_exact(Delta, A):
    lam = Fraction(1, 6)
    f = main_formula(Delta, A, lam)
    exact = main_bound(BoundParams(Delta, A, lam)).exact
    prev = None
    for prec in (32, 64, 128, 256):
        lo, hi = enclose(f, prec)
        assert lo <= hi
        if exact is not None:
            assert lo <= exact <= hi
        if prev is not None:
            assert hi - lo <= prev[1] - prev[0]
        prev = (lo, hi)


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=Fraction(1, 10**6), max_value=1, max_denominator=10**6),
       st.integers(3, 4), st.sampled_from([Fraction(1, 6), Fraction(1, 8)]))
def test_eps_girth_not_above_main(eps, Delta, lam):
    p = BoundParams(Delta, Fraction(3, 2), lam, eps)
    assert eps_girth_bound(p).exact <= main_bound(p).exact + 13


def test_eps_girth_worst_case_equals_main():
    p = BoundParams(3, Fraction(3, 2), Fraction(1, 6), Fraction(1))
    assert eps_girth_bound(p).exact == main_bound(p).exact


def test_edge_growth_at_eps_one():
    r = edge_growth_bound(Fraction(1, 6), eps=1)
    assert r.ceil == 261 and r.L_even == 262


def test_bounds_table_and_format():
    rows = bounds_table()
    names = [r.name for r in rows]
    assert names == ["osajda", "main", "eps_girth", "edge_growth", "asymptotic_lower"]
    text = format_table(rows)
    lines = text.splitlines()
    assert lines[0] == "name\tvalue\tL_even\tlog10"
    assert "main\t27262980\t27262980\t" in text
    assert any(ln.startswith("# osajda: discrepancy") for ln in lines)
    assert all(len(ln.split("\t")) == 4 for ln in lines[1:6])


def test_params_validation():
    with pytest.raises(ValueError):
        BoundParams(2, 1, Fraction(1, 6))
    with pytest.raises(ValueError):
        BoundParams(3, 0, Fraction(1, 6))
    with pytest.raises(ValueError):
        BoundParams(3, 1, Fraction(1, 5))
    with pytest.raises(ValueError):
        BoundParams(3, 1, Fraction(1, 6), Fraction(0))
    assert CHIU_GROWTH[0] == Fraction(3, 2)
    assert math.isclose(float(main_bound(BoundParams(3, 1, Fraction(1, 6))).exact), 425988)
