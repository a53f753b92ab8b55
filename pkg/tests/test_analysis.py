from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tourney.analysis import (
    CLOSED_ALPHA,
    CLOSED_L,
    CLOSED_VALUE,
    C3PLUS_LOWER,
    C3PLUS_UPPER,
    alpha_objective,
    alpha_objective_exact,
    c4_max_formula,
    construction_count_prediction,
    construction_density_prediction,
    golden_section_max,
    optimize_alpha,
    unimodality_scan,
)
from tourney.census import census
from tourney.constructions import BlowupSpec, blowup_levels_sizes, carousel


def test_c4_formula_values():
    assert [c4_max_formula(n) for n in range(4, 9)] == [1, 5, 12, 28, 50]
    assert c4_max_formula(15) == 840


@pytest.mark.parametrize("n", range(4, 16))
def test_c4_formula_attained_by_carousel(n):
    assert census(carousel(n)).c4 == c4_max_formula(n)


@given(st.integers(4, 5000))
def test_c4_formula_is_integral(n):
    assert c4_max_formula(n) >= 1


def test_c4_formula_rejects_small_n():
    with pytest.raises(ValueError):
        c4_max_formula(3)


def test_objective_endpoints():
    assert alpha_objective(0.0) == 0.125
    assert alpha_objective_exact(Fraction(0)) == Fraction(1, 8)
    with pytest.raises(ValueError):
        alpha_objective(1.0)


@given(st.fractions(min_value=0, max_value=Fraction(99, 100)))
def test_exact_objective_matches_float(a):
    assert float(alpha_objective_exact(a)) == pytest.approx(alpha_objective(float(a)), rel=1e-12)


def test_objective_fixed_point():
    # the construction's density satisfies f = a b^3 + b^4 / 8 + a^4 f
    a = Fraction(1, 7)
    f = alpha_objective_exact(a)
    b = 1 - a
    assert f == a * b**3 + b**4 / 8 + a**4 * f


def test_closed_constants_against_bisection_of_the_derivative():
    def slope(x, h=1e-7):
        return alpha_objective(x + h) - alpha_objective(x - h)

    lo, hi = 0.05, 0.3
    for _ in range(60):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if slope(mid) > 0 else (lo, mid)
    assert CLOSED_ALPHA == pytest.approx((lo + hi) / 2, abs=1e-6)
    assert CLOSED_VALUE == pytest.approx(alpha_objective(CLOSED_ALPHA), abs=1e-15)
    assert CLOSED_L == pytest.approx(1 - CLOSED_ALPHA, abs=1e-15)
    assert C3PLUS_LOWER <= Fraction(CLOSED_VALUE) <= C3PLUS_UPPER


def test_golden_section_on_parabola():
    lo, hi, it = golden_section_max(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, 1e-10)
    assert abs((lo + hi) / 2 - 0.3) < 1e-9
    assert hi - lo <= 1e-10 and it > 0


def test_unimodality_scan_top_near_optimum():
    top = unimodality_scan(1000)
    assert abs(top / 999 - CLOSED_ALPHA) < 2e-3


def test_optimize_alpha():
    r = optimize_alpha(1e-9)
    assert abs(r.alpha_star - CLOSED_ALPHA) < 1e-7
    assert abs(r.value - CLOSED_VALUE) < 1e-12
    assert r.bracket_width <= 1e-9
    with pytest.raises(ValueError):
        optimize_alpha(0)


def test_prediction_alpha_zero_is_random():
    spec = BlowupSpec(500, 0.0)
    assert construction_count_prediction(spec) == Fraction(comb(500, 4), 8)


def test_prediction_depth_one():
    spec = BlowupSpec(1000, 0.2)
    (h, l), *_ = blowup_levels_sizes(spec)
    want = Fraction(h * comb(l, 3), 4) + Fraction(comb(l, 4), 8)
    assert construction_count_prediction(spec, depth=1) == want
    assert construction_count_prediction(spec) > want


def test_prediction_tends_to_objective():
    d = construction_density_prediction(BlowupSpec(10**6))
    assert abs(d - CLOSED_VALUE) < 1e-4
    assert construction_density_prediction(BlowupSpec(3)) == 0.0
