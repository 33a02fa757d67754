from fractions import Fraction

import pytest

from forestvol.polynomials import LOWER, MultiPoly

try:
    from hypothesis import given, strategies as st

    HAVE_HYPOTHESIS = True
except ImportError:
    HAVE_HYPOTHESIS = False

x0 = MultiPoly.variable(0)
x1 = MultiPoly.variable(1)
x2 = MultiPoly.variable(2)


def test_arithmetic_identities():
    p = (x0 + x1) * (x0 - x1)
    assert p == x0 * x0 - x1 * x1
    assert (x0 + 1) ** 3 == x0**3 + 3 * x0**2 + 3 * x0 + 1
    assert (p - p).is_zero()


def test_substitute_and_evaluate():
    p = x0 * x1 + 2 * x1 + 3
    q = p.substitute(0, Fraction(1, 2))
    assert q == Fraction(5, 2) * x1 + 3
    assert p.evaluate({0: 2, 1: Fraction(1, 3)}) == Fraction(2, 3) + Fraction(2, 3) + 3


def test_substitute_variable_for_variable():
    p = x0**2 + x1
    assert p.substitute(1, x2) == x0**2 + x2


def test_antiderivative_and_definite_integral():
    p = 3 * x0**2
    assert p.antiderivative(0) == x0**3
    assert p.integrate_definite(0, 0, 1) == MultiPoly.constant(1)
    # partial integration keeps the other variable
    q = x0 * x1
    r = q.integrate_definite(0, 0, 2)
    assert r == 2 * x1


def test_integral_bounds_may_be_polynomials():
    p = MultiPoly.constant(1)
    r = p.integrate_definite(0, MultiPoly.variable(LOWER), x1)
    assert r == x1 - MultiPoly.variable(LOWER)


def test_integral_rejects_bound_containing_variable():
    with pytest.raises(ValueError):
        x0.integrate_definite(0, 0, x0)


def test_str_rendering():
    p = Fraction(-1, 2) * x0**2 + x1 - 3
    s = str(p)
    assert "x_0^2" in s and "x_1" in s
    assert str(MultiPoly.variable(LOWER)) == "m"
    assert str(MultiPoly.constant(0)) == "0"


def test_total_degree_and_variables():
    p = x0**2 * x1 + x2
    assert p.total_degree() == 3
    assert p.variables() == {0, 1, 2}


if HAVE_HYPOTHESIS:
    small_fracs = st.fractions(
        min_value=-3, max_value=3, max_denominator=6
    )

    @given(small_fracs, small_fracs, small_fracs)
    def test_eval_is_ring_hom(a, b, c):
        p = a * x0 + b
        q = x0**2 - c
        point = {0: Fraction(2, 3)}
        assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)
        assert (p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point)

    @given(small_fracs, st.integers(min_value=0, max_value=4))
    def test_fundamental_theorem(c, e):
        p = c * x0**e
        lo, hi = Fraction(-1, 2), Fraction(3, 4)
        val = p.integrate_definite(0, lo, hi)
        anti = p.antiderivative(0)
        assert val == MultiPoly.constant(
            anti.evaluate({0: hi}) - anti.evaluate({0: lo})
        )
