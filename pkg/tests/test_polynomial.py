from fractions import Fraction as F

import pytest
import sympy

from conftest import sym, sym_vars
from cubedr.polynomial import (Polynomial, PolynomialParseError, bernstein_bounds, certify_below,
                               parse_polynomial)

X = ["x1", "x2"]


def test_parse_and_evaluate():
    p = parse_polynomial("x1*x2^2 - 3/2", X)
    assert p.evaluate((F(1), F(2))) == F(5, 2)
    assert p.degree() == 3


@pytest.mark.parametrize("bad", ["x3", "x1 +", "sin(x1)", "x1^(1/2)", "x1 / x2"])
def test_parse_rejects(bad):
    with pytest.raises(PolynomialParseError):
        parse_polynomial(bad, X)


def test_arithmetic_against_sympy():
    p = parse_polynomial("(x1 + 2*x2)^3 - x1*x2/7", X)
    q = parse_polynomial("x1^2 - 5/3*x2 + 1", X)
    x1, x2 = sym_vars(2)
    for got, want in ((p * q, sym(p) * sym(q)), (p - q, sym(p) - sym(q)), (p.diff(0), sympy.diff(sym(p), x1))):
        assert sympy.expand(sym(got) - want) == 0


def test_unit_integrals_against_sympy():
    p = parse_polynomial("x1^3*x2 + 2*x2^2 - 1/5", X)
    x1, x2 = sym_vars(2)
    want = sympy.integrate(sym(p), (x1, 0, 1), (x2, 0, 1))
    assert p.integrate_all_unit() == F(str(want))


def test_compose():
    p = parse_polynomial("x1*x2", X)
    x1, x2 = Polynomial.var(2, 0), Polynomial.var(2, 1)
    assert p.compose([x1 + x2, x1 - x2]) == x1 * x1 - x2 * x2


def test_bernstein_enclosure_contains_range():
    p = parse_polynomial("4*x1*(1-x1) - x2", X)
    lo, hi = bernstein_bounds(p)
    assert lo <= -1 and hi >= 1
    assert certify_below(p, F(11, 10))
    assert not certify_below(p, F(9, 10))
