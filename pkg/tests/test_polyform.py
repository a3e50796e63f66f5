from fractions import Fraction as F

import pytest
import sympy

from conftest import sym, sym_vars
from cubedr.polyform import (FormError, PolyForm, PolyMap, check_naturality, evaluate, exterior_derivative,
                             fiber_integrate, homotopy_identity_residual, homotopy_operator, integrate_top,
                             pullback, random_form, random_map, wedge)
from cubedr.polynomial import Polynomial
from cubedr.rng import XorShift64

x1, x2, x3 = (Polynomial.var(3, i) for i in range(3))
y1, y2 = Polynomial.var(2, 0), Polynomial.var(2, 1)


def test_d_of_x1_dx2():
    assert exterior_derivative(PolyForm.dx(2, 2).scale(y1)) == PolyForm.dx(2, 1, 2)


def test_d_of_constant_is_zero():
    assert exterior_derivative(PolyForm.function(Polynomial.const(3, 7))).is_zero()


def test_dd_on_example():
    w = PolyForm.dx(3, 3).scale(x1 * x1 * x2)
    assert exterior_derivative(exterior_derivative(w)).is_zero()


def test_pullback_by_swap_flips_sign():
    sw = PolyMap(2, [y2, y1])
    assert pullback(sw, PolyForm.dx(2, 1, 2)) == -PolyForm.dx(2, 1, 2)


def test_pullback_of_product_coordinate():
    pi = PolyMap(2, [y1 * y2, y2])
    assert pullback(pi, PolyForm.dx(2, 1)) == PolyForm.dx(2, 1).scale(y2) + PolyForm.dx(2, 2).scale(y1)


def test_pullback_identity():
    w = random_form(XorShift64(3), 3, 2)
    assert pullback(PolyMap.identity(3), w) == w


def test_pullback_top_form_matches_sympy_jacobian():
    f = PolyMap(2, [y1 * y1 + y2, y1 * y2 * 3 - y2 * y2])
    got = pullback(f, PolyForm.dx(2, 1, 2)).coefficient((1, 2))
    a, b = sym_vars(2)
    J = sympy.Matrix([[sympy.diff(sym(c), v) for v in (a, b)] for c in f.components]).det()
    assert sympy.expand(sym(got) - J) == 0


def test_wedge_examples():
    dx = PolyForm.dx(2, 1)
    assert wedge(dx, dx).is_zero()
    a, b = PolyForm.dx(2, 1).scale(y1), PolyForm.dx(2, 2).scale(y2)
    assert wedge(a, b) == PolyForm.dx(2, 1, 2).scale(y1 * y2)
    one = PolyForm.function(Polynomial.const(2, 1))
    assert wedge(a, one) == a


def test_evaluate():
    w = PolyForm.dx(2, 2).scale(y1)
    assert evaluate(w, (F(1, 2), F(1))) == {(2,): F(1, 2)}
    assert evaluate(PolyForm.function(y1 + y2), (F(1, 3), F(1, 3))) == {(): F(2, 3)}


def test_fiber_integration():
    t, x = y1, y2
    assert fiber_integrate(PolyForm.dx(2, 1, 2).scale(t)) == PolyForm.dx(1, 1).scale(F(1, 2))
    assert fiber_integrate(PolyForm.dx(2, 2)).is_zero()
    got = fiber_integrate(PolyForm.dx(2, 1).scale(t * t * x))
    assert got == PolyForm.function(Polynomial.var(1, 0) * F(1, 3))


def test_homotopy_operator_example():
    F_ = PolyMap(2, [y1 * y2])
    w = PolyForm.dx(1, 1)
    assert homotopy_operator(F_, w) == PolyForm.function(Polynomial.var(1, 0))
    assert homotopy_identity_residual(F_, w).is_zero()


def test_constant_homotopy_has_zero_operator():
    F_ = PolyMap(3, [x2, x3])
    w = PolyForm.dx(2, 1).scale(y1 * y2)
    assert homotopy_operator(F_, w).is_zero()
    assert homotopy_identity_residual(F_, w).is_zero()


def test_naturality_examples():
    pi = PolyMap(2, [y1 * y2, y2])
    assert check_naturality(pi, PolyForm.dx(2, 2).scale(y1))
    assert check_naturality(PolyMap.constant(2, (F(1, 3), F(1, 2))), PolyForm.dx(2, 1).scale(y1))


def test_integrate_top():
    assert integrate_top(PolyForm.dx(2, 1, 2).scale(y1 * y2)) == F(1, 4)


def test_shape_mismatch_raises():
    with pytest.raises(FormError):
        PolyForm.dx(2, 1) + PolyForm.dx(3, 1)
