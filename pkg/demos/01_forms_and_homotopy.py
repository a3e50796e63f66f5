"""Polynomial differential forms on cubes, exactly.

We build a 1-form on the square, differentiate it twice, pull it back along a
polynomial map, and watch the homotopy formula close up with zero residual.
"""
from cubedr.polyform import (PolyForm, PolyMap, exterior_derivative, homotopy_identity_residual,
                             homotopy_operator, pullback)
from cubedr.polynomial import parse_polynomial

names = ["x1", "x2"]
f = parse_polynomial("x1^2*x2 - 3/4*x2", names)
w = PolyForm.dx(2, 1).scale(f)
print("w      =", w.to_string(names))
print("dw     =", exterior_derivative(w).to_string(names))
print("ddw    =", exterior_derivative(exterior_derivative(w)).to_string(names))

# a polynomial map of the square into itself: (s, t) -> (s t, t)
s, t = (parse_polynomial(v, names) for v in names)
P = PolyMap(2, [s * t, t])
print("P^* dx1 =", pullback(P, PolyForm.dx(2, 1)).to_string(names))

# a homotopy H(t, x) = t x from the constant map to the identity on the interval
H = PolyMap(2, [s * t])
one_form = PolyForm.dx(1, 1)
print("D(dx)  =", homotopy_operator(H, one_form).to_string(["x1"]))
print("residual of d D + D d - (in_1^* - in_0^*):", homotopy_identity_residual(H, one_form).to_string())
