"""Integrating closed 1-forms around loops.

On the torus the two coordinate forms pair with the two coordinate loops as
the identity matrix, so the pairing has rank b1 = 2.  An exact form
integrates to zero and its primitive is rebuilt cell by cell.
"""
from cubedr import hurewicz as hw
from cubedr.polyform import PolyForm, PolyMap
from cubedr.polynomial import Polynomial
from cubedr.verify import load_form, load_model, load_path

T = load_model("torus")
forms = [load_form(f)[1] for f in ("torus_a.form", "torus_b.form")]
loops = [load_path(T, p) for p in ("torus_a.path", "torus_b.path")]
print("torus pairing matrix:", [[str(v) for v in row] for row in hw.pairing_matrix(forms, loops)])

M, w = load_form("circle.form")
loop = load_path(M, "circle.path")
print("circle: dx around the loop =", hw.integrate_1form(w, loop),
      " and backwards =", hw.integrate_1form(w, loop.reversed()))

M, e = load_form("circle_exact.form")
rep = hw.exactness_defect(M, e, [loop])
print("exact form: loop integrals", [str(v) for v in rep.integrals], " primitive verified:", rep.verified)

x1, x2 = Polynomial.var(2, 0), Polynomial.var(2, 1)
print("circulation of x2 dx1 around the unit square:", hw.green_check(PolyForm.dx(2, 1).scale(x2), PolyMap.identity(2)))
