from fractions import Fraction as F

import pytest

from cubedr import cohomology as coh
from cubedr import cubicalset as cs
from cubedr import hurewicz as hw
from cubedr.polyform import PolyForm, PolyMap, exterior_derivative
from cubedr.polynomial import Polynomial
from cubedr.verify import load_form, load_model, load_path

x1, x2 = Polynomial.var(2, 0), Polynomial.var(2, 1)
SQUARE = PolyMap.identity(2)


def test_fundamental_theorem_on_segment():
    M, w = load_form("interval_square.form")
    assert hw.integrate_1form(w, load_path(M, "interval.path")) == 1


def test_constant_path():
    M, w = load_form("circle.form")
    const = hw.PathPlot([(cs.box(((0, 1),)), PolyMap.constant(1, (F(1, 3),)))], M)
    assert hw.integrate_1form(w, const) == 0


def test_circle_generator_and_reverse():
    M, w = load_form("circle.form")
    loop = load_path(M, "circle.path")
    assert loop.is_loop()
    assert hw.integrate_1form(w, loop) == 1
    assert hw.integrate_1form(w, load_path(M, "circle_reversed.path")) == -1
    assert hw.integrate_1form(w, loop.reversed()) == -1


def test_concatenated_torus_loop_adds():
    T = load_model("torus")
    ab = load_path(T, "torus_ab.path")
    assert [hw.integrate_1form(load_form(f)[1], ab) for f in ("torus_a.form", "torus_b.form")] == [1, 1]


def test_green_examples():
    assert hw.green_check(PolyForm.dx(2, 1).scale(x2), SQUARE) == -1
    assert hw.green_gap(PolyForm.dx(2, 1).scale(x2), SQUARE) == 0
    exact = exterior_derivative(PolyForm.function(x1 * x2))
    assert hw.green_check(exact, SQUARE) == 0


def test_exactness_defect_builds_primitive():
    M, e = load_form("circle_exact.form")
    rep = hw.exactness_defect(M, e, [load_path(M, "circle.path")])
    assert rep.integrals == [0] and rep.verified


def test_exactness_defect_reports_nonzero_integral():
    M, w = load_form("circle.form")
    rep = hw.exactness_defect(M, w, [load_path(M, "circle.path")])
    assert rep.integrals == [1] and not rep.verified and rep.primitive is None


@pytest.mark.parametrize("name,forms,loops", [
    ("circle", ["circle.form"], ["circle.path"]),
    ("torus", ["torus_a.form", "torus_b.form"], ["torus_a.path", "torus_b.path"]),
    ("wedge", ["wedge_a.form", "wedge_b.form"], ["wedge_a.path", "wedge_b.path"]),
])
def test_pairing_rank_equals_b1(name, forms, loops):
    M = load_model(name)
    ws = [load_form(f)[1] for f in forms]
    ls = [load_path(M, p) for p in loops]
    assert hw.pairing_rank(ws, ls) == coh.model_betti(M)[1]


def test_radial_primitive():
    w = exterior_derivative(PolyForm.function(x1 * x1 * x2 + x2))
    F_ = hw.radial_primitive(w)
    assert exterior_derivative(PolyForm.function(F_)) == w


def test_broken_path_rejected():
    M = load_model("interval")
    seg = cs.box(((0, 1),))
    t = Polynomial.var(1, 0)
    with pytest.raises(hw.PathError):
        hw.PathPlot([(seg, PolyMap(1, [t * F(1, 2)])), (seg, PolyMap(1, [t]))], M)
    with pytest.raises(hw.PathError):
        hw.PathPlot([(seg, PolyMap(1, [t * 2]))], M)
