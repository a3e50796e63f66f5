from fractions import Fraction as F

import pytest

from cubedr import cohomology as coh
from cubedr import cubicalset as cs
from cubedr import io


def test_rational():
    assert io.rational("3/4") == F(3, 4) and io.rational("-1/2") == F(-1, 2)
    with pytest.raises(ValueError):
        io.rational("x")


def test_cell_ids():
    assert io.parse_cell_id("[0,1] x [2,2]") == cs.box(((0, 1), (2, 2)))
    with pytest.raises(ValueError):
        io.parse_cell_id("[0,2]")


@pytest.mark.parametrize("text,line", [("[0,2]\n", 1), ("[0,1] x [0,1]\n# c\nbogus\n", 3)])
def test_model_parse_errors_report_lines(text, line):
    with pytest.raises(io.ParseError) as exc:
        io.parse_model(text)
    assert exc.value.line == line


def test_bad_identification_is_a_model_error():
    with pytest.raises(coh.ModelError):
        io.parse_model("[0,1]\nidentify [1,1] -> [0,0] via [[2]]; (-1)\n")


def test_form_files():
    deg, pieces, header = io.parse_form("model circle.model\non [0,1] : dx1 : 1\n")
    assert deg == 1 and header == {"model": "circle.model"}
    assert list(pieces) == [cs.box(((0, 1),))]
    for bad in ("on [0,1] : dx2 : 1\n", "on [0,1] : dx1 : sin(x1)\n"):
        with pytest.raises(io.ParseError):
            io.parse_form(bad)


def test_path_cover_and_plot_files():
    segs = io.parse_path("segment [0,1] : (t)\nsegment [1,2] : (1+t^2)\n")
    assert [c for c, _ in segs] == [cs.box(((0, 1),)), cs.box(((1, 2),))]
    assert segs[1][1]((F(1, 2),)) == (F(5, 4),)
    U = io.parse_cover("cover A = ball((0,0), 1/2) | cells([0,1]x[0,0])\ncover B = cells([0,1]x[0,1])\n")
    assert set(U) == {"A", "B"} and len(U["A"].pieces) == 2
    assert U["A"].contains((F(1, 10), F(1, 10))) and not U["A"].contains((F(1, 2), F(1, 2)))
    plots = io.parse_plots("plot 2 : (x1^2, x2)\nplot 0 : (1/2)\n")
    assert [(P.m, P.n) for P in plots] == [(2, 2), (0, 1)]
