from fractions import Fraction as F

import pytest

from cubedr import cohomology as coh
from cubedr import io
from cubedr.verify import EXPECTED_BETTI, MV_CASES, load_form, load_model, read_data


def test_point_chain_complex():
    cc = coh.chain_complex(load_model("point"))
    assert cc.dims == [1] and coh.betti(cc) == [1]


def test_circle_boundary_cancels():
    cc = coh.chain_complex(load_model("circle"))
    assert cc.dims == [1, 1]
    assert cc.boundary(1) == [[0]]


def test_torus_boundaries_vanish():
    cc = coh.chain_complex(load_model("torus"))
    assert cc.dims == [1, 2, 1]
    assert all(x == 0 for q in (1, 2) for row in cc.boundary(q) for x in row)


@pytest.mark.parametrize("name", sorted(EXPECTED_BETTI))
def test_betti(name):
    M = load_model(name)
    assert coh.model_betti(M) == EXPECTED_BETTI[name]
    assert coh.chain_complex(M).check_dd()


@pytest.mark.parametrize("name", ["circle", "sphere", "torus", "rp2", "wedge"])
def test_betti_survive_subdivision(name):
    assert coh.model_betti(coh.subdivide_model(load_model(name))) == EXPECTED_BETTI[name]


def test_rp2_needs_rank_one_over_rationals():
    cc = coh.chain_complex(load_model("rp2"))
    assert coh.betti(cc) == [1, 0, 0]
    assert cc.rank_boundary(2) == 1


def test_disjoint_unions():
    P, S = load_model("point"), load_model("circle")
    assert coh.disjoint_union_betti([P, P]) == [2]
    assert coh.disjoint_union_betti([S, P]) == [2, 1]
    assert coh.disjoint_union_betti([]) == []


def _mv(model, cover):
    U = io.parse_cover(read_data(f"{cover}.cover"))
    return coh.mayer_vietoris(load_model(model), U["A"], U["B"])


@pytest.mark.parametrize("model,cover", MV_CASES)
def test_mayer_vietoris_exact_and_agrees(model, cover):
    T = _mv(model, cover)
    assert T.exact and not T.failures
    assert T.assembled == T.direct == EXPECTED_BETTI[model]


def test_mv_piece_betti():
    circle = _mv("circle4", "circle4_arcs")
    assert [(r.b_A, r.b_B, r.b_AB) for r in circle.rows] == [(1, 1, 2), (0, 0, 0)]
    sphere = _mv("sphere_box", "sphere_box_caps")
    assert [(r.b_A, r.b_B, r.b_AB) for r in sphere.rows] == [(1, 1, 1), (0, 0, 1), (0, 0, 0)]


def test_mv_redundant_set():
    T = _mv("circle4", "circle4_whole")
    assert [r.b_A for r in T.rows] == [1, 1]
    assert T.assembled == [1, 1]


def test_mv_rejects_non_cover():
    with pytest.raises(coh.UnsupportedCoverError):
        _mv("circle4", "circle4_noncover")


def test_orientation_reversing_self_identification():
    with pytest.raises(coh.ModelError):
        io.parse_model("[0,1]\nidentify [0,1] -> [0,1] via [[-1]]; (1)\n")


def test_derham_pairings():
    M, w = load_form("circle.form")
    rep = coh.derham_compare(M, [w])
    assert rep.pairing == [[1]] and rep.full_rank
    T = load_model("torus")
    ws = [load_form(f)[1] for f in ("torus_a.form", "torus_b.form")]
    rep = coh.derham_compare(T, ws)
    assert sorted(map(sorted, rep.pairing)) == [[0, 1], [0, 1]] and rep.rank == 2


def test_excision_examples():
    from cubedr.polyform import PolyForm
    from cubedr.polynomial import Polynomial
    x = Polynomial.var(1, 0)
    zero = coh.excision_homotopy_check([PolyForm.zero(1, 1)])
    assert zero.residual == 0
    for w in (PolyForm.dx(2, 1, 2), PolyForm.dx(1, 1).scale(x)):
        assert coh.excision_homotopy_check([w]).residual < 1e-8
