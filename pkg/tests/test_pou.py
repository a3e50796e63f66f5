import numpy as np
import pytest
from fractions import Fraction as F

from cubedr import io, pou
from cubedr.polyform import PolyForm, PolyMap
from cubedr.verify import POU_CASES, ball_cover, read_data, split_case


def segment_builder(**kw):
    return pou.PoUBuilder(ball_cover(io.parse_cover(read_data("segment_halves.cover"))), **kw)


def test_stabilizer_values():
    assert pou.stabilizer_eval(-0.5) == 0
    assert pou.stabilizer_eval(1.5) == 1
    assert pou.stabilizer_eval(0.5) == 0.5


def test_lambda_ab_values():
    assert pou.lambda_ab(0, 1, 0.1) == 0
    assert pou.lambda_ab(0, 1, 0.9) == 1
    assert pou.lambda_ab(0, 1, 0.5) == pytest.approx(0.5, abs=1e-15)


def test_psi_boundary_values():
    assert pou.psi_boundary(2, 0.25, (0.0, 0.3)) == 1
    assert pou.psi_boundary(2, 0.25, (0.5, 0.5)) == 0
    assert pou.psi_boundary(1, 0.25, (7 / 8,)) == pou.lambda_ab(0.75, 1, 7 / 8)


def test_constant_plot_in_A_only():
    pp = segment_builder().get(PolyMap.constant(0, (F(0),)))
    A, B = pp.rho(np.zeros((1, 0)))
    assert A[0] == 1 and B[0] == 0


def test_crossing_plot_is_monotone_and_sums_to_one():
    pp = segment_builder().get(PolyMap.identity(1))
    xs = np.linspace(0, 1, 65).reshape(-1, 1)
    A, B = pp.rho(xs)
    assert A[0] == 1 and A[-1] == 0
    assert np.all(np.diff(A) <= 0)
    assert np.max(np.abs(A + B - 1)) < 1e-12


@pytest.mark.parametrize("cover,family", POU_CASES)
def test_shipped_families(cover, family):
    C = ball_cover(io.parse_cover(read_data(f"{cover}.cover")))
    built = pou.build_pou(C, io.parse_plots(read_data(f"{family}.plot")))
    rep = pou.check_pou(built, 64)
    assert rep.ok(1e-12), rep.to_dict()


def test_three_valued_fallback_builds_a_partition():
    C = ball_cover(io.parse_cover(read_data("segment_halves.cover")))
    built = pou.build_pou(C, io.parse_plots(read_data("segment_family.plot")), normal=False)
    rep = pou.check_pou(built, 32)
    assert rep.max_sum_deviation < 1e-12 and rep.support_violations == 0


def test_uncovered_point_is_rejected():
    C = pou.BallCover([((F(0),), F(1, 4))], [((F(1),), F(1, 4))])
    with pytest.raises(pou.CoverageError):
        pou.build_pou(C, [PolyMap.identity(1)])


def test_split_zero_form():
    _, pp = split_case()
    k1, k2, _ = pou.mv_split(PolyForm.zero(1, 1), pp)(np.array([[0.3], [0.9]]))
    assert not k1 and not k2


def test_split_where_B_weight_vanishes():
    kappa, pp = split_case()
    x = np.array([[0.5]])
    assert pp.rhoB(x)[0] == 0
    k1, k2, k = pou.mv_split(kappa, pp)(x)
    assert k1[(1,)][0] == 0 and k2[(1,)][0] == -k[(1,)][0] == -1


def test_split_reconstructs():
    kappa, pp = split_case()
    rep = pou.check_mv_split(kappa, pp, samples=256)
    assert rep.reconstruction_error < 1e-10 and rep.support_violations == 0
