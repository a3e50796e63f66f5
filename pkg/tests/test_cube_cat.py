from fractions import Fraction as F

import pytest

from cubedr import cube_cat as cc


def test_boundary_inserts_coordinate():
    assert cc.apply_boundary(2, 2, 0, (F(1, 2), F(1, 4))) == (F(1, 2), 0, F(1, 4))
    assert cc.apply_boundary(0, 1, 1, ()) == (1,)


def test_boundary_relation_pointwise():
    t = (F(3, 7),)
    lhs = cc.apply_boundary(2, 1, 1, cc.apply_boundary(1, 1, 0, t))
    rhs = cc.apply_boundary(2, 2, 0, cc.apply_boundary(1, 1, 1, t))
    assert lhs == rhs == (1, 0, F(3, 7))


def test_degeneracy_deletes_coordinate():
    assert cc.apply_degeneracy(1, 1, (F(3, 4), F(1, 2))) == (F(1, 2),)
    assert cc.apply_degeneracy(0, 1, (F(1, 3),)) == ()


def test_degeneracy_after_boundary_is_identity():
    t = (F(2, 5),)
    assert cc.apply_degeneracy(1, 1, cc.apply_boundary(1, 1, 0, t)) == t


@pytest.mark.parametrize("bad", [(2, 0, 0), (2, 4, 0), (2, 1, 2)])
def test_boundary_rejects_bad_indices(bad):
    n, i, eps = bad
    with pytest.raises(cc.CubeIndexError):
        cc.apply_boundary(n, i, eps, (F(0),) * n)


@pytest.mark.parametrize("max_dim", [1, 3, 5])
def test_relations_hold(max_dim):
    rep = cc.check_relations(max_dim)
    assert rep.ok and rep.total > 0 and not rep.violations


def test_normal_form_agrees_pointwise():
    word = [cc.Boundary(1, 0), cc.Degeneracy(2), cc.Boundary(2, 1)]
    f = cc.CubeMorphism.from_word(2, word)
    g = f.normal_form()
    for t in cc.sample_points(2, denominator=4):
        assert f(t) == g(t)
