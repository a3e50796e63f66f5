from fractions import Fraction as F

import pytest

from cubedr import cubicalset as cs
from cubedr import io
from cubedr.polyform import PolyMap
from cubedr.verify import load_pair, read_data, trivial_cover


def far_cover(n):
    return [cs.CoverSet("none", [cs.Ball((10 ** 3,) * n, F(1))])]


def unit_pair(n):
    return cs.SubdivPair(cs.CubicalComplex.standard_cube(n), PolyMap.identity(n))


def test_cone_over_vertex_is_segment():
    s = cs.cone(cs.point((0,)), (1,))
    assert cs.dim(s) == 1
    assert cs.all_faces(s) == {s, cs.point((0,)), cs.point((1,))}


def test_cone_over_segment_is_triangle():
    tri = cs.cone(cs.box(((0, 1), (0, 0))), (F(1, 2), 1))
    assert cs.dim(tri) == 2 and len(cs.facets(tri)) == 3
    assert cs.volume(tri) == F(1, 2)
    corners = {cs.char_map(tri)((F(a), F(b))) for a in (0, 1) for b in (0, 1)}
    assert corners == {(F(1, 2), 1), (0, 0), (1, 0)}


def test_degenerate_cone_rejected():
    with pytest.raises(cs.GeometryError):
        cs.cone(cs.box(((0, 1), (0, 0))), (F(1, 2), 0))


def test_products_with_interval():
    seg = cs.product_with_I(cs.point((0,)), 1)
    assert cs.dim(seg) == 1 and cs.vertices(seg) == cs.vertices(cs.box(((0, 1),)))
    assert len(cs.facets(cs.product_with_I(cs.box(((0, 1), (0, 0))), 2))) == 4
    cube = cs.product_with_I(cs.box(((0, 1), (0, 1), (0, 0))), 3)
    assert cs.dim(cube) == 3 and len(cs.facets(cube)) == 6


def test_char_map_of_vertex_is_constant():
    P = cs.char_map(cs.point((F(1, 3), F(2, 3))))
    assert P.m == 0 and P(()) == (F(1, 3), F(2, 3))


def test_subordinate_cells_for_two_halves():
    pair, U = load_pair("interval", "identity1", "segment_halves")
    assert cs.subordinate_cells(pair, U).cells == {cs.point((0,)), cs.point((1,))}
    assert cs.subordinate_cells(pair, trivial_cover(pair)).cells == pair.complex.cells
    assert not cs.subordinate_cells(pair, far_cover(1)).cells


def test_sd_fixes_subordinate_pair():
    pair = unit_pair(2)
    assert cs.subdivide_sd(pair, trivial_cover(pair)).complex.cells == pair.complex.cells


def test_sd_splits_segment_at_midpoint():
    out = cs.subdivide_sd(unit_pair(1), far_cover(1)).complex
    assert out.f_vector() == [3, 2]
    assert {cs.vertices(c) for c in out.of_dim(1)} == {frozenset({(0,), (F(1, 2),)}),
                                                      frozenset({(1,), (F(1, 2),)})}


def test_sd_square_preserves_volume():
    out = cs.subdivide_sd(unit_pair(2), far_cover(2)).complex
    assert out.f_vector() == [9, 16, 8]
    assert cs.audit(out, carrier_volume=1).ok


def test_iterate_counts():
    pair, U = load_pair("interval", "identity1", "segment_halves")
    assert cs.sd_iterate_until_subordinate(pair, trivial_cover(pair))[1] == 0
    assert cs.sd_iterate_until_subordinate(pair, U)[1] <= 3


def test_iterate_rejects_non_covering():
    pair = unit_pair(1)
    miss = [cs.CoverSet("a", [cs.Ball((0,), F(1, 4))])]
    with pytest.raises(cs.SubdivisionError):
        cs.sd_iterate_until_subordinate(pair, miss, max_iters=4)


def test_mesh_metrics_on_segment():
    pair, U = load_pair("interval", "identity1", "segment_halves")
    m = cs.mesh_metrics(pair, U)
    assert m.diameter == 1.0 and m.epsilon == pytest.approx(5 / 8)
    assert cs.mesh_metrics(pair, trivial_cover(pair)).diameter == 0
    assert cs.mesh_metrics(cs.subdivide_sd(pair, U), U).diameter <= 0.5


@pytest.mark.parametrize("n", [1, 2, 3])
def test_td_slices(n):
    pair = unit_pair(n)
    td = cs.prism_td(pair, far_cover(n)).complex
    assert cs.slice_cells(td, 0) == set(pair.complex.cells)
    assert cs.slice_cells(td, 1) == set(cs.subdivide_sd(pair, far_cover(n)).complex.cells)
    assert cs.audit(td, carrier_volume=1).ok


def test_td_of_subordinate_pair_is_product():
    pair = unit_pair(1)
    assert cs.prism_td(pair, trivial_cover(pair)).complex.f_vector() == [4, 4, 1]
    assert cs.prism_td(pair, far_cover(1)).complex.f_vector() == [5, 7, 3]


def test_serialize_round_trip():
    pair, U = load_pair("square", "squash", "square_sides45")
    out, r = cs.sd_iterate_until_subordinate(pair, U)
    text = cs.serialize(out.complex)
    K = io.parse_complex(text)
    assert K.cells == out.complex.cells and cs.audit(K, carrier_volume=1).ok
    assert cs.serialize(K) == text


def test_shipped_models_pass_audit():
    for name in ("interval", "square", "cube"):
        K = io.parse_complex(read_data(f"{name}.model"))
        assert cs.audit(K, carrier_volume=1).ok
