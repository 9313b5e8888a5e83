import random
from fractions import Fraction

import numpy as np
import pytest
import shapely
from shapely.geometry import Polygon

from quasigrid.cyclotomic import CyclotomicNumber, RationalAngle, cos_of, sin_of
from quasigrid.dualizer import (
    NotCoveredError,
    SingularPointError,
    core_radius,
    corner_angle,
    dual_tile,
    generate_tiling,
    shape_class,
)
from quasigrid.multigrid import K, GridLine, MultigridSpec, embed
from quasigrid.regularity import Intersection, count_intersections, enumerate_intersections
from quasigrid.validator import shape_census

A = RationalAngle


@pytest.fixture(scope="module")
def p5():
    return generate_tiling(MultigridSpec.uniform(5, "1/5"), 6)


@pytest.fixture(scope="module")
def p7():
    return generate_tiling(MultigridSpec.uniform(7, "1/7"), 5)


def test_dual_tile_square():
    s = MultigridSpec.uniform(4, "1/2")
    inter = Intersection(s, GridLine(0, 0), GridLine(2, 0), (0.5, 0.5))
    tile, corners = dual_tile(s, inter)
    assert tile.dirs == (0, 2) and tile.lines == (0, 0)
    # components 1 and 3 from ceilings at (1/2, 1/2): ceil(sqrt2/2 - 1/2) = 1, ceil(-1/2) = 0
    assert corners == [(0, 1, 0, 0), (1, 1, 0, 0), (1, 1, 1, 0), (0, 1, 1, 0)]
    pts = [embed(s, c).approx for c in corners]
    edges = [np.subtract(pts[(k + 1) % 4], pts[k]) for k in range(4)]
    assert np.allclose(edges, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-12)


def test_dual_tile_rejects_singular_point():
    s = MultigridSpec(5, (0,) * 5)
    inter = Intersection(s, GridLine(0, 0), GridLine(1, 0), (0.0, 0.0))
    with pytest.raises(SingularPointError) as err:
        dual_tile(s, inter)
    assert len(err.value.report.lines) == 3


def test_shape_class_examples():
    assert shape_class(MultigridSpec.uniform(4, "1/2"), (0, 2)) == A(1, 2)
    s5 = MultigridSpec.uniform(5, "1/5")
    assert shape_class(s5, (0, 1)) == A(2, 5)
    assert shape_class(s5, (0, 2)) == A(1, 5)
    with pytest.raises(ValueError):
        shape_class(s5, (2, 1))


def test_corner_angles_are_supplementary():
    for n in (5, 6, 7):
        s = MultigridSpec.uniform(n, Fraction(1, n))
        for i in range(n):
            for j in range(i + 1, n):
                a = corner_angle(s, (i, j))
                assert 0 < a.value < 1
                assert min(a.value, 1 - a.value) == shape_class(s, (i, j)).value


def test_tile_count_equals_intersection_count(p5, p7):
    for t in (p5, p7):
        assert len(t.tiles) == count_intersections(t.spec, t.radius)
        assert len(t.tiles) == len(enumerate_intersections(t.spec, t.radius))


def test_shape_census_classes():
    t = generate_tiling(MultigridSpec.uniform(5, "1/5"), 8)
    assert set(shape_census(t)) == {A(1, 5), A(2, 5)}
    t = generate_tiling(MultigridSpec.uniform(7, "1/7"), 8)
    assert len(shape_census(t)) == 3


def test_vertices_are_the_cells_around_each_point(p5):
    # recompute each corner by certified ceilings at the exact point, one tile at a time
    r = random.Random(3)
    s = p5.spec
    for tile in r.sample(p5.tiles, 40):
        a, b = (GridLine(d, k) for d, k in zip(tile.dirs, tile.lines))
        z = Intersection(s, a, b, (0.0, 0.0)).point
        for vid, (sa, sb) in zip(tile.vertex_ids, ((0, 0), (1, 0), (1, 1), (0, 1))):
            assert K(s, z, {a.direction: sa, b.direction: sb}) == p5.vertices[vid].index_vector


def test_positions_are_exact_embeddings(p7):
    s = p7.spec
    step = s.base_angle
    for v in p7.vertices[::7]:
        x = sum((cos_of(step * i) * k for i, k in enumerate(v.index_vector)), CyclotomicNumber.rational(0))
        y = sum((sin_of(step * i) * k for i, k in enumerate(v.index_vector)), CyclotomicNumber.rational(0))
        assert v.position.x == x and v.position.y == y
    assert np.allclose(p7.positions, [v.position.approx for v in p7.vertices], atol=1e-9)


def test_index_vectors_unique(p5):
    kv = [v.index_vector for v in p5.vertices]
    assert len(kv) == len(set(kv))
    assert [v.id for v in p5.vertices] == list(range(len(kv)))


def test_unit_edges_exact(p7):
    seen = 0
    for (u, w) in list(p7.edges)[::11]:
        pu, pw = p7.vertices[u].position, p7.vertices[w].position
        dx, dy = pw.x - pu.x, pw.y - pu.y
        assert dx * dx + dy * dy == 1
        seen += 1
    assert seen > 50


def test_ribbon_property(p5):
    s = p5.spec
    by_line = {}
    for k, t in enumerate(p5.tiles):
        for d, idx in zip(t.dirs, t.lines):
            by_line.setdefault((d, idx), []).append(k)
    checked = 0
    for (d, idx), members in by_line.items():
        if len(members) < 3:
            continue
        # order the tiles along the line by their intersection point
        theta = float(s.base_angle.value * d) * np.pi
        tangent = np.array([-np.sin(theta), np.cos(theta)])
        ints = {}
        for k in members:
            t = p5.tiles[k]
            a, b = (GridLine(dd, kk) for dd, kk in zip(t.dirs, t.lines))
            ints[k] = np.dot(Intersection(s, a, b, (0, 0)).point.approx, tangent)
        order = sorted(members, key=ints.get)
        for k1, k2 in zip(order, order[1:]):
            shared = set(p5.tiles[k1].vertex_ids) & set(p5.tiles[k2].vertex_ids)
            assert len(shared) == 2
            # the shared edge is parallel to zeta^d
            u, w = shared
            e = p5.positions[w] - p5.positions[u]
            assert abs(abs(np.dot(e, [np.cos(theta), np.sin(theta)])) - 1) < 1e-9
        checked += 1
    assert checked > 10


def _polygons(tiling):
    return [Polygon(tiling.positions[list(t.vertex_ids)]) for t in tiling.tiles]


@pytest.mark.parametrize("n,offset,radius", [(5, "1/5", 2), (4, "1/2", 2), (7, "1/7", 1)])
def test_non_overlap_area(n, offset, radius):
    t = generate_tiling(MultigridSpec.uniform(n, offset), radius)
    polys = _polygons(t)
    assert all(p.is_valid for p in polys)
    exact_sum = sum(float(sin_of(shape_class(t.spec, tile.dirs))) for tile in t.tiles)
    assert abs(sum(p.area for p in polys) - exact_sum) < 1e-9
    union = shapely.unary_union(polys)
    assert abs(union.area - exact_sum) < 1e-9


def test_non_overlap_raster():
    t = generate_tiling(MultigridSpec.uniform(5, "1/5"), 2)
    polys = _polygons(t)
    # 10^-3 sample grid over the unit square around the origin
    h = 1e-3
    xs = np.arange(-0.5 + h / 2, 0.5, h)
    gx, gy = np.meshgrid(xs, xs)
    cover = np.zeros(gx.shape, dtype=np.int32)
    for p in polys:
        cover += shapely.contains_xy(p, gx, gy)
    assert cover.max() == 1
    assert cover.min() == 1


def test_core_radius_formula():
    s = MultigridSpec.uniform(5, "1/5")
    assert core_radius(s, 10) == Fraction(5, 2) * 10 - 5 * Fraction(4, 5)
    assert core_radius(s, Fraction(1, 10)) == 0


def test_core_disc_is_covered(p5):
    polys = shapely.unary_union(_polygons(p5))
    core = shapely.Point(0, 0).buffer(float(p5.core_radius) - 1e-6, 256)
    assert polys.covers(core)


def test_generation_policy():
    uncovered = MultigridSpec(4, ("1/2", "1/3", "1/6", "1/2"))
    with pytest.raises(NotCoveredError):
        generate_tiling(uncovered, 3)
    t = generate_tiling(uncovered, 3, force=True)
    assert len(t.tiles) == count_intersections(uncovered, 3)
    with pytest.raises(SingularPointError):
        generate_tiling(MultigridSpec(5, (0,) * 5), 3, force=True)
