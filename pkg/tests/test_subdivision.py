import json

import numpy as np
import pytest

from vorfunc.errors import NotInteriorVertex
from vorfunc.geom import Triangle2, signed_area, tangent_value
from vorfunc.functional2d import vf_triangle, vf_triangulation
from vorfunc.subdivision import (
    TetComplex,
    barycentric_subdivide,
    cell_decomposition_check,
    interior_cancellation_check,
    nearest_minus_visible_field,
    vf3,
    vf_sd_cell,
    vf_via_sd,
    voronoi_polygon,
)
from vorfunc.tri2d import Triangulation2, delaunay

from conftest import random_delaunay, random_triangle


def single(tri: Triangle2) -> Triangulation2:
    return Triangulation2(tri.vertices(), [(0, 1, 2)])


def test_counts_single_triangle():
    sd = barycentric_subdivide(single(Triangle2((0, 0), (1, 0), (0, 1))))
    assert len(sd.vertices) == 7
    assert len(sd.cells) == 6


def test_counts_single_tetrahedron():
    tc = TetComplex(np.eye(4, 3) * 1.0, [(0, 1, 2, 3)])
    sd = barycentric_subdivide(tc)
    assert len(sd.vertices) == 15
    assert len(sd.cells) == 24


def test_gamma_fixes_vertices_and_edge_midpoints(rng):
    d = random_delaunay(rng, 6)
    sd = barycentric_subdivide(d)
    for vid, source in enumerate(sd.source_simplices):
        if len(source) == 1:
            assert np.allclose(sd.gamma[vid], d.points[source[0]])
        elif len(source) == 2:
            assert np.allclose(sd.gamma[vid], d.points[list(source)].mean(axis=0))


def test_height_is_tangent_plane_value(rng):
    # For every cell corner v with source vertex A: H(v) = 2<Gamma(v), A> - |A|^2.
    d = random_delaunay(rng, 8)
    sd = barycentric_subdivide(d)
    for cell in sd.cells:
        a = sd.source_points[cell.source_vertex]
        for vid in cell.verts:
            expect = tangent_value(a, sd.gamma[vid])
            assert sd.height[vid] == pytest.approx(expect, rel=1e-10, abs=1e-10)


def test_gluing_heights_at_edge_barycenters(rng):
    # Edge barycenters lie on both endpoint tangent planes.
    d = random_delaunay(rng, 8)
    sd = barycentric_subdivide(d)
    for vid, source in enumerate(sd.source_simplices):
        if len(source) == 2:
            a, b = d.points[source[0]], d.points[source[1]]
            fa = tangent_value(a, sd.gamma[vid])
            fb = tangent_value(b, sd.gamma[vid])
            assert fa == pytest.approx(fb, rel=1e-10, abs=1e-10)


def test_right_triangle_cell_degenerates_to_zero():
    # Circumcenter on the hypotenuse midpoint squeezes two cells flat.
    tri = Triangle2((0, 0), (1, 0), (0, 1))
    sd = barycentric_subdivide(single(tri))
    vals = [vf_sd_cell(c, sd) for c in sd.cells]
    flat = [v for v in vals if v == 0.0]
    assert len(flat) == 2
    assert sum(vals) == pytest.approx(vf_triangle(tri), rel=1e-10)


def test_acute_cells_all_positive(rng):
    for _ in range(10):
        t = random_triangle(rng, kind="acute")
        sd = barycentric_subdivide(single(t))
        vals = [vf_sd_cell(c, sd) for c in sd.cells]
        assert all(v > 0 for v in vals)
        assert sum(vals) == pytest.approx(vf_triangle(t), rel=1e-10)


def test_obtuse_flips_cells_at_long_edge_midpoint(rng):
    for _ in range(10):
        t = random_triangle(rng, kind="obtuse")
        v = t.vertices()
        longest = max(
            range(3), key=lambda i: np.linalg.norm(v[(i + 1) % 3] - v[(i + 2) % 3])
        )
        long_edge_mid = 0.5 * (v[(longest + 1) % 3] + v[(longest + 2) % 3])
        sd = barycentric_subdivide(single(t))
        negative = [c for c in sd.cells if vf_sd_cell(c, sd) < 0]
        assert len(negative) == 2
        for c in negative:
            mids = [
                sd.vertices[vid]
                for vid in c.verts
                if len(sd.source_simplices[vid]) == 2
            ]
            assert np.allclose(mids[0], long_edge_mid)


def test_vf_via_sd_matches_triangulation(rng):
    for _ in range(20):
        d = random_delaunay(rng, 9)
        a = vf_triangulation(d).total
        b = vf_via_sd(d)
        assert b == pytest.approx(a, rel=1e-9, abs=1e-12)


def test_sd_euler_characteristic(rng):
    d = random_delaunay(rng, 8)
    sd = barycentric_subdivide(d)
    edges = set()
    for cell in sd.cells:
        vs = cell.verts
        for i in range(3):
            edges.add(tuple(sorted((vs[i], vs[(i + 1) % 3]))))
    assert len(sd.vertices) - len(edges) + len(sd.cells) == 1


# -- interior cancellation ---------------------------------------------------


def test_cancellation_square_plus_center(rng):
    pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5]], float)
    pts += rng.uniform(-1e-3, 1e-3, pts.shape)  # break the cocircular square
    d = delaunay(pts)
    lhs, rhs = interior_cancellation_check(d, 4)
    assert rhs == pytest.approx(lhs, rel=1e-9)


def test_cancellation_every_interior_vertex(rng):
    for _ in range(5):
        d = random_delaunay(rng, 12)
        interior = set(range(12)) - d.boundary_vertices()
        for v in interior:
            lhs, rhs = interior_cancellation_check(d, v)
            assert rhs == pytest.approx(lhs, rel=1e-9, abs=1e-12)


def test_cancellation_hull_vertex_rejected(rng):
    d = random_delaunay(rng, 8)
    hull_vertex = next(iter(d.boundary_vertices()))
    with pytest.raises(NotInteriorVertex):
        interior_cancellation_check(d, hull_vertex)


def test_cancellation_sign_census(rng):
    # Acute stars keep every cell positive; an obtuse opposite angle flips one
    # cell, and the identity still holds.
    saw_negative = False
    for _ in range(20):
        d = random_delaunay(rng, 10)
        sd = barycentric_subdivide(d)
        for v in set(range(10)) - d.boundary_vertices():
            star = [c for c in sd.cells if c.source_vertex == v]
            image_signs = [
                1 if signed_area(*sd.gamma[list(c.verts)]) > 0 else -1 for c in star
            ]
            lhs, rhs = interior_cancellation_check(d, v)
            assert rhs == pytest.approx(lhs, rel=1e-9, abs=1e-12)
            if any(s < 0 for s in image_signs):
                saw_negative = True
        if saw_negative:
            break
    assert saw_negative, "expected at least one folded star in random instances"


def test_voronoi_polygon_symmetric_center():
    pts = np.array([[0, 0], [2, 0], [2, 2], [0, 2], [1, 1]], float)
    poly = voronoi_polygon(pts, 4)
    # Center cell is the diamond spanned by the edge midpoint bisectors.
    assert sorted(np.round(p, 6).tolist() for p in poly) == [
        [0.0, 1.0],
        [1.0, 0.0],
        [1.0, 2.0],
        [2.0, 1.0],
    ]


# -- plane decomposition -----------------------------------------------------


def test_cell_decomposition_random_sets(rng):
    for seed in range(3):
        d = random_delaunay(rng, 9)
        closed, est = cell_decomposition_check(d, samples=200_000, seed=seed)
        assert abs(closed - est.value) <= 3 * est.std_error


def _hull_opposite_obtuse_edges(d):
    out = []
    emap = d.edge_map()
    for (u, v), tids in emap.items():
        if len(tids) != 1:
            continue
        tri = d.triangles[tids[0]]
        w = next(x for x in tri if x not in (u, v))
        a, b, c = d.points[u], d.points[v], d.points[w]
        if (a - c) @ (b - c) < 0:
            out.append(((u, v), w))
    return out


def test_decomposition_integrand_outside_behaviour(rng):
    # With every hull-opposite angle acute the integrand vanishes off the
    # hull; an obtuse hull-opposite angle leaves a strictly negative pocket.
    from vorfunc.experiments import FOLDED_POINTS

    d_acute = delaunay(FOLDED_POINTS)
    assert _hull_opposite_obtuse_edges(d_acute) == []
    field = nearest_minus_visible_field(d_acute.points)
    from vorfunc.geom import inside_convex_polygon_mask
    from vorfunc.tri2d import convex_hull

    hull_pts = d_acute.points[convex_hull(d_acute.points)]
    probe = rng.random((4000, 2)) * 10 - 5
    outside = ~inside_convex_polygon_mask(hull_pts, probe)
    assert np.all(np.abs(field(probe[outside])) < 1e-12)

    # Search for an instance with an obtuse hull-opposite angle.
    while True:
        d = random_delaunay(rng, 8)
        pockets = _hull_opposite_obtuse_edges(d)
        if pockets:
            break
    (u, v), w = pockets[0]
    field = nearest_minus_visible_field(d.points)
    mid = 0.5 * (d.points[u] + d.points[v])
    outward = mid - d.points[w]
    outward /= np.linalg.norm(outward)
    probes = mid[None, :] + np.linspace(1e-3, 0.05, 64)[:, None] * outward[None, :]
    assert field(probes).min() < 0


def test_sd_json_dump(rng):
    d = random_delaunay(rng, 5)
    sd = barycentric_subdivide(d)
    obj = json.loads(sd.to_json())
    assert obj["schema"] == 1
    assert len(obj["cells"]) == len(sd.cells)
    assert len(obj["vertices"]) == len(sd.vertices)


# -- 3D ----------------------------------------------------------------------


def test_vf3_regular_tetrahedron_matches_nearest_mc():
    # All-acute case: the functional equals the integral over the tetrahedron
    # of the squared distance to the nearest vertex.
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float)
    tc = TetComplex(v, [(0, 1, 2, 3)])
    from vorfunc.geom import Tetrahedron3
    from vorfunc.integrate import mc_integrate

    def nearest_sq(p):
        return ((p[:, None, :] - v[None, :, :]) ** 2).sum(axis=2).min(axis=1)

    est = mc_integrate(Tetrahedron3(*v), nearest_sq, 4 * 10**5, seed=5)
    assert abs(vf3(tc) - est.value) <= 3 * est.std_error
