import numpy as np
import pytest

from vorfunc.errors import DegenerateSimplex
from vorfunc.geom import (
    Tetrahedron3,
    Triangle2,
    circumcircle2,
    circumcircle3,
    circumsphere3,
    in_circle,
    in_sphere,
    lift,
    nearest_vertex,
    nearest_visible_vertex,
    orient2,
    point_in_triangle,
    tangent_value,
)

from conftest import random_triangle

RIGHT = Triangle2((0, 0), (1, 0), (0, 1))
OBTUSE = Triangle2((0, 0), (2, 0.4), (4, 0))


def test_orient2_signs():
    assert orient2((0, 0), (1, 0), (0, 1)) == 1
    assert orient2((0, 0), (0, 1), (1, 0)) == -1
    assert orient2((0, 0), (1, 1), (2, 2)) == 0


def test_circumcircle_right_triangle():
    cd = circumcircle2(RIGHT)
    assert np.allclose(cd.center, [0.5, 0.5])
    assert cd.radius == pytest.approx(np.sqrt(2) / 2)


def test_circumcircle_equilateral():
    cd = circumcircle2(Triangle2((0, 0), (1, 0), (0.5, np.sqrt(3) / 2)))
    assert np.allclose(cd.center, [0.5, np.sqrt(3) / 6])
    assert cd.radius == pytest.approx(1 / np.sqrt(3))


def test_circumcircle_obtuse_radius():
    # R = abc / (4 area) = (sqrt(4.25) * sqrt(4.25) * 4) / (4 * 1) = 4.25
    cd = circumcircle2(Triangle2((0, 0), (4, 0), (2, 0.5)))
    assert cd.radius == pytest.approx(4.25)


def test_circumcircle_collinear_raises():
    with pytest.raises(DegenerateSimplex):
        circumcircle2(Triangle2((0, 0), (1, 1), (2, 2)))


def test_circumcircle_equidistance_random(rng):
    for _ in range(200):
        t = random_triangle(rng)
        cd = circumcircle2(t)
        d = np.linalg.norm(t.vertices() - cd.center, axis=1)
        assert np.all(np.abs(d - cd.radius) <= 1e-9 * max(cd.radius, 1.0))


def test_circumsphere_regular_tetrahedron():
    # Vertices of a regular tetrahedron centered at the origin.
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float)
    cd = circumsphere3(Tetrahedron3(*v))
    assert np.allclose(cd.center, [0, 0, 0], atol=1e-12)
    assert cd.radius == pytest.approx(np.sqrt(3))


def test_circumsphere_corner_tetrahedron():
    cd = circumsphere3(Tetrahedron3((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert np.allclose(cd.center, [0.5, 0.5, 0.5])


def test_circumcircle3_center_in_plane():
    a = np.array([9.86, 0.00, 1.65])
    b = np.array([7.99, 5.80, 1.65])
    c = np.array([7.80, -5.80, 1.65])
    cd = circumcircle3(a, b, c)
    n = np.cross(b - a, c - a)
    n /= np.linalg.norm(n)
    assert abs((cd.center - a) @ n) < 1e-9
    for v in (a, b, c):
        assert np.linalg.norm(cd.center - v) == pytest.approx(cd.radius)


def test_in_circle_examples():
    assert in_circle(RIGHT, (0.5, 0.5)) == 1  # center is strictly inside
    assert in_circle(RIGHT, (10, 10)) == -1
    assert in_circle(RIGHT, (1, 1)) == 0  # on the circle through the vertices


def test_in_circle_antisymmetric_under_orientation(rng):
    for _ in range(100):
        t = random_triangle(rng)
        p = rng.random(2) * 2 - 0.5
        s1 = in_circle(t, p)
        s2 = in_circle(Triangle2(t.a, t.c, t.b), p)
        assert s1 == -s2


def test_in_sphere_basic():
    t = Tetrahedron3((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert in_sphere(t, (0.5, 0.5, 0.5)) == 1
    assert in_sphere(t, (9, 9, 9)) == -1


def test_nearest_vertex_examples():
    i, d2 = nearest_vertex(RIGHT, (0.1, 0.1))
    assert i == 0 and d2 == pytest.approx(0.02)
    i, d2 = nearest_vertex(OBTUSE, (2, -0.1))
    assert i == 1 and d2 == pytest.approx(0.25)


def test_nearest_vertex_tie_breaks_low_index():
    t = Triangle2((0, 0), (2, 0), (1, 5))
    i, _ = nearest_vertex(t, (1, 0))  # equidistant from vertices 0 and 1
    assert i == 0


def test_nearest_visible_inside_is_none():
    assert nearest_visible_vertex(RIGHT, (0.2, 0.2)) is None


def test_nearest_visible_equals_nearest_for_acute_outside(rng):
    for _ in range(200):
        t = random_triangle(rng, kind="acute")
        p = rng.random(2) * 4 - 1.5
        if point_in_triangle(t, p):
            continue
        nv = nearest_visible_vertex(t, p)
        assert nv is not None
        assert nv[0] == nearest_vertex(t, p)[0]


def test_nearest_visible_obtuse_fold():
    nv = nearest_visible_vertex(OBTUSE, (2, -0.1))
    assert nv[0] == 0
    assert nv[1] == pytest.approx(4.01)


def test_nearest_visible_never_nearer_than_nearest(rng):
    for _ in range(300):
        t = random_triangle(rng)
        p = rng.random(2) * 6 - 2.5
        if point_in_triangle(t, p):
            continue
        nv = nearest_visible_vertex(t, p)
        assert nv[1] >= nearest_vertex(t, p)[1] - 1e-12


def test_lift_and_tangent_examples():
    assert np.allclose(lift((1, 2)), [1, 2, 5])
    a = np.array([3.0, -2.0])
    assert tangent_value(a, a) == pytest.approx(a @ a)


def test_lift_tangent_identity(rng):
    for _ in range(1000):
        a = rng.random(2) * 20 - 10
        x = rng.random(2) * 20 - 10
        gap = float(x @ x) - tangent_value(a, x)
        expect = float((x - a) @ (x - a))
        assert gap == pytest.approx(expect, rel=1e-12, abs=1e-12)
