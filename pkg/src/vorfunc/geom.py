"""Geometric primitives in 2D and 3D.

Orientation and in-circle/in-sphere predicates, circumcenters, nearest and
nearest-visible vertices, and the paraboloid lift.  Predicates use plain
float determinants with a relative tolerance ``TAU_GEOM``; all drivers feed
them generic (randomized or jittered) inputs, so adaptive precision is not
needed.  Everything here is a pure function on value types.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateSimplex

# Relative tolerance for all degeneracy decisions.
TAU_GEOM = 1e-9


def _as_point(p, dim):
    a = np.asarray(p, dtype=float)
    if a.shape != (dim,):
        raise ValueError(f"expected a point of dimension {dim}, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"non-finite coordinate in point {a!r}")
    return a


@dataclass
class Triangle2:
    """Three points in the plane, kept in the given order.

    Degeneracy (zero signed area) is detected by the predicates that care,
    not rejected at construction.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.a = _as_point(self.a, 2)
        self.b = _as_point(self.b, 2)
        self.c = _as_point(self.c, 2)

    def vertices(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c])


@dataclass
class Tetrahedron3:
    """Four points in space, kept in the given order; signed volume may have any sign."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        self.a = _as_point(self.a, 3)
        self.b = _as_point(self.b, 3)
        self.c = _as_point(self.c, 3)
        self.d = _as_point(self.d, 3)

    def vertices(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])


class CircumData(NamedTuple):
    center: np.ndarray
    radius: float


def signed_area(a, b, c) -> float:
    """Signed area of triangle (a, b, c); positive for counterclockwise order."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    c = np.asarray(c, float)
    return 0.5 * float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def signed_volume(a, b, c, d) -> float:
    """Signed volume of tetrahedron (a, b, c, d); positive for right-handed order."""
    a = np.asarray(a, float)
    m = np.array([np.asarray(b, float) - a, np.asarray(c, float) - a, np.asarray(d, float) - a])
    return float(np.linalg.det(m)) / 6.0


def orient2(a, b, c) -> int:
    """Sign of twice the signed area of (a, b, c): +1 ccw, -1 cw, 0 collinear.

    Zero is returned when the determinant is below TAU_GEOM relative to the
    magnitude of the edge vectors.
    """
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    c = np.asarray(c, float)
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    scale = (abs(b[0] - a[0]) + abs(b[1] - a[1])) * (abs(c[0] - a[0]) + abs(c[1] - a[1]))
    if abs(det) <= TAU_GEOM * scale:
        return 0
    return 1 if det > 0 else -1


def orient3(a, b, c, d) -> int:
    """Sign of the signed volume of (a, b, c, d), with relative tolerance."""
    a = np.asarray(a, float)
    rows = [np.asarray(v, float) - a for v in (b, c, d)]
    det = float(np.linalg.det(np.array(rows)))
    scale = 1.0
    for r in rows:
        scale *= np.abs(r).sum()
    if abs(det) <= TAU_GEOM * scale:
        return 0
    return 1 if det > 0 else -1


def circumcircle2(t: Triangle2) -> CircumData:
    """Center and radius of the circle through the three vertices of t.

    Raises DegenerateSimplex for collinear input.
    """
    a, b, c = t.a, t.b, t.c
    if orient2(a, b, c) == 0:
        raise DegenerateSimplex(f"collinear triangle {a}, {b}, {c}")
    # Solve 2 (v - a) . z = |v|^2 - |a|^2 for v in {b, c}.
    m = 2.0 * np.array([b - a, c - a])
    rhs = np.array([b @ b - a @ a, c @ c - a @ a])
    center = np.linalg.solve(m, rhs)
    radius = float(np.linalg.norm(center - a))
    return CircumData(center, radius)


def circumsphere3(t: Tetrahedron3) -> CircumData:
    """Center and radius of the sphere through the four vertices of t."""
    a, b, c, d = t.a, t.b, t.c, t.d
    if orient3(a, b, c, d) == 0:
        raise DegenerateSimplex(f"coplanar tetrahedron {a}, {b}, {c}, {d}")
    m = 2.0 * np.array([b - a, c - a, d - a])
    rhs = np.array([b @ b - a @ a, c @ c - a @ a, d @ d - a @ a])
    center = np.linalg.solve(m, rhs)
    radius = float(np.linalg.norm(center - a))
    return CircumData(center, radius)


def circumcircle3(a, b, c) -> CircumData:
    """Circumcircle of a triangle embedded in 3D; the center lies in its plane."""
    a = _as_point(a, 3)
    b = _as_point(b, 3)
    c = _as_point(c, 3)
    u = b - a
    v = c - a
    n = np.cross(u, v)
    n2 = float(n @ n)
    if n2 <= (TAU_GEOM * np.abs(u).sum() * np.abs(v).sum()) ** 2:
        raise DegenerateSimplex(f"collinear 3D triangle {a}, {b}, {c}")
    # Known closed form: offset from a within the plane spanned by u, v.
    uu, vv, uv = float(u @ u), float(v @ v), float(u @ v)
    denom = 2.0 * (uu * vv - uv * uv)
    s = vv * (uu - uv) / denom
    r = uu * (vv - uv) / denom
    center = a + s * u + r * v
    return CircumData(center, float(np.linalg.norm(center - a)))


def in_circle(t: Triangle2, p) -> int:
    """+1 if p lies strictly inside the circumcircle of t, -1 outside, 0 on it.

    Signs are stated for a positively oriented t; reversing the orientation of
    t flips the returned sign.
    """
    a, b, c = t.a, t.b, t.c
    if orient2(a, b, c) == 0:
        raise DegenerateSimplex(f"collinear triangle {a}, {b}, {c}")
    p = _as_point(p, 2)
    rows = []
    scale = 1.0
    for v in (a, b, c):
        d = v - p
        rows.append([d[0], d[1], d @ d])
        scale *= abs(d[0]) + abs(d[1])
    det = float(np.linalg.det(np.array(rows)))
    lift_scale = max(abs(r[2]) for r in rows)
    tol = TAU_GEOM * scale * max(lift_scale, 1e-300)
    # det > 0 for p inside when (a, b, c) is ccw.
    if abs(det) <= tol:
        return 0
    return 1 if det > 0 else -1


def in_sphere(t: Tetrahedron3, p) -> int:
    """+1 if p lies strictly inside the circumsphere of a positively oriented t."""
    a, b, c, d = t.a, t.b, t.c, t.d
    if orient3(a, b, c, d) == 0:
        raise DegenerateSimplex("coplanar tetrahedron")
    p = _as_point(p, 3)
    rows = []
    scale = 1.0
    for v in (a, b, c, d):
        e = v - p
        rows.append([e[0], e[1], e[2], e @ e])
        scale *= np.abs(e[:3]).sum()
    # Row order (a, b, c, d) flips the inside sign relative to the 2D case.
    det = -float(np.linalg.det(np.array(rows)))
    lift_scale = max(abs(r[3]) for r in rows)
    tol = TAU_GEOM * scale * max(lift_scale, 1e-300)
    if abs(det) <= tol:
        return 0
    return 1 if det > 0 else -1


def nearest_vertex(t: Triangle2, p) -> tuple[int, float]:
    """Index (0, 1, 2) and squared distance of the vertex of t nearest to p.

    Ties break toward the lowest index.
    """
    p = _as_point(p, 2)
    d2 = ((t.vertices() - p) ** 2).sum(axis=1)
    i = int(np.argmin(d2))
    return i, float(d2[i])


# ---------------------------------------------------------------------------
# Vectorized containment / visibility cores.  These take a (3, 2) vertex array
# and an (m, 2) sample array; the scalar API wraps them.
# ---------------------------------------------------------------------------


def _ccw_vertices(verts: np.ndarray) -> np.ndarray:
    if signed_area(verts[0], verts[1], verts[2]) < 0.0:
        return verts[::-1].copy()
    return verts


def inside_triangle_mask(verts: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Boolean mask of points in the closed triangle (boundary counts as inside)."""
    v = _ccw_vertices(np.asarray(verts, float))
    pts = np.asarray(pts, float)
    ok = np.ones(len(pts), dtype=bool)
    for i in range(3):
        q = v[i]
        e = v[(i + 1) % 3] - q
        cross = e[0] * (pts[:, 1] - q[1]) - e[1] * (pts[:, 0] - q[0])
        scale = (abs(e[0]) + abs(e[1])) * (np.abs(pts - q).sum(axis=1) + 1e-300)
        ok &= cross >= -TAU_GEOM * scale
    return ok


def _polygon_signed_area(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def visible_vertex_mask(verts: np.ndarray, pts: np.ndarray, eps: float = 1e-9) -> np.ndarray:
    """(m, k) mask: vertex j of a convex polygon is visible from pts[i].

    A vertex is visible when the segment from the sample point to the vertex
    meets the closed polygon only at that vertex.  Computed as the Cyrus-Beck
    entry parameter of the segment into the polygon: visible iff entry occurs
    at the vertex end (t >= 1 - eps).  Intended for points outside the
    polygon; accepts a triangle (k = 3) or any convex polygon in either
    orientation.
    """
    verts = np.asarray(verts, float)
    k = len(verts)
    reversed_order = _polygon_signed_area(verts) < 0.0
    v = verts[::-1].copy() if reversed_order else verts
    pts = np.asarray(pts, float)
    m = len(pts)
    # Inward edge normals and per-point signed offsets s_i = n_i . (p - q_i).
    normals = []
    offsets = []
    for i in range(k):
        q = v[i]
        e = v[(i + 1) % k] - q
        n = np.array([-e[1], e[0]])  # inward for ccw order
        normals.append(n)
        offsets.append(pts @ n - q @ n)
    visible = np.zeros((m, k), dtype=bool)
    for j in range(k):
        target = v[j]
        d = target - pts  # (m, 2)
        t_in = np.zeros(m)
        for i in range(k):
            den = d @ normals[i]
            s = offsets[i]
            entering = den > 1e-300
            t_edge = np.where(entering, -s / np.where(entering, den, 1.0), -np.inf)
            t_in = np.maximum(t_in, t_edge)
        col = (k - 1) - j if reversed_order else j
        visible[:, col] = t_in >= 1.0 - eps
    return visible


def visible_vertex_mask_robust(verts: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Visibility mask that never leaves a point with an empty visible set.

    Points sitting within a float-noise band of an edge line can fail the
    strict entry test for every vertex while the containment test still
    classifies them as outside.  A second pass with a looser threshold
    recovers the correct outside-limit set (the endpoints of the violated
    edge); as a last resort the nearest vertex is declared visible.
    """
    vis = visible_vertex_mask(verts, pts)
    bad = np.where(~vis.any(axis=1))[0]
    if len(bad):
        vis[bad] = visible_vertex_mask(verts, pts[bad], eps=1e-6)
        still = bad[~vis[bad].any(axis=1)]
        if len(still):
            d2 = ((pts[still][:, None, :] - np.asarray(verts, float)[None, :, :]) ** 2).sum(axis=2)
            vis[still, d2.argmin(axis=1)] = True
    return vis


def inside_convex_polygon_mask(verts: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Closed containment mask for a convex polygon (either orientation)."""
    verts = np.asarray(verts, float)
    if _polygon_signed_area(verts) < 0.0:
        verts = verts[::-1]
    pts = np.asarray(pts, float)
    k = len(verts)
    ok = np.ones(len(pts), dtype=bool)
    for i in range(k):
        q = verts[i]
        e = verts[(i + 1) % k] - q
        cross = e[0] * (pts[:, 1] - q[1]) - e[1] * (pts[:, 0] - q[0])
        scale = (abs(e[0]) + abs(e[1])) * (np.abs(pts - q).sum(axis=1) + 1e-300)
        ok &= cross >= -TAU_GEOM * scale
    return ok


def nearest_visible_vertex(t: Triangle2, p):
    """Nearest vertex of t visible from p, as (index, squared distance).

    Returns None when p lies strictly inside t (the caller's integrand treats
    that squared distance as 0).  Raises DegenerateSimplex for a collinear t.
    """
    if orient2(t.a, t.b, t.c) == 0:
        raise DegenerateSimplex("collinear triangle")
    p = _as_point(p, 2)
    verts = t.vertices()
    pts = p[None, :]
    if inside_triangle_mask(verts, pts)[0]:
        return None
    vis = visible_vertex_mask_robust(verts, pts)[0]
    d2 = ((verts - p) ** 2).sum(axis=1)
    d2 = np.where(vis, d2, np.inf)
    i = int(np.argmin(d2))
    return i, float(d2[i])


def point_in_triangle(t: Triangle2, p) -> bool:
    """Closed-triangle containment (boundary counts as inside)."""
    return bool(inside_triangle_mask(t.vertices(), _as_point(p, 2)[None, :])[0])


def lift(p) -> np.ndarray:
    """Lift a planar point onto the unit paraboloid: (x, y) -> (x, y, x^2 + y^2)."""
    p = _as_point(p, 2)
    return np.array([p[0], p[1], p @ p])


def tangent_value(a, x) -> float:
    """Height at x of the paraboloid's tangent plane at the lift of a: 2<x,a> - |a|^2.

    The vertical gap |x|^2 - tangent_value(a, x) equals |x - a|^2 identically.
    """
    a = _as_point(a, 2)
    x = _as_point(x, 2)
    return float(2.0 * (x @ a) - a @ a)
