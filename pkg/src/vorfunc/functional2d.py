"""Planar triangulation functionals.

Per-triangle closed forms:

    vf_triangle     (area/12) * (a^2 + b^2 + c^2 - 4 R^2)
    rajan_triangle  (area/12) * (a^2 + b^2 + c^2)

with R the circumradius and a, b, c the edge lengths.  vf_triangle equals the
integral over the triangle of the squared distance to the nearest vertex when
all angles are acute, and is defined by the same closed form (possibly
negative) in the obtuse case.

The pointwise field g carries the same information locally:

    g(x) = d(x, nearest vertex)^2 - d(x, nearest visible vertex)^2

with the second term zero for x inside the triangle; vf_triangle is the
integral of g over the whole plane.  Triangulation-level values are the
orientation-signed sums over triangles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSimplex, NonConvexQuad
from .geom import (
    Triangle2,
    circumcircle2,
    in_circle,
    inside_triangle_mask,
    orient2,
    signed_area,
    visible_vertex_mask_robust,
)
from .integrate import Box, quad_triangle
from .tri2d import GEOMETRIC, Triangulation2, convex_hull


@dataclass(frozen=True)
class FunctionalReport:
    """Functional value with its per-simplex breakdown; total is their sum."""

    kind: str
    total: float
    per_simplex: tuple

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": 1,
                "kind": self.kind,
                "total": self.total,
                "per_simplex": [[int(i), float(v)] for i, v in self.per_simplex],
            }
        )


def _edge_data(t: Triangle2):
    v = t.vertices()
    area = abs(signed_area(v[0], v[1], v[2]))
    e2 = float(((v - np.roll(v, -1, axis=0)) ** 2).sum())
    return area, e2


def vf_triangle(t: Triangle2) -> float:
    """Closed-form Voronoi functional of one triangle; negative when obtuse enough."""
    cc = circumcircle2(t)  # raises DegenerateSimplex when collinear
    area, e2 = _edge_data(t)
    return area / 12.0 * (e2 - 4.0 * cc.radius**2)


def rajan_triangle(t: Triangle2) -> float:
    """(area/12) * (sum of squared edge lengths); always nonnegative."""
    if orient2(t.a, t.b, t.c) == 0:
        raise DegenerateSimplex("collinear triangle")
    area, e2 = _edge_data(t)
    return area / 12.0 * e2


def vf_triangulation(t: Triangulation2) -> FunctionalReport:
    """Orientation-signed sum of vf_triangle over all triangles."""
    per = []
    for idx, tri in enumerate(t.triangles):
        val = t.signs[idx] * vf_triangle(Triangle2(*t.points[list(tri)]))
        per.append((idx, val))
    return FunctionalReport("vf", float(sum(v for _, v in per)), tuple(per))


def radius_functional(t: Triangulation2, alpha: float) -> FunctionalReport:
    """Sum over triangles of circumradius**alpha times area (geometric only)."""
    if t.kind != GEOMETRIC:
        raise ValueError("radius functional is defined for geometric triangulations")
    per = []
    for idx, tri in enumerate(t.triangles):
        tt = Triangle2(*t.points[list(tri)])
        cc = circumcircle2(tt)
        area, _ = _edge_data(tt)
        per.append((idx, cc.radius**alpha * area))
    return FunctionalReport(f"rf{alpha:g}", float(sum(v for _, v in per)), tuple(per))


def mu_term(apex, mid, cc) -> float:
    """Integral of squared distance to ``apex`` over triangle (apex, mid, cc).

    Signed by the orientation of that triangle; degenerate input gives 0.
    """
    apex = np.asarray(apex, float)
    tri = Triangle2(apex, mid, cc)
    return quad_triangle(tri, lambda pts: ((pts - apex) ** 2).sum(axis=1))


def mu_terms(t: Triangle2) -> list:
    """The six signed corner terms whose sum is vf_triangle.

    Each term integrates squared distance to a vertex over the triangle made
    of that vertex, an adjacent edge midpoint, and the circumcenter.  For an
    acute triangle all six are positive; an obtuse angle makes the two terms
    at the opposite edge's midpoint negative.
    """
    v = t.vertices()
    if signed_area(v[0], v[1], v[2]) < 0.0:
        v = v[::-1]
    z = circumcircle2(Triangle2(*v)).center
    a, b, c = v
    m_bc = 0.5 * (b + c)
    m_ca = 0.5 * (c + a)
    m_ab = 0.5 * (a + b)
    return [
        mu_term(a, z, m_ca),
        mu_term(a, m_ab, z),
        mu_term(b, z, m_ab),
        mu_term(b, m_bc, z),
        mu_term(c, z, m_bc),
        mu_term(c, m_ca, z),
    ]


# ---------------------------------------------------------------------------
# Pointwise field
# ---------------------------------------------------------------------------


def g_triangle_points(t: Triangle2, pts: np.ndarray) -> np.ndarray:
    """Vectorized g over an (m, 2) array of sample points.

    Points on the triangle boundary count as inside (measure zero; keeps the
    inside/outside split total).
    """
    verts = t.vertices()
    if orient2(*verts) == 0:
        raise DegenerateSimplex("collinear triangle")
    pts = np.asarray(pts, float)
    d2 = ((pts[:, None, :] - verts[None, :, :]) ** 2).sum(axis=2)
    nearest = d2.min(axis=1)
    g = nearest.copy()
    outside = ~inside_triangle_mask(verts, pts)
    if outside.any():
        vis = visible_vertex_mask_robust(verts, pts[outside])
        d2_vis = np.where(vis, d2[outside], np.inf)
        g[outside] = nearest[outside] - d2_vis.min(axis=1)
    return g


def g_triangle(t: Triangle2, p) -> float:
    """g at a single point: nearest squared distance inside, difference outside."""
    return float(g_triangle_points(t, np.asarray(p, float)[None, :])[0])


def g_field(t: Triangulation2, x):
    """Orientation-signed sum of per-triangle g over a triangulation.

    Accepts a single point (2,) or an array (m, 2) and returns a float or an
    (m,) array accordingly.
    """
    pts = np.asarray(x, float)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    out = np.zeros(len(pts))
    for idx, tri in enumerate(t.triangles):
        out += t.signs[idx] * g_triangle_points(Triangle2(*t.points[list(tri)]), pts)
    return float(out[0]) if single else out


def support_box(t: Triangulation2, pad_factor: float = 1.0) -> Box:
    """Bounding box of the points inflated by the largest circumdiameter.

    Outside this box every triangle's g vanishes (nearest equals nearest
    visible), so it bounds the support of g_field.
    """
    pad = 0.0
    for tri in t.triangles:
        pad = max(pad, 2.0 * circumcircle2(Triangle2(*t.points[list(tri)])).radius)
    pad = pad * pad_factor + 1e-9
    lo = t.points.min(axis=0) - pad
    hi = t.points.max(axis=0) + pad
    return Box(tuple(lo), tuple(hi))


def assert_vanishes_on_boundary(t: Triangulation2, box: Box, n_samples: int = 256):
    """Spot-check that g_field is zero on the box boundary before trusting MC."""
    lo = np.asarray(box.lo)
    hi = np.asarray(box.hi)
    side = np.linspace(0.0, 1.0, n_samples // 4)
    edges = [
        np.stack([lo[0] + side * (hi[0] - lo[0]), np.full_like(side, lo[1])], axis=1),
        np.stack([lo[0] + side * (hi[0] - lo[0]), np.full_like(side, hi[1])], axis=1),
        np.stack([np.full_like(side, lo[0]), lo[1] + side * (hi[1] - lo[1])], axis=1),
        np.stack([np.full_like(side, hi[0]), lo[1] + side * (hi[1] - lo[1])], axis=1),
    ]
    vals = g_field(t, np.concatenate(edges))
    worst = float(np.abs(vals).max())
    if worst > 1e-12:
        raise AssertionError(f"g_field does not vanish on the MC box boundary ({worst:g})")


# ---------------------------------------------------------------------------
# Flip delta
# ---------------------------------------------------------------------------


def _quad_cycle(quad: np.ndarray) -> np.ndarray:
    hull = convex_hull(quad)
    if len(hull) != 4:
        raise NonConvexQuad("four points are not in strictly convex position")
    return np.asarray(hull, int)


def flip_delta(quad, p) -> float:
    """g(Delaunay diagonal) minus g(other diagonal) at p, for a convex quadrangle.

    Evaluates both two-triangle fields directly.  The value is either 0 or
    the difference of squared distances to the third- and second-nearest
    corner, the latter exactly when the two nearest corners span a diagonal.
    """
    quad = np.asarray(quad, float)
    p = np.asarray(p, float)
    cyc = _quad_cycle(quad)
    q = quad[cyc]
    first = [Triangle2(q[0], q[1], q[2]), Triangle2(q[0], q[2], q[3])]
    second = [Triangle2(q[0], q[1], q[3]), Triangle2(q[1], q[2], q[3])]
    # Diagonal (0, 2) is Delaunay unless corner 3 encroaches its circumcircle.
    if in_circle(first[0], q[3]) > 0:
        dtri, ktri = second, first
    else:
        dtri, ktri = first, second
    g_d = sum(g_triangle(tt, p) for tt in dtri)
    g_k = sum(g_triangle(tt, p) for tt in ktri)
    return float(g_d - g_k)


def flip_delta_law(quad, p) -> tuple[float, bool]:
    """Predicted flip delta: (value, nearest-two-span-a-diagonal flag).

    Sorting the corners by distance from p as a, b, c, d, the delta is
    d(p,c)^2 - d(p,b)^2 when {a, b} is a diagonal of the quadrangle and 0
    otherwise.
    """
    quad = np.asarray(quad, float)
    p = np.asarray(p, float)
    cyc = _quad_cycle(quad)
    q = quad[cyc]
    d2 = ((q - p) ** 2).sum(axis=1)
    order = np.argsort(d2, kind="stable")
    diagonal = {int(order[0]), int(order[1])} in ({0, 2}, {1, 3})
    if diagonal:
        return float(d2[order[2]] - d2[order[1]]), True
    return 0.0, False
