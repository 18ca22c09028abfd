"""Planar triangulations: data model, Delaunay construction, flips, enumeration.

A Triangulation2 stores triangles as label triples over a labeled point set.
Geometric triangulations are normalized to counterclockwise triples with all
orientation signs +1; topological triangulations (label complexes mapped
through permuted positions) keep their combinatorics and carry the sign of
each mapped triangle.

Delaunay construction is a lexicographic sweep building an arbitrary
triangulation, followed by Lawson flips until every interior edge passes the
in-circle test; the same flip primitive drives flip() and the breadth-first
enumeration of the flip graph.  Degeneracies are rejected (NotGeneralPosition),
never perturbed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    CapExceeded,
    CollinearImage,
    NonConvexQuad,
    NotGeneralPosition,
    NotInteriorEdge,
)
from .geom import Triangle2, in_circle, orient2, signed_area

GEOMETRIC = "geometric"
TOPOLOGICAL = "topological"


@dataclass(frozen=True)
class PointSet2:
    """Ordered, labeled planar points; label i is row i of ``points``."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"expected an (n, 2) array, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("non-finite coordinates in point set")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def diameter(self) -> float:
        lo = self.points.min(axis=0)
        hi = self.points.max(axis=0)
        return float(np.linalg.norm(hi - lo))

    @classmethod
    def from_json(cls, text: str) -> "PointSet2":
        obj = json.loads(text)
        return cls(np.asarray(obj["points"], float))

    def to_json(self) -> str:
        return json.dumps({"points": self.points.tolist()})


@dataclass(frozen=True)
class FlipMove:
    """Interior edge (label pair) whose diagonal is to be replaced."""

    edge: tuple

    def __post_init__(self):
        i, j = self.edge
        object.__setattr__(self, "edge", (int(i), int(j)))


def convex_hull(points: np.ndarray) -> list:
    """Counterclockwise hull labels by monotone chain; strictly convex corners only."""
    pts = np.asarray(points, float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))

    def build(idx_iter):
        chain = []
        for i in idx_iter:
            while len(chain) >= 2 and orient2(pts[chain[-2]], pts[chain[-1]], pts[i]) <= 0:
                chain.pop()
            chain.append(int(i))
        return chain

    lower = build(order)
    upper = build(order[::-1])
    return lower[:-1] + upper[:-1]


class Triangulation2:
    """Indexed simplicial complex over a PointSet2 with per-triangle signs."""

    def __init__(self, points, triangles, kind=GEOMETRIC, _normalize=True):
        self.points = np.asarray(points, float)
        tris = [tuple(int(v) for v in t) for t in triangles]
        if kind == GEOMETRIC and _normalize:
            tris = [self._ccw(t) for t in tris]
        self.triangles = tuple(tris)
        self.kind = kind
        if kind == GEOMETRIC:
            self.signs = (1,) * len(tris)
        else:
            signs = []
            for t in tris:
                s = orient2(*self.points[list(t)])
                if s == 0:
                    raise CollinearImage(f"triangle {t} maps to a degenerate triangle")
                signs.append(s)
            self.signs = tuple(signs)

    def _ccw(self, t):
        s = orient2(*self.points[list(t)])
        if s == 0:
            raise NotGeneralPosition(f"degenerate triangle {t}", t)
        return t if s > 0 else (t[0], t[2], t[1])

    # -- combinatorics ------------------------------------------------------

    def edge_map(self) -> dict:
        """Undirected edge -> list of triangle indices."""
        edges = {}
        for idx, (i, j, k) in enumerate(self.triangles):
            for e in ((i, j), (j, k), (k, i)):
                edges.setdefault(tuple(sorted(e)), []).append(idx)
        return edges

    def interior_edges(self) -> list:
        return [e for e, ts in self.edge_map().items() if len(ts) == 2]

    def boundary_edges(self) -> list:
        return [e for e, ts in self.edge_map().items() if len(ts) == 1]

    def boundary_vertices(self) -> set:
        out = set()
        for e in self.boundary_edges():
            out.update(e)
        return out

    def canonical(self) -> tuple:
        return tuple(sorted(tuple(sorted(t)) for t in self.triangles))

    def __eq__(self, other):
        return (
            isinstance(other, Triangulation2)
            and self.canonical() == other.canonical()
            and self.points.shape == other.points.shape
            and np.array_equal(self.points, other.points)
        )

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"Triangulation2({len(self.points)} points, {len(self.triangles)} triangles, {self.kind})"

    # -- validation ---------------------------------------------------------

    def validate(self):
        """Check the manifold-disk invariants; geometric kind also checks coverage."""
        n = len(self.points)
        used = set()
        for t in self.triangles:
            used.update(t)
        if used != set(range(n)):
            raise ValueError("triangulation must use every point label exactly")
        edges = self.edge_map()
        for e, ts in edges.items():
            if len(ts) > 2:
                raise ValueError(f"edge {e} bounds {len(ts)} triangles")
        self._check_connected(edges)
        v, e, f = n, len(edges), len(self.triangles)
        if v - e + f != 1:
            raise ValueError(f"Euler characteristic {v - e + f} != 1")
        self._check_boundary_cycle()
        self._check_vertex_links()
        if self.kind == GEOMETRIC:
            self._check_coverage()

    def _check_connected(self, edges):
        if not self.triangles:
            raise ValueError("empty triangulation")
        adj = {i: set() for i in range(len(self.triangles))}
        for ts in edges.values():
            if len(ts) == 2:
                adj[ts[0]].add(ts[1])
                adj[ts[1]].add(ts[0])
        seen = {0}
        stack = [0]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(self.triangles):
            raise ValueError("triangle adjacency graph is disconnected")

    def _check_boundary_cycle(self):
        boundary = self.boundary_edges()
        deg = {}
        for i, j in boundary:
            deg[i] = deg.get(i, 0) + 1
            deg[j] = deg.get(j, 0) + 1
        if any(d != 2 for d in deg.values()):
            raise ValueError("boundary is not a single simple cycle")
        nbr = {}
        for i, j in boundary:
            nbr.setdefault(i, []).append(j)
            nbr.setdefault(j, []).append(i)
        start = boundary[0][0]
        prev, cur, count = None, start, 0
        while True:
            a, b = nbr[cur]
            nxt = b if a == prev else a
            prev, cur = cur, nxt
            count += 1
            if cur == start:
                break
        if count != len(boundary):
            raise ValueError("boundary splits into several cycles")

    def _check_vertex_links(self):
        incident = {}
        for idx, t in enumerate(self.triangles):
            for v in t:
                incident.setdefault(v, []).append(idx)
        boundary_vs = self.boundary_vertices()
        for v, tri_ids in incident.items():
            # Triangles around v must form a single fan glued along edges at v.
            adj = {t: set() for t in tri_ids}
            for a in tri_ids:
                for b in tri_ids:
                    if a < b and len(set(self.triangles[a]) & set(self.triangles[b])) == 2:
                        shared = set(self.triangles[a]) & set(self.triangles[b])
                        if v in shared:
                            adj[a].add(b)
                            adj[b].add(a)
            seen = {tri_ids[0]}
            stack = [tri_ids[0]]
            while stack:
                for nb in adj[stack.pop()]:
                    if nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            if len(seen) != len(tri_ids):
                raise ValueError(f"link of vertex {v} is pinched")
            degs = sorted(len(s) for s in adj.values())
            closed = v not in boundary_vs
            if closed and any(d != 2 for d in degs):
                raise ValueError(f"link of interior vertex {v} is not a cycle")

    def _check_coverage(self):
        total = sum(abs(signed_area(*self.points[list(t)])) for t in self.triangles)
        hull = convex_hull(self.points)
        hull_area = 0.0
        for i in range(1, len(hull) - 1):
            hull_area += signed_area(
                self.points[hull[0]], self.points[hull[i]], self.points[hull[i + 1]]
            )
        if abs(total - hull_area) > 1e-9 * max(hull_area, 1.0):
            raise ValueError("triangle areas do not tile the convex hull")
        if set(self.boundary_edges()) != {
            tuple(sorted((hull[i], hull[(i + 1) % len(hull)]))) for i in range(len(hull))
        }:
            raise ValueError("boundary edges are not the hull edges")

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({"triangles": [list(t) for t in self.triangles], "kind": self.kind})

    @classmethod
    def from_json(cls, text: str, points) -> "Triangulation2":
        obj = json.loads(text)
        t = cls(points, obj["triangles"], kind=obj.get("kind", GEOMETRIC))
        t.validate()
        return t


# ---------------------------------------------------------------------------
# Delaunay construction
# ---------------------------------------------------------------------------


def _oriented_edge_triple(tri, u, v):
    """Rotate a ccw triple so it starts with directed edge (u, v), or None."""
    for r in range(3):
        a, b, c = tri[r % 3], tri[(r + 1) % 3], tri[(r + 2) % 3]
        if (a, b) == (u, v):
            return a, b, c
    return None


def _scan_triangulation(pts):
    """Any valid triangulation by lexicographic sweep; raises on hull collinearity."""
    n = len(pts)
    order = [int(i) for i in np.lexsort((pts[:, 1], pts[:, 0]))]
    for a, b in zip(order, order[1:]):
        if np.all(pts[a] == pts[b]):
            raise NotGeneralPosition(f"duplicate points {a}, {b}", (a, b))
    i0, i1, i2 = order[0], order[1], order[2]
    s = orient2(pts[i0], pts[i1], pts[i2])
    if s == 0:
        raise NotGeneralPosition(f"collinear points {i0}, {i1}, {i2}", (i0, i1, i2))
    hull = [i0, i1, i2] if s > 0 else [i0, i2, i1]
    tris = [tuple(hull)]
    for p in order[3:]:
        m = len(hull)
        sgn = [orient2(pts[hull[k]], pts[hull[(k + 1) % m]], pts[p]) for k in range(m)]
        if any(s == 0 for s in sgn):
            k = sgn.index(0)
            raise NotGeneralPosition(
                f"point {p} collinear with hull edge ({hull[k]}, {hull[(k + 1) % m]})",
                (hull[k], hull[(k + 1) % m], p),
            )
        visible = [s < 0 for s in sgn]
        if all(visible) or not any(visible):
            raise NotGeneralPosition(f"point {p} has no consistent hull view", (p,))
        # Rotate so the visible run is contiguous from index 0.
        start = next(k for k in range(m) if visible[k] and not visible[(k - 1) % m])
        run = 0
        while visible[(start + run) % m]:
            run += 1
        chain = [hull[(start + k) % m] for k in range(run + 1)]
        for u, v in zip(chain, chain[1:]):
            tris.append((u, p, v))
        # Keep the invisible arc (chain end around to chain start), append p.
        keep = [hull[(start + run + k) % m] for k in range(m - run + 1)]
        hull = keep + [p]
    return tris


def _legalize(pts, tris):
    """Lawson flips until every interior edge passes the in-circle test."""
    triangles = {i: t for i, t in enumerate(tris)}
    edge2tris = {}

    def add_edges(tid):
        i, j, k = triangles[tid]
        for e in ((i, j), (j, k), (k, i)):
            edge2tris.setdefault(tuple(sorted(e)), set()).add(tid)

    def drop_edges(tid):
        i, j, k = triangles[tid]
        for e in ((i, j), (j, k), (k, i)):
            edge2tris[tuple(sorted(e))].discard(tid)

    for tid in triangles:
        add_edges(tid)
    work = list(edge2tris.keys())
    next_id = len(tris)
    flips = 0
    budget = 4 * len(pts) ** 2 + 256
    while work:
        edge = work.pop()
        tids = edge2tris.get(edge, set())
        if len(tids) != 2:
            continue
        t1_id, t2_id = sorted(tids)
        u, v = edge
        tri1 = _oriented_edge_triple(triangles[t1_id], u, v)
        if tri1 is None:
            u, v = v, u
            tri1 = _oriented_edge_triple(triangles[t1_id], u, v)
        tri2 = _oriented_edge_triple(triangles[t2_id], v, u)
        k, l = tri1[2], tri2[2]
        s = in_circle(Triangle2(pts[u], pts[v], pts[k]), pts[l])
        if s == 0:
            raise NotGeneralPosition(f"cocircular points {u}, {v}, {k}, {l}", (u, v, k, l))
        if s < 0:
            continue
        if orient2(pts[l], pts[v], pts[k]) <= 0 or orient2(pts[k], pts[u], pts[l]) <= 0:
            raise NotGeneralPosition(
                f"cannot restore edge ({u}, {v}): flip quad is degenerate", (u, v, k, l)
            )
        flips += 1
        if flips > budget:
            raise RuntimeError("Lawson flipping did not terminate; input too degenerate")
        drop_edges(t1_id)
        drop_edges(t2_id)
        del triangles[t1_id], triangles[t2_id]
        for new_tri in ((u, l, k), (v, k, l)):
            triangles[next_id] = new_tri
            add_edges(next_id)
            next_id += 1
        for e in ((u, l), (l, v), (v, k), (k, u)):
            work.append(tuple(sorted(e)))
    return list(triangles.values())


def delaunay(ps) -> Triangulation2:
    """Delaunay triangulation of a general-position point set.

    Raises NotGeneralPosition (with the offending labels) when a collinear
    triple on the hull or a cocircular quadruple is detected within tolerance.
    """
    if not isinstance(ps, PointSet2):
        ps = PointSet2(np.asarray(ps, float))
    if len(ps) < 3:
        raise ValueError("need at least 3 points")
    tris = _scan_triangulation(ps.points)
    tris = _legalize(ps.points, tris)
    return Triangulation2(ps.points, tris, kind=GEOMETRIC, _normalize=False)


def empty_circumcircle_violations(t: Triangulation2) -> list:
    """Brute-force Delaunay check: (triangle index, point label) pairs that violate it."""
    bad = []
    for idx, tri in enumerate(t.triangles):
        tt = Triangle2(*t.points[list(tri)])
        for p in range(len(t.points)):
            if p in tri:
                continue
            if in_circle(tt, t.points[p]) > 0:
                bad.append((idx, p))
    return bad


# ---------------------------------------------------------------------------
# Flips and flip-graph enumeration
# ---------------------------------------------------------------------------


def flip(t: Triangulation2, move: FlipMove) -> Triangulation2:
    """Replace the diagonal of the convex quadrangle across an interior edge."""
    edge = tuple(sorted(move.edge))
    tids = t.edge_map().get(edge, [])
    if len(tids) != 2:
        raise NotInteriorEdge(f"edge {edge} is not an interior edge")
    first, second = tids
    u, v = edge
    tri1 = _oriented_edge_triple(t.triangles[first], u, v)
    if tri1 is None:
        u, v = v, u
        tri1 = _oriented_edge_triple(t.triangles[first], u, v)
    tri2 = _oriented_edge_triple(t.triangles[second], v, u)
    k, l = tri1[2], tri2[2]
    pts = t.points
    if orient2(pts[l], pts[v], pts[k]) <= 0 or orient2(pts[k], pts[u], pts[l]) <= 0:
        raise NonConvexQuad(f"quad around edge {edge} is not strictly convex")
    new_tris = [tri for i, tri in enumerate(t.triangles) if i not in (first, second)]
    new_tris += [(u, l, k), (v, k, l)]
    return Triangulation2(pts, new_tris, kind=t.kind, _normalize=False)


def _legal_flips(t: Triangulation2):
    pts = t.points
    for edge, tids in t.edge_map().items():
        if len(tids) != 2:
            continue
        first, second = tids
        u, v = edge
        tri1 = _oriented_edge_triple(t.triangles[first], u, v)
        if tri1 is None:
            u, v = v, u
            tri1 = _oriented_edge_triple(t.triangles[first], u, v)
        tri2 = _oriented_edge_triple(t.triangles[second], v, u)
        k, l = tri1[2], tri2[2]
        if orient2(pts[l], pts[v], pts[k]) > 0 and orient2(pts[k], pts[u], pts[l]) > 0:
            yield FlipMove((u, v))


def enumerate_triangulations(ps, cap: int = 100000) -> list:
    """All geometric triangulations of a planar point set, by flip-graph BFS.

    The flip graph of a planar point set is connected, so breadth-first search
    from the Delaunay triangulation reaches every triangulation.  Raises
    CapExceeded when more than ``cap`` triangulations are found.
    """
    root = delaunay(ps)
    seen = {root.canonical(): root}
    queue = [root]
    while queue:
        cur = queue.pop()
        for move in _legal_flips(cur):
            nxt = flip(cur, move)
            key = nxt.canonical()
            if key not in seen:
                if len(seen) >= cap:
                    raise CapExceeded(f"more than {cap} triangulations")
                seen[key] = nxt
                queue.append(nxt)
    return list(seen.values())


def make_topological(t: Triangulation2, relabeling) -> Triangulation2:
    """Remap vertex positions through a permutation, keeping all incidences.

    Label i of the result sits at the position of label relabeling[i].  The
    result has kind "topological" with signs recomputed from the mapped
    triangles; CollinearImage is raised if any image triangle is degenerate.
    """
    perm = [int(i) for i in relabeling]
    if sorted(perm) != list(range(len(t.points))):
        raise ValueError("relabeling must be a permutation of the vertex labels")
    new_points = t.points[perm]
    return Triangulation2(new_points, t.triangles, kind=TOPOLOGICAL)
