"""Scripted, reproducible experiments.

Three headline results drive this module:

* exhaustive 2D scans confirming the Delaunay triangulation maximizes the
  triangulation functional (and minimizes the squared-radius variant),
* an 8-point configuration where swapping two interior vertex positions
  (keeping all incidences) produces a topological triangulation whose
  functional exceeds the Delaunay value,
* a 6-point octahedron in 3D whose non-Delaunay diagonal decomposition beats
  the Delaunay one, plus the fold-over probe explaining why.

Every experiment is deterministic for a fixed seed and serializes to a stable
JSON report.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstructionFailed, NotGeneralPosition
from .geom import Tetrahedron3, circumcircle3, in_sphere, signed_volume
from .integrate import mc_integrate
from .functional2d import (
    assert_vanishes_on_boundary,
    g_field,
    radius_functional,
    support_box,
    vf_triangulation,
)
from .subdivision import TetComplex, barycentric_subdivide, vf3
from .tri2d import (
    PointSet2,
    Triangulation2,
    delaunay,
    enumerate_triangulations,
    make_topological,
)

DEFAULT_SEED = 50331


@dataclass(frozen=True)
class ExperimentResult:
    """Recorded experiment outcome; the verdict derives only from the values."""

    name: str
    seed: int
    inputs: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    sigma: dict = field(default_factory=dict)
    verdict: str = "fail"
    margin: float = 0.0

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": 1,
                "name": self.name,
                "seed": self.seed,
                "inputs": self.inputs,
                "values": self.values,
                "sigma": self.sigma,
                "verdict": self.verdict,
                "margin": self.margin,
            },
            sort_keys=True,
        )


def random_point_set(n: int, rng) -> PointSet2:
    """Uniform points in the unit square, jittered and redrawn until generic."""
    pts = rng.random((n, 2))
    for _ in range(50):
        try:
            delaunay(pts)
            return PointSet2(pts)
        except NotGeneralPosition:
            diam = float(np.linalg.norm(pts.max(0) - pts.min(0)))
            pts = pts + rng.uniform(-1e-6, 1e-6, pts.shape) * diam
    raise ConstructionFailed(f"could not draw a generic {n}-point set")


# ---------------------------------------------------------------------------
# 2D optimality scan
# ---------------------------------------------------------------------------


def optimality_scan(
    n: int,
    trials: int,
    seed: int = DEFAULT_SEED,
    functional: str = "vf",
    pointwise_samples: int = 0,
    cap: int = 5000,
):
    """Enumerate all triangulations of random point sets and rank the Delaunay one.

    For functional="vf" the verdict passes when the Delaunay triangulation
    attains the maximum in every trial (ties within 1e-9); for "rf2" it must
    attain the minimum of the squared-radius functional.  With
    pointwise_samples > 0 the pointwise field dominance g_K <= g_D is also
    checked at that many sampled points per trial.

    Returns (ExperimentResult, rows) where rows are per-triangulation tuples
    (trial, index, value, is_delaunay, is_max) for CSV reporting.
    """
    if not 4 <= n <= 12:
        raise ValueError("scan expects 4 <= n <= 12")
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(17,)))
    rows = []
    worst_gap = np.inf  # signed distance of Delaunay value from the required extreme
    pointwise_worst = np.inf
    tol = 1e-9
    for trial in range(trials):
        ps = random_point_set(n, rng)
        dtri = delaunay(ps)
        tris = enumerate_triangulations(ps, cap=cap)
        if functional == "vf":
            vals = [vf_triangulation(t).total for t in tris]
        elif functional == "rf2":
            vals = [radius_functional(t, 2.0).total for t in tris]
        else:
            raise ValueError(f"unknown functional {functional!r}")
        d_key = dtri.canonical()
        d_val = next(v for t, v in zip(tris, vals) if t.canonical() == d_key)
        best = max(vals) if functional == "vf" else min(vals)
        gap = d_val - best if functional == "vf" else best - d_val
        worst_gap = min(worst_gap, gap)
        for idx, (t, v) in enumerate(zip(tris, vals)):
            is_d = t.canonical() == d_key
            is_best = abs(v - best) <= tol
            rows.append((trial, idx, v, is_d, is_best))
        if pointwise_samples > 0:
            box = support_box(dtri)
            lo = np.asarray(box.lo)
            hi = np.asarray(box.hi)
            pts = lo + rng.random((pointwise_samples, 2)) * (hi - lo)
            g_d = g_field(dtri, pts)
            for t in tris:
                gap_pw = float((g_d - g_field(t, pts)).min())
                pointwise_worst = min(pointwise_worst, gap_pw)
    ok = worst_gap >= -tol and (pointwise_samples == 0 or pointwise_worst >= -tol)
    values = {"n": n, "trials": trials, "worst_gap": float(worst_gap)}
    if pointwise_samples > 0:
        values["pointwise_worst_gap"] = float(pointwise_worst)
    result = ExperimentResult(
        name=f"optimality_scan_{functional}",
        seed=seed,
        inputs={"n": n, "trials": trials, "functional": functional},
        values=values,
        sigma={},
        verdict="pass" if ok else "fail",
        margin=float(worst_gap),
    )
    return result, rows


# ---------------------------------------------------------------------------
# Topological counterexample (8 points, swapped interior pair)
# ---------------------------------------------------------------------------

# Labels: 0..7 = A, B, C, D, E, F, G, H.  A/D sit on a near-vertical axis,
# B/C inside, E/F and G/H outside; the Delaunay triangulation is all-acute
# with B and C joined by an interior edge.
FOLDED_TRIANGLES = (
    (0, 1, 2),
    (1, 2, 3),
    (0, 1, 4),
    (1, 4, 5),
    (1, 3, 5),
    (0, 2, 6),
    (2, 6, 7),
    (2, 3, 7),
)

# Frozen golden coordinates: first jitter of the symmetric template (under
# build_folded_configuration's default seed) satisfying every constraint.
FOLDED_POINTS = np.array(
    [
        [-0.047339377951503496, 1.9778689761007031],
        [-0.7564027408746057, 0.0031340654785167663],
        [0.7861744060744625, -0.03631694053190851],
        [-0.01831096251413368, -1.9716634367476704],
        [-2.1553338921127216, 1.053821915563175],
        [-2.18102781274927, -1.0877659719735426],
        [2.212400697785682, 1.1068673852633177],
        [2.2323449965939095, -1.078706012684506],
    ]
)

# Swap the two interior vertices (labels 1 and 2), keeping all incidences.
FOLDED_SWAP = (0, 2, 1, 3, 4, 5, 6, 7)

_FOLDED_CANON = tuple(sorted(tuple(sorted(t)) for t in FOLDED_TRIANGLES))


def _all_acute(t: Triangulation2, margin: float = 1e-3) -> bool:
    for tri in t.triangles:
        v = t.points[list(tri)]
        for i in range(3):
            u1 = v[(i + 1) % 3] - v[i]
            u2 = v[(i + 2) % 3] - v[i]
            if (u1 @ u2) / (np.linalg.norm(u1) * np.linalg.norm(u2)) < margin:
                return False
    return True


def build_folded_configuration(seed: int = DEFAULT_SEED, attempts: int = 500) -> Triangulation2:
    """Search jittered template parameters for a valid folded configuration.

    The accepted configuration must be in general position, have the expected
    all-acute Delaunay combinatorics, and flip exactly the two central
    triangles negative under the interior swap.  The first hit under the
    default seed is frozen as FOLDED_POINTS.
    """
    h, w, ox, oy = 2.0, 0.8, 2.2, 1.1
    base = np.array(
        [[0, h], [-w, 0], [w, 0], [0, -h], [-ox, oy], [-ox, -oy], [ox, oy], [ox, -oy]],
        float,
    )
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(41,)))
    for _ in range(attempts):
        pts = base + rng.uniform(-0.05, 0.05, size=(8, 2))
        cfg = _check_folded(pts)
        if cfg is not None:
            return cfg
    raise ConstructionFailed("no jitter of the folded template satisfied the constraints")


def _check_folded(pts) -> Triangulation2 | None:
    try:
        d = delaunay(np.asarray(pts, float))
    except NotGeneralPosition:
        return None
    if d.canonical() != _FOLDED_CANON or not _all_acute(d):
        return None
    k = make_topological(d, FOLDED_SWAP)
    negative = {tuple(sorted(d.triangles[i])) for i in range(len(k.signs)) if k.signs[i] < 0}
    if negative != {(0, 1, 2), (1, 2, 3)}:
        return None
    return d


def topological_counterexample(
    samples: int = 10**7, seed: int = DEFAULT_SEED, pointwise_samples: int = 10**4
) -> ExperimentResult:
    """Compare the folded topological triangulation against its Delaunay source.

    The Delaunay value is exact (closed form); the folded value is a Monte
    Carlo integral of the signed pointwise field.  The verdict requires the
    gap to exceed 10 combined standard errors and the pointwise field of the
    folded triangulation to dominate everywhere sampled.
    """
    d = _check_folded(FOLDED_POINTS)
    if d is None:
        raise ConstructionFailed("frozen folded configuration no longer validates")
    k = make_topological(d, FOLDED_SWAP)
    vf_d = vf_triangulation(d).total
    vf_k_closed = vf_triangulation(k).total
    box = support_box(k)
    assert_vanishes_on_boundary(k, box)
    est = mc_integrate(box, lambda pts: g_field(k, pts), samples, seed)

    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(7,)))
    lo = np.asarray(box.lo)
    hi = np.asarray(box.hi)
    pts = lo + rng.random((pointwise_samples, 2)) * (hi - lo)
    pointwise_min = float((g_field(k, pts) - g_field(d, pts)).min())

    gap = est.value - vf_d
    ok = gap > 10.0 * est.std_error and pointwise_min >= -1e-9
    return ExperimentResult(
        name="topological_counterexample",
        seed=seed,
        inputs={"points": 8, "samples": samples, "pointwise_samples": pointwise_samples},
        values={
            "vf_delaunay": vf_d,
            "vf_topological_mc": est.value,
            "vf_topological_closed": vf_k_closed,
            "gap": gap,
            "pointwise_min_gap": pointwise_min,
        },
        sigma={"vf_topological_mc": est.std_error},
        verdict="pass" if ok else "fail",
        margin=float(gap / est.std_error) if est.std_error > 0 else float("inf"),
    )


# ---------------------------------------------------------------------------
# Octahedron counterexample (3D)
# ---------------------------------------------------------------------------

# Labels: 0..5 = A, B, C, D, E, X.  Convex hull is an octahedron with
# diagonals BE, AC, DX; reference values for the two diagonal decompositions
# were reported as 3413.75 and 3432.96 (+/- 0.01) by an independent run.
OCTA_POINTS = np.array(
    [
        [7.99, 5.80, 1.65],
        [9.86, 0.00, 1.65],
        [7.80, -5.80, 1.65],
        [7.89, 0.00, 6.14],
        [-2.00, -0.01, 4.02],
        [6.89, 0.00, -4.14],
    ]
)
OCTA_LABELS = "ABCDEX"
OCTA_EXPECTED = {"BE": 3413.75, "AC": 3432.96}
OCTA_TOL = 0.05


def octahedron_ring(points, diagonal) -> list:
    """Cyclic order of the four equatorial vertices around a diagonal axis."""
    pts = np.asarray(points, float)
    i, j = diagonal
    others = [k for k in range(len(pts)) if k not in (i, j)]
    axis = pts[j] - pts[i]
    axis = axis / np.linalg.norm(axis)
    mid = 0.5 * (pts[i] + pts[j])
    u = np.cross(axis, [1.0, 0.0, 0.0])
    if np.linalg.norm(u) < 1e-9:
        u = np.cross(axis, [0.0, 1.0, 0.0])
    u = u / np.linalg.norm(u)
    v = np.cross(axis, u)
    ang = [np.arctan2((pts[k] - mid) @ v, (pts[k] - mid) @ u) for k in others]
    return [others[t] for t in np.argsort(ang)]


def octahedron_decomposition(points, diagonal) -> TetComplex:
    """Four tetrahedra sharing the given diagonal of a 6-point octahedron."""
    ring = octahedron_ring(points, diagonal)
    i, j = diagonal
    tets = [(i, j, ring[k], ring[(k + 1) % 4]) for k in range(4)]
    return TetComplex(points, tets)


def octahedron_counterexample() -> ExperimentResult:
    """Both diagonal decompositions of the bundled octahedron, exactly integrated.

    Verifies via in-sphere tests that the BE decomposition is the Delaunay
    one, then requires both functional values to match the reference values
    within OCTA_TOL with the non-Delaunay value on top.
    """
    tc_be = octahedron_decomposition(OCTA_POINTS, (1, 4))
    tc_ac = octahedron_decomposition(OCTA_POINTS, (0, 2))
    vf_be = vf3(tc_be)
    vf_ac = vf3(tc_ac)
    worst_insphere = max(
        in_sphere(Tetrahedron3(*OCTA_POINTS[list(t)]), OCTA_POINTS[p])
        for t in tc_be.tets
        for p in range(len(OCTA_POINTS))
        if p not in t
    )
    err_be = abs(vf_be - OCTA_EXPECTED["BE"])
    err_ac = abs(vf_ac - OCTA_EXPECTED["AC"])
    ok = err_be <= OCTA_TOL and err_ac <= OCTA_TOL and vf_ac > vf_be and worst_insphere <= 0
    return ExperimentResult(
        name="octahedron_counterexample",
        seed=0,
        inputs={"points": 6},
        values={
            "vf_delaunay_BE": vf_be,
            "vf_alternative_AC": vf_ac,
            "gap": vf_ac - vf_be,
            "max_reference_error": max(err_be, err_ac),
            "worst_insphere_sign": worst_insphere,
        },
        sigma={"reference_tolerance": OCTA_TOL},
        verdict="pass" if ok else "fail",
        margin=float(OCTA_TOL - max(err_be, err_ac)),
    )


# ---------------------------------------------------------------------------
# Fold-region probe (single tetrahedron, double fold-over)
# ---------------------------------------------------------------------------

# Faces ABD and CBD are acute isosceles; BAC and DAC are isosceles with
# obtuse angles at B and at D.  The circumcenter map then reverses 8 of the
# 24 subdivision tetrahedra.
FOLD_TET_POINTS = np.array(
    [
        [-2.0, 0.0, 0.0],  # A
        [0.0, 1.2, 1.0],  # B
        [2.0, 0.0, 0.0],  # C
        [0.0, -1.2, 1.0],  # D
    ]
)


def _point_in_tet(tet_pts, x) -> bool:
    a, b, c, d = tet_pts
    s0 = signed_volume(a, b, c, d)
    for rep in range(4):
        q = [a, b, c, d]
        q[rep] = x
        if signed_volume(*q) * s0 < -1e-15:
            return False
    return True


def sd_local_density(sd, x) -> float:
    """Signed pointwise density of the subdivision functional at x.

    Sums, over the cells whose circumcenter-map image contains x, the signed
    squared distance to the cell's source vertex.
    """
    x = np.asarray(x, float)
    total = 0.0
    for c in sd.cells:
        img = sd.gamma[list(c.verts)]
        vol = signed_volume(*img)
        if abs(vol) < 1e-14:
            continue
        if _point_in_tet(img, x):
            a = sd.source_points[c.source_vertex]
            total += c.source_sign * (1 if vol > 0 else -1) * float(((x - a) ** 2).sum())
    return total


def fold_region_probe(seed: int = DEFAULT_SEED) -> ExperimentResult:
    """Orientation census of the fold tetrahedron and an exterior positive point.

    Counts how many subdivision cells the circumcenter map preserves/reverses
    (expected 16/8), checks that exactly the four boundary flags at the
    midpoint of the long edge AC flip within their faces, and exhibits a point
    outside the tetrahedron whose local density d(x,C)^2 - d(x,B)^2 is
    positive with d(x,B) < d(x,C) < d(x,A).
    """
    pts = FOLD_TET_POINTS
    tc = TetComplex(pts, [(0, 1, 2, 3)])
    sd = barycentric_subdivide(tc)
    preserved = reversed_ = 0
    for c in sd.cells:
        vol = signed_volume(*sd.gamma[list(c.verts)])
        sgn = 0 if vol == 0 else (1 if vol > 0 else -1)
        if sgn == c.source_sign:
            preserved += 1
        elif sgn == -c.source_sign:
            reversed_ += 1
    flipped_flags = _flipped_boundary_flags(pts)
    flips_at_ac = all(e == (0, 2) for _, e, _ in flipped_flags)

    e_center = circumcircle3(pts[1], pts[0], pts[2]).center
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(3,)))
    found = None
    for _ in range(20000):
        x = e_center + rng.uniform(-0.4, 0.4, 3)
        d_a = np.linalg.norm(x - pts[0])
        d_b = np.linalg.norm(x - pts[1])
        d_c = np.linalg.norm(x - pts[2])
        if not d_b < d_c < d_a or _point_in_tet(pts, x):
            continue
        density = sd_local_density(sd, x)
        expected = d_c**2 - d_b**2
        if density > 0 and abs(density - expected) <= 1e-9:
            found = (x, density)
            break
    ok = (
        (preserved, reversed_) == (16, 8)
        and len(flipped_flags) == 4
        and flips_at_ac
        and found is not None
    )
    if not ok:
        raise ConstructionFailed(
            f"fold probe failed: census {(preserved, reversed_)}, "
            f"flipped {len(flipped_flags)}, point {found is not None}"
        )
    x, density = found
    return ExperimentResult(
        name="fold_region_probe",
        seed=seed,
        inputs={"tetrahedron": "isosceles, obtuse at B and D"},
        values={
            "preserved": preserved,
            "reversed": reversed_,
            "flipped_boundary_flags": len(flipped_flags),
            "witness_point": [float(v) for v in x],
            "witness_density": density,
        },
        sigma={},
        verdict="pass",
        margin=float(density),
    )


def _flipped_boundary_flags(pts) -> list:
    """Boundary-face subdivision flags whose in-plane orientation reverses."""
    out = []
    for face in [(0, 1, 3), (2, 1, 3), (1, 0, 2), (3, 0, 2)]:
        fp = pts[list(face)]
        n = np.cross(fp[1] - fp[0], fp[2] - fp[0])
        seen = set()
        for perm in itertools.permutations(face):
            v = (perm[0],)
            e = tuple(sorted(perm[:2]))
            f = tuple(sorted(perm))
            if (v, e, f) in seen:
                continue
            seen.add((v, e, f))

            def barycenter(s):
                return pts[list(s)].mean(axis=0)

            def image(s):
                if len(s) == 1:
                    return pts[s[0]]
                if len(s) == 2:
                    return pts[list(s)].mean(axis=0)
                return circumcircle3(*pts[list(s)]).center

            src = np.cross(barycenter(e) - barycenter(v), barycenter(f) - barycenter(v)) @ n
            img = np.cross(image(e) - image(v), image(f) - image(v)) @ n
            if src * img < 0:
                out.append((v, e, f))
    return out
