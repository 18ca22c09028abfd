"""Quadrature over simplices and a seeded Monte Carlo oracle.

``quad_triangle`` / ``quad_tetra`` are exact for polynomial integrands of
total degree <= 2, which covers every squared-distance integrand the
functionals need.  ``mc_integrate`` is the independent cross-check: an
unbiased estimator over boxes and simplices, deterministic for a fixed seed.

Integrands are vectorized callables mapping an (m, dim) array to (m,) values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidRegion
from .geom import Tetrahedron3, Triangle2, signed_area, signed_volume

# Fixed chunk size: sample stream i is seeded independently, so estimates do
# not depend on how chunks are scheduled.
_CHUNK = 1 << 17

# Degree-2 exact tetrahedron rule: four symmetric points, equal weights.
_TET_ALPHA = (5.0 + 3.0 * np.sqrt(5.0)) / 20.0
_TET_BETA = (5.0 - np.sqrt(5.0)) / 20.0


@dataclass(frozen=True)
class Box:
    """Axis-aligned box region for mc_integrate, any dimension >= 1."""

    lo: tuple
    hi: tuple

    def measure(self) -> float:
        lo = np.asarray(self.lo, float)
        hi = np.asarray(self.hi, float)
        return float(np.prod(hi - lo))


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo integral estimate; std_error is sample-stddev / sqrt(samples)."""

    value: float
    std_error: float
    samples: int
    seed: int


def quad_triangle(t: Triangle2, f) -> float:
    """Integral of f over t by the edge-midpoint rule (exact to degree 2).

    The result carries the sign of the triangle's orientation; a degenerate
    triangle integrates to 0.
    """
    v = t.vertices()
    area = signed_area(v[0], v[1], v[2])
    if area == 0.0:
        return 0.0
    mids = 0.5 * (v + np.roll(v, -1, axis=0))
    return float(area / 3.0 * np.sum(f(mids)))


def quad_tetra(t: Tetrahedron3, f) -> float:
    """Integral of f over t, signed by orientation, exact to degree 2."""
    v = t.vertices()
    vol = signed_volume(v[0], v[1], v[2], v[3])
    if vol == 0.0:
        return 0.0
    bary = np.full((4, 4), _TET_BETA)
    np.fill_diagonal(bary, _TET_ALPHA)
    nodes = bary @ v
    return float(vol / 4.0 * np.sum(f(nodes)))


def _sample_box(lo, hi, rng, m):
    u = rng.random((m, len(lo)))
    return lo + u * (hi - lo)


def _sample_simplex(verts, rng, m):
    # Sorted-uniform barycentric coordinates: differences of sorted uniforms
    # are exchangeable and uniform over the simplex.
    k = len(verts) - 1
    u = np.sort(rng.random((m, k)), axis=1)
    w = np.diff(np.concatenate([np.zeros((m, 1)), u, np.ones((m, 1))], axis=1), axis=1)
    return w @ verts


def _region_geometry(region):
    if isinstance(region, Box):
        lo = np.asarray(region.lo, float)
        hi = np.asarray(region.hi, float)
        if lo.shape != hi.shape or lo.ndim != 1 or len(lo) == 0:
            raise InvalidRegion(f"malformed box {region!r}")
        if np.any(hi <= lo):
            raise InvalidRegion(f"empty box {region!r}")
        return region.measure(), lambda rng, m: _sample_box(lo, hi, rng, m)
    if isinstance(region, Triangle2):
        v = region.vertices()
        area = abs(signed_area(v[0], v[1], v[2]))
        if area == 0.0:
            raise InvalidRegion("degenerate triangle region")
        return area, lambda rng, m: _sample_simplex(v, rng, m)
    if isinstance(region, Tetrahedron3):
        v = region.vertices()
        vol = abs(signed_volume(v[0], v[1], v[2], v[3]))
        if vol == 0.0:
            raise InvalidRegion("degenerate tetrahedron region")
        return vol, lambda rng, m: _sample_simplex(v, rng, m)
    raise InvalidRegion(f"unsupported region type {type(region).__name__}")


def mc_integrate(region, f, samples: int, seed: int) -> McEstimate:
    """Unbiased Monte Carlo estimate of the integral of f over a region.

    The sample budget is split into fixed-size streams; stream i is seeded by
    SeedSequence(seed, spawn_key=(i,)), so the estimate is bit-identical for
    identical (region, f, samples, seed) no matter how streams are evaluated.
    """
    if samples < 1000:
        raise ValueError("mc_integrate needs at least 1000 samples")
    measure, sampler = _region_geometry(region)
    total = 0.0
    total_sq = 0.0
    done = 0
    stream = 0
    while done < samples:
        m = min(_CHUNK, samples - done)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))
        vals = np.asarray(f(sampler(rng, m)), float)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += m
        stream += 1
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return McEstimate(
        value=measure * mean,
        std_error=measure * float(np.sqrt(var / samples)),
        samples=samples,
        seed=seed,
    )
