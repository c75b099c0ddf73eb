"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the package's own geometry: widths
come from a dense direction sweep refined by scalar minimization, hulls
from scipy's qhull wrapper.  Tests compare package outputs against
these slower routes so that a bug in one cannot hide in the other.
"""
from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar
from scipy.spatial import ConvexHull, QhullError


def oracle_width(pts: np.ndarray, coarse: int = 2048) -> float:
    """Width via direction sweep plus local refinement; package-free.

    The projection extent is evaluated on a dense half-circle grid and
    the best bracket is polished by bounded scalar minimization.  The
    result overestimates the true width by at most the refinement
    tolerance (~1e-10 in angle), far below the 1e-6 comparisons used in
    tests.
    """
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    if len(pts) < 3:
        return 0.0

    def extent(theta: float) -> float:
        u = np.array([math.cos(theta), math.sin(theta)])
        p = pts @ u
        return float(p.max() - p.min())

    grid = np.linspace(0.0, math.pi, coarse, endpoint=False)
    exts = np.array([extent(t) for t in grid])
    i = int(np.argmin(exts))
    lo = grid[i] - math.pi / coarse
    hi = grid[i] + math.pi / coarse
    res = minimize_scalar(extent, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    return min(float(exts[i]), float(res.fun))


def oracle_hull_vertices(pts: np.ndarray) -> np.ndarray:
    """Hull vertex set via qhull, sorted lexicographically; None if flat."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    try:
        h = ConvexHull(pts)
    except QhullError:
        return None
    v = pts[h.vertices]
    return v[np.lexsort((v[:, 1], v[:, 0]))]


def oracle_min_altitude(a, b, c) -> float:
    """Triangle width as the min over the three explicit altitudes."""
    a, b, c = (np.asarray(p, dtype=float) for p in (a, b, c))
    u, v = b - a, c - a
    area2 = abs(u[0] * v[1] - u[1] * v[0])
    sides = [np.linalg.norm(b - a), np.linalg.norm(c - a), np.linalg.norm(c - b)]
    smax = max(sides)
    return 0.0 if smax == 0.0 else float(area2 / smax)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260825)


@pytest.fixture
def random_point_sets(rng):
    """A batch of small random planar point sets of varied scale."""
    sets = []
    for m in (3, 4, 5, 7, 12, 40):
        for scale in (1.0, 17.0, 1e-3):
            sets.append(rng.normal(scale=scale, size=(m, 2)))
    return sets
