"""Planar primitives: hulls, widths, transversal predicates, enclosing ellipses.

Conventions used throughout the package:

* point sets are (n, 2) float arrays (row per point); the small wrapper
  types ``Point2`` / ``PointSet`` exist for the scalar API and tests,
  and every operation also accepts plain array-likes;
* the width of a set is the minimum over directions of its projection
  extent; for a triangle it equals the smallest altitude;
* a set X "satisfies T(rB)" iff width(X) <= 2 r, and "satisfies
  T(rB, 3)" iff every 3-subset does;
* every certified comparison carries the global slack ``DELTA_FP`` so
  that double rounding can never flip a claimed strict inequality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

# Conservative slack added to (or subtracted from) every certified
# floating-point comparison.  Overridable per-campaign via config.
DELTA_FP = 1e-9

# Golden ratio; the target blow-up factor for the region checks.
GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


class DegenerateInput(ValueError):
    """Raised when an operation needs a full-dimensional input and got less."""


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


@dataclass(frozen=True)
class PointSet:
    """An ordered finite set of points (duplicates permitted)."""

    points: tuple[Point2, ...]

    @classmethod
    def from_array(cls, arr) -> "PointSet":
        a = np.asarray(arr, dtype=float).reshape(-1, 2)
        return cls(tuple(Point2(float(x), float(y)) for x, y in a))

    def to_array(self) -> np.ndarray:
        return np.array([[p.x, p.y] for p in self.points], dtype=float).reshape(-1, 2)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def as_point_array(ps) -> np.ndarray:
    """Coerce ``PointSet`` / ``Point2`` / array-like to an (n, 2) float array."""
    if isinstance(ps, PointSet):
        arr = ps.to_array()
    elif isinstance(ps, Point2):
        arr = ps.as_array().reshape(1, 2)
    else:
        arr = np.asarray(ps, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) point array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_array(pts: np.ndarray) -> np.ndarray:
    """Convex hull vertices, CCW, collinear vertices dropped.

    Degenerate inputs yield the degenerate hull: a single point or the
    two endpoints of a segment.  Deterministic: starts at the
    lexicographically smallest vertex.
    """
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    uniq = np.unique(pts, axis=0)  # lexicographic sort as a side effect
    n = len(uniq)
    if n == 1:
        return uniq
    if n == 2:
        return uniq
    lower: list[np.ndarray] = []
    for p in uniq:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in uniq[::-1]:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        # all points collinear: keep the two extremes
        return np.array([lower[0], lower[-1]])
    return np.array(hull)


def convex_hull(ps) -> PointSet:
    """Convex hull as a CCW ``PointSet`` (degenerate hulls have 1-2 points)."""
    return PointSet.from_array(hull_array(as_point_array(ps)))


def width(ps) -> float:
    """Width of a point set: rotating calipers on the convex hull.

    Returns 0 for fewer than 3 points or collinear input.  Antipodal
    advance breaks ties toward the smaller index, so the scan order is
    deterministic.
    """
    hull = hull_array(as_point_array(ps))
    m = len(hull)
    if m <= 2:
        return 0.0
    best = math.inf
    j = 1
    for i in range(m):
        a = hull[i]
        e = hull[(i + 1) % m] - a
        elen = math.hypot(e[0], e[1])

        def dist(idx: int) -> float:
            v = hull[idx] - a
            return e[0] * v[1] - e[1] * v[0]

        # farthest vertex from the supporting line of edge i; strict
        # inequality keeps the smaller index on ties
        while dist((j + 1) % m) > dist(j):
            j = (j + 1) % m
        best = min(best, dist(j) / elen)
    return best


def min_altitude(a, b, c) -> float:
    """Smallest altitude of triangle abc (equals its width); 0 if collinear."""
    pa = as_point_array(a)[0]
    pb = as_point_array(b)[0]
    pc = as_point_array(c)[0]
    area2 = abs(_cross(pa, pb, pc))
    smax = max(
        float(np.hypot(*(pb - pa))),
        float(np.hypot(*(pc - pa))),
        float(np.hypot(*(pc - pb))),
    )
    if smax == 0.0:
        return 0.0
    return area2 / smax


def min_altitude_batch(tri: np.ndarray) -> np.ndarray:
    """Vectorized smallest altitude for a (..., 3, 2) stack of triangles."""
    a = tri[..., 0, :]
    b = tri[..., 1, :]
    c = tri[..., 2, :]
    ab = b - a
    ac = c - a
    bc = c - b
    area2 = np.abs(ab[..., 0] * ac[..., 1] - ab[..., 1] * ac[..., 0])
    s2 = np.maximum(
        np.maximum((ab * ab).sum(-1), (ac * ac).sum(-1)), (bc * bc).sum(-1)
    )
    out = np.zeros_like(area2)
    np.divide(area2, np.sqrt(s2), out=out, where=s2 > 0.0)
    return out


_TRIPLE_IDX: dict[int, tuple[tuple[int, int, int], ...]] = {
    k: tuple(combinations(range(k), 3)) for k in (3, 4, 5)
}


def max_triple_width(pts: np.ndarray) -> np.ndarray:
    """Max over all 3-subsets of the subset width, batched over (m, k, 2).

    A set satisfies T(rB, 3) exactly when this value is <= 2 r.
    """
    pts = np.asarray(pts, dtype=float)
    squeeze = pts.ndim == 2
    if squeeze:
        pts = pts[None]
    k = pts.shape[1]
    best = np.zeros(pts.shape[0])
    for i, j, l in _TRIPLE_IDX.get(k, tuple(combinations(range(k), 3))):
        tri = pts[:, (i, j, l), :]
        np.maximum(best, min_altitude_batch(tri), out=best)
    return best[0] if squeeze else best


def any_triple_wider(pts: np.ndarray, threshold: float) -> np.ndarray:
    """True where some 3-subset has width > threshold; batched (m, k, 2).

    Square-free formulation (compares 4*area^2 against t^2 * longest
    side^2) so coincident points can never fire the test.
    """
    pts = np.asarray(pts, dtype=float)
    m, k = pts.shape[0], pts.shape[1]
    t2 = threshold * threshold
    hit = np.zeros(m, dtype=bool)
    for i, j, l in _TRIPLE_IDX.get(k, tuple(combinations(range(k), 3))):
        a = pts[:, i, :]
        b = pts[:, j, :]
        c = pts[:, l, :]
        ab = b - a
        ac = c - a
        bc = c - b
        area2 = ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0]
        s2 = np.maximum(
            np.maximum((ab * ab).sum(1), (ac * ac).sum(1)), (bc * bc).sum(1)
        )
        hit |= area2 * area2 > t2 * s2
    return hit


def satisfies_T(ps, r: float) -> bool:
    """True iff the translates of rB at ps admit a line transversal (width <= 2r)."""
    return width(ps) <= 2.0 * r


def satisfies_T3(ps, r: float) -> bool:
    """True iff every 3-subset satisfies T(rB); sets with < 3 points pass."""
    pts = as_point_array(ps)
    if len(pts) < 3:
        return True
    for i, j, l in combinations(range(len(pts)), 3):
        if min_altitude(pts[i], pts[j], pts[l]) > 2.0 * r:
            return False
    return True


@dataclass
class AffineMap:
    """x -> linear @ x + offset."""

    linear: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        self.linear = np.asarray(self.linear, dtype=float).reshape(2, 2)
        self.offset = np.asarray(self.offset, dtype=float).reshape(2)

    def apply(self, ps) -> np.ndarray:
        pts = as_point_array(ps)
        return pts @ self.linear.T + self.offset

    @staticmethod
    def identity() -> "AffineMap":
        return AffineMap(np.eye(2), np.zeros(2))

    @staticmethod
    def rotation(theta: float, offset=(0.0, 0.0)) -> "AffineMap":
        c, s = math.cos(theta), math.sin(theta)
        return AffineMap(np.array([[c, -s], [s, c]]), np.asarray(offset, dtype=float))

    @staticmethod
    def scaling(sx: float, sy: float, offset=(0.0, 0.0)) -> "AffineMap":
        return AffineMap(np.diag([sx, sy]), np.asarray(offset, dtype=float))


def is_contraction(m: AffineMap, slack: float = DELTA_FP) -> bool:
    """True iff the linear part has operator norm <= 1 + slack."""
    s = np.linalg.svd(m.linear, compute_uv=False)
    return bool(s[0] <= 1.0 + slack)


@dataclass(frozen=True)
class Ellipse:
    """Ellipse with semi-axes r1 >= r2 > 0, rotated by ``rotation`` about center."""

    center: Point2
    r1: float
    r2: float
    rotation: float = 0.0

    def __post_init__(self):
        if not (self.r1 >= self.r2 > 0.0):
            raise ValueError(f"ellipse needs r1 >= r2 > 0, got {self.r1}, {self.r2}")

    def area(self) -> float:
        return math.pi * self.r1 * self.r2


def ellipse_boundary_point(e: Ellipse, alpha: float) -> Point2:
    """Boundary point at parameter alpha: center + R(rotation) (r1 cos a, r2 sin a)."""
    ca, sa = math.cos(alpha), math.sin(alpha)
    cr, sr = math.cos(e.rotation), math.sin(e.rotation)
    vx, vy = e.r1 * ca, e.r2 * sa
    return Point2(e.center.x + cr * vx - sr * vy, e.center.y + sr * vx + cr * vy)


def ellipse_points(r1: float, r2: float, alphas: np.ndarray) -> np.ndarray:
    """Axis-aligned centered boundary points (r1 cos a, r2 sin a), batched."""
    a = np.asarray(alphas, dtype=float)
    return np.stack((r1 * np.cos(a), r2 * np.sin(a)), axis=-1)


def min_area_ellipse(ps, tol: float = 1e-9, max_iter: int = 100_000) -> Ellipse:
    """Minimum-area enclosing ellipse via an iterative barycentric-weight scheme.

    Frank-Wolfe ascent with away/drop steps on the lifted D-optimal design
    problem; stops when the relative area excess is below ``tol`` or after
    ``max_iter`` iterations.  Needs >= 3 affinely independent points;
    raises ``DegenerateInput`` for collinear input.  This routine is an
    oracle for tests and diagnostics only: no campaign certificate ever
    depends on it.
    """
    pts = as_point_array(ps)
    if len(hull_array(pts)) <= 2:
        raise DegenerateInput("min_area_ellipse needs >= 3 affinely independent points")
    n = len(pts)
    q = np.column_stack([pts, np.ones(n)])  # lifted (n, 3)
    u = np.full(n, 1.0 / n)
    d1 = 3.0  # lifted dimension
    # stop when max leverage is within (1 + eps_k) * d1: the area excess of
    # the extracted ellipse is then O(eps_k), comfortably below tol
    eps_k = tol / 10.0
    for _ in range(max_iter):
        v = (q * u[:, None]).T @ q
        try:
            vinv = np.linalg.inv(v)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
            raise DegenerateInput("weight matrix became singular") from exc
        g = np.einsum("ij,jk,ik->i", q, vinv, q)
        jp = int(np.argmax(g))
        kp = g[jp]
        support = u > 0.0
        g_s = np.where(support, g, np.inf)
        jm = int(np.argmin(g_s))
        km = g_s[jm]
        eps_plus = kp / d1 - 1.0
        eps_minus = 1.0 - km / d1
        if eps_plus <= eps_k and eps_minus <= eps_k:
            break
        if eps_plus >= eps_minus:
            lam = (kp - d1) / (d1 * (kp - 1.0))
            u *= 1.0 - lam
            u[jp] += lam
        else:
            cap = u[jm] / (1.0 - u[jm]) if u[jm] < 1.0 else math.inf
            if km <= 1.0:
                lam = cap
            else:
                lam = min((d1 - km) / (d1 * (km - 1.0)), cap)
            u *= 1.0 + lam
            u[jm] -= lam
            u[jm] = max(u[jm], 0.0)
    c = u @ pts
    centered = pts - c
    sigma = (centered * u[:, None]).T @ centered
    try:
        a_mat = np.linalg.inv(sigma) / 2.0  # d = 2
    except np.linalg.LinAlgError as exc:
        raise DegenerateInput("degenerate point set for enclosing ellipse") from exc
    # rescale so every input point is genuinely inside
    vals = np.einsum("ij,jk,ik->i", centered, a_mat, centered)
    a_mat /= max(float(vals.max()), 1e-300)
    evals, evecs = np.linalg.eigh(a_mat)
    r_major = 1.0 / math.sqrt(evals[0])
    r_minor = 1.0 / math.sqrt(evals[1])
    rot = math.atan2(evecs[1, 0], evecs[0, 0])
    if rot < 0.0:
        rot += math.pi
    if rot >= math.pi:
        rot -= math.pi
    return Ellipse(Point2(float(c[0]), float(c[1])), r_major, r_minor, rot)
