"""Sign tests deciding when the unit disk is the minimum-area ellipse.

For contact points at angles a_1 < ... < a_k on the unit circle, the
disk is the minimum-area enclosing ellipse exactly when the origin of
R^4 lies in the convex hull of the lifted points

    L(a) = (cos a, sin a, cos 2a, sin 2a).

Three computable consequences drive all pruning:

* no arc between consecutive contact angles may exceed 2*pi/3;
* for k = 4 the trigonometric functional ``F`` must vanish;
* for k = 5 the five-entry sign vector returned by
  ``five_point_values`` must be single-signed (this one is an exact
  characterization, not just a necessary condition).

Everything here is scalar-first with ``*_batch`` twins used by the
search engine; the twins are cross-checked against the scalar forms in
the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geom import DELTA_FP

TWO_PI = 2.0 * math.pi


class NotOrdered(ValueError):
    """Raised when an operation requires 0 <= a_1 < ... < a_k < 2*pi."""


class TriState(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class AngleTuple:
    """A k-tuple of angles, k in {3, 4, 5}."""

    alphas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if not 3 <= len(self.alphas) <= 5:
            raise ValueError(f"need 3-5 angles, got {len(self.alphas)}")

    @property
    def k(self) -> int:
        return len(self.alphas)

    def require_ordered(self) -> None:
        a = self.alphas
        if a[0] < 0.0 or a[-1] >= TWO_PI:
            raise NotOrdered(f"angles must lie in [0, 2*pi): {a}")
        if any(a[i] >= a[i + 1] for i in range(len(a) - 1)):
            raise NotOrdered(f"angles must be strictly increasing: {a}")


def F(a1: float, a2: float, a3: float, a4: float) -> float:
    """cos((a1+a2-a3-a4)/2) + cos((a1-a2+a3-a4)/2) + cos((a1-a2-a3+a4)/2).

    Vanishes whenever the unit disk is minimal for four contact points;
    invariant under a common shift of all four arguments, and changes by
    strictly less than 3*eps when each argument moves by at most eps.
    """
    return (
        math.cos(0.5 * (a1 + a2 - a3 - a4))
        + math.cos(0.5 * (a1 - a2 + a3 - a4))
        + math.cos(0.5 * (a1 - a2 - a3 + a4))
    )


def F_batch(a: np.ndarray) -> np.ndarray:
    """``F`` over the last axis of an (..., 4) array."""
    a = np.asarray(a, dtype=float)
    a1, a2, a3, a4 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    return (
        np.cos(0.5 * (a1 + a2 - a3 - a4))
        + np.cos(0.5 * (a1 - a2 + a3 - a4))
        + np.cos(0.5 * (a1 - a2 - a3 + a4))
    )


def lifted(alpha: float) -> np.ndarray:
    """The 4-vector (cos a, sin a, cos 2a, sin 2a)."""
    return np.array(
        [math.cos(alpha), math.sin(alpha), math.cos(2 * alpha), math.sin(2 * alpha)]
    )


def lifted_batch(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.stack((np.cos(a), np.sin(a), np.cos(2 * a), np.sin(2 * a)), axis=-1)


# index quadruples and signs for the five-entry vector below
_FIVE_IDX = ((0, 1, 2, 3), (1, 2, 3, 4), (2, 3, 4, 0), (3, 4, 0, 1), (4, 0, 1, 2))
_FIVE_SIGN = (1.0, 1.0, -1.0, 1.0, -1.0)


def five_values_raw(alphas) -> np.ndarray:
    """The 5-entry sign vector for raw (unshifted) angles, no ordering gate.

    Entry j is +/- F over the j-th cyclic quadruple, with the alternating
    sign pattern (+, +, -, +, -).  All entries share a strict sign iff the
    unit disk is minimal for the five contact points.
    """
    a = np.asarray(alphas, dtype=float)
    out = np.empty(a.shape[:-1] + (5,))
    for j, (idx, s) in enumerate(zip(_FIVE_IDX, _FIVE_SIGN)):
        out[..., j] = s * F_batch(a[..., idx])
    return out


def four_point_john_residual(t: AngleTuple) -> float:
    """F at an ordered 4-tuple; a nonzero value certifies non-minimality."""
    if t.k != 4:
        raise ValueError("four_point_john_residual needs k = 4")
    t.require_ordered()
    return F(*t.alphas)


def five_point_values(t: AngleTuple) -> tuple[float, float, float, float, float]:
    """The five-entry sign vector of an ordered 5-tuple (raw angles)."""
    if t.k != 5:
        raise ValueError("five_point_values needs k = 5")
    t.require_ordered()
    return tuple(float(v) for v in five_values_raw(np.array(t.alphas)))


def is_john_five(t: AngleTuple, margin: float = 0.0) -> TriState:
    """Minimality test for 5 contact points with a decision margin.

    YES if all five values share a sign with magnitude > margin, NO if two
    values of opposite sign each exceed margin in magnitude, UNKNOWN
    otherwise (callers must subdivide rather than conclude).
    """
    vals = np.asarray(five_point_values(t))
    vmin, vmax = float(vals.min()), float(vals.max())
    if vmin > margin or vmax < -margin:
        return TriState.YES
    if vmax > margin and vmin < -margin:
        return TriState.NO
    return TriState.UNKNOWN


def max_arc_gap(t: AngleTuple) -> float:
    """Largest gap between consecutive angles, including the wraparound gap.

    A gap exceeding 2*pi/3 certifies that the disk is not the minimum-area
    ellipse for the contact points.
    """
    t.require_ordered()
    a = t.alphas
    gaps = [a[i + 1] - a[i] for i in range(len(a) - 1)]
    gaps.append(a[0] + TWO_PI - a[-1])
    return max(gaps)


def arc_gaps_batch(a: np.ndarray) -> np.ndarray:
    """Max consecutive gap (with wraparound) over the last axis, batched."""
    a = np.asarray(a, dtype=float)
    k = a.shape[-1]
    gaps = np.empty_like(a)
    gaps[..., : k - 1] = a[..., 1:] - a[..., :-1]
    gaps[..., k - 1] = a[..., 0] + TWO_PI - a[..., k - 1]
    return gaps.max(axis=-1)


def _project_origin_to_hull(v: np.ndarray) -> tuple[np.ndarray, float]:
    """Nearest point of conv(rows of v) to the origin, by face enumeration.

    Returns (weights, distance).  Exact for these tiny instances: the
    optimum is attained on some face, and every face's equality-constrained
    minimizer with nonnegative weights is a feasible candidate.
    """
    n = len(v)
    best_obj = math.inf
    best_w = np.full(n, 1.0 / n)
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        vs = v[idx]
        s = len(idx)
        gram = vs @ vs.T
        kkt = np.zeros((s + 1, s + 1))
        kkt[:s, :s] = gram
        kkt[:s, s] = 1.0
        kkt[s, :s] = 1.0
        rhs = np.zeros(s + 1)
        rhs[s] = 1.0
        sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
        w = sol[:s]
        if np.any(w < -1e-12):
            continue
        w = np.clip(w, 0.0, None)
        ssum = w.sum()
        if ssum <= 0.0:
            continue
        w = w / ssum
        # squared norm of the combination point itself, not w' G w: the
        # quadratic form cancels O(1) products and loses half the digits
        x = w @ vs
        obj = float(x @ x)
        if obj < best_obj:
            best_obj = obj
            best_w = np.zeros(n)
            best_w[idx] = w
    return best_w, math.sqrt(max(best_obj, 0.0))


def _max_min_weight(v: np.ndarray) -> float:
    """max over representations of the origin of the smallest weight (LP)."""
    from scipy.optimize import linprog

    n = len(v)
    # variables: w_1..w_n, t;   maximize t
    c = np.zeros(n + 1)
    c[n] = -1.0
    a_ub = np.hstack([-np.eye(n), np.ones((n, 1))])  # t - w_i <= 0
    b_ub = np.zeros(n)
    a_eq = np.zeros((5, n + 1))
    a_eq[:4, :n] = v.T
    a_eq[4, :n] = 1.0
    b_eq = np.array([0.0, 0.0, 0.0, 0.0, 1.0])
    bounds = [(0.0, None)] * n + [(None, None)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds,
                  method="highs")
    if not res.success:
        return -math.inf
    return float(res.x[n])


def simplex_condition(t: AngleTuple, margin: float = 0.0) -> TriState:
    """Does the origin of R^4 lie in the hull of the lifted contact points?

    YES when a convex combination hits the origin with every weight >=
    margin; NO when a separating functional clears all lifted points by
    more than margin; UNKNOWN in the numerically ambiguous band.
    """
    v = lifted_batch(np.array(t.alphas))
    w, dist = _project_origin_to_hull(v)
    if dist <= DELTA_FP:
        if margin <= 0.0:
            return TriState.YES
        if float(w.min()) >= margin or _max_min_weight(v) >= margin:
            return TriState.YES
        return TriState.UNKNOWN
    if dist > margin + DELTA_FP:
        return TriState.NO
    return TriState.UNKNOWN


def delta_determinant(t: AngleTuple) -> float:
    """det of the 4x4 matrix with columns L(a_j); diagnostic use only.

    Vanishes together with ``F`` on minimal 4-point configurations; the
    product sign(det) * sign(F) is empirically constant on ordered tuples,
    which the tests use as a cross-check of the two routes.
    """
    if t.k != 4:
        raise ValueError("delta_determinant needs k = 4")
    t.require_ordered()
    m = lifted_batch(np.array(t.alphas)).T  # columns are lifted points
    return float(np.linalg.det(m))
