"""Certified outer approximation of the admissible-point region.

For anchor points Z on an axis-aligned centered ellipse E and a slack
eps >= 0, the region of interest is

    R(Z, eps) = { x : {x} union Z satisfies T((1+eps) B, 3) },

i.e. every triangle {x, z_i, z_j} has width <= 2 (1 + eps) (triples
inside Z are checked once, up front).  A quadtree produces a union of
squares guaranteed to contain R intersect E: a cell is discarded only
when it is *certifiably* disjoint from the region, using the
1-Lipschitz dependence of a triangle's width on one vertex (moving x by
at most the cell half-diagonal changes each width by at most that
much).  The width of the hull of all retained cell corners is then a
certified upper bound for the width of R intersect E, which decides
whether the region satisfies T(rho B).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import numpy as np

from .geom import (
    DELTA_FP,
    Ellipse,
    as_point_array,
    hull_array,
    min_altitude_batch,
    width,
)

SQRT2 = math.sqrt(2.0)


def _root_cells(e: Ellipse) -> tuple[np.ndarray, np.ndarray, float]:
    """Square cells of half side r2 tiling the bounding box of E.

    One row of ceil(r1/r2) cells centered on the x axis; their union
    contains [-r1, r1] x [-r2, r2] and therefore all of E.
    """
    nx = max(1, math.ceil(e.r1 / e.r2 - 1e-12))
    xs = (2.0 * np.arange(nx) + 1.0 - nx) * e.r2
    return xs, np.zeros(nx), float(e.r2)


class CellStatus(Enum):
    OUT = "out"
    KEEP = "keep"


class RegionStatus(Enum):
    VERIFIED = "verified"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Cell:
    """Axis-aligned square: center (cx, cy), half side length half_side."""

    cx: float
    cy: float
    half_side: float


@dataclass
class RegionQuery:
    """Anchors Z (at most 5 points) on a centered axis-aligned ellipse.

    ``empty_by_construction`` is set when some triple inside Z already
    violates T((1+eps) B): then no x can be admissible and the region is
    empty without any search.
    """

    z: np.ndarray
    eps: float
    ellipse: Ellipse
    delta_fp: float = DELTA_FP
    empty_by_construction: bool = field(init=False)

    def __post_init__(self):
        self.z = as_point_array(self.z)
        if not 1 <= len(self.z) <= 5:
            raise ValueError("RegionQuery needs 1-5 anchor points")
        if self.eps < 0.0:
            raise ValueError("eps must be >= 0")
        e = self.ellipse
        if e.rotation != 0.0 or e.center.x != 0.0 or e.center.y != 0.0:
            raise ValueError("RegionQuery needs an axis-aligned centered ellipse")
        bound = 2.0 * (1.0 + self.eps)
        violated = False
        for i, j, l in combinations(range(len(self.z)), 3):
            tri = self.z[(i, j, l), :][None]
            if float(min_altitude_batch(tri)[0]) > bound:
                violated = True
                break
        self.empty_by_construction = violated

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(len(self.z)), 2))


@dataclass
class OuterApprox:
    """Retained quadtree cells; their union contains R intersect E."""

    cells: list[Cell]
    depths: list[int]
    max_depth_used: int
    tested: int
    kept: int
    discarded: int
    empty: bool

    def corner_array(self) -> np.ndarray:
        """All 4 corners of every retained cell, one (4n, 2) array."""
        if not self.cells:
            return np.zeros((0, 2))
        c = np.array([[cell.cx, cell.cy, cell.half_side] for cell in self.cells])
        signs = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
        corners = c[:, None, :2] + c[:, None, 2:3] * signs[None, :, :]
        return corners.reshape(-1, 2)


def region_contains(q: RegionQuery, x) -> bool:
    """Exact membership of a single point x in R(Z, eps) (E not included)."""
    if q.empty_by_construction:
        return False
    p = as_point_array(x)[0]
    bound = 2.0 * (1.0 + q.eps)
    for i, j in q.pairs:
        tri = np.array([[p, q.z[i], q.z[j]]])
        if float(min_altitude_batch(tri)[0]) > bound:
            return False
    return True


def _classify_arrays(
    q: RegionQuery, cx: np.ndarray, cy: np.ndarray, h: np.ndarray,
    skip_ellipse: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized cell test.  Returns (out_mask, fully_inside_mask).

    A cell is OUT only when that is certifiable: either the whole square
    lies strictly outside E, or some anchor pair's triangle at the cell
    center is wider than 2(1+eps) by more than the cell half-diagonal
    (so every point of the cell violates the pair constraint).
    """
    r1, r2 = q.ellipse.r1, q.ellipse.r2
    delta = q.delta_fp
    ax = np.maximum(np.abs(cx) - h, 0.0)
    ay = np.maximum(np.abs(cy) - h, 0.0)
    qmin = (ax / r1) ** 2 + (ay / r2) ** 2
    out = qmin > 1.0 + delta
    if skip_ellipse is not None:
        out &= ~skip_ellipse
    bx = np.abs(cx) + h
    by = np.abs(cy) + h
    inside = (bx / r1) ** 2 + (by / r2) ** 2 <= 1.0
    centers = np.stack([cx, cy], axis=-1)
    bound = 2.0 * (1.0 + q.eps)
    rho_c = h * SQRT2
    for i, j in q.pairs:
        zi = q.z[i]
        zj = q.z[j]
        tri = np.empty(centers.shape[:-1] + (3, 2))
        tri[..., 0, :] = centers
        tri[..., 1, :] = zi
        tri[..., 2, :] = zj
        w = min_altitude_batch(tri)
        out |= w > bound + rho_c + delta
    return out, inside


def classify_cell(q: RegionQuery, c: Cell) -> CellStatus:
    """OUT only when the cell certifiably misses R intersect E, else KEEP."""
    if q.empty_by_construction:
        return CellStatus.OUT
    out, _ = _classify_arrays(
        q, np.array([c.cx]), np.array([c.cy]), np.array([c.half_side])
    )
    return CellStatus.OUT if bool(out[0]) else CellStatus.KEEP


def _corners_of(cx: np.ndarray, cy: np.ndarray, h: float) -> np.ndarray:
    offs = np.array([[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]]) * h
    return (np.stack([cx, cy], axis=-1)[:, None, :] + offs[None]).reshape(-1, 2)


def outer_approx(
    q: RegionQuery,
    max_depth: int = 9,
    min_half_side: float | None = None,
    stop_width: float | None = None,
) -> OuterApprox:
    """Quadtree cover of R intersect E starting from E's bounding box.

    KEEP cells are subdivided until ``max_depth`` or until their half
    side drops below ``min_half_side`` (default r1/2048), then retained.
    Fully-inside-E cells skip the ellipse test for all their descendants.
    With ``stop_width`` set, refinement also stops at any level whose
    retained cells already hull to at most that width — the coarse
    cover is just as valid a certificate and far cheaper.
    """
    r1 = q.ellipse.r1
    if min_half_side is None:
        min_half_side = r1 / 2048.0
    if q.empty_by_construction:
        return OuterApprox([], [], 0, 0, 0, 0, True)
    cx, cy, h0 = _root_cells(q.ellipse)
    h = np.full(len(cx), h0)
    inside = np.zeros(len(cx), dtype=bool)
    depth = 0
    tested = kept = discarded = 0
    cells: list[Cell] = []
    depths: list[int] = []
    max_used = 0
    while len(cx):
        max_used = depth
        out, now_inside = _classify_arrays(q, cx, cy, h, skip_ellipse=inside)
        keep = ~out
        tested += len(cx)
        discarded += int(out.sum())
        inside = inside | now_inside
        terminal = depth >= max_depth or bool(h[0] < min_half_side)
        if not terminal and stop_width is not None and keep.any():
            corners = _corners_of(cx[keep], cy[keep], float(h[0]))
            if width(hull_array(corners)) <= stop_width:
                terminal = True
        if terminal:
            for x, y, hs in zip(cx[keep], cy[keep], h[keep]):
                cells.append(Cell(float(x), float(y), float(hs)))
                depths.append(depth)
            kept += int(keep.sum())
            break
        px, py, pin = cx[keep], cy[keep], inside[keep]
        hh = h[0] / 2.0
        # children in fixed (-,-), (+,-), (-,+), (+,+) order per parent
        offs = np.array([[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]]) * hh
        cx = (px[:, None] + offs[None, :, 0]).reshape(-1)
        cy = (py[:, None] + offs[None, :, 1]).reshape(-1)
        h = np.full(len(cx), hh)
        inside = np.repeat(pin, 4)
        depth += 1
    return OuterApprox(cells, depths, max_used, tested, kept, discarded, not cells)


def region_width_upper_bound(oa: OuterApprox) -> float:
    """Width of the hull of all retained cell corners (>= width of R ∩ E)."""
    corners = oa.corner_array()
    if len(corners) == 0:
        return 0.0
    return width(hull_array(corners))


def _directions(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors for ``count`` equally spaced directions in [0, pi)."""
    th = np.arange(count) * (math.pi / count)
    return np.cos(th), np.sin(th)


def _fold_extents(
    hi: np.ndarray,
    lo: np.ndarray,
    ids: np.ndarray,
    cx: np.ndarray,
    cy: np.ndarray,
    pad: np.ndarray,
    u_mat: np.ndarray,
    block: int,
) -> None:
    """Fold cell-corner extents into (hi, lo) per id, in place.

    ``ids`` must be sorted ascending; cells are processed in blocks so
    the (cells, directions) projection never materializes whole.  The
    corner extent of a square cell along direction u is its center
    projection +- pad, with pad = half_side * (|ux| + |uy|).
    """
    for s in range(0, len(ids), block):
        e = min(s + block, len(ids))
        proj = u_mat.T @ np.stack([cx[s:e], cy[s:e]])  # (D, n)
        starts = np.flatnonzero(np.r_[True, ids[s + 1 : e] != ids[s : e - 1]])
        rows = ids[s:e][starts]
        seg_hi = np.maximum.reduceat(proj, starts, axis=1) + pad[:, None]
        seg_lo = np.minimum.reduceat(proj, starts, axis=1) - pad[:, None]
        hi[rows] = np.maximum(hi[rows], seg_hi.T)
        lo[rows] = np.minimum(lo[rows], seg_lo.T)


# Slack over the directional-grid overshoot beyond which a width read
# off retired inside-cells is trusted as evidence the region is wider
# than the target, abandoning the row (completeness-only: a wrong bail
# leaves the cube to be subdivided, never mis-prunes it).
_HOPELESS_SLACK = 0.02

# Certified member points are a subset of the region, so any cover
# bound taken over the same direction set dominates their directional
# width.  A row whose members alone exceed the target can therefore
# never be verified and is skipped up front.  The tolerance absorbs
# float32 rounding in the member projections.
_GATE_TOL = 1e-4

# Square-corner offsets in a fixed order and the boundary cycle of
# edges between them, used when clipping a cell by a half-plane.
_CORNER_X = np.array([-1.0, 1.0, -1.0, 1.0])
_CORNER_Y = np.array([-1.0, -1.0, 1.0, 1.0])
_EDGE_A = np.array([0, 1, 3, 2])
_EDGE_B = np.array([1, 3, 2, 0])

# lowest set bit of a pair mask (k <= 5 anchors -> at most 10 pair bits)
_LOW_BIT = np.array([0] + [(v & -v).bit_length() - 1 for v in range(1, 1 << 10)],
                    dtype=np.int64)


def _member_gate(
    zs: np.ndarray,
    eps: float,
    ellipse: Ellipse,
    target: float,
    delta_fp: float,
    u_mat: np.ndarray,
    probe_count: int = 32,
    row_block: int = 4096,
) -> np.ndarray:
    """Rows plausibly verifiable: member-point width not above target.

    Anchors and admissible boundary probes are certified members of
    R ∩ E, so their directional width bounds the region's width from
    below; rows already too wide on members alone can never verify.
    """
    m, k, _ = zs.shape
    r1, r2 = ellipse.r1, ellipse.r2
    a = np.linspace(0.0, 2.0 * math.pi, probe_count, endpoint=False)
    probes = np.stack([r1 * np.cos(a), r2 * np.sin(a)], axis=-1)
    proj_p = (probes @ u_mat).astype(np.float32)  # (P, D)
    bound = 2.0 * (1.0 + eps) - delta_fp
    attempt = np.empty(m, dtype=bool)
    ninf = np.float32(-np.inf)
    pinf = np.float32(np.inf)
    for s in range(0, m, row_block):
        e = min(s + row_block, m)
        zb = zs[s:e]
        member = np.ones((e - s, probe_count), dtype=bool)
        tri = np.empty((e - s, probe_count, 3, 2))
        tri[:, :, 0] = probes[None]
        for i, j in combinations(range(k), 2):
            tri[:, :, 1] = zb[:, None, i]
            tri[:, :, 2] = zb[:, None, j]
            member &= min_altitude_batch(tri) <= bound
        proj_z = np.einsum("rkc,cd->rkd", zb, u_mat).astype(np.float32)
        masked = np.where(member[:, :, None], proj_p[None], ninf)
        hi = np.maximum(proj_z.max(axis=1), masked.max(axis=1))
        masked = np.where(member[:, :, None], proj_p[None], pinf)
        lo = np.minimum(proj_z.min(axis=1), masked.min(axis=1))
        attempt[s:e] = (hi - lo).min(axis=1) <= target + _GATE_TOL
    return attempt


def region_batch_verify(
    zs: np.ndarray,
    eps: float,
    ellipse: Ellipse,
    rho: float,
    *,
    max_depth: int = 8,
    min_half_side: float | None = None,
    delta_fp: float = DELTA_FP,
    n_directions: int = 192,
    decide_from: int = 6,
    chunk: int = 512,
    cell_block: int = 1 << 19,
) -> np.ndarray:
    """Verify width(R(Z, eps) ∩ E) <= 2 rho - delta_fp for many anchor sets.

    ``zs`` has shape (m, k, 2); all rows share the ellipse and eps.
    Returns a boolean mask of rows whose region is certifiably narrow
    enough.  Semantically each row gets the same kind of certificate as
    ``region_satisfies_T``; the work is shared: all rows refine one
    quadtree level at a time in flat arrays, and the width of a cover is
    upper-bounded by its extent over a fixed grid of directions (the
    minimum over sampled directions upper-bounds the minimum over all
    directions, so the claim stays certified — only slightly looser).

    Per level, each cell of each still-undecided row is classified
    OUT (certifiably misses R ∩ E — dropped), IN (certifiably inside
    both R and E — retired into running directional extents, since
    refining it cannot shrink the cover), or boundary (subdivided).
    From depth ``decide_from`` on, a row is verified as soon as its
    cover extent meets the target; at any depth a row is abandoned once
    the extents of its retired IN cells alone exceed the target by more
    than the grid slack — those cells are genuine subsets of R ∩ E, so
    the region is too wide for any refinement to save.

    Two exact reductions keep the cover extents close to the region
    itself rather than to the raw cell squares.  First, R ∩ E lies in
    E, so every directional extent is clipped to E's support function.
    Second, the admissible part of a cell still uncertain for some
    anchor pair satisfies sign·cross(x) <= (bound + delta) * Lmax with
    cross affine and Lmax the exact maximum (over the cell's corners,
    where a convex function peaks) of the triangle's longest side, so
    such a cell contributes only its polygon clipped by that half-plane
    — the support of a convex clip is attained at square corners or
    edge crossings, all in closed form.  Both shrink the cover, never
    the region, so soundness is untouched.

    Anchors with an internally violated triple (empty region) verify
    vacuously, matching RegionQuery.empty_by_construction.
    """
    m, k, _ = zs.shape
    out = np.zeros(m, dtype=bool)
    if m == 0:
        return out
    target = 2.0 * rho - delta_fp
    r1, r2 = ellipse.r1, ellipse.r2
    if min_half_side is None:
        min_half_side = r1 / 2048.0
    bound = 2.0 * (1.0 + eps)
    pair_list = list(combinations(range(k), 2))
    n_pairs = len(pair_list)
    ux, uy = _directions(n_directions)
    u_mat = np.stack([ux, uy])  # (2, D)
    abs_u = np.abs(ux) + np.abs(uy)  # corner pad per unit half side
    sup_e = np.sqrt((r1 * ux) ** 2 + (r2 * uy) ** 2)  # support of E per u
    coarse = slice(0, n_directions, 4)  # cheap subset for early decisions
    # anchor triples wider than the pair bound make the region empty:
    # vacuously verified without refinement
    empty_rows = np.zeros(m, dtype=bool)
    for i, j, l in combinations(range(k), 3):
        empty_rows |= min_altitude_batch(zs[:, (i, j, l)]) > bound
    out[empty_rows] = True
    todo = np.flatnonzero(~empty_rows)
    if len(todo) == 0:
        return out
    gate = _member_gate(zs[todo], eps, ellipse, target, delta_fp, u_mat)
    todo = todo[gate]
    root_x, root_y, h0 = _root_cells(ellipse)
    ell_bit = np.uint16(1 << 15)  # cell may straddle the ellipse boundary
    pair_bits = np.uint16((1 << n_pairs) - 1)
    root_state = np.uint16(pair_bits | ell_bit)

    def fold_cover(ext_hi, ext_lo, ids_c, bx, by, hh, state_c, const_c,
                   d_slice):
        """Fold undecided cells; pair-uncertain ones enter slab-clipped.

        A cell whose pair q is still uncertain can only retain points
        with sign·cross_q <= (bound + delta) * Lmax, a half-plane with
        exact constants, so only the clipped polygon's vertices (square
        corners in the half-plane plus edge crossings) are folded.
        A cell is skipped entirely when the clip leaves nothing.
        """
        um = u_mat[:, d_slice]
        au = abs_u[d_slice]
        pb = (state_c & pair_bits).astype(np.int64)
        sp = np.flatnonzero(pb == 0)
        if len(sp):
            _fold_extents(ext_hi, ext_lo, ids_c[sp], bx[sp], by[sp],
                          hh * au, um, cell_block)
        ss = np.flatnonzero(pb != 0)
        zero_pad = np.zeros(len(au))
        for s in range(0, len(ss), 1 << 18):
            se = ss[s : s + (1 << 18)]
            qi = _LOW_BIT[pb[se]]
            cc = const_c[ids_c[se].astype(np.int64) * n_pairs + qi]
            cxs = bx[se]
            cys = by[se]
            vx = cxs[:, None] + hh * _CORNER_X[None]
            vy = cys[:, None] + hh * _CORNER_Y[None]
            cross_c = cc[:, 0] * cxs + cc[:, 1] * cys + cc[:, 2]
            li = np.hypot(vx - cc[:, 3:4], vy - cc[:, 4:5]).max(axis=1)
            lj = np.hypot(vx - cc[:, 5:6], vy - cc[:, 6:7]).max(axis=1)
            lmax = np.maximum(np.sqrt(cc[:, 7]), np.maximum(li, lj))
            m_cut = (bound + delta_fp) * lmax
            sg = np.where(cross_c >= 0.0, 1.0, -1.0)
            fk = (sg * cross_c - m_cut)[:, None] + hh * (
                _CORNER_X[None] * (sg * cc[:, 0])[:, None]
                + _CORNER_Y[None] * (sg * cc[:, 1])[:, None]
            )
            feas = fk <= 0.0
            fa = fk[:, _EDGE_A]
            fb = fk[:, _EDGE_B]
            crossing = feas[:, _EDGE_A] != feas[:, _EDGE_B]
            t = np.where(crossing, fa / np.where(fa == fb, 1.0, fa - fb), 0.0)
            px = vx[:, _EDGE_A] + t * (vx[:, _EDGE_B] - vx[:, _EDGE_A])
            py = vy[:, _EDGE_A] + t * (vy[:, _EDGE_B] - vy[:, _EDGE_A])
            allx = np.concatenate([vx, px], axis=1).reshape(-1)
            ally = np.concatenate([vy, py], axis=1).reshape(-1)
            good = np.concatenate([feas, crossing], axis=1).reshape(-1)
            sv = np.flatnonzero(good)
            if len(sv):
                ids8 = np.repeat(ids_c[se], 8)
                _fold_extents(ext_hi, ext_lo, ids8[sv], allx[sv], ally[sv],
                              zero_pad, um, cell_block)

    for row0 in range(0, len(todo), chunk):
        rows = todo[row0 : row0 + chunk]
        mc = len(rows)
        z_chunk = zs[rows]
        # per (row, pair) constants: the line through z_i, z_j as
        # cross(x - z_i, x - z_j) = A x + B y + C, the endpoints, and
        # the squared base length
        const = np.empty((mc, n_pairs, 8))
        for q, (i, j) in enumerate(pair_list):
            zi = z_chunk[:, i]
            zj = z_chunk[:, j]
            const[:, q, 0] = zi[:, 1] - zj[:, 1]
            const[:, q, 1] = zj[:, 0] - zi[:, 0]
            const[:, q, 2] = zi[:, 0] * zj[:, 1] - zi[:, 1] * zj[:, 0]
            const[:, q, 3] = zi[:, 0]
            const[:, q, 4] = zi[:, 1]
            const[:, q, 5] = zj[:, 0]
            const[:, q, 6] = zj[:, 1]
            const[:, q, 7] = ((zi - zj) ** 2).sum(axis=1)
        const = const.reshape(mc * n_pairs, 8)
        ids = np.repeat(np.arange(mc, dtype=np.int32), len(root_x))
        cx = np.tile(root_x, mc)
        cy = np.tile(root_y, mc)
        state = np.full(len(ids), root_state)
        h = h0
        alive = np.ones(mc, dtype=bool)
        verified = np.zeros(mc, dtype=bool)
        acc_hi = np.full((mc, n_directions), -np.inf)
        acc_lo = np.full((mc, n_directions), np.inf)
        depth = 0
        while True:
            rc = h * SQRT2
            t_hi = bound + rc + delta_fp
            t_lo = bound - rc
            cell_out = np.zeros(len(ids), dtype=bool)
            # ellipse test only for cells not yet certified inside E
            une = state & ell_bit != 0
            if une.any():
                sel = np.flatnonzero(une)
                bx = cx[sel]
                by = cy[sel]
                ax = np.maximum(np.abs(bx) - h, 0.0)
                ay = np.maximum(np.abs(by) - h, 0.0)
                cell_out[sel] = (ax / r1) ** 2 + (ay / r2) ** 2 > 1.0 + delta_fp
                inn = ((np.abs(bx) + h) / r1) ** 2 + (
                    (np.abs(by) + h) / r2
                ) ** 2 <= 1.0
                state[sel[inn]] &= ~ell_bit
            # pair tests only where the pair is still uncertain
            for q in range(n_pairs):
                bit = np.uint16(1 << q)
                sel = np.flatnonzero((state & bit != 0) & ~cell_out)
                if not len(sel):
                    continue
                cc = const[ids[sel].astype(np.int64) * n_pairs + q]
                bx = cx[sel]
                by = cy[sel]
                cross = cc[:, 0] * bx + cc[:, 1] * by + cc[:, 2]
                n1 = (bx - cc[:, 3]) ** 2 + (by - cc[:, 4]) ** 2
                n2 = (bx - cc[:, 5]) ** 2 + (by - cc[:, 6]) ** 2
                s2 = np.maximum(np.maximum(n1, n2), cc[:, 7])
                c2 = cross * cross
                cell_out[sel[c2 > t_hi * t_hi * s2]] = True
                if t_lo > 0.0:
                    state[sel[c2 <= t_lo * t_lo * s2]] &= ~bit
            cell_in = ~cell_out & (state == 0)
            # retire certified-inside cells into the extent accumulators;
            # past the root level cells come in sibling quadruples, and a
            # fully retired quadruple is folded as its exact parent square
            if cell_in.any():
                if depth > 0:
                    full = cell_in.reshape(-1, 4).all(axis=1)
                    g = np.flatnonzero(full) * 4
                    if len(g):
                        _fold_extents(
                            acc_hi, acc_lo, ids[g], cx[g] + h, cy[g] + h,
                            2.0 * h * abs_u, u_mat, cell_block,
                        )
                    cell_in &= ~np.repeat(full, 4)
                sel = np.flatnonzero(cell_in)
                if len(sel):
                    _fold_extents(
                        acc_hi, acc_lo, ids[sel], cx[sel], cy[sel],
                        h * abs_u, u_mat, cell_block,
                    )
            keep = ~cell_out & ~cell_in
            ids = ids[keep]
            cx = cx[keep]
            cy = cy[keep]
            state = state[keep]
            last = depth >= max_depth or h / 2.0 < min_half_side
            if depth >= decide_from or last:
                # certified cover bound: boundary cells + retired cells,
                # clipped per direction to E's own support
                d_slice = slice(None) if last else coarse
                ext_hi = acc_hi[:, d_slice].copy()
                ext_lo = acc_lo[:, d_slice].copy()
                fold_cover(ext_hi, ext_lo, ids, cx, cy, h, state, const,
                           d_slice)
                np.minimum(ext_hi, sup_e[d_slice][None], out=ext_hi)
                np.maximum(ext_lo, -sup_e[d_slice][None], out=ext_lo)
                ub = (ext_hi - ext_lo).min(axis=1)
                ok = alive & (ub <= target)
                verified |= ok
                alive &= ~ok
            # retired cells alone already too wide: genuinely hopeless
            acc_w = (acc_hi - acc_lo).min(axis=1)
            alive &= ~(acc_w > target + _HOPELESS_SLACK)
            if not alive.any() or last:
                break
            keep = alive[ids]
            kept = int(keep.sum())
            ids = np.repeat(ids[keep], 4)
            state = np.repeat(state[keep], 4)
            half = h / 2.0
            offs_x = np.tile([-half, half, -half, half], kept)
            offs_y = np.tile([-half, -half, half, half], kept)
            cx = np.repeat(cx[keep], 4) + offs_x
            cy = np.repeat(cy[keep], 4) + offs_y
            h = half
            depth += 1
        out[rows] = verified
    return out


def region_width_lower_bound(q: RegionQuery, probe_count: int = 32) -> float:
    """Width of an explicit member subset of R ∩ E: a certified lower bound.

    Members are the anchors themselves (their mutual triples were
    verified at construction) plus boundary points of E that pass every
    pair test with delta_fp to spare.  When this already exceeds a
    width target, no outer cover can certify the region below it, so
    callers skip the quadtree without losing anything.
    """
    if q.empty_by_construction:
        return 0.0
    r1, r2 = q.ellipse.r1, q.ellipse.r2
    a = np.linspace(0.0, 2.0 * math.pi, probe_count, endpoint=False)
    probes = np.stack([r1 * np.cos(a), r2 * np.sin(a)], axis=-1)
    bound = 2.0 * (1.0 + q.eps) - q.delta_fp
    member = np.ones(len(probes), dtype=bool)
    tri = np.empty((len(probes), 3, 2))
    tri[:, 0] = probes
    for i, j in q.pairs:
        tri[:, 1] = q.z[i]
        tri[:, 2] = q.z[j]
        member &= min_altitude_batch(tri) <= bound
    pts = np.concatenate([q.z, probes[member]])
    return float(width(hull_array(pts)))


def region_satisfies_T(
    q: RegionQuery,
    rho: float,
    max_depth: int = 9,
    min_half_side: float | None = None,
) -> RegionStatus:
    """VERIFIED iff the certified width bound is <= 2 rho - delta_fp.

    An empty region is vacuously VERIFIED.  Never claims refutation: an
    inconclusive cover just returns UNKNOWN (callers refine or give up).
    """
    oa = outer_approx(q, max_depth=max_depth, min_half_side=min_half_side,
                      stop_width=2.0 * rho - q.delta_fp)
    if oa.empty:
        return RegionStatus.VERIFIED
    bound = region_width_upper_bound(oa)
    if bound <= 2.0 * rho - q.delta_fp:
        return RegionStatus.VERIFIED
    return RegionStatus.UNKNOWN


def cells_to_csv(oa: OuterApprox) -> str:
    """CSV dump of retained cells, one ``depth,cx,cy,half_side`` row each."""
    lines = ["depth,cx,cy,half_side"]
    for d, c in zip(oa.depths, oa.cells):
        lines.append(f"{d},{c.cx!r},{c.cy!r},{c.half_side!r}")
    return "\n".join(lines) + "\n"
