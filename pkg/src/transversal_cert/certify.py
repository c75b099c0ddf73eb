"""Assembly of the final bound from campaign certificates.

A complete run of the pipeline produces one certificate for the
five-contact bounding campaign at semi-axes (3, 1.62) (mode
``lemma15``), plus one ``grid-b`` and one ``grid-c`` certificate per
semi-axis pair on a finite grid.  This module enumerates that grid,
validates certificates (recomputing the config digest and the per-round
accounting), re-checks the handful of closed-form inequalities that
glue the campaign verdicts into the final estimate, and reports either
``Complete`` with the bound 1.645 or ``Partial`` with the list of gaps.

Two small self-contained checks live here as well: the equal-spacing
property of three-contact configurations (``verify_part_a``) and the
pentagon witness for the lower bound (``pentagon_lower_bound``).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .geom import DELTA_FP, GOLDEN_RATIO, Point2, PointSet, satisfies_T3, width
from .john import TWO_PI, AngleTuple, TriState, max_arc_gap, simplex_condition
from .search import (
    MODE_GRID_B,
    MODE_GRID_C,
    MODE_K,
    MODE_LEMMA15,
    MODES,
    REASON_ORDER,
    VERDICT_DEPTH_CAP,
    VERDICT_EMPTY,
    VERDICT_EXHAUSTED,
    Certificate,
    RoundStats,
    config_hash_of,
    initial_cube_count,
)


class InconsistentInputs(ValueError):
    """A certificate's contents do not support what it claims."""


# Reference profiles for the full-scale campaigns (used for synthetic
# certificates and as CLI defaults): (n0, depth_cap).
FULL_PROFILES = {
    MODE_LEMMA15: (60, 6),
    MODE_GRID_B: (120, 5),
    MODE_GRID_C: (120, 4),
}

LEMMA15_R1 = 3.0
LEMMA15_R2 = 1.62


# ---------------------------------------------------------------------------
# pair grid

@dataclass(frozen=True)
class PairGrid:
    """Finite set of semi-axis pairs: step multiples with r1 >= r2.

    r1 ranges over [1.62, 3], r2 over [1.62, 2].  Values are the integer
    multiples of ``step`` inside each range, matched to within the float
    slack, so a range that contains no multiple yields no values.
    """

    step: float = 0.015
    r1_min: float = 1.62
    r1_max: float = 3.0
    r2_min: float = 1.62
    r2_max: float = 2.0

    def __post_init__(self):
        if not self.step > 0.0:
            raise ValueError("grid step must be positive")
        if self.r1_min > self.r1_max or self.r2_min > self.r2_max:
            raise ValueError("grid ranges must be non-empty intervals")

    def multiple_index(self, x: float, delta_fp: float = DELTA_FP) -> Optional[int]:
        """Nearest-multiple index of x, or None when x is off-grid."""
        i = round(x / self.step)
        return i if abs(x - i * self.step) <= delta_fp else None


def _indices_in(lo: float, hi: float, step: float, delta_fp: float) -> range:
    return range(math.ceil((lo - delta_fp) / step),
                 math.floor((hi + delta_fp) / step) + 1)


def enumerate_pair_grid(
    g: PairGrid, delta_fp: float = DELTA_FP
) -> list[tuple[float, float]]:
    """All grid pairs (r1, r2) with r1 >= r2, sorted lexicographically."""
    i1 = _indices_in(g.r1_min, g.r1_max, g.step, delta_fp)
    i2 = _indices_in(g.r2_min, g.r2_max, g.step, delta_fp)
    return [
        (i * g.step, j * g.step)
        for i in i1
        for j in i2
        if i * g.step >= j * g.step - delta_fp
    ]


# ---------------------------------------------------------------------------
# lower-bound witness

# Circumradius of the regular pentagon whose vertex triples all fit in a
# width-2 slab while the full five-point set does not: 4/sqrt(5).
PENTAGON_CIRCUMRADIUS = 4.0 / math.sqrt(5.0)


def extremal_pentagon(scale: float = 1.0) -> PointSet:
    """Regular pentagon with circumradius scale * 4/sqrt(5).

    At scale 1 every vertex triple has width exactly 2 (the tight type
    pairs two adjacent vertices: sqrt(5)/2 times the circumradius),
    while the full set has width sqrt(5) + 1 — twice the golden ratio.
    The first vertex sits at angle pi/10: with that orientation the
    analytically-tight triples also evaluate to at most 2 in doubles.
    """
    r = scale * PENTAGON_CIRCUMRADIUS
    angles = [math.pi / 10.0 + TWO_PI * j / 5.0 for j in range(5)]
    return PointSet(tuple(Point2(r * math.cos(a), r * math.sin(a)) for a in angles))


def pentagon_lower_bound() -> float:
    """Half the width of the extremal pentagon, after checking its triples.

    Every triple must fit in a slab of width 2 (unit transversal radius,
    up to the float slack); the returned value is then a certified lower
    estimate for the three-set blow-up factor, and equals the golden
    ratio up to rounding.
    """
    ps = extremal_pentagon()
    assert satisfies_T3(ps, 1.0 + DELTA_FP), "pentagon triple exceeded width 2"
    return width(ps) / 2.0


# ---------------------------------------------------------------------------
# three-contact spacing check

def verify_part_a(
    sweep: int = 48,
    randoms: int = 256,
    tol: float = 1e-6,
    delta_fp: float = DELTA_FP,
    rng: np.random.Generator | None = None,
) -> bool:
    """Check the closed-form three-contact case.

    Two facts are verified numerically: the height (3/2) * golden ratio
    of the triangle spanned by three equally spaced unit vectors exceeds
    2, and the simplex condition for three contact angles on the unit
    circle forces equal 2*pi/3 spacing.  The spacing claim is sampled
    over a deterministic sweep with the first angle fixed at 0 plus
    random triples; the equally spaced triple serves as the positive
    control.
    """
    if not (1.5 * GOLDEN_RATIO > 2.0 + delta_fp):
        return False
    control = AngleTuple((0.0, TWO_PI / 3.0, 2.0 * TWO_PI / 3.0))
    if simplex_condition(control) is not TriState.YES:
        return False
    if abs(max_arc_gap(control) - TWO_PI / 3.0) > tol:
        return False

    def spacing_ok(t: AngleTuple) -> bool:
        if simplex_condition(t) is TriState.YES:
            # max gap >= 2*pi/3 always holds for three angles, so one
            # side of the deviation bound suffices
            return max_arc_gap(t) <= TWO_PI / 3.0 + tol
        return True

    grid = np.linspace(0.0, TWO_PI, sweep, endpoint=False)
    for a2 in grid[1:]:
        for a3 in grid[grid > a2]:
            if not spacing_ok(AngleTuple((0.0, float(a2), float(a3)))):
                return False
    rng = rng or np.random.default_rng(20260311)
    for _ in range(randoms):
        a = np.sort(rng.uniform(0.0, TWO_PI, 3))
        if a[0] < a[1] < a[2] and not spacing_ok(AngleTuple(tuple(a))):
            return False
    return True


# ---------------------------------------------------------------------------
# certificate validation

_CONFIG_KEYS = frozenset(
    ["n0", "depth_cap", "region_depth", "region_min_frac", "rho",
     "delta_fp", "center_check_n"]
)
_VERDICTS = (VERDICT_EMPTY, VERDICT_DEPTH_CAP, VERDICT_EXHAUSTED)


def validate_certificate(cert: Certificate) -> None:
    """Raise InconsistentInputs unless the certificate is self-consistent.

    Checks: known mode and verdict, config digest, per-round cube
    conservation, the exact initial-enumeration count, subdivision
    bounds between rounds, reasons admissible for the mode, and the
    survivor listing matching the verdict.
    """
    def bad(msg: str):
        raise InconsistentInputs(
            f"certificate {cert.mode} ({cert.r1}, {cert.r2}): {msg}")

    if cert.mode not in MODES:
        bad(f"unknown mode {cert.mode!r}")
    if cert.verdict not in _VERDICTS:
        bad(f"unknown verdict {cert.verdict!r}")
    if set(cert.config) != _CONFIG_KEYS:
        bad("unexpected config fields")
    if cert.config_hash != config_hash_of(cert.mode, cert.r1, cert.r2, cert.config):
        bad("config hash mismatch")
    if not cert.rounds:
        bad("no rounds recorded")
    if cert.wall_seconds < 0:
        bad("negative wall time")
    k = MODE_K[cert.mode]
    n0 = int(cert.config["n0"])
    forbidden = {
        MODE_LEMMA15: ("LargeArc", "RegionVerified", "CenterCheckPassed"),
        MODE_GRID_B: ("CenterCheckPassed",),
        MODE_GRID_C: (),
    }[cert.mode]
    for t, r in enumerate(cert.rounds):
        if r.n != n0 << t:
            bad(f"round {t} resolution {r.n} != {n0 << t}")
        if set(r.pruned) != set(REASON_ORDER):
            bad(f"round {t} has unexpected prune reasons")
        if any(v < 0 for v in r.pruned.values()) or r.subdivided < 0 or r.cubes_in < 0:
            bad(f"round {t} has negative counts")
        if r.cubes_in != sum(r.pruned.values()) + r.subdivided:
            bad(f"round {t} counts do not balance")
        if any(r.pruned[name] for name in forbidden):
            bad(f"round {t} uses a reason foreign to mode {cert.mode}")
    if cert.rounds[0].cubes_in != initial_cube_count(k, n0):
        bad("initial enumeration count mismatch")
    for t in range(len(cert.rounds) - 1):
        prev, nxt = cert.rounds[t], cert.rounds[t + 1]
        if prev.subdivided == 0:
            bad(f"round {t} left nothing to subdivide yet round {t + 1} exists")
        if not prev.subdivided <= nxt.cubes_in <= prev.subdivided * (1 << k):
            bad(f"round {t + 1} cube count outside subdivision bounds")
    last = cert.rounds[-1]
    if cert.verdict == VERDICT_EMPTY:
        if last.subdivided != 0 or cert.survivors is not None:
            bad("Empty verdict with survivors")
    else:
        if cert.verdict == VERDICT_EXHAUSTED and cert.mode != MODE_GRID_C:
            bad("Exhausted verdict outside grid-c")
        if cert.survivors is None or cert.survivors_n != last.n:
            bad("survivor listing missing or at the wrong resolution")
        if len(cert.survivors) != last.subdivided:
            bad("survivor count disagrees with the final round")
        for p in cert.survivors:
            if len(p) != k or any(not 0 <= x < last.n for x in p) or list(p) != sorted(p):
                bad(f"malformed survivor {p}")


def load_certificate(path: str | Path) -> Certificate:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InconsistentInputs(f"cannot read certificate {path}: {exc}") from exc
    try:
        return Certificate.from_json_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InconsistentInputs(f"malformed certificate {path}: {exc}") from exc


def synthetic_certificate(
    mode: str, r1: float, r2: float, n0: int | None = None,
    depth_cap: int | None = None,
) -> Certificate:
    """A minimal self-consistent Empty certificate, for assembly tests.

    The accounting claims every initial cube was pruned by the sign
    functional in round zero; all structural validation passes, but the
    verdict is fabricated — never feed these to anything but tests.
    """
    prof_n0, prof_cap = FULL_PROFILES[mode]
    n0 = prof_n0 if n0 is None else n0
    depth_cap = prof_cap if depth_cap is None else depth_cap
    k = MODE_K[mode]
    total = initial_cube_count(k, n0)
    echo = {
        "n0": n0,
        "depth_cap": depth_cap,
        "region_depth": 9,
        "region_min_frac": 1.0 / 2048.0,
        "rho": GOLDEN_RATIO,
        "delta_fp": DELTA_FP,
        "center_check_n": 1920,
    }
    pruned = {name: 0 for name in REASON_ORDER}
    pruned["JohnInfeasible"] = total
    return Certificate(
        config_hash=config_hash_of(mode, float(r1), float(r2), echo),
        mode=mode,
        r1=float(r1),
        r2=float(r2),
        config=echo,
        rounds=[RoundStats(n=n0, cubes_in=total, pruned=pruned, subdivided=0)],
        verdict=VERDICT_EMPTY,
        survivors=None,
        survivors_n=None,
        wall_seconds=0.0,
    )


# ---------------------------------------------------------------------------
# bound assembly

@dataclass(frozen=True)
class Inequality:
    label: str
    lhs: float
    rhs: float
    holds: bool


def inequality_chain(delta_fp: float = DELTA_FP) -> list[Inequality]:
    """The closed-form inequalities gluing campaign verdicts into 1.645.

    All comparisons are strict with the float slack subtracted from the
    right-hand side.  The third entry is the worst-case displacement of
    a contact point between a terminal-resolution grid angle and the
    true angle, with major semi-axis at most 3.
    """
    tau = GOLDEN_RATIO

    def ineq(label, lhs, rhs):
        return Inequality(label, lhs, rhs, lhs < rhs - delta_fp)

    return [
        ineq("minor-axis rounding: (1.635/1.62) * tau < 1.635",
             (1.635 / 1.62) * tau, 1.635),
        ineq("shrunk-axis comparison: (1.635/(0.995*1.62)) * tau < 1.645",
             (1.635 / (0.995 * 1.62)) * tau, 1.645),
        ineq("terminal angle budget: 3 * pi / 1920 < 0.005",
             3.0 * math.pi / 1920.0, 0.005),
    ]


@dataclass
class BoundReport:
    status: str  # "Complete" | "Partial"
    bound: Optional[float]
    part_a_ok: bool
    lemma15_ok: bool
    grid_step: float
    required_pairs: int
    grid_b_verified: int
    grid_c_verified: int
    inequalities: list[Inequality] = field(default_factory=list)
    gaps: list[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.status == "Complete"

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "bound": self.bound,
            "part_a_ok": self.part_a_ok,
            "lemma15_ok": self.lemma15_ok,
            "grid": {
                "step": self.grid_step,
                "required_pairs": self.required_pairs,
                "grid_b_verified": self.grid_b_verified,
                "grid_c_verified": self.grid_c_verified,
            },
            "inequalities": [
                {"label": q.label, "lhs": q.lhs, "rhs": q.rhs, "holds": q.holds}
                for q in self.inequalities
            ],
            "gaps": list(self.gaps),
        }


def _summarize_missing(label: str, missing: list[tuple[float, float]],
                       gaps: list[str], limit: int = 8) -> None:
    if not missing:
        return
    shown = ", ".join(f"({a:g}, {b:g})" for a, b in missing[:limit])
    more = "" if len(missing) <= limit else f", … {len(missing) - limit} more"
    gaps.append(f"{label}: {len(missing)} pair(s) unverified: {shown}{more}")


def assemble_bound(
    results: Iterable[Certificate],
    grid: PairGrid | None = None,
    part_a: bool | None = None,
    delta_fp: float = DELTA_FP,
) -> BoundReport:
    """Combine campaign certificates into the final bound report.

    Every certificate is structurally validated first; a broken one
    raises InconsistentInputs.  ``Complete`` (bound 1.645) requires the
    three-contact check, an Empty lemma15 certificate at (3, 1.62), an
    Empty grid-b and grid-c certificate for every grid pair, and the
    inequality chain; anything short of that yields ``Partial`` with an
    explicit gap list and no bound.
    """
    grid = grid if grid is not None else PairGrid()
    certs = list(results)
    for c in certs:
        validate_certificate(c)
    if part_a is None:
        part_a = verify_part_a()
    required = enumerate_pair_grid(grid, delta_fp)
    required_keys = {
        (grid.multiple_index(a, delta_fp), grid.multiple_index(b, delta_fp))
        for a, b in required
    }
    got: dict[str, set] = {MODE_GRID_B: set(), MODE_GRID_C: set()}
    lemma15_ok = False
    for c in certs:
        if c.verdict != VERDICT_EMPTY:
            continue
        if c.mode == MODE_LEMMA15:
            if (abs(c.r1 - LEMMA15_R1) <= delta_fp
                    and abs(c.r2 - LEMMA15_R2) <= delta_fp):
                lemma15_ok = True
        else:
            key = (grid.multiple_index(c.r1, delta_fp),
                   grid.multiple_index(c.r2, delta_fp))
            if None not in key and key in required_keys:
                got[c.mode].add(key)
    gaps: list[str] = []
    if not part_a:
        gaps.append("three-contact spacing check failed")
    if not lemma15_ok:
        gaps.append(
            f"lemma15 campaign at ({LEMMA15_R1:g}, {LEMMA15_R2:g}) missing or unverified")
    for mode, label in ((MODE_GRID_B, "grid-b"), (MODE_GRID_C, "grid-c")):
        missing = [
            (a, b) for a, b in required
            if (grid.multiple_index(a, delta_fp),
                grid.multiple_index(b, delta_fp)) not in got[mode]
        ]
        _summarize_missing(label, missing, gaps)
    ineqs = inequality_chain(delta_fp)
    for q in ineqs:
        if not q.holds:
            gaps.append(f"inequality failed: {q.label}")
    complete = not gaps
    return BoundReport(
        status="Complete" if complete else "Partial",
        bound=1.645 if complete else None,
        part_a_ok=part_a,
        lemma15_ok=lemma15_ok,
        grid_step=grid.step,
        required_pairs=len(required),
        grid_b_verified=len(got[MODE_GRID_B]),
        grid_c_verified=len(got[MODE_GRID_C]),
        inequalities=ineqs,
        gaps=gaps,
    )
