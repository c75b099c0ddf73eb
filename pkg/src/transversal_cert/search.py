"""Branch-and-bound over angle cubes with certified pruning rules.

The parameter space is the set of ordered k-tuples of contact angles on
an ellipse with semi-axes (r1, r2).  At resolution n the circle splits
into n arcs I_p = [2 p pi / n, 2 (p+1) pi / n]; a cube is an ordered
index tuple p_1 <= ... <= p_k.  Each round, every cube is either pruned
by a rule whose defining inequality provably holds for *every* tuple in
the cube (margins 3 pi / n for the sign functional, r1 pi / n for point
displacement on the boundary, one arc 2 pi / n for gaps, all guarded by
the global float slack), or subdivided into its ordered children at
resolution 2 n.  A campaign certificate records per-round counts by
prune reason plus the final verdict:

* ``Empty``            - some round pruned every remaining cube;
* ``DepthCapReached``  - the round cap interrupted the schedule, the
                         surviving cubes are listed for audit;
* ``Exhausted``        - (grid-c only) the terminal center-check round
                         ran and some centers could not be excluded.

Rules are evaluated cheapest-first: arc gap, then the sign-functional
margin, then the transversal test, then the region cover.  Any order is
sound; fixing one makes the per-reason tallies deterministic.  Chunks of
a round may be classified concurrently, and results are merged in cube
index order, so certificates are byte-identical for any thread count.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, NamedTuple, Optional

import numpy as np

from .geom import (
    DELTA_FP,
    GOLDEN_RATIO,
    Ellipse,
    Point2,
    any_triple_wider,
    ellipse_points,
    max_triple_width,
)
from .john import TWO_PI, F_batch, arc_gaps_batch, five_values_raw
from .region import region_batch_verify

MODE_LEMMA15 = "lemma15"
MODE_GRID_B = "grid-b"
MODE_GRID_C = "grid-c"
MODES = (MODE_LEMMA15, MODE_GRID_B, MODE_GRID_C)
MODE_K = {MODE_LEMMA15: 5, MODE_GRID_B: 4, MODE_GRID_C: 5}

SCHEMA_VERSION = 1
CHECKPOINT_MAGIC = "# transversal-cert checkpoint v1"

VERDICT_EMPTY = "Empty"
VERDICT_EXHAUSTED = "Exhausted"
VERDICT_DEPTH_CAP = "DepthCapReached"


class ConfigError(ValueError):
    """Invalid campaign configuration or checkpoint mismatch."""


class PruneReason(Enum):
    TRANSVERSAL_VIOLATED = "TransversalViolated"
    JOHN_INFEASIBLE = "JohnInfeasible"
    LARGE_ARC = "LargeArc"
    REGION_VERIFIED = "RegionVerified"
    CENTER_CHECK_PASSED = "CenterCheckPassed"


REASON_ORDER = tuple(r.value for r in PruneReason)
# internal int8 codes: 0 = not pruned, then 1-based position in REASON_ORDER
_REASON_BY_CODE = {i + 1: r for i, r in enumerate(PruneReason)}
_CODE_TRANSVERSAL, _CODE_JOHN, _CODE_ARC, _CODE_REGION, _CODE_CENTER = 1, 2, 3, 4, 5


@dataclass(frozen=True)
class AngleCube:
    """Ordered index tuple at resolution n: arcs [2 p pi / n, 2 (p+1) pi / n]."""

    k: int
    n: int
    p: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))
        if self.k not in (4, 5):
            raise ValueError(f"cube dimension must be 4 or 5, got {self.k}")
        if len(self.p) != self.k:
            raise ValueError("index tuple length must equal k")
        if self.n < 1:
            raise ValueError("resolution n must be >= 1")
        if any(not 0 <= x < self.n for x in self.p):
            raise ValueError(f"indices must lie in [0, {self.n}): {self.p}")
        if any(self.p[i] > self.p[i + 1] for i in range(self.k - 1)):
            raise ValueError(f"indices must be non-decreasing: {self.p}")


def center_angles(c: AngleCube) -> tuple[float, ...]:
    """Arc midpoints 2 (p_i + 1/2) pi / n."""
    return tuple((p + 0.5) * TWO_PI / c.n for p in c.p)


def initial_cubes(k: int, n0: int) -> Iterator[AngleCube]:
    """All ordered index tuples at the base resolution, lexicographic order."""
    if k not in (4, 5):
        raise ValueError("k must be 4 or 5")
    if n0 < 6:
        raise ValueError("n0 must be >= 6")
    for p in itertools.combinations_with_replacement(range(n0), k):
        yield AngleCube(k, n0, p)


def initial_cube_count(k: int, n0: int) -> int:
    return math.comb(n0 + k - 1, k)


def initial_cube_arrays(
    k: int, n0: int, chunk_size: int, dtype=np.int32
) -> Iterator[np.ndarray]:
    """The same enumeration as ``initial_cubes``, as (m, k) index arrays."""
    it = itertools.combinations_with_replacement(range(n0), k)
    while True:
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(it, chunk_size)),
            dtype=dtype,
        )
        if flat.size == 0:
            return
        yield flat.reshape(-1, k)


def subdivide_arrays(P: np.ndarray) -> np.ndarray:
    """Ordered children of each cube at doubled resolution, lexsorted.

    Children pick p' in {2p, 2p+1} per coordinate; only non-decreasing
    combinations survive.  Distinct parents never share a child, so the
    result has no duplicates.
    """
    m, k = P.shape
    outs = []
    for bits in range(1 << k):
        e = np.array([(bits >> i) & 1 for i in range(k)], dtype=P.dtype)
        child = 2 * P + e
        ok = np.all(child[:, :-1] <= child[:, 1:], axis=1)
        outs.append(child[ok])
    ch = np.concatenate(outs)
    order = np.lexsort(tuple(ch[:, c] for c in range(k - 1, -1, -1)))
    return ch[order]


def subdivide(c: AngleCube) -> list[AngleCube]:
    """Ordered children of one cube at resolution 2n (lexicographic order)."""
    rows = subdivide_arrays(np.array([c.p], dtype=np.int64))
    return [AngleCube(c.k, 2 * c.n, tuple(int(x) for x in row)) for row in rows]


def classify_cubes(
    P: np.ndarray,
    n: int,
    mode: str,
    r1: float,
    r2: float,
    *,
    delta_fp: float = DELTA_FP,
    rho: float = GOLDEN_RATIO,
    region_depth: int = 9,
    region_min_half_side: float | None = None,
) -> np.ndarray:
    """Prune-rule codes (0 = survivor) for a batch of cubes at resolution n.

    Rule margins make each positive code a certificate for the whole cube:

    * arc (grid modes): the center gap exceeds 2 pi/3 by more than one
      full arc, so every tuple in the cube keeps a gap > 2 pi/3;
    * sign functional: |F| at the center beats 3 pi/n (grid-b), or the
      five-entry vector is sign-split beyond +-3 pi/n (five-point modes),
      so the defect survives any in-cube perturbation;
    * transversal: some center triple is wider than 2 (1 + r1 pi/n), so
      after moving each point along the boundary by at most r1 pi/n the
      triple is still wider than 2;
    * region (grid modes): the admissible region around the center
      anchors, inflated by eps = r1 pi/n, has certified width <= 2 rho.
    """
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}")
    P = np.asarray(P)
    m = P.shape[0]
    beta = (P.astype(np.float64) + 0.5) * (TWO_PI / n)
    reason = np.zeros(m, dtype=np.int8)
    if m == 0:
        return reason
    margin_f = 3.0 * math.pi / n + delta_fp
    grid_mode = mode in (MODE_GRID_B, MODE_GRID_C)
    if grid_mode:
        arc = arc_gaps_batch(beta) > (TWO_PI / 3.0 + TWO_PI / n + delta_fp)
        reason[arc] = _CODE_ARC
    if mode == MODE_GRID_B:
        john = np.abs(F_batch(beta)) > margin_f
    else:
        fv = five_values_raw(beta)
        john = (fv.max(axis=-1) > margin_f) & (fv.min(axis=-1) < -margin_f)
    reason[(reason == 0) & john] = _CODE_JOHN
    rem = np.flatnonzero(reason == 0)
    if rem.size == 0:
        return reason
    pts = ellipse_points(r1, r2, beta[rem])
    thr = 2.0 * (1.0 + r1 * math.pi / n + delta_fp)
    viol = any_triple_wider(pts, thr)
    reason[rem[viol]] = _CODE_TRANSVERSAL
    if grid_mode:
        rem2 = rem[~viol]
        if rem2.size:
            ell = Ellipse(Point2(0.0, 0.0), r1, r2)
            eps = r1 * math.pi / n + delta_fp
            ver = region_batch_verify(
                pts[~viol], eps, ell, rho,
                max_depth=region_depth,
                min_half_side=region_min_half_side,
                delta_fp=delta_fp,
            )
            reason[rem2[ver]] = _CODE_REGION
    return reason


def center_check_cubes(
    P: np.ndarray,
    n: int,
    r1: float,
    r2: float,
    *,
    delta_fp: float = DELTA_FP,
    rho: float = GOLDEN_RATIO,
    region_depth: int = 9,
    region_min_half_side: float | None = None,
) -> np.ndarray:
    """Terminal grid-c round: test each cube's exact center tuple.

    At the terminal resolution the discrete angle set of interest is
    exactly the set of cube centers, so margins collapse to the float
    slack.  A center passes (code 5) when any of the following excludes
    it: a triple wider than 2, a sign-split five-entry vector, an arc
    gap beyond 2 pi/3, or a verified admissible region.
    """
    P = np.asarray(P)
    m = P.shape[0]
    reason = np.zeros(m, dtype=np.int8)
    if m == 0:
        return reason
    beta = (P.astype(np.float64) + 0.5) * (TWO_PI / n)
    pts = ellipse_points(r1, r2, beta)
    ok = any_triple_wider(pts, 2.0 * (1.0 + delta_fp))
    fv = five_values_raw(beta)
    ok |= (fv.max(axis=-1) > delta_fp) & (fv.min(axis=-1) < -delta_fp)
    ok |= arc_gaps_batch(beta) > (TWO_PI / 3.0 + delta_fp)
    ell = Ellipse(Point2(0.0, 0.0), r1, r2)
    rest = np.flatnonzero(~ok)
    if rest.size:
        ver = region_batch_verify(
            pts[rest], delta_fp, ell, rho,
            max_depth=region_depth,
            min_half_side=region_min_half_side,
            delta_fp=delta_fp,
        )
        ok[rest[ver]] = True
    reason[ok] = _CODE_CENTER
    return reason


def prune_lemma15(
    c: AngleCube, r1: float, r2: float, delta_fp: float = DELTA_FP
) -> Optional[PruneReason]:
    """Five-point mode rules for one cube; None when the cube survives."""
    if c.k != 5:
        raise ValueError("lemma15 pruning needs k = 5 cubes")
    code = int(
        classify_cubes(
            np.array([c.p], dtype=np.int64), c.n, MODE_LEMMA15, r1, r2,
            delta_fp=delta_fp,
        )[0]
    )
    return _REASON_BY_CODE.get(code)


def prune_grid_b(
    c: AngleCube,
    r1: float,
    r2: float,
    rho: float = GOLDEN_RATIO,
    *,
    region_depth: int = 9,
    region_min_half_side: float | None = None,
    delta_fp: float = DELTA_FP,
) -> Optional[PruneReason]:
    """Four-point grid rules for one cube; None when the cube survives."""
    if c.k != 4:
        raise ValueError("grid-b pruning needs k = 4 cubes")
    code = int(
        classify_cubes(
            np.array([c.p], dtype=np.int64), c.n, MODE_GRID_B, r1, r2,
            delta_fp=delta_fp, rho=rho, region_depth=region_depth,
            region_min_half_side=region_min_half_side,
        )[0]
    )
    return _REASON_BY_CODE.get(code)


@dataclass(frozen=True)
class CampaignConfig:
    """Everything a campaign run depends on semantically, plus run knobs.

    ``threads``, ``chunk_size`` and ``sample_target`` affect scheduling
    and diagnostics only, never results, and are excluded from the
    config digest.
    """

    mode: str
    r1: float
    r2: float
    n0: int
    depth_cap: int
    region_depth: int = 9
    region_min_frac: float = 1.0 / 2048.0
    rho: float = GOLDEN_RATIO
    delta_fp: float = DELTA_FP
    center_check_n: int = 1920
    threads: int = 1
    chunk_size: int = 1 << 17
    sample_target: int = 10_000

    @property
    def k(self) -> int:
        return MODE_K[self.mode]

    @property
    def region_min_half_side(self) -> float:
        return self.r1 * self.region_min_frac

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if not (self.r1 >= self.r2 > 0.0):
            raise ConfigError(f"need r1 >= r2 > 0, got {self.r1}, {self.r2}")
        if self.n0 < 6 or self.n0 % 6 != 0:
            raise ConfigError(f"n0 must be a positive multiple of 6, got {self.n0}")
        if self.depth_cap < 0:
            raise ConfigError("depth_cap must be >= 0")
        if self.region_depth < 0 or self.region_min_frac <= 0.0:
            raise ConfigError("region knobs must be positive")
        if self.rho <= 0.0 or self.delta_fp < 0.0:
            raise ConfigError("rho must be > 0 and delta_fp >= 0")
        if self.threads < 1 or self.chunk_size < 1:
            raise ConfigError("threads and chunk_size must be >= 1")

    def echo(self) -> dict:
        """Effective numeric values recorded inside the certificate."""
        return {
            "n0": self.n0,
            "depth_cap": self.depth_cap,
            "region_depth": self.region_depth,
            "region_min_frac": self.region_min_frac,
            "rho": self.rho,
            "delta_fp": self.delta_fp,
            "center_check_n": self.center_check_n,
        }

    def digest(self) -> str:
        return config_hash_of(self.mode, self.r1, self.r2, self.echo())


def config_hash_of(mode: str, r1: float, r2: float, echo: dict) -> str:
    basis = {
        "schema_version": SCHEMA_VERSION,
        "mode": mode,
        "r1": float(r1),
        "r2": float(r2),
        "config": echo,
    }
    blob = json.dumps(basis, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class RoundStats:
    n: int
    cubes_in: int
    pruned: dict[str, int]
    subdivided: int  # cubes not pruned: advanced to the next round, or
    #                  listed as survivors when the round was terminal

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "cubes_in": self.cubes_in,
            "pruned": {r: int(self.pruned.get(r, 0)) for r in REASON_ORDER},
            "subdivided": self.subdivided,
        }

    @staticmethod
    def from_dict(d: dict) -> "RoundStats":
        return RoundStats(
            n=int(d["n"]),
            cubes_in=int(d["cubes_in"]),
            pruned={r: int(d["pruned"].get(r, 0)) for r in REASON_ORDER},
            subdivided=int(d["subdivided"]),
        )


class PrunedCube(NamedTuple):
    n: int
    p: tuple[int, ...]
    code: int


@dataclass
class Certificate:
    config_hash: str
    mode: str
    r1: float
    r2: float
    config: dict
    rounds: list[RoundStats]
    verdict: str
    survivors: list[tuple[int, ...]] | None
    survivors_n: int | None
    wall_seconds: float
    pruned_sample: list[PrunedCube] = field(default_factory=list, repr=False)

    def to_json_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "config_hash": self.config_hash,
            "mode": self.mode,
            "r1": self.r1,
            "r2": self.r2,
            "config": dict(self.config),
            "rounds": [r.to_dict() for r in self.rounds],
            "verdict": self.verdict,
        }
        if self.survivors is not None:
            out["survivors"] = {
                "n": self.survivors_n,
                "cubes": [list(p) for p in self.survivors],
            }
        out["wall_seconds"] = self.wall_seconds
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @staticmethod
    def from_json_dict(d: dict) -> "Certificate":
        surv = d.get("survivors")
        return Certificate(
            config_hash=d["config_hash"],
            mode=d["mode"],
            r1=float(d["r1"]),
            r2=float(d["r2"]),
            config=dict(d["config"]),
            rounds=[RoundStats.from_dict(r) for r in d["rounds"]],
            verdict=d["verdict"],
            survivors=None if surv is None else [tuple(c) for c in surv["cubes"]],
            survivors_n=None if surv is None else int(surv["n"]),
            wall_seconds=float(d["wall_seconds"]),
        )


class _Reservoir:
    """Deterministic, evenly-thinned sample of pruned cubes.

    Keeps pruned cubes whose campaign-wide prune ordinal is a multiple
    of the current stride; the stride doubles whenever the buffer
    overfills, which keeps previously accepted ordinals consistent.
    Independent of chunking and thread count.
    """

    def __init__(self, cap: int):
        self.cap = max(int(cap), 1)
        self.stride = 1
        self.seen = 0
        self.items: list[PrunedCube] = []

    def feed(self, n: int, P: np.ndarray, reason: np.ndarray) -> None:
        rows = np.flatnonzero(reason)
        if rows.size == 0:
            return
        ordinals = self.seen + np.arange(rows.size, dtype=np.int64)
        take = rows[ordinals % self.stride == 0]
        for row in take:
            self.items.append(
                PrunedCube(n, tuple(int(x) for x in P[row]), int(reason[row]))
            )
        self.seen += int(rows.size)
        while len(self.items) > 2 * self.cap:
            self.items = self.items[::2]
            self.stride *= 2


def _checkpoint_text(cfg: CampaignConfig, round_index: int,
                     rounds: list[RoundStats], chunks: list[np.ndarray]) -> str:
    header = [
        CHECKPOINT_MAGIC,
        f"# config_hash={cfg.digest()}",
        f"# round={round_index}",
        "# rounds=" + json.dumps([r.to_dict() for r in rounds],
                                 separators=(",", ":")),
    ]
    lines = header
    n = cfg.n0 << round_index
    for chunk in chunks:
        for row in chunk:
            lines.append(f"{len(row)} {n} " + " ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def write_checkpoint(path: str, cfg: CampaignConfig, round_index: int,
                     rounds: list[RoundStats], chunks: list[np.ndarray]) -> None:
    with open(path, "w") as fh:
        fh.write(_checkpoint_text(cfg, round_index, rounds, chunks))


def read_checkpoint(
    path: str, cfg: CampaignConfig, dtype
) -> tuple[int, list[RoundStats], list[np.ndarray]]:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CHECKPOINT_MAGIC:
        raise ConfigError(f"not a checkpoint file: {path}")
    meta = {}
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith("# "):
            body_start = i
            break
        if "=" in line:
            key, _, val = line[2:].partition("=")
            meta[key] = val
        body_start = i + 1
    if meta.get("config_hash") != cfg.digest():
        raise ConfigError("checkpoint config hash does not match this configuration")
    round_index = int(meta["round"])
    rounds = [RoundStats.from_dict(d) for d in json.loads(meta.get("rounds", "[]"))]
    expect_n = cfg.n0 << round_index
    rows = []
    for line in lines[body_start:]:
        if not line.strip():
            continue
        parts = line.split()
        k, n = int(parts[0]), int(parts[1])
        p = [int(x) for x in parts[2:]]
        if k != cfg.k or n != expect_n or len(p) != k:
            raise ConfigError(f"checkpoint record inconsistent with config: {line!r}")
        rows.append(p)
    arr = np.array(rows, dtype=dtype).reshape(-1, cfg.k)
    chunks = [arr[i:i + cfg.chunk_size] for i in range(0, len(arr), cfg.chunk_size)]
    return round_index, rounds, chunks


def _classify_round(
    chunks: list[np.ndarray], n: int, cfg: CampaignConfig, is_center: bool
) -> list[np.ndarray]:
    if is_center:
        def job(P):
            return center_check_cubes(
                P, n, cfg.r1, cfg.r2, delta_fp=cfg.delta_fp, rho=cfg.rho,
                region_depth=cfg.region_depth,
                region_min_half_side=cfg.region_min_half_side,
            )
    else:
        def job(P):
            return classify_cubes(
                P, n, cfg.mode, cfg.r1, cfg.r2, delta_fp=cfg.delta_fp,
                rho=cfg.rho, region_depth=cfg.region_depth,
                region_min_half_side=cfg.region_min_half_side,
            )
    if cfg.threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            return list(ex.map(job, chunks))
    return [job(P) for P in chunks]


def run_campaign(
    cfg: CampaignConfig,
    checkpoint_path: str | None = None,
    resume: bool = False,
    progress: Callable[[dict], None] | None = None,
) -> Certificate:
    """Run one campaign to a verdict; see the module docstring for rules."""
    cfg.validate()
    t0 = time.perf_counter()
    n_final = cfg.n0 << cfg.depth_cap
    dtype = np.int16 if 2 * n_final < 2**15 else np.int32
    reservoir = _Reservoir(cfg.sample_target)
    rounds: list[RoundStats] = []
    start_round = 0
    current: list[np.ndarray] | None = None
    if resume:
        if not checkpoint_path:
            raise ConfigError("resume requested without a checkpoint path")
        start_round, rounds, current = read_checkpoint(checkpoint_path, cfg, dtype)
        if start_round > cfg.depth_cap:
            raise ConfigError("checkpoint round exceeds the configured depth cap")
    verdict = VERDICT_DEPTH_CAP
    survivors: list[tuple[int, ...]] | None = None
    survivors_n: int | None = None
    for t in range(start_round, cfg.depth_cap + 1):
        n = cfg.n0 << t
        if current is None:
            chunks = list(initial_cube_arrays(cfg.k, cfg.n0, cfg.chunk_size, dtype))
        else:
            chunks = [c for c in current if len(c)]
        is_center = cfg.mode == MODE_GRID_C and n == cfg.center_check_n
        cubes_in = sum(len(c) for c in chunks)
        reasons = _classify_round(chunks, n, cfg, is_center)
        counts = np.zeros(6, dtype=np.int64)
        for r in reasons:
            counts += np.bincount(r, minlength=6)
        for P, r in zip(chunks, reasons):
            reservoir.feed(n, P, r)
        surv_chunks = [P[r == 0] for P, r in zip(chunks, reasons)]
        nsurv = int(counts[0])
        pruned = {
            name: int(counts[i + 1]) for i, name in enumerate(REASON_ORDER)
        }
        rounds.append(RoundStats(n=n, cubes_in=cubes_in, pruned=pruned,
                                 subdivided=nsurv))
        if progress is not None:
            progress({"round": t, "n": n, "cubes_in": cubes_in,
                      "pruned": pruned, "survivors": nsurv,
                      "center_check": is_center})
        if nsurv == 0:
            verdict = VERDICT_EMPTY
            survivors = None
            break
        if is_center or t == cfg.depth_cap:
            verdict = VERDICT_EXHAUSTED if is_center else VERDICT_DEPTH_CAP
            flat = np.concatenate([c for c in surv_chunks if len(c)])
            survivors = [tuple(int(x) for x in row) for row in flat]
            survivors_n = n
            break
        big = np.concatenate([c for c in surv_chunks if len(c)])
        children = subdivide_arrays(big)
        current = [children[i:i + cfg.chunk_size]
                   for i in range(0, len(children), cfg.chunk_size)]
        if checkpoint_path:
            write_checkpoint(checkpoint_path, cfg, t + 1, rounds, current)
    wall = time.perf_counter() - t0
    return Certificate(
        config_hash=cfg.digest(),
        mode=cfg.mode,
        r1=cfg.r1,
        r2=cfg.r2,
        config=cfg.echo(),
        rounds=rounds,
        verdict=verdict,
        survivors=survivors,
        survivors_n=survivors_n,
        wall_seconds=round(wall, 3),
        pruned_sample=reservoir.items,
    )


def sample_cube_tuples(n: int, p: tuple[int, ...], count: int,
                       rng: np.random.Generator) -> np.ndarray:
    """Uniform ordered angle tuples drawn from a cube's arcs."""
    base = np.asarray(p, dtype=float) * (TWO_PI / n)
    a = base + rng.random((count, len(p))) * (TWO_PI / n)
    a.sort(axis=1)
    return a


def check_pruned_sample(
    item: PrunedCube,
    r1: float,
    r2: float,
    rng: np.random.Generator,
    tuples_per_cube: int = 10,
) -> bool:
    """Re-verify a prune decision on random interior tuples of the cube.

    The margins promise that the defining defect holds *everywhere* in a
    pruned cube, so the margin-free inequality must hold at any sampled
    tuple: triples wider than 2 for the transversal rule, a persistent
    sign defect for the functional rule, a gap beyond 2 pi/3 for the arc
    rule.  Region and center prunes have no per-tuple predicate and pass
    vacuously.
    """
    a = sample_cube_tuples(item.n, item.p, tuples_per_cube, rng)
    if item.code == _CODE_TRANSVERSAL:
        pts = ellipse_points(r1, r2, a)
        return bool(np.all(max_triple_width(pts) > 2.0))
    if item.code == _CODE_JOHN:
        if len(item.p) == 5:
            fv = five_values_raw(a)
            return bool(np.all((fv.max(axis=1) > 0.0) & (fv.min(axis=1) < 0.0)))
        fv = F_batch(a)
        return bool(np.all(fv > 0.0) or np.all(fv < 0.0))
    if item.code == _CODE_ARC:
        return bool(np.all(arc_gaps_batch(a) > TWO_PI / 3.0))
    return True


def soundness_violations(
    cert: Certificate,
    rng: np.random.Generator,
    tuples_per_cube: int = 10,
) -> tuple[int, int]:
    """(checked pair count, violations) over the certificate's prune sample."""
    pairs = 0
    bad = 0
    for item in cert.pruned_sample:
        if item.code in (_CODE_TRANSVERSAL, _CODE_JOHN, _CODE_ARC):
            pairs += tuples_per_cube
            if not check_pruned_sample(item, cert.r1, cert.r2, rng,
                                       tuples_per_cube):
                bad += 1
    return pairs, bad
