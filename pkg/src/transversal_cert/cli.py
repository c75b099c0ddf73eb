"""Command-line front end.

Subcommands:

* ``check-tuple``  - probe one 3-5 angle tuple: triple widths, sign
                     functional(s), arc gaps, and which prune rule (if
                     any) fires at a chosen resolution;
* ``verify``       - run a campaign (one semi-axis pair, or a sweep
                     over the whole pair grid) and write certificates;
* ``region-dump``  - write the quadtree outer cover of an admissible
                     region as CSV;
* ``report``       - assemble certificates into the final bound report.

Exit codes: 0 for verified outcomes (Empty / Verified / Complete), 2
for honest failures (DepthCapReached, Exhausted, Partial, region
Unknown), 1 for errors.  Codes depend on verdicts only, never on
timing or thread count.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .certify import (
    FULL_PROFILES,
    LEMMA15_R1,
    LEMMA15_R2,
    InconsistentInputs,
    PairGrid,
    assemble_bound,
    enumerate_pair_grid,
    load_certificate,
)
from .geom import DELTA_FP, GOLDEN_RATIO, Ellipse, Point2, ellipse_points, width
from .john import (
    TWO_PI,
    AngleTuple,
    F,
    NotOrdered,
    five_point_values,
    max_arc_gap,
)
from .region import RegionQuery, RegionStatus, cells_to_csv, outer_approx, region_satisfies_T
from .search import (
    MODE_GRID_B,
    MODE_GRID_C,
    MODE_K,
    MODE_LEMMA15,
    MODES,
    VERDICT_EMPTY,
    CampaignConfig,
    ConfigError,
    classify_cubes,
    _REASON_BY_CODE,
    run_campaign,
)

@dataclass(frozen=True)
class RunConfig:
    """Effective settings of one ``verify`` invocation."""

    mode: str
    r1: Optional[float]
    r2: Optional[float]
    pair_grid_step: Optional[float]
    n0: int
    depth_cap: int
    region_depth: int
    center_check_n: int
    delta_fp: float
    threads: int
    chunk_size: int
    checkpoint: Optional[str]
    resume: bool
    out: Optional[str]

    def campaign(self, r1: float, r2: float) -> CampaignConfig:
        return CampaignConfig(
            mode=self.mode, r1=float(r1), r2=float(r2), n0=self.n0,
            depth_cap=self.depth_cap, region_depth=self.region_depth,
            delta_fp=self.delta_fp, center_check_n=self.center_check_n,
            threads=self.threads, chunk_size=self.chunk_size,
        )


def _print_progress(info: dict) -> None:
    pruned = " ".join(f"{k}={v}" for k, v in info["pruned"].items() if v)
    tag = " [center check]" if info.get("center_check") else ""
    print(
        f"round {info['round']}: n={info['n']} cubes={info['cubes_in']} "
        f"survivors={info['survivors']}{tag} {pruned}".rstrip(),
        file=sys.stderr,
    )


def cmd_check_tuple(args: argparse.Namespace) -> int:
    angles = sorted(float(a) for a in args.angles)
    k = len(angles)
    try:
        t = AngleTuple(tuple(angles))
        t.require_ordered()
    except (ValueError, NotOrdered) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    mode = args.mode
    if mode is None and k in (4, 5):
        mode = MODE_GRID_B if k == 4 else MODE_GRID_C
    pts = ellipse_points(args.r1, args.r2, np.array(angles))
    print(f"angles ({k}): " + " ".join(f"{a:.6f}" for a in angles))
    print(f"ellipse semi-axes: r1={args.r1:g} r2={args.r2:g}")
    from itertools import combinations

    for idx in combinations(range(k), 3):
        w = width(pts[list(idx)])
        print(f"triple {idx}: width {w:.9f}")
    if k == 4:
        print(f"F = {F(*t.alphas):.9f}")
    if k == 5:
        vals = five_point_values(t)
        print("five values: " + " ".join(f"{v:+.9f}" for v in vals))
    print(f"max arc gap: {max_arc_gap(t):.9f} (2*pi/3 = {TWO_PI / 3.0:.9f})")
    if mode is not None and MODE_K[mode] == k:
        n = args.n
        p = np.minimum((np.array(angles) * n / TWO_PI).astype(np.int64), n - 1)
        code = int(classify_cubes(p.reshape(1, -1), n, mode, args.r1, args.r2)[0])
        reason = _REASON_BY_CODE.get(code)
        cube = " ".join(str(int(x)) for x in p)
        if reason is None:
            print(f"prune at n={n} (mode {mode}, cube {cube}): none")
        else:
            print(f"prune at n={n} (mode {mode}, cube {cube}): {reason.value}")
    return 0


def _write_certificate(cert, out: Optional[str]) -> None:
    text = cert.to_json()
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_verify(args: argparse.Namespace) -> int:
    prof_n0, prof_cap = FULL_PROFILES[args.mode]
    rc = RunConfig(
        mode=args.mode,
        r1=args.r1,
        r2=args.r2,
        pair_grid_step=args.pair_grid_step,
        n0=args.n0 if args.n0 is not None else prof_n0,
        depth_cap=args.depth_cap if args.depth_cap is not None else prof_cap,
        region_depth=args.region_depth,
        center_check_n=args.center_check_n,
        delta_fp=args.delta_fp,
        threads=args.threads,
        chunk_size=args.chunk_size,
        checkpoint=args.checkpoint,
        resume=args.resume,
        out=args.out,
    )
    progress = None if args.quiet else _print_progress
    try:
        if rc.pair_grid_step is not None:
            if rc.mode == MODE_LEMMA15:
                raise ConfigError("pair-grid sweeps apply to grid-b/grid-c only")
            out_dir = Path(rc.out) if rc.out else Path("certificates")
            out_dir.mkdir(parents=True, exist_ok=True)
            pairs = enumerate_pair_grid(PairGrid(step=rc.pair_grid_step))
            worst = 0
            for r1, r2 in pairs:
                cfg = rc.campaign(r1, r2)
                cert = run_campaign(cfg, progress=progress)
                name = f"{rc.mode}-r1_{r1:.3f}-r2_{r2:.3f}.json"
                (out_dir / name).write_text(cert.to_json())
                print(f"{name}: {cert.verdict}", file=sys.stderr)
                if cert.verdict != VERDICT_EMPTY:
                    worst = 2
            return worst
        r1 = rc.r1 if rc.r1 is not None else (
            LEMMA15_R1 if rc.mode == MODE_LEMMA15 else None)
        r2 = rc.r2 if rc.r2 is not None else (
            LEMMA15_R2 if rc.mode == MODE_LEMMA15 else None)
        if r1 is None or r2 is None:
            raise ConfigError(
                "grid modes need --r1 and --r2 (or --pair-grid-step for a sweep)")
        cfg = rc.campaign(r1, r2)
        cert = run_campaign(cfg, checkpoint_path=rc.checkpoint,
                            resume=rc.resume, progress=progress)
        _write_certificate(cert, rc.out)
        return 0 if cert.verdict == VERDICT_EMPTY else 2
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def cmd_region_dump(args: argparse.Namespace) -> int:
    try:
        angles = np.sort(np.array([float(a) for a in args.angles]))
        z = ellipse_points(args.r1, args.r2, angles)
        q = RegionQuery(z, args.eps, Ellipse(Point2(0.0, 0.0), args.r1, args.r2),
                        delta_fp=args.delta_fp)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    oa = outer_approx(q, max_depth=args.depth)
    csv = cells_to_csv(oa)
    if args.out is None:
        sys.stdout.write(csv)
    else:
        Path(args.out).write_text(csv)
    print(
        f"cells={len(oa.cells)} tested={oa.tested} kept={oa.kept} "
        f"discarded={oa.discarded} empty={oa.empty}",
        file=sys.stderr,
    )
    if args.rho is not None:
        status = region_satisfies_T(q, args.rho, max_depth=args.depth)
        print(f"status vs rho={args.rho:g}: {status.name}", file=sys.stderr)
        return 0 if status is RegionStatus.VERIFIED else 2
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    try:
        certs = [load_certificate(p) for p in args.certificates]
        report = assemble_bound(certs, grid=PairGrid(step=args.grid_step))
    except InconsistentInputs as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(report.to_json_dict(), indent=2))
    return 0 if report.complete else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transversal-cert",
        description="Certified campaigns bounding the three-set transversal "
                    "blow-up factor of the disk.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-tuple", help="probe one angle tuple")
    p.add_argument("angles", nargs="+", metavar="ANGLE",
                   help="3-5 contact angles in [0, 2*pi)")
    p.add_argument("--r1", type=float, default=1.0)
    p.add_argument("--r2", type=float, default=1.0)
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--n", type=int, default=120,
                   help="resolution for the prune probe")
    p.set_defaults(func=cmd_check_tuple, min_arity=3, max_arity=5)

    p = sub.add_parser("verify", help="run a pruning campaign")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--r1", type=float, default=None)
    p.add_argument("--r2", type=float, default=None)
    p.add_argument("--pair-grid-step", type=float, nargs="?", const=0.015,
                   default=None, help="sweep the whole pair grid at this step")
    p.add_argument("--n0", type=int, default=None,
                   help="base resolution (default 60 for lemma15, 120 for grids)")
    p.add_argument("--depth-cap", type=int, default=None,
                   help="subdivision rounds after round 0 (defaults mirror "
                        "the full-scale profiles)")
    p.add_argument("--region-depth", type=int, default=9)
    p.add_argument("--center-check-n", type=int, default=1920)
    p.add_argument("--delta-fp", type=float, default=DELTA_FP)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--chunk-size", type=int, default=1 << 17)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--out", default=None,
                   help="certificate path (single pair) or directory (sweep)")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("region-dump", help="dump a region's outer cover as CSV")
    p.add_argument("angles", nargs="+", metavar="ANGLE",
                   help="1-5 anchor contact angles")
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--r2", type=float, required=True)
    p.add_argument("--eps", type=float, default=DELTA_FP)
    p.add_argument("--rho", type=float, default=None,
                   help="also report Verified/Unknown against this radius")
    p.add_argument("--depth", type=int, default=9)
    p.add_argument("--delta-fp", type=float, default=DELTA_FP)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_region_dump)

    p = sub.add_parser("report", help="assemble certificates into a bound report")
    p.add_argument("certificates", nargs="+", metavar="CERT.json")
    p.add_argument("--grid-step", type=float, default=0.015)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check-tuple" and not 3 <= len(args.angles) <= 5:
        parser.error("check-tuple takes 3 to 5 angles")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
