#!/usr/bin/env python3
"""Run the desk-scale campaign suite and assemble the bound report.

Desk profiles trade resolution for wall time: the five-point campaign
runs at the fallback minor axis 1.70 with a shallow cap, and the pair
grid uses step 0.15 with n0 = 24 / depth cap 4 / region depth 8.  Every
certificate is written to the output directory; the final report over
the coarse grid is printed to stdout.

The full-resolution profiles live in run_paper_scale.py.
"""
import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from transversal_cert.certify import (  # noqa: E402
    LEMMA15_R1,
    LEMMA15_R2,
    PairGrid,
    assemble_bound,
    enumerate_pair_grid,
)
from transversal_cert.search import CampaignConfig, run_campaign  # noqa: E402


def progress(info: dict) -> None:
    pruned = " ".join(f"{k}={v}" for k, v in info["pruned"].items() if v)
    print(f"  round {info['round']}: n={info['n']} cubes={info['cubes_in']} "
          f"survivors={info['survivors']} {pruned}".rstrip(), file=sys.stderr)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="desk-certificates",
                    help="directory for certificate JSON files")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--grid-step", type=float, default=0.15)
    ap.add_argument("--lemma15-r2", type=float, default=1.70,
                    help="minor axis for the five-point campaign "
                         "(1.62 reproduces the full claim, 1.70 is the "
                         "fast desk fallback)")
    ap.add_argument("--lemma15-cap", type=int, default=3)
    ap.add_argument("--skip-grid-c", action="store_true",
                    help="run only lemma15 and grid-b (grid-c desk runs "
                         "terminate at the first center-check round)")
    ap.add_argument("--quiet", action="store_true")
    args = ap.parse_args()

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    prog = None if args.quiet else progress
    certs = []

    t0 = time.monotonic()
    cfg = CampaignConfig(mode="lemma15", r1=LEMMA15_R1, r2=args.lemma15_r2,
                         n0=60, depth_cap=args.lemma15_cap,
                         threads=args.threads)
    print(f"lemma15 ({cfg.r1:g}, {cfg.r2:g}) n0={cfg.n0} cap={cfg.depth_cap}",
          file=sys.stderr)
    cert = run_campaign(cfg, progress=prog)
    (out_dir / f"lemma15-r2_{cfg.r2:.3f}.json").write_text(cert.to_json())
    certs.append(cert)
    print(f"lemma15: {cert.verdict} ({cert.wall_seconds:.1f}s)", file=sys.stderr)

    grid = PairGrid(step=args.grid_step)
    pairs = enumerate_pair_grid(grid)
    modes = ["grid-b"] if args.skip_grid_c else ["grid-b", "grid-c"]
    for mode in modes:
        for r1, r2 in pairs:
            cfg = CampaignConfig(mode=mode, r1=r1, r2=r2, n0=24, depth_cap=4,
                                 region_depth=8, center_check_n=384,
                                 threads=args.threads)
            print(f"{mode} ({r1:g}, {r2:g})", file=sys.stderr)
            cert = run_campaign(cfg, progress=prog)
            name = f"{mode}-r1_{r1:.3f}-r2_{r2:.3f}.json"
            (out_dir / name).write_text(cert.to_json())
            certs.append(cert)
            print(f"{mode} ({r1:g}, {r2:g}): {cert.verdict} "
                  f"({cert.wall_seconds:.1f}s)", file=sys.stderr)

    report = assemble_bound(certs, grid=grid)
    print(json.dumps(report.to_json_dict(), indent=2))
    print(f"total {time.monotonic() - t0:.1f}s", file=sys.stderr)
    return 0 if report.complete else 2


if __name__ == "__main__":
    sys.exit(main())
