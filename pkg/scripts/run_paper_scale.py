#!/usr/bin/env python3
"""Run the full-resolution campaign suite (multi-hour, checkpointed).

Full profiles: the five-point campaign at (3, 1.62) with n0 = 60 and
depth cap 6, then grid-b (n0 = 120, cap 5) and grid-c (n0 = 120, cap 4,
terminal center check at n = 1920) over the 0.015-step pair grid - 2093
pairs per grid mode.  This is the configuration whose Empty verdicts,
combined with the closed-form inequality chain, yield the 1.645 bound;
expect it to run for days on a workstation.  Each campaign writes a
checkpoint after every round, so an interrupted sweep resumes with
--resume.
"""
import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from transversal_cert.certify import (  # noqa: E402
    FULL_PROFILES,
    LEMMA15_R1,
    LEMMA15_R2,
    PairGrid,
    assemble_bound,
    enumerate_pair_grid,
    load_certificate,
)
from transversal_cert.search import CampaignConfig, run_campaign  # noqa: E402


def progress(info: dict) -> None:
    pruned = " ".join(f"{k}={v}" for k, v in info["pruned"].items() if v)
    print(f"  round {info['round']}: n={info['n']} cubes={info['cubes_in']} "
          f"survivors={info['survivors']} {pruned}".rstrip(), file=sys.stderr)


def run_one(cfg: CampaignConfig, out_path: Path, ck_dir: Path,
            resume: bool, quiet: bool):
    if out_path.exists() and resume:
        cert = load_certificate(out_path)
        print(f"{out_path.name}: cached {cert.verdict}", file=sys.stderr)
        return cert
    ck = ck_dir / (out_path.stem + ".ck")
    cert = run_campaign(cfg, checkpoint_path=str(ck),
                        resume=resume and ck.exists(),
                        progress=None if quiet else progress)
    out_path.write_text(cert.to_json())
    ck.unlink(missing_ok=True)
    print(f"{out_path.name}: {cert.verdict} ({cert.wall_seconds:.1f}s)",
          file=sys.stderr)
    return cert


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="paper-certificates")
    ap.add_argument("--threads", type=int, default=8)
    ap.add_argument("--resume", action="store_true",
                    help="reuse finished certificates and checkpoints")
    ap.add_argument("--modes", nargs="+",
                    default=["lemma15", "grid-b", "grid-c"],
                    choices=["lemma15", "grid-b", "grid-c"])
    ap.add_argument("--quiet", action="store_true")
    args = ap.parse_args()

    out_dir = Path(args.out)
    ck_dir = out_dir / "checkpoints"
    ck_dir.mkdir(parents=True, exist_ok=True)
    certs = []
    t0 = time.monotonic()

    if "lemma15" in args.modes:
        n0, cap = FULL_PROFILES["lemma15"]
        cfg = CampaignConfig(mode="lemma15", r1=LEMMA15_R1, r2=LEMMA15_R2,
                             n0=n0, depth_cap=cap, threads=args.threads)
        certs.append(run_one(cfg, out_dir / "lemma15-full.json", ck_dir,
                             args.resume, args.quiet))

    grid = PairGrid()  # step 0.015
    pairs = enumerate_pair_grid(grid)
    for mode in ("grid-b", "grid-c"):
        if mode not in args.modes:
            continue
        n0, cap = FULL_PROFILES[mode]
        for i, (r1, r2) in enumerate(pairs):
            cfg = CampaignConfig(mode=mode, r1=r1, r2=r2, n0=n0,
                                 depth_cap=cap, threads=args.threads)
            name = f"{mode}-r1_{r1:.3f}-r2_{r2:.3f}.json"
            print(f"[{i + 1}/{len(pairs)}] {mode} ({r1:g}, {r2:g})",
                  file=sys.stderr)
            certs.append(run_one(cfg, out_dir / name, ck_dir,
                                 args.resume, args.quiet))

    report = assemble_bound(certs, grid=grid)
    (out_dir / "report.json").write_text(
        json.dumps(report.to_json_dict(), indent=2) + "\n")
    print(json.dumps(report.to_json_dict(), indent=2))
    print(f"total {time.monotonic() - t0:.1f}s", file=sys.stderr)
    return 0 if report.complete else 2


if __name__ == "__main__":
    sys.exit(main())
