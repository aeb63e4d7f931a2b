"""Sweep the repetition threshold and print candidates and coupling per step.

    python scripts/threshold_sweep.py [model.xmi] [concerns.cfg] [--max N]
"""

import argparse
from pathlib import Path

from aodcomm.concerns import read_config
from aodcomm.crosscut import annotate_repetitions, detect_aspect_candidates, repetition_counts
from aodcomm.metrics import coupling_report
from aodcomm.model import build_message_table
from aodcomm.transform import transform_model
from aodcomm.xmi_ingest import parse_xmi

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("xmi", nargs="?", default=str(ROOT / "fixtures" / "bank_full.xmi"))
    ap.add_argument("config", nargs="?", default=str(ROOT / "fixtures" / "concerns.cfg"))
    ap.add_argument("--max", type=int, default=8)
    args = ap.parse_args()

    config = read_config(args.config)
    table = annotate_repetitions(build_message_table(parse_xmi(args.xmi), config.concerns))
    counts = repetition_counts(table)
    print(f"{'threshold':>9}  {'OOD':>4}  {'AOD':>4}  {'delta':>5}  candidates")
    for t in range(1, args.max + 1):
        cand = detect_aspect_candidates(counts, config.concerns, t)
        report = coupling_report(table, transform_model(table, cand, config), config.coupling)
        names = ", ".join(cand.classes) or "-"
        print(f"{t:>9}  {report.ood_total:>4}  {report.aod_total:>4}  {report.delta:>5}  {names}")


if __name__ == "__main__":
    main()
