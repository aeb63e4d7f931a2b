"""Run transform and codegen on a model and print the coupling table.

    python scripts/run_pipeline.py [model.xmi] [concerns.cfg] [--out DIR]
"""

import argparse
import sys
from pathlib import Path

from aodcomm.cli import run

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("xmi", nargs="?", default=str(ROOT / "fixtures" / "bank_full.xmi"))
    ap.add_argument("config", nargs="?", default=str(ROOT / "fixtures" / "concerns.cfg"))
    ap.add_argument("--out", default="out")
    args = ap.parse_args()

    out = Path(args.out)
    common = [args.xmi, "--config", args.config, "-q"]
    code = run(["transform", *common, "--out", str(out / "transform")])
    if code == 0:
        code = run(["codegen", *common, "--out", str(out / "codegen")])
    if code == 0:
        sys.stdout.write((out / "transform" / "coupling.txt").read_text(encoding="utf-8"))
    sys.exit(code)


if __name__ == "__main__":
    main()
