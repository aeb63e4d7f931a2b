"""Rewrite tests/golden/codegen from the bank fixture at threshold 4.

    python scripts/regen_golden.py

Review the diff by hand before committing; the golden files are the
reference the codegen tests compare against.
"""

import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

from aodcomm.cli import run  # noqa: E402


def main():
    out = ROOT / "tests" / "golden" / "codegen"
    shutil.rmtree(out, ignore_errors=True)
    code = run([
        "codegen", str(ROOT / "fixtures" / "bank_full.xmi"),
        "--config", str(ROOT / "fixtures" / "concerns.cfg"),
        "--threshold", "4", "--out", str(out), "-q",
    ])
    sys.exit(code)


if __name__ == "__main__":
    main()
