"""Regenerate the XMI fixtures under fixtures/ from tests/xmi_builder.py.

    python scripts/make_fixtures.py
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from xmi_builder import bank_diagrams, bank_full_diagrams, build_xmi, scrambled  # noqa: E402


def main():
    out = ROOT / "fixtures"
    out.mkdir(exist_ok=True)
    two = bank_diagrams()
    n = sum(len(d.messages) for d in two)
    # document order deliberately differs from message order
    (out / "bank.xmi").write_text(build_xmi(two, order=scrambled(n)), encoding="utf-8")
    (out / "bank_full.xmi").write_text(build_xmi(bank_full_diagrams()), encoding="utf-8")
    (out / "empty.xmi").write_text(build_xmi([]), encoding="utf-8")
    print(f"wrote fixtures to {out}")


if __name__ == "__main__":
    main()
