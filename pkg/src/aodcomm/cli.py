"""Command-line front end: inspect, analyze, transform, codegen.

Exit status is 0 on success, 1 for user errors (bad input or config), 2 for
internal errors. Diagnostics go to stderr; reports to stdout or files.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Sequence

from aodcomm import __version__
from aodcomm.codegen import generate_all, write_units
from aodcomm.concerns import Config, read_config
from aodcomm.crosscut import annotate_repetitions, detect_aspect_candidates, repetition_counts, repetition_report
from aodcomm.errors import AodError, Diagnostic
from aodcomm.metrics import coupling_report
from aodcomm.model import MessageTable, build_message_table
from aodcomm.render import render_all
from aodcomm.transform import transform_model
from aodcomm.xmi_ingest import parse_xmi


def _load(args) -> tuple:
    config = read_config(args.config) if getattr(args, "config", None) else Config()
    if getattr(args, "threshold", None) is not None:
        if args.threshold < 1:
            raise AodError(f"--threshold must be >= 1, got {args.threshold}")
        config = replace(config, threshold=args.threshold)
    path = Path(args.xmi)
    if not path.is_file():
        raise AodError(f"no such file: {path}")
    raw = parse_xmi(path)
    diagnostics: List[Diagnostic] = []
    table = annotate_repetitions(build_message_table(raw, config.concerns, diagnostics))
    return config, table, diagnostics


def _emit(diagnostics: Sequence[Diagnostic], quiet: bool) -> None:
    for d in diagnostics:
        if quiet and d.severity == "info":
            continue
        print(f"{d}", file=sys.stderr)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(text.encode("utf-8"))


def _analysis(config: Config, table: MessageTable):
    counts = repetition_counts(table)
    candidates = detect_aspect_candidates(counts, config.concerns, config.threshold)
    return counts, candidates


def cmd_inspect(args) -> int:
    _, table, diagnostics = _load(args)
    _emit(diagnostics, args.quiet)
    sys.stdout.write(table.to_json() if args.format == "json" else table.to_text())
    return 0


def cmd_analyze(args) -> int:
    config, table, diagnostics = _load(args)
    _emit(diagnostics, args.quiet)
    counts, candidates = _analysis(config, table)
    report = candidates.to_dict()
    report["repetitions"] = repetition_report(counts)
    sys.stdout.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    return 0


def cmd_transform(args) -> int:
    config, table, diagnostics = _load(args)
    _, candidates = _analysis(config, table)
    aod = transform_model(table, candidates, config)
    _emit(diagnostics + [d for d in aod.diagnostics if d not in diagnostics], args.quiet)
    report = coupling_report(table, aod, config.coupling)
    out = Path(args.out)
    _write(out / "message_table.json", table.to_json())
    _write(out / "candidates.json", candidates.to_json())
    _write(out / "aod_model.json", aod.to_json())
    _write(out / "coupling.json", report.to_json())
    _write(out / "coupling.txt", report.to_text())
    for name, text in render_all(table, aod).items():
        _write(out / "diagrams" / name, text)
    print(f"coupling delta: {report.delta} (OOD {report.ood_total} -> AOD {report.aod_total})")
    return 0


def cmd_codegen(args) -> int:
    config, table, diagnostics = _load(args)
    _, candidates = _analysis(config, table)
    aod = transform_model(table, candidates, config)
    _emit(diagnostics + [d for d in aod.diagnostics if d not in diagnostics], args.quiet)
    units = generate_all(table, aod, config.concerns, args.extension)
    manifest = write_units(units, args.out)
    for unit in units:
        print(unit.path)
    print(f"manifest: {manifest}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aodcomm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required: bool):
        p.add_argument("xmi", help="EA XMI 1.1 export")
        p.add_argument("--config", required=config_required, help="concern config (.cfg/.ini or .json)")
        p.add_argument("--threshold", type=int, help="override the config's repetition threshold")
        p.add_argument("-q", "--quiet", action="store_true", help="suppress info diagnostics")

    p = sub.add_parser("inspect", help="print the message table")
    common(p, config_required=False)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("analyze", help="repetition counts and aspect candidates (JSON)")
    common(p, config_required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("transform", help="AOD model, coupling report and DOT renderings")
    common(p, config_required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("codegen", help="aspect and class skeletons plus manifest")
    common(p, config_required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--extension", default=".java", help="class file extension (default .java)")
    p.set_defaults(func=cmd_codegen)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except AodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
