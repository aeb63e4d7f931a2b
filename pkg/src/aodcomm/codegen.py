"""AspectJ-dialect aspect skeletons and plain class skeletons.

Output is text only and never compiled here. Every member list is sorted so
identical models give byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from aodcomm.concerns import ADVICE_KINDS, ConcernMap, ConcernType, classify, normalize
from aodcomm.errors import CodegenError
from aodcomm.model import MessageTable
from aodcomm.transform import AdviceSpec, AodModel, AspectSpec, BodyCall
from aodcomm.xmi_ingest import UNRESOLVED

INDENT = "    "
_FRAGMENT = re.compile(r"[^\W_]+")
_SIMPLE_ARG = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_UNIT_DIRS = {"aspect": "aspects", "class": "classes"}


@dataclass(frozen=True)
class GeneratedUnit:
    file_name: str
    kind: str  # "aspect" | "class"
    text: str

    @property
    def path(self) -> str:
        return f"{_UNIT_DIRS[self.kind]}/{self.file_name}"

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()


def _fragments(raw: str) -> List[str]:
    parts = _FRAGMENT.findall(raw)
    if not parts:
        raise CodegenError(f"cannot derive an identifier from {raw!r}")
    return parts


def mangle_type_name(raw: str) -> str:
    """``"home page"`` -> ``"HomePage"``; idempotent on mangled names."""
    name = "".join(p[0].upper() + p[1:] for p in _fragments(raw))
    return "_" + name if name[0].isdigit() else name


def mangle_member_name(raw: str) -> str:
    """``"block user"`` -> ``"blockUser"``."""
    parts = _fragments(raw)
    name = parts[0][0].lower() + parts[0][1:] + "".join(p[0].upper() + p[1:] for p in parts[1:])
    return "_" + name if name[0].isdigit() else name


def _finish(lines: Iterable[str]) -> str:
    return "\n".join(lines).rstrip("\n") + "\n"


def _guard_method(guard: str) -> str:
    return mangle_member_name(guard)


def _advice_header(kind: str, pointcut: str) -> str:
    if kind == "around":
        return f"Object around(): {pointcut}() {{"
    return f"{kind}(): {pointcut}() {{"


def _body_lines(op_method: str, calls: Sequence[BodyCall], guard: Optional[str], kind: str) -> List[str]:
    inner = [f"{op_method}();"]
    for call in calls:
        dispatch = f"{mangle_type_name(call.target_class)}.{mangle_member_name(call.operation)}();"
        if call.guard:
            inner += [f"if ({_guard_method(call.guard)}()) {{", INDENT + dispatch, "}"]
        else:
            inner.append(dispatch)
    if guard:
        inner = [f"if ({guard}) {{"] + [INDENT + line for line in inner] + ["}"]
    if kind == "around":
        inner.append("return proceed();")
    return inner


def _advice_guard(group: Sequence[AdviceSpec]) -> Optional[str]:
    guards = [a.guard for a in group]
    if any(g is None for g in guards):
        return None
    names = sorted({_guard_method(g) for g in guards})
    return " || ".join(f"{n}()" for n in names)


def generate_aspect(spec: AspectSpec) -> GeneratedUnit:
    bad = [a for a in spec.advices if not a.pointcut_class.strip() or a.pointcut_class == UNRESOLVED]
    if bad:
        listed = ", ".join(f"{a.operation!r} (pointcut class {a.pointcut_class!r})" for a in bad)
        raise CodegenError(f"aspect {spec.name}: unresolved pointcut class for advice {listed}")

    groups: Dict[str, List[AdviceSpec]] = {}
    owners: Dict[str, str] = {}
    for advice in spec.advices:
        member = mangle_member_name(advice.operation)
        prev = owners.setdefault(member, normalize(advice.operation))
        if prev != normalize(advice.operation):
            raise CodegenError(f"aspect {spec.name}: operations {prev!r} and {advice.operation!r} both mangle to {member}")
        groups.setdefault(member, []).append(advice)

    guards: Dict[str, str] = {}
    for advice in spec.advices:
        for g in [advice.guard] + [c.guard for c in advice.body_calls]:
            if g:
                guards.setdefault(_guard_method(g), g)
    clash = sorted(set(guards) & set(groups))
    if clash:
        raise CodegenError(f"aspect {spec.name}: guard placeholder collides with operation method {clash[0]}")

    lines = [f"public aspect {spec.name} {{"]
    for member in sorted(groups):
        group = groups[member]
        pointcut = f"{member}JoinPoint"
        designators = sorted(
            {f"execution(* {mangle_type_name(a.pointcut_class)}.{mangle_member_name(a.pointcut_operation)}(..))" for a in group}
        )
        calls: List[BodyCall] = []
        for a in group:
            calls += [c for c in a.body_calls if c not in calls]
        guard = _advice_guard(group)
        lines += ["", f"{INDENT}pointcut {pointcut}(): {' || '.join(designators)};"]
        for kind in (k for k in ADVICE_KINDS if any(a.kind == k for a in group)):
            lines += ["", INDENT + _advice_header(kind, pointcut)]
            lines += [INDENT * 2 + line for line in _body_lines(member, calls, guard, kind)]
            lines.append(INDENT + "}")
        lines += ["", f"{INDENT}private void {member}() {{", f"{INDENT}}}"]
    for name in sorted(guards):
        lines += [
            "",
            f"{INDENT}// guard placeholder: [{guards[name]}]",
            f"{INDENT}private boolean {name}() {{",
            f"{INDENT * 2}return true;",
            f"{INDENT}}}",
        ]
    lines.append("}")
    return GeneratedUnit(file_name=f"{spec.name}.aj", kind="aspect", text=_finish(lines))


def _params(args: Sequence[str]) -> str:
    names: List[str] = []
    for i, arg in enumerate(args, start=1):
        name = arg.strip() if _SIMPLE_ARG.match(arg.strip()) else f"arg{i}"
        if name in names:
            name = f"arg{i}"
        names.append(name)
    return ", ".join(f"Object {n}" for n in names)


def generate_class(
    class_name: str, table: MessageTable, concerns: ConcernMap, extension: str = ".java"
) -> Optional[GeneratedUnit]:
    """Class skeleton whose methods are the calls the class receives.

    Returns None for actor classes. Raises CodegenError for non-functional
    classes, which are not generated as plain classes.
    """
    if concerns.is_actor(class_name):
        return None
    if classify(class_name, concerns) is not ConcernType.FUNCTIONAL:
        raise CodegenError(f"class {class_name!r} is not functional; it is not generated as a plain class")
    type_name = mangle_type_name(class_name)
    methods: Dict[str, Tuple[str, Sequence[str]]] = {}
    for row in table.rows:
        if not row.is_call or normalize(row.receiver_class) != normalize(class_name):
            continue
        member = mangle_member_name(row.name)
        if member in methods:
            if methods[member][0] != normalize(row.name):
                raise CodegenError(
                    f"class {type_name}: messages {methods[member][0]!r} and {row.name!r} both mangle to {member}"
                )
            continue
        methods[member] = (normalize(row.name), row.args)
    lines = [f"public class {type_name} {{"]
    for member in sorted(methods):
        lines += ["", f"{INDENT}public void {member}({_params(methods[member][1])}) {{", f"{INDENT}}}"]
    lines.append("}")
    return GeneratedUnit(file_name=type_name + extension, kind="class", text=_finish(lines))


def generate_all(
    table: MessageTable, aod: AodModel, concerns: ConcernMap, extension: str = ".java"
) -> List[GeneratedUnit]:
    """Aspects for every AspectSpec, classes for every functional non-actor class."""
    units = [generate_aspect(spec) for spec in sorted(aod.aspects, key=lambda s: s.name)]
    seen: Dict[str, str] = {}
    for cls in table.classes():
        if cls == UNRESOLVED or aod.is_aspect(cls) or concerns.is_actor(cls):
            continue
        if classify(cls, concerns) is not ConcernType.FUNCTIONAL:
            continue
        type_name = mangle_type_name(cls)
        if type_name in seen and normalize(seen[type_name]) != normalize(cls):
            raise CodegenError(f"classes {seen[type_name]!r} and {cls!r} both mangle to {type_name}")
        if type_name in seen:
            continue
        seen[type_name] = cls
        units.append(generate_class(cls, table, concerns, extension))
    aspect_names = {u.file_name.rsplit(".", 1)[0] for u in units if u.kind == "aspect"}
    overlap = aspect_names & set(seen)
    if overlap:
        raise CodegenError(f"aspect and class share the name {sorted(overlap)[0]}")
    return sorted(units, key=lambda u: (u.kind, u.file_name))


def manifest(units: Sequence[GeneratedUnit]) -> dict:
    return {"units": [{"file": u.path, "kind": u.kind, "sha256": u.digest} for u in units]}


def write_units(units: Sequence[GeneratedUnit], out_dir) -> Path:
    out = Path(out_dir)
    for unit in units:
        target = out / unit.path
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(unit.text.encode("utf-8"))
    path = out / "manifest.json"
    path.write_bytes((json.dumps(manifest(units), indent=2) + "\n").encode("utf-8"))
    return path
