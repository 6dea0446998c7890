"""On-disk layout and round-trippable persistence for artifact bundles.

Layout under a project root::

    shiftup.json                     manifest (see shiftup.config)
    requirements/requirements.json
    stories/stories.json
    tests/*.gwt                      given-when-then corpora
    architecture/c4.json
    architecture/adr/<id>-<slug>.md
    roadmap/phases.json
    issues/<id>.json                 one file per issue
    logs/*.jsonl                     event and prompt logs (not bundle state)

JSON files are UTF-8 with two-space indentation and lexicographically
sorted keys, so a save/load/save cycle is bit-exact. Loading collects
every violation it can find rather than stopping at the first.
"""

from __future__ import annotations

import json
import re
from datetime import date
from pathlib import Path

from shiftup import ShiftUpError, ids
from shiftup.artifacts.model import (
    AcceptanceTest,
    ADRecord,
    AdrStatus,
    ArtifactBundle,
    C4Element,
    C4Level,
    C4Model,
    C4Relation,
    IssueStatus,
    PathMapping,
    Requirement,
    RequirementKind,
    RoadmapPhase,
    UserStory,
    Violation,
    WorkIssue,
)
from shiftup.artifacts.validate import validate
from shiftup.config import MANIFEST_NAME, ConfigError, parse_manifest
from shiftup.gwt import GwtFile, parse_gwt, render_gwt

REQUIREMENTS_FILE = "requirements/requirements.json"
STORIES_FILE = "stories/stories.json"
TESTS_DIR = "tests"
C4_FILE = "architecture/c4.json"
ADR_DIR = "architecture/adr"
PHASES_FILE = "roadmap/phases.json"
ISSUES_DIR = "issues"
LOGS_DIR = "logs"
PLANS_DIR = "plans"


class BundleLoadError(ShiftUpError):
    """Loading failed; carries the complete violation list."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations[:5]) or "load failed")


class BundleSaveError(ShiftUpError):
    """Saving was refused or failed; may carry validate() violations."""

    def __init__(self, message: str, violations: list[Violation] | None = None):
        self.violations = violations or []
        super().__init__(message)


def canonical_json(data: object) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------


class _FileCtx:
    """Collects violations attributed to one file."""

    def __init__(self, file: str, violations: list[Violation]):
        self.file = file
        self.violations = violations

    def malformed(self, message: str, artifact: str | None = None, line: int | None = None) -> None:
        self.violations.append(
            Violation(artifact or self.file, "malformed-file", message, file=self.file, line=line)
        )


def _read_json(path: Path, ctx: _FileCtx) -> object | None:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        ctx.malformed(f"invalid JSON: {exc.msg}", line=exc.lineno)
        return None
    except OSError as exc:
        ctx.malformed(f"unreadable: {exc}")
        return None


def _take(item: dict, key: str, kind: type, ctx: _FileCtx, where: str) -> object | None:
    if key not in item:
        ctx.malformed(f"{where}: missing key {key!r}", artifact=where)
        return None
    value = item[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        ctx.malformed(f"{where}: key {key!r} must be {kind.__name__}", artifact=where)
        return None
    return value


def _take_str_list(item: dict, key: str, ctx: _FileCtx, where: str) -> tuple[str, ...] | None:
    value = _take(item, key, list, ctx, where)
    if value is None:
        return None
    if not all(isinstance(v, str) for v in value):
        ctx.malformed(f"{where}: key {key!r} must be a list of strings", artifact=where)
        return None
    return tuple(value)


def _check_keys(item: dict, allowed: set[str], ctx: _FileCtx, where: str) -> None:
    unknown = sorted(set(item) - allowed)
    if unknown:
        ctx.malformed(f"{where}: unknown keys {', '.join(unknown)}", artifact=where)


def _enum_value(raw: object, enum_cls, ctx: _FileCtx, where: str):
    try:
        return enum_cls(raw)
    except ValueError:
        choices = ", ".join(e.value for e in enum_cls)
        ctx.malformed(f"{where}: {raw!r} is not one of {choices}", artifact=where)
        return None


def _item_list(data: object, key: str, ctx: _FileCtx) -> list[dict]:
    if not isinstance(data, dict) or key not in data or not isinstance(data[key], list):
        ctx.malformed(f"expected an object with a {key!r} list")
        return []
    extra = sorted(set(data) - {key})
    if extra:
        ctx.malformed(f"unknown top-level keys {', '.join(extra)}")
    items = []
    for i, item in enumerate(data[key]):
        if not isinstance(item, dict):
            ctx.malformed(f"{key}[{i}] must be an object")
            continue
        items.append(item)
    return items


def _parse_requirements(data: object, ctx: _FileCtx) -> list[Requirement]:
    out = []
    for item in _item_list(data, "requirements", ctx):
        where = item.get("id") if isinstance(item.get("id"), str) else "requirement"
        _check_keys(item, {"id", "kind", "text"}, ctx, where)
        rid = _take(item, "id", str, ctx, where)
        text = _take(item, "text", str, ctx, where)
        kind_raw = _take(item, "kind", str, ctx, where)
        kind = _enum_value(kind_raw, RequirementKind, ctx, where) if kind_raw else None
        if rid is None or text is None or kind is None:
            continue
        out.append(Requirement(id=rid, text=text, kind=kind))
    return out


def _parse_stories(data: object, ctx: _FileCtx) -> list[UserStory]:
    out = []
    for item in _item_list(data, "stories", ctx):
        where = item.get("id") if isinstance(item.get("id"), str) else "story"
        _check_keys(item, {"id", "as_a", "i_want", "so_that", "requirement_refs"}, ctx, where)
        sid = _take(item, "id", str, ctx, where)
        as_a = _take(item, "as_a", str, ctx, where)
        i_want = _take(item, "i_want", str, ctx, where)
        so_that = _take(item, "so_that", str, ctx, where)
        refs = _take_str_list(item, "requirement_refs", ctx, where)
        if None in (sid, as_a, i_want, so_that, refs):
            continue
        out.append(UserStory(id=sid, as_a=as_a, i_want=i_want, so_that=so_that, requirement_refs=refs))
    return out


def _parse_c4(data: object, ctx: _FileCtx) -> C4Model:
    if not isinstance(data, dict):
        ctx.malformed("expected an object with elements, relations, path_mappings")
        return C4Model()
    _check_keys(data, {"elements", "relations", "path_mappings"}, ctx, "c4")
    elements = []
    for item in data.get("elements", []):
        if not isinstance(item, dict):
            ctx.malformed("element entries must be objects")
            continue
        where = item.get("id") if isinstance(item.get("id"), str) else "c4-element"
        _check_keys(item, {"id", "name", "level", "parent", "description"}, ctx, where)
        eid = _take(item, "id", str, ctx, where)
        name = _take(item, "name", str, ctx, where)
        level_raw = _take(item, "level", str, ctx, where)
        level = _enum_value(level_raw, C4Level, ctx, where) if level_raw else None
        description = _take(item, "description", str, ctx, where)
        parent = item.get("parent")
        if parent is not None and not isinstance(parent, str):
            ctx.malformed(f"{where}: parent must be a string or null", artifact=where)
            continue
        if None in (eid, name, level, description):
            continue
        elements.append(C4Element(id=eid, name=name, level=level, parent=parent, description=description))
    relations = []
    for item in data.get("relations", []):
        if not isinstance(item, dict):
            ctx.malformed("relation entries must be objects")
            continue
        _check_keys(item, {"from", "to", "label"}, ctx, "c4-relation")
        source = _take(item, "from", str, ctx, "c4-relation")
        target = _take(item, "to", str, ctx, "c4-relation")
        label = _take(item, "label", str, ctx, "c4-relation")
        if None in (source, target, label):
            continue
        relations.append(C4Relation(source=source, target=target, label=label))
    mappings = []
    for item in data.get("path_mappings", []):
        if not isinstance(item, dict):
            ctx.malformed("path mapping entries must be objects")
            continue
        _check_keys(item, {"path_prefix", "element_id"}, ctx, "c4-path-mapping")
        prefix = _take(item, "path_prefix", str, ctx, "c4-path-mapping")
        element_id = _take(item, "element_id", str, ctx, "c4-path-mapping")
        if None in (prefix, element_id):
            continue
        mappings.append(PathMapping(path_prefix=prefix, element_id=element_id))
    return C4Model(elements=tuple(elements), relations=tuple(relations), path_mappings=tuple(mappings))


def _parse_phases(data: object, ctx: _FileCtx) -> list[RoadmapPhase]:
    out = []
    for item in _item_list(data, "phases", ctx):
        where = item.get("id") if isinstance(item.get("id"), str) else "phase"
        _check_keys(item, {"id", "name", "goal", "architecture_tasks", "test_ids", "depends_on"}, ctx, where)
        pid = _take(item, "id", str, ctx, where)
        name = _take(item, "name", str, ctx, where)
        goal = _take(item, "goal", str, ctx, where)
        tasks = _take_str_list(item, "architecture_tasks", ctx, where)
        test_ids = _take_str_list(item, "test_ids", ctx, where)
        depends_on = _take_str_list(item, "depends_on", ctx, where)
        if None in (pid, name, goal, tasks, test_ids, depends_on):
            continue
        out.append(
            RoadmapPhase(
                id=pid, name=name, goal=goal, architecture_tasks=tasks,
                test_ids=test_ids, depends_on=depends_on,
            )
        )
    return out


def _parse_issue(data: object, ctx: _FileCtx) -> WorkIssue | None:
    if not isinstance(data, dict):
        ctx.malformed("issue file must hold one JSON object")
        return None
    where = data.get("id") if isinstance(data.get("id"), str) else "issue"
    _check_keys(
        data,
        {"id", "phase_ref", "title", "description", "constraint_test_ids", "context_links", "status"},
        ctx,
        where,
    )
    iid = _take(data, "id", str, ctx, where)
    phase_ref = _take(data, "phase_ref", str, ctx, where)
    title = _take(data, "title", str, ctx, where)
    description = _take(data, "description", str, ctx, where)
    constraints = _take_str_list(data, "constraint_test_ids", ctx, where)
    links = _take_str_list(data, "context_links", ctx, where)
    status_raw = _take(data, "status", str, ctx, where)
    status = _enum_value(status_raw, IssueStatus, ctx, where) if status_raw else None
    if None in (iid, phase_ref, title, description, constraints, links, status):
        return None
    return WorkIssue(
        id=iid, phase_ref=phase_ref, title=title, description=description,
        constraint_test_ids=constraints, context_links=links, status=status,
    )


_FRONT_MATTER_KEYS = {"id", "title", "status", "date", "supersedes"}
_ADR_SECTIONS = ["Context", "Decision", "Consequences"]


def _parse_adr(text: str, ctx: _FileCtx) -> ADRecord | None:
    lines = text.split("\n")
    if not lines or lines[0].strip() != "---":
        ctx.malformed("expected front-matter starting with ---", line=1)
        return None
    meta: dict[str, str] = {}
    body_start = None
    for lineno, line in enumerate(lines[1:], start=2):
        if line.strip() == "---":
            body_start = lineno
            break
        m = re.match(r"^([a-z_]+):\s*(.*)$", line)
        if not m:
            ctx.malformed("front-matter lines must be 'key: value'", line=lineno)
            return None
        key, value = m.group(1), m.group(2).strip()
        if key not in _FRONT_MATTER_KEYS:
            ctx.malformed(f"unknown front-matter key {key!r}", line=lineno)
            return None
        meta[key] = value
    if body_start is None:
        ctx.malformed("front-matter never closed with ---", line=len(lines))
        return None
    missing = [k for k in ("id", "title", "status", "date") if k not in meta]
    if missing:
        ctx.malformed(f"front-matter missing {', '.join(missing)}", line=body_start)
        return None
    where = meta["id"]
    status = _enum_value(meta["status"], AdrStatus, ctx, where)
    if status is None:
        return None
    try:
        date.fromisoformat(meta["date"])
    except ValueError:
        ctx.malformed(f"date {meta['date']!r} is not ISO-8601", artifact=where, line=body_start)
        return None

    sections: dict[str, list[str]] = {}
    current: str | None = None
    for lineno, line in enumerate(lines[body_start:], start=body_start + 1):
        m = re.match(r"^##\s+(.*)$", line)
        if m:
            heading = m.group(1).strip()
            if heading not in _ADR_SECTIONS:
                ctx.malformed(f"unknown section {heading!r}", artifact=where, line=lineno)
                return None
            if heading in sections:
                ctx.malformed(f"duplicate section {heading!r}", artifact=where, line=lineno)
                return None
            expected = _ADR_SECTIONS[len(sections)]
            if heading != expected:
                ctx.malformed(
                    f"section {heading!r} out of order, expected {expected!r}",
                    artifact=where, line=lineno,
                )
                return None
            sections[heading] = []
            current = heading
        elif current is not None:
            sections[current].append(line)
        elif line.strip():
            ctx.malformed("body text before first section heading", artifact=where, line=lineno)
            return None
    absent = [s for s in _ADR_SECTIONS if s not in sections]
    if absent:
        ctx.malformed(f"missing sections: {', '.join(absent)}", artifact=where)
        return None
    return ADRecord(
        id=meta["id"],
        title=meta["title"],
        status=status,
        date=meta["date"],
        context="\n".join(sections["Context"]).strip(),
        decision="\n".join(sections["Decision"]).strip(),
        consequences="\n".join(sections["Consequences"]).strip(),
        supersedes=meta.get("supersedes") or None,
    )


def load_bundle(root: Path | str) -> ArtifactBundle:
    """Load and fully validate the bundle under ``root``.

    Raises BundleLoadError carrying the complete violation list if
    anything is missing, malformed, dangling, or duplicated.
    """
    root = Path(root)
    violations: list[Violation] = []

    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise BundleLoadError(
            [Violation(MANIFEST_NAME, "missing-manifest", f"no {MANIFEST_NAME} under {root}")]
        )
    manifest_ctx = _FileCtx(MANIFEST_NAME, violations)
    manifest_data = _read_json(manifest_path, manifest_ctx)
    manifest: dict = {}
    if manifest_data is not None:
        try:
            parse_manifest(manifest_data, root=root)
            manifest = manifest_data
        except ConfigError as exc:
            manifest_ctx.malformed(str(exc))

    bundle = ArtifactBundle(root=root, manifest=manifest)

    path = root / REQUIREMENTS_FILE
    if path.is_file():
        ctx = _FileCtx(REQUIREMENTS_FILE, violations)
        data = _read_json(path, ctx)
        if data is not None:
            bundle.requirements = _parse_requirements(data, ctx)

    path = root / STORIES_FILE
    if path.is_file():
        ctx = _FileCtx(STORIES_FILE, violations)
        data = _read_json(path, ctx)
        if data is not None:
            bundle.stories = _parse_stories(data, ctx)

    tests_dir = root / TESTS_DIR
    if tests_dir.is_dir():
        for gwt_path in sorted(tests_dir.glob("*.gwt")):
            rel = f"{TESTS_DIR}/{gwt_path.name}"
            ctx = _FileCtx(rel, violations)
            try:
                text = gwt_path.read_text(encoding="utf-8")
            except OSError as exc:
                ctx.malformed(f"unreadable: {exc}")
                continue
            result = parse_gwt(text)
            for error in result.errors:
                ctx.malformed(error.message, line=error.line)
            bundle.tests.extend(result.tests)
            bundle.test_files[gwt_path.name] = [t.id for t in result.tests]

    path = root / C4_FILE
    if path.is_file():
        ctx = _FileCtx(C4_FILE, violations)
        data = _read_json(path, ctx)
        if data is not None:
            bundle.c4 = _parse_c4(data, ctx)

    adr_dir = root / ADR_DIR
    if adr_dir.is_dir():
        for adr_path in sorted(adr_dir.glob("*.md")):
            rel = f"{ADR_DIR}/{adr_path.name}"
            ctx = _FileCtx(rel, violations)
            try:
                text = adr_path.read_text(encoding="utf-8")
            except OSError as exc:
                ctx.malformed(f"unreadable: {exc}")
                continue
            adr = _parse_adr(text, ctx)
            if adr is not None:
                bundle.adrs.append(adr)

    path = root / PHASES_FILE
    if path.is_file():
        ctx = _FileCtx(PHASES_FILE, violations)
        data = _read_json(path, ctx)
        if data is not None:
            bundle.phases = _parse_phases(data, ctx)

    issues_dir = root / ISSUES_DIR
    if issues_dir.is_dir():
        for issue_path in sorted(issues_dir.glob("*.json")):
            rel = f"{ISSUES_DIR}/{issue_path.name}"
            ctx = _FileCtx(rel, violations)
            data = _read_json(issue_path, ctx)
            if data is None:
                continue
            issue = _parse_issue(data, ctx)
            if issue is not None:
                bundle.issues.append(issue)

    for collection in (bundle.requirements, bundle.stories, bundle.tests, bundle.adrs,
                       bundle.phases, bundle.issues):
        collection.sort(key=lambda a: ids.sort_key(a.id))

    violations.extend(validate(bundle))
    if violations:
        raise BundleLoadError(violations)
    return bundle


# ---------------------------------------------------------------------------
# Saving
# ---------------------------------------------------------------------------


def _slugify(title: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", title.lower()).strip("-")
    return slug or "untitled"


def render_adr(adr: ADRecord) -> str:
    lines = ["---", f"id: {adr.id}", f"title: {adr.title}", f"status: {adr.status.value}",
             f"date: {adr.date}"]
    if adr.supersedes:
        lines.append(f"supersedes: {adr.supersedes}")
    lines.append("---")
    for heading, body in (
        ("Context", adr.context),
        ("Decision", adr.decision),
        ("Consequences", adr.consequences),
    ):
        lines.append("")
        lines.append(f"## {heading}")
        lines.append("")
        lines.append(body)
    return "\n".join(lines) + "\n"


def _requirement_json(r: Requirement) -> dict:
    return {"id": r.id, "kind": r.kind.value, "text": r.text}


def _story_json(s: UserStory) -> dict:
    return {
        "id": s.id, "as_a": s.as_a, "i_want": s.i_want, "so_that": s.so_that,
        "requirement_refs": list(s.requirement_refs),
    }


def _c4_json(c4: C4Model) -> dict:
    return {
        "elements": [
            {"id": e.id, "name": e.name, "level": e.level.value, "parent": e.parent,
             "description": e.description}
            for e in c4.elements
        ],
        "relations": [
            {"from": r.source, "to": r.target, "label": r.label} for r in c4.relations
        ],
        "path_mappings": [
            {"path_prefix": m.path_prefix, "element_id": m.element_id} for m in c4.path_mappings
        ],
    }


def _phase_json(p: RoadmapPhase) -> dict:
    return {
        "id": p.id, "name": p.name, "goal": p.goal,
        "architecture_tasks": list(p.architecture_tasks),
        "test_ids": list(p.test_ids), "depends_on": list(p.depends_on),
    }


def issue_json(i: WorkIssue) -> dict:
    return {
        "id": i.id, "phase_ref": i.phase_ref, "title": i.title, "description": i.description,
        "constraint_test_ids": list(i.constraint_test_ids),
        "context_links": list(i.context_links), "status": i.status.value,
    }


def _gwt_groups(bundle: ArtifactBundle) -> dict[str, list[AcceptanceTest]]:
    """Preserve the loaded .gwt grouping when it still covers the test set."""
    by_id = {t.id: t for t in bundle.tests}
    grouped_ids = [tid for group in bundle.test_files.values() for tid in group]
    if bundle.test_files and sorted(grouped_ids) == sorted(by_id):
        return {
            name: [by_id[tid] for tid in group]
            for name, group in sorted(bundle.test_files.items())
        }
    if not bundle.tests:
        return {}
    return {"tests.gwt": list(bundle.tests)}


def save_issue(issue: WorkIssue, root: Path) -> None:
    """Rewrite one issue file in place (the loop engine's status updates)."""
    path = Path(root) / ISSUES_DIR / f"{issue.id}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(issue_json(issue)), encoding="utf-8")


def save_bundle(bundle: ArtifactBundle, root: Path | str) -> None:
    """Write the bundle canonically under ``root``.

    Refuses invalid bundles, carrying the validate() violation list.
    After a successful save, load_bundle(root) returns an equal bundle.
    """
    violations = validate(bundle)
    if violations:
        raise BundleSaveError("bundle is invalid; save refused", violations)
    root = Path(root)
    try:
        root.mkdir(parents=True, exist_ok=True)
        for sub in ("requirements", "stories", TESTS_DIR, "architecture", ADR_DIR,
                    "roadmap", ISSUES_DIR):
            (root / sub).mkdir(parents=True, exist_ok=True)
        for stale in (root / TESTS_DIR).glob("*.gwt"):
            stale.unlink()
        for stale in (root / ADR_DIR).glob("*.md"):
            stale.unlink()
        for stale in (root / ISSUES_DIR).glob("*.json"):
            stale.unlink()

        manifest = bundle.manifest or {"name": root.name}
        (root / MANIFEST_NAME).write_text(canonical_json(manifest), encoding="utf-8")
        (root / REQUIREMENTS_FILE).write_text(
            canonical_json({"requirements": [_requirement_json(r) for r in bundle.requirements]}),
            encoding="utf-8",
        )
        (root / STORIES_FILE).write_text(
            canonical_json({"stories": [_story_json(s) for s in bundle.stories]}),
            encoding="utf-8",
        )
        for name, tests in _gwt_groups(bundle).items():
            (root / TESTS_DIR / name).write_text(
                render_gwt(GwtFile(tests=tuple(tests))), encoding="utf-8"
            )
        (root / C4_FILE).write_text(canonical_json(_c4_json(bundle.c4)), encoding="utf-8")
        for adr in bundle.adrs:
            filename = f"{adr.id}-{_slugify(adr.title)}.md"
            (root / ADR_DIR / filename).write_text(render_adr(adr), encoding="utf-8")
        (root / PHASES_FILE).write_text(
            canonical_json({"phases": [_phase_json(p) for p in bundle.phases]}),
            encoding="utf-8",
        )
        for issue in bundle.issues:
            (root / ISSUES_DIR / f"{issue.id}.json").write_text(
                canonical_json(issue_json(issue)), encoding="utf-8"
            )
    except OSError as exc:
        raise BundleSaveError(f"write failed: {exc}") from exc
