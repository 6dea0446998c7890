"""Traceability graph over a bundle: ordering, coverage, and impact.

Nodes are artifact ids typed by prefix. Edge kinds:

- story  --covers-->     requirement
- test   --covers-->     story
- issue  --constrains--> test
- phase  --contains-->   issue, test
- phase  --depends_on--> phase

The graph is immutable after build; all queries are read-only and the
outputs are deterministic (ties broken by numeric id suffix).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum

from shiftup import ShiftUpError, ids
from shiftup.artifacts.model import ArtifactBundle

NODE_TYPES = {
    ids.REQUIREMENT: "requirement",
    ids.STORY: "story",
    ids.TEST: "test",
    ids.PHASE: "phase",
    ids.ISSUE: "issue",
}


class EdgeKind(str, Enum):
    COVERS = "covers"
    CONSTRAINS = "constrains"
    CONTAINS = "contains"
    DEPENDS_ON = "depends_on"


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: EdgeKind


@dataclass(frozen=True)
class TraceGraph:
    nodes: dict[str, str]  # id -> node type
    edges: frozenset[Edge]

    def outgoing(self, node: str) -> list[Edge]:
        return sorted(
            (e for e in self.edges if e.source == node),
            key=lambda e: (ids.sort_key(e.target), e.kind.value),
        )

    def incoming(self, node: str) -> list[Edge]:
        return sorted(
            (e for e in self.edges if e.target == node),
            key=lambda e: (ids.sort_key(e.source), e.kind.value),
        )

    def without_edges(self, drop: set[Edge]) -> "TraceGraph":
        return TraceGraph(nodes=dict(self.nodes), edges=self.edges - drop)


class PhaseCycleError(ShiftUpError):
    """Raised when phase dependencies contain a cycle."""

    def __init__(self, phase_ids: set[str]):
        self.phase_ids = set(phase_ids)
        members = ", ".join(sorted(self.phase_ids, key=ids.sort_key))
        super().__init__(f"phase dependency cycle: {members}")


@dataclass(frozen=True)
class CoverageReport:
    uncovered_stories: tuple[str, ...]
    uncovered_requirements: tuple[str, ...]
    unconstrained_tests: tuple[str, ...]
    unphased_tests: tuple[str, ...]
    story_coverage: float
    requirement_coverage: float
    test_constraint_coverage: float
    test_phase_coverage: float

    def to_dict(self) -> dict:
        return {
            "uncovered_stories": list(self.uncovered_stories),
            "uncovered_requirements": list(self.uncovered_requirements),
            "unconstrained_tests": list(self.unconstrained_tests),
            "unphased_tests": list(self.unphased_tests),
            "ratios": {
                "story_coverage": self.story_coverage,
                "requirement_coverage": self.requirement_coverage,
                "test_constraint_coverage": self.test_constraint_coverage,
                "test_phase_coverage": self.test_phase_coverage,
            },
        }


def build_graph(bundle: ArtifactBundle) -> TraceGraph:
    """Trace graph of a valid bundle; node and edge sets are a pure
    function of the bundle's cross-references."""
    nodes: dict[str, str] = {}
    for r in bundle.requirements:
        nodes[r.id] = NODE_TYPES[ids.REQUIREMENT]
    for s in bundle.stories:
        nodes[s.id] = NODE_TYPES[ids.STORY]
    for t in bundle.tests:
        nodes[t.id] = NODE_TYPES[ids.TEST]
    for p in bundle.phases:
        nodes[p.id] = NODE_TYPES[ids.PHASE]
    for i in bundle.issues:
        nodes[i.id] = NODE_TYPES[ids.ISSUE]

    edges: set[Edge] = set()
    for s in bundle.stories:
        for ref in s.requirement_refs:
            edges.add(Edge(s.id, ref, EdgeKind.COVERS))
    for t in bundle.tests:
        edges.add(Edge(t.id, t.story_ref, EdgeKind.COVERS))
    for i in bundle.issues:
        for ref in i.constraint_test_ids:
            edges.add(Edge(i.id, ref, EdgeKind.CONSTRAINS))
    for p in bundle.phases:
        for i in bundle.issues:
            if i.phase_ref == p.id:
                edges.add(Edge(p.id, i.id, EdgeKind.CONTAINS))
        for ref in p.test_ids:
            edges.add(Edge(p.id, ref, EdgeKind.CONTAINS))
        for dep in p.depends_on:
            edges.add(Edge(p.id, dep, EdgeKind.DEPENDS_ON))
    return TraceGraph(nodes=nodes, edges=frozenset(edges))


def _phase_dependencies(graph: TraceGraph) -> dict[str, set[str]]:
    deps: dict[str, set[str]] = {
        node: set() for node, kind in graph.nodes.items() if kind == "phase"
    }
    for edge in graph.edges:
        if edge.kind == EdgeKind.DEPENDS_ON and edge.source in deps:
            deps[edge.source].add(edge.target)
    return deps


def _cycle_members(deps: dict[str, set[str]]) -> set[str]:
    """Phase ids sitting on some dependency cycle (nontrivial SCCs plus
    self-loops), via iterative Tarjan."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = [0]
    members: set[str] = set()

    for start in deps:
        if start in index:
            continue
        work = [(start, iter(sorted(deps[start], key=ids.sort_key)))]
        index[start] = low[start] = counter[0]
        counter[0] += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in deps:
                    continue
                if child not in index:
                    index[child] = low[child] = counter[0]
                    counter[0] += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(sorted(deps[child], key=ids.sort_key))))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1 or node in deps[node]:
                    members.update(component)
    return members


def phase_order(graph: TraceGraph) -> list[str]:
    """Deterministic topological order of phases (dependencies first,
    ties by ascending numeric id). Raises PhaseCycleError naming every
    phase on a cycle."""
    deps = _phase_dependencies(graph)
    cyclic = _cycle_members(deps)
    if cyclic:
        raise PhaseCycleError(cyclic)

    dependents: dict[str, list[str]] = {p: [] for p in deps}
    pending = {p: 0 for p in deps}
    for phase, targets in deps.items():
        for dep in targets:
            if dep in dependents:
                dependents[dep].append(phase)
                pending[phase] += 1
    ready = [ids.numeric_suffix(p) for p, count in pending.items() if count == 0]
    heapq.heapify(ready)
    by_suffix = {ids.numeric_suffix(p): p for p in deps}
    order: list[str] = []
    while ready:
        phase = by_suffix[heapq.heappop(ready)]
        order.append(phase)
        for dependent in dependents[phase]:
            pending[dependent] -= 1
            if pending[dependent] == 0:
                heapq.heappush(ready, ids.numeric_suffix(dependent))
    return order


def _ratio(uncovered: int, total: int) -> float:
    if total == 0:
        return 1.0
    return (total - uncovered) / total


def coverage_report(graph: TraceGraph) -> CoverageReport:
    """Linkage gaps across the four covers/constrains/contains axes."""
    stories = {n for n, k in graph.nodes.items() if k == "story"}
    requirements = {n for n, k in graph.nodes.items() if k == "requirement"}
    tests = {n for n, k in graph.nodes.items() if k == "test"}

    covered_stories: set[str] = set()
    covered_requirements: set[str] = set()
    constrained_tests: set[str] = set()
    phased_tests: set[str] = set()
    for edge in graph.edges:
        source_kind = graph.nodes.get(edge.source)
        if edge.kind == EdgeKind.COVERS and source_kind == "test":
            covered_stories.add(edge.target)
        elif edge.kind == EdgeKind.COVERS and source_kind == "story":
            covered_requirements.add(edge.target)
        elif edge.kind == EdgeKind.CONSTRAINS and source_kind == "issue":
            constrained_tests.add(edge.target)
        elif edge.kind == EdgeKind.CONTAINS and edge.target in tests:
            phased_tests.add(edge.target)

    def gap(universe: set[str], hit: set[str]) -> tuple[str, ...]:
        return tuple(sorted(universe - hit, key=ids.sort_key))

    uncovered_stories = gap(stories, covered_stories)
    uncovered_requirements = gap(requirements, covered_requirements)
    unconstrained = gap(tests, constrained_tests)
    unphased = gap(tests, phased_tests)
    return CoverageReport(
        uncovered_stories=uncovered_stories,
        uncovered_requirements=uncovered_requirements,
        unconstrained_tests=unconstrained,
        unphased_tests=unphased,
        story_coverage=_ratio(len(uncovered_stories), len(stories)),
        requirement_coverage=_ratio(len(uncovered_requirements), len(requirements)),
        test_constraint_coverage=_ratio(len(unconstrained), len(tests)),
        test_phase_coverage=_ratio(len(unphased), len(tests)),
    )


def impact_of(graph: TraceGraph, artifact_id: str) -> set[str]:
    """Everything gated by or depending on ``artifact_id``: all ids that
    reach it along forward edges, found by walking edges backwards."""
    if artifact_id not in graph.nodes:
        raise KeyError(artifact_id)
    predecessors: dict[str, set[str]] = {}
    for edge in graph.edges:
        predecessors.setdefault(edge.target, set()).add(edge.source)
    seen: set[str] = set()
    frontier = [artifact_id]
    while frontier:
        node = frontier.pop()
        for pred in predecessors.get(node, ()):
            if pred not in seen and pred != artifact_id:
                seen.add(pred)
                frontier.append(pred)
    return seen


def to_json_dict(graph: TraceGraph) -> dict:
    """{nodes, edges} with arrays sorted for stable output."""
    nodes = [
        {"id": node, "type": kind}
        for node, kind in sorted(graph.nodes.items(), key=lambda kv: ids.sort_key(kv[0]))
    ]
    edges = [
        {"from": e.source, "to": e.target, "kind": e.kind.value}
        for e in sorted(
            graph.edges,
            key=lambda e: (ids.sort_key(e.source), ids.sort_key(e.target), e.kind.value),
        )
    ]
    return {"nodes": nodes, "edges": edges}


def to_dot(graph: TraceGraph) -> str:
    """Deterministic graph-description text for visualization."""
    payload = to_json_dict(graph)
    lines = ["digraph trace {"]
    for node in payload["nodes"]:
        lines.append(f'  "{node["id"]}" [type="{node["type"]}"];')
    for edge in payload["edges"]:
        lines.append(f'  "{edge["from"]}" -> "{edge["to"]}" [label="{edge["kind"]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
