"""Trace graph: ordering, coverage, impact."""

import random

import pytest

from shiftup import ids
from shiftup.artifacts.model import IssueStatus
from shiftup.graph import (
    Edge,
    EdgeKind,
    PhaseCycleError,
    build_graph,
    coverage_report,
    impact_of,
    phase_order,
    to_dot,
    to_json_dict,
)

from builders import make_bundle, random_graph_bundle, single_issue_bundle
from oracles import forward_impact_sets

RANDOM_BUNDLE_ROUNDS = 200


class TestBuild:
    def test_fixture_node_counts(self, fixture_bundle):
        graph = build_graph(fixture_bundle)
        by_type: dict[str, int] = {}
        for kind in graph.nodes.values():
            by_type[kind] = by_type.get(kind, 0) + 1
        assert by_type == {
            "requirement": 32,
            "story": 68,
            "test": 175,
            "phase": 10,
            "issue": 30,
        }

    def test_fixture_edge_kinds_present(self, fixture_bundle):
        graph = build_graph(fixture_bundle)
        test = fixture_bundle.tests[0]
        assert Edge(test.id, test.story_ref, EdgeKind.COVERS) in graph.edges
        issue = fixture_bundle.issues[0]
        assert Edge(issue.id, issue.constraint_test_ids[0], EdgeKind.CONSTRAINS) in graph.edges
        assert Edge(issue.phase_ref, issue.id, EdgeKind.CONTAINS) in graph.edges
        phase = fixture_bundle.phases[1]
        assert Edge(phase.id, phase.depends_on[0], EdgeKind.DEPENDS_ON) in graph.edges

    def test_without_edges_leaves_original_alone(self, fixture_bundle):
        graph = build_graph(fixture_bundle)
        drop = {next(iter(graph.edges))}
        smaller = graph.without_edges(drop)
        assert len(smaller.edges) == len(graph.edges) - 1
        assert drop <= graph.edges
        assert smaller.nodes == graph.nodes

    def test_outgoing_incoming_sorted(self, fixture_bundle):
        graph = build_graph(fixture_bundle)
        out = graph.outgoing("PH-1")
        targets = [e.target for e in out]
        assert targets == sorted(targets, key=ids.sort_key)
        incoming = graph.incoming("US-1")
        sources = [e.source for e in incoming]
        assert sources == sorted(sources, key=ids.sort_key)


class TestPhaseOrder:
    def test_fixture_order(self, fixture_bundle):
        graph = build_graph(fixture_bundle)
        assert phase_order(graph) == [f"PH-{n}" for n in range(1, 11)]

    def test_ties_broken_by_numeric_suffix(self):
        bundle = make_bundle(
            [("PH-3", [], 1), ("PH-1", [], 1), ("PH-2", ["PH-3"], 1)],
            [],
        )
        assert phase_order(build_graph(bundle)) == ["PH-1", "PH-3", "PH-2"]

    def test_cycle_reports_members_only(self):
        bundle = make_bundle(
            [
                ("PH-1", ["PH-3"], 1),
                ("PH-2", ["PH-1"], 1),
                ("PH-3", ["PH-2"], 1),
                ("PH-4", ["PH-1"], 1),
            ],
            [],
        )
        with pytest.raises(PhaseCycleError) as exc:
            phase_order(build_graph(bundle))
        assert exc.value.phase_ids == {"PH-1", "PH-2", "PH-3"}
        assert "PH-1, PH-2, PH-3" in str(exc.value)

    def test_self_dependency_is_a_cycle(self):
        bundle = make_bundle([("PH-1", ["PH-1"], 1)], [])
        with pytest.raises(PhaseCycleError) as exc:
            phase_order(build_graph(bundle))
        assert exc.value.phase_ids == {"PH-1"}


class TestImpact:
    def test_small_bundle_impacts(self):
        graph = build_graph(single_issue_bundle(test_count=3))
        assert impact_of(graph, "TC-1") == {"ISS-1", "PH-1"}
        assert impact_of(graph, "US-1") == {"TC-1", "TC-2", "TC-3", "ISS-1", "PH-1"}
        assert impact_of(graph, "REQ-1") == {
            "US-1",
            "TC-1",
            "TC-2",
            "TC-3",
            "ISS-1",
            "PH-1",
        }
        assert impact_of(graph, "ISS-1") == {"PH-1"}
        assert impact_of(graph, "PH-1") == set()

    def test_excludes_the_start_node(self, fixture_bundle):
        graph = build_graph(fixture_bundle)
        for node in ("REQ-1", "US-1", "TC-1"):
            assert node not in impact_of(graph, node)

    def test_unknown_node_raises_key_error(self, fixture_bundle):
        graph = build_graph(fixture_bundle)
        with pytest.raises(KeyError):
            impact_of(graph, "TC-9999")

    def test_fixture_matches_reachability_oracle(self, fixture_bundle):
        graph = build_graph(fixture_bundle)
        expected = forward_impact_sets(
            set(graph.nodes), {(e.source, e.target) for e in graph.edges}
        )
        for node in graph.nodes:
            assert impact_of(graph, node) == expected[node], node


class TestCoverage:
    def test_fixture_fully_linked(self, fixture_bundle):
        report = coverage_report(build_graph(fixture_bundle))
        assert report.uncovered_stories == ()
        assert report.uncovered_requirements == ()
        assert report.unconstrained_tests == ()
        assert report.unphased_tests == ()
        assert report.story_coverage == 1.0
        assert report.requirement_coverage == 1.0
        assert report.test_constraint_coverage == 1.0
        assert report.test_phase_coverage == 1.0

    def test_gaps_are_listed_in_id_order(self):
        bundle = make_bundle(
            [("PH-1", [], 2)],
            [("ISS-1", "PH-1", ["TC-2"], IssueStatus.OPEN)],
        )
        bundle.tests = [t for t in bundle.tests]
        report = coverage_report(build_graph(bundle))
        assert report.unconstrained_tests == ("TC-1",)
        assert report.test_constraint_coverage == 0.5

    def test_to_dict_shape(self, fixture_bundle):
        payload = coverage_report(build_graph(fixture_bundle)).to_dict()
        assert set(payload) == {
            "uncovered_stories",
            "uncovered_requirements",
            "unconstrained_tests",
            "unphased_tests",
            "ratios",
        }
        assert set(payload["ratios"]) == {
            "story_coverage",
            "requirement_coverage",
            "test_constraint_coverage",
            "test_phase_coverage",
        }


def _ratios(report) -> tuple[float, float, float, float]:
    return (
        report.story_coverage,
        report.requirement_coverage,
        report.test_constraint_coverage,
        report.test_phase_coverage,
    )


class TestRandomBundles:
    def test_two_hundred_random_dags(self):
        rng = random.Random(1234)
        for round_no in range(RANDOM_BUNDLE_ROUNDS):
            bundle = random_graph_bundle(rng)
            graph = build_graph(bundle)
            phase_ids = [p.id for p in bundle.phases]

            order = phase_order(graph)
            assert sorted(order, key=ids.sort_key) == sorted(phase_ids, key=ids.sort_key)
            position = {p: i for i, p in enumerate(order)}
            for phase in bundle.phases:
                for dep in phase.depends_on:
                    assert position[dep] < position[phase.id], (round_no, phase.id)

            rebuilt = build_graph(bundle)
            assert phase_order(rebuilt) == order
            assert phase_order(graph) == order

            expected = forward_impact_sets(
                set(graph.nodes), {(e.source, e.target) for e in graph.edges}
            )
            for node in graph.nodes:
                assert impact_of(graph, node) == expected[node], (round_no, node)

            before = _ratios(coverage_report(graph))
            assert all(0.0 <= r <= 1.0 for r in before)
            edges = sorted(
                graph.edges, key=lambda e: (e.source, e.target, e.kind.value)
            )
            drop = set(rng.sample(edges, rng.randint(0, len(edges))))
            after = _ratios(coverage_report(graph.without_edges(drop)))
            for shrunk, original in zip(after, before):
                assert shrunk <= original + 1e-12, round_no


class TestSerialization:
    def test_json_dict_sorted_and_complete(self, fixture_bundle):
        graph = build_graph(fixture_bundle)
        payload = to_json_dict(graph)
        assert len(payload["nodes"]) == len(graph.nodes)
        assert len(payload["edges"]) == len(graph.edges)
        node_ids = [n["id"] for n in payload["nodes"]]
        assert node_ids == sorted(node_ids, key=ids.sort_key)
        assert payload["edges"] == sorted(
            payload["edges"],
            key=lambda e: (ids.sort_key(e["from"]), ids.sort_key(e["to"]), e["kind"]),
        )

    def test_dot_output(self, fixture_bundle):
        text = to_dot(build_graph(fixture_bundle))
        assert text.startswith("digraph trace {\n")
        assert text.endswith("}\n")
        assert '"PH-2" -> "PH-1" [label="depends_on"];' in text
