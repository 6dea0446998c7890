"""Independent reference computations the tests compare against.

Everything here recomputes an expected value by the most direct method
available (forward-closure brute force, closed-form chains, exhaustive
search) without calling the code under test.
"""

from __future__ import annotations

from fractions import Fraction


def forward_impact_sets(
    nodes: set[str], edges: set[tuple[str, str]]
) -> dict[str, set[str]]:
    """impact set per node, derived from forward reachability.

    Node n is impacted by x exactly when n reaches x along forward
    edges; computing every node's forward closure and inverting gives
    all impact sets at once, by a different route than a backward walk.
    """
    adjacency: dict[str, list[str]] = {}
    for source, target in edges:
        adjacency.setdefault(source, []).append(target)

    impact: dict[str, set[str]] = {node: set() for node in nodes}
    for start in nodes:
        seen: set[str] = set()
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for nxt in adjacency.get(node, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        for reached in seen:
            if reached in impact and reached != start:
                impact[reached].add(start)
    return impact


def truncated_geometric_mean(p: float, cap: int) -> float:
    """E[min(G, cap)] for G geometric on {1, 2, ...} with success p."""
    return sum(k * p * (1 - p) ** (k - 1) for k in range(1, cap + 1)) + cap * (
        1 - p
    ) ** cap


def chain_failing_probability(p_fix: float, d: float, calls: int) -> float:
    """P(one test still fails) after `calls` steps of the two-state chain.

    Starts failing. Each step: failing flips to passing with p_fix,
    passing regresses with d.
    """
    f = 1.0
    for _ in range(calls):
        f = f * (1 - p_fix) + (1 - f) * d
    return f


def guardrail_single_test(p_t: float, cap: int) -> tuple[float, float, float]:
    """(mean iterations, mean residual, stalled probability) for one
    feedback-looped test.

    Every generate call targets the lone failing test; the run closes
    at the first success and never exposes a passing test to another
    call, so regression is irrelevant and the iteration count is a
    geometric truncated at the cap.
    """
    residual = (1 - p_t) ** cap
    return truncated_geometric_mean(p_t, cap), residual, residual


def rounded_percent(count: int, total: int) -> int:
    return int(round(Fraction(100 * count, total)))


def percent_compositions(targets: tuple[int, ...], total: int) -> list[tuple[int, ...]]:
    """All count tuples summing to total whose banker's-rounded
    percentages equal the target percentages, sorted ascending."""
    candidates = [
        [c for c in range(total + 1) if rounded_percent(c, total) == p] for p in targets
    ]
    found: list[tuple[int, ...]] = []

    def descend(index: int, chosen: list[int], used: int) -> None:
        if index == len(candidates):
            if used == total:
                found.append(tuple(chosen))
            return
        for count in candidates[index]:
            if used + count <= total:
                chosen.append(count)
                descend(index + 1, chosen, used + count)
                chosen.pop()

    descend(0, [], 0)
    return sorted(found)
