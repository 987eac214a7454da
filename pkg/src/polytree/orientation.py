"""Three-phase edge orientation of a known polytree skeleton.

Given the true skeleton, an in-degree bound d, and a CMI threshold tester,
the algorithm produces a complete orientation:

* Phase 1 orients strong v-structures: for subset sizes γ = d down to 2 it
  looks for a center v and γ candidate parents T where every member's CMI
  with the rest of T given v clears the threshold.
* Phase 2 alternates a degree-forcing rule (a vertex that already has d
  parents sends every remaining undirected edge outward) with a local search
  that tests each undirected neighbor u of a partially-oriented vertex v:
  conditional dependence on the known parents given v forces u -> v,
  unconditional dependence forces v -> u, and if neither test fires the edge
  stays undirected.
* Phase 3 orients whatever is left away from per-component roots, giving each
  vertex at most one extra parent.

Edges are never unoriented. Every orientation event is logged with the test
values that triggered it; replaying the log from the bare skeleton reproduces
the output exactly.

Threshold conventions follow the analysis: Phase 1 fires on ``estimate >=
threshold``, Phase 2 on strictly ``>``. Ties sit on a measure-zero set, so the
distinction never matters in practice, but it is preserved as stated.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from polytree.ci_test import DEFAULT_TESTER_CONSTANT, TesterConfig, TestVerdict, test_cmi
from polytree.graphs import PolytreeGraph, Skeleton
from polytree.model import JointTable
from polytree.sampling import Dataset
from itertools import combinations


def default_epsilon_prime(epsilon: float, n: int, d: int) -> float:
    """Per-test tolerance that survives a union bound over all tests."""
    return epsilon / (2.0 * n * (d + 1))


@dataclass(frozen=True)
class OrientationConfig:
    """Inputs of the orientation run: degree bound, tolerance, tester source."""

    d: int
    epsilon_prime: float
    source: JointTable | Dataset
    C: float = DEFAULT_TESTER_CONSTANT

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"in-degree bound must be >= 1, got {self.d}")
        if not self.epsilon_prime > 0.0:
            raise ValueError(f"epsilon_prime must be positive, got {self.epsilon_prime}")

    def tester(self) -> TesterConfig:
        return TesterConfig(source=self.source, epsilon=self.epsilon_prime, C=self.C)


@dataclass(frozen=True)
class TestRecord:
    """One CMI test: I(a; b | z) with its value and decision threshold."""

    a: tuple[int, ...]
    b: tuple[int, ...]
    z: tuple[int, ...]
    value: float
    threshold: float


@dataclass(frozen=True)
class TraceEvent:
    """Edge u -> v oriented in `phase`, with the tests that triggered it."""

    phase: int
    u: int
    v: int
    tests: tuple[TestRecord, ...] = ()


@dataclass(frozen=True)
class OrientationTrace:
    events: tuple[TraceEvent, ...]

    def replay(self, skeleton: Skeleton) -> PolytreeGraph:
        """Re-apply the logged orientations to a bare skeleton."""
        state = PartialOrientation(skeleton)
        for ev in self.events:
            state.orient(ev.u, ev.v)
        return state.oriented_graph()

    def to_jsonl(self) -> str:
        """One JSON record per orientation event."""
        lines = []
        for ev in self.events:
            lines.append(
                json.dumps(
                    {
                        "phase": ev.phase,
                        "u": ev.u,
                        "v": ev.v,
                        "tests": [
                            {
                                "vars": [list(t.a), list(t.b), list(t.z)],
                                "value": t.value,
                                "threshold": t.threshold,
                            }
                            for t in ev.tests
                        ],
                    }
                )
            )
        return "\n".join(lines) + ("\n" if lines else "")


class PartialOrientation:
    """Skeleton plus per-vertex incoming / outgoing / undirected neighbor sets.

    The three sets partition each vertex's neighborhood at all times, and
    ``orient`` is the only mutation: it moves one edge from undirected to
    oriented and refuses to touch an edge twice.
    """

    def __init__(self, skeleton: Skeleton):
        self.skeleton = skeleton
        n = skeleton.n
        self._in: list[set[int]] = [set() for _ in range(n)]
        self._out: list[set[int]] = [set() for _ in range(n)]
        self._un: list[set[int]] = [set(skeleton.neighbors(v)) for v in range(n)]

    @property
    def n(self) -> int:
        return self.skeleton.n

    def incoming(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._in[v]))

    def outgoing(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._out[v]))

    def unoriented(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._un[v]))

    def orient(self, u: int, v: int) -> None:
        """Record u -> v. The edge must currently be unoriented (no re-orienting)."""
        if v not in self._un[u] or u not in self._un[v]:
            raise ValueError(f"cannot orient {u} -> {v}: edge absent or already oriented")
        self._un[v].discard(u)
        self._in[v].add(u)
        self._un[u].discard(v)
        self._out[u].add(v)
        assert self._partition_ok(u) and self._partition_ok(v)

    def _partition_ok(self, v: int) -> bool:
        nbrs = set(self.skeleton.neighbors(v))
        parts = (self._in[v], self._out[v], self._un[v])
        disjoint = sum(len(s) for s in parts) == len(set().union(*parts))
        return disjoint and set().union(*parts) == nbrs

    def unoriented_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in self.skeleton.edges if v in self._un[u]]

    def oriented_arcs(self) -> list[tuple[int, int]]:
        return sorted((u, v) for v in range(self.n) for u in self._in[v])

    def oriented_graph(self) -> PolytreeGraph:
        return PolytreeGraph(self.n, tuple(self.oriented_arcs()))


# ---------------------------------------------------------------------------
# Phases
# ---------------------------------------------------------------------------

def _record(verdict: TestVerdict, a, b, z) -> TestRecord:
    return TestRecord(
        a=tuple(sorted(a)),
        b=tuple(sorted(b)),
        z=tuple(sorted(z)),
        value=verdict.estimate,
        threshold=verdict.threshold,
    )


def phase1(state: PartialOrientation, cfg: OrientationConfig) -> list[TraceEvent]:
    """Orient strong v-structures, largest candidate parent sets first.

    Candidate sets T are drawn from a center's incoming and undirected
    neighbors only: an edge already oriented outward can never legally point
    back in, since edges are never unoriented. Members of T that are already
    incoming are skipped as no-ops (the budget check ``|T ∪ incoming| <= d``
    explicitly tolerates the overlap).
    """
    tester = cfg.tester()
    events: list[TraceEvent] = []
    for gamma in range(cfg.d, 1, -1):
        for v in range(state.n):
            eligible = tuple(sorted(set(state.incoming(v)) | set(state.unoriented(v))))
            for t_set in combinations(eligible, gamma):
                if len(set(t_set) | set(state.incoming(v))) > cfg.d:
                    continue
                records = []
                for u in t_set:
                    rest = tuple(x for x in t_set if x != u)
                    verdict = test_cmi(tester, [u], rest, [v])
                    if not verdict.is_large:
                        records = None
                        break
                    records.append(_record(verdict, [u], rest, [v]))
                if records is None:
                    continue
                for u in t_set:
                    if u in state._un[v]:
                        state.orient(u, v)
                        events.append(TraceEvent(1, u, v, tuple(records)))
    return events


def _apply_degree_rule(state: PartialOrientation, d: int, events: list[TraceEvent]) -> bool:
    """Point undirected edges away from any vertex that already has d parents."""
    changed = False
    progress = True
    while progress:
        progress = False
        for v in range(state.n):
            if len(state._in[v]) == d and state._un[v]:
                for u in state.unoriented(v):
                    state.orient(v, u)
                    events.append(TraceEvent(2, v, u))
                changed = progress = True
    return changed


def phase2(state: PartialOrientation, cfg: OrientationConfig) -> list[TraceEvent]:
    """Degree-forcing plus local-search sweeps until a full pass changes nothing."""
    tester = cfg.tester()
    events: list[TraceEvent] = []
    n_edges = len(state.skeleton.edges)
    passes = 0
    while True:
        passes += 1
        assert passes <= n_edges + 1, "each pass must orient an edge or be the last"
        changed = _apply_degree_rule(state, cfg.d, events)
        for v in range(state.n):
            for u in state.unoriented(v):
                known = state.incoming(v)
                if not 1 <= len(known) < cfg.d:
                    break
                conditional = test_cmi(tester, [u], known, [v])
                if conditional.estimate > conditional.threshold:
                    state.orient(u, v)
                    events.append(
                        TraceEvent(2, u, v, (_record(conditional, [u], known, [v]),))
                    )
                    changed = True
                    continue
                unconditional = test_cmi(tester, [u], known, [])
                if unconditional.estimate > unconditional.threshold:
                    state.orient(v, u)
                    events.append(
                        TraceEvent(
                            2,
                            v,
                            u,
                            (
                                _record(conditional, [u], known, [v]),
                                _record(unconditional, [u], known, []),
                            ),
                        )
                    )
                    changed = True
                # Neither test firing leaves the edge undirected on purpose.
        if not changed:
            return events


def phase3(state: PartialOrientation) -> tuple[PolytreeGraph, list[TraceEvent]]:
    """Orient the leftover forest away from per-component roots.

    The root of each component of the leftover forest is its lowest vertex
    index; a depth-first traversal then orients every remaining edge away
    from it, so no vertex gains more than one new parent.
    """
    events: list[TraceEvent] = []
    leftover = Skeleton(state.n, tuple(state.unoriented_edges()))
    visited: set[int] = set()
    for comp in leftover.components():
        if len(comp) == 1:
            continue
        root = comp[0]
        stack = [root]
        visited.add(root)
        while stack:
            x = stack.pop()
            for y in leftover.neighbors(x):
                if y not in visited:
                    visited.add(y)
                    state.orient(x, y)
                    events.append(TraceEvent(3, x, y))
                    stack.append(y)
    return state.oriented_graph(), events


def learn_orientation(
    skeleton: Skeleton, cfg: OrientationConfig
) -> tuple[PolytreeGraph, OrientationTrace]:
    """Run the three phases on a bare skeleton; returns (orientation, trace)."""
    state = PartialOrientation(skeleton)
    events = phase1(state, cfg)
    events += phase2(state, cfg)
    graph, tail = phase3(state)
    events += tail
    return graph, OrientationTrace(tuple(events))
