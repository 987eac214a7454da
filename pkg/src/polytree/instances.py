"""Random problem instances and named fixtures.

Random polytrees are built in three steps: a uniform random labeled tree from
a Prüfer sequence (optionally thinned to a forest), a random orientation that
starts root-outward and then flips a random subset of edges toward higher
in-degrees while respecting the bound d (root-outward trees alone have
in-degree 1 everywhere and would never exercise v-structure detection), and
Dirichlet-sampled CPT rows. When ``min_edge_mi`` is set, CPTs are resampled
until every true edge carries at least that much exact mutual information,
so downstream experiments do not stall on near-degenerate instances; the
resampling runs per node in topological order, which keeps the acceptance
probability per draw local to one parent set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from polytree.graphs import PolytreeGraph
from polytree.information import mutual_information
from polytree.model import Alphabet, DiscreteBayesNet, JointTable
from polytree.sampling import RngSeed, derive_rng


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    d: int
    alphabet_size: int = 2
    cpt_concentration: float = 1.0
    min_edge_mi: float | None = None
    edge_drop_prob: float = 0.0
    seed: RngSeed = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if self.alphabet_size < 2:
            raise ValueError(f"alphabet_size must be >= 2, got {self.alphabet_size}")
        if not self.cpt_concentration > 0.0:
            raise ValueError("cpt_concentration must be positive")
        if not 0.0 <= self.edge_drop_prob < 1.0:
            raise ValueError("edge_drop_prob must be in [0, 1)")


def _prufer_tree(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Uniform random labeled tree on n vertices."""
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    seq = rng.integers(0, n, size=n - 2)
    degree = np.ones(n, dtype=np.int64)
    for x in seq:
        degree[x] += 1
    edges = []
    # Repeatedly join the smallest current leaf to the next sequence entry.
    import heapq

    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, int(x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, int(x))
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def _orient_edges(
    undirected: list[tuple[int, int]], n: int, d: int, rng: np.random.Generator
) -> list[tuple[int, int]]:
    """Root-outward orientation followed by random in-degree-respecting flips."""
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for u, v in undirected:
        adj[u].append(v)
        adj[v].append(u)
    directed: dict[tuple[int, int], tuple[int, int]] = {}
    seen: set[int] = set()
    for start in range(n):
        if start in seen or not adj[start]:
            seen.add(start)
            continue
        comp = [start]
        seen.add(start)
        i = 0
        while i < len(comp):
            x = comp[i]
            i += 1
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
        root = int(rng.choice(comp))
        stack = [root]
        visited = {root}
        while stack:
            x = stack.pop()
            for y in sorted(adj[x]):
                if y not in visited:
                    visited.add(y)
                    directed[(min(x, y), max(x, y))] = (x, y)
                    stack.append(y)
    indeg = np.zeros(n, dtype=np.int64)
    for p, c in directed.values():
        indeg[c] += 1
    keys = sorted(directed)
    order = rng.permutation(len(keys))
    for i in order:
        p, c = directed[keys[i]]
        if rng.random() < 0.5 and indeg[p] < d:
            directed[keys[i]] = (c, p)
            indeg[p] += 1
            indeg[c] -= 1
    return [directed[k] for k in keys]


def _sample_cpts(
    graph: PolytreeGraph, alphabet: Alphabet, concentration: float, rng: np.random.Generator
) -> tuple[np.ndarray, ...]:
    cpts = []
    for v in range(graph.n):
        rows = 1
        for p in graph.parents(v):
            rows *= alphabet.sizes[p]
        cpts.append(rng.dirichlet([concentration] * alphabet.sizes[v], size=rows))
    return tuple(cpts)


def _local_edge_mis(
    parent_marginals: list[np.ndarray], parent_sizes: tuple[int, ...], cpt: np.ndarray, sv: int
) -> tuple[list[float], np.ndarray]:
    """Exact MI of each (parent, child) edge, plus the child's marginal.

    In a polytree the parents of a vertex are mutually independent, so their
    joint is the product of their marginals and every edge MI is a local
    computation over (parents, child).
    """
    parent_joint = parent_marginals[0]
    for marg in parent_marginals[1:]:
        parent_joint = np.multiply.outer(parent_joint, marg)
    local = parent_joint.reshape(-1, 1) * cpt  # (parent configs, child values)
    child_marginal = local.sum(axis=0)
    grid = local.reshape(parent_sizes + (sv,))
    k = len(parent_sizes)
    mis = []
    for i in range(k):
        pair = grid.sum(axis=tuple(j for j in range(k) if j != i))
        table = JointTable(Alphabet((parent_sizes[i], sv)), pair.reshape(-1))
        mis.append(mutual_information(table, [0], [1]))
    return mis, child_marginal


def sample_cpts_with_min_edge_mi(
    graph: PolytreeGraph,
    alphabet: Alphabet,
    concentration: float,
    min_edge_mi: float,
    rng: np.random.Generator,
    attempts_per_node: int = 1000,
) -> tuple[np.ndarray, ...]:
    """Dirichlet CPTs resampled until every edge carries ``min_edge_mi`` bits.

    Nodes are processed in topological order, so each node's incoming-edge MI
    values depend only on already-fixed ancestor CPTs and can be accepted or
    resampled locally.
    """
    sizes = alphabet.sizes
    cpts: list[np.ndarray | None] = [None] * graph.n
    marginals: list[np.ndarray | None] = [None] * graph.n
    for v in graph.topological_order():
        ps = graph.parents(v)
        if not ps:
            cpts[v] = rng.dirichlet([concentration] * sizes[v], size=1)
            marginals[v] = cpts[v][0]
            continue
        parent_sizes = tuple(sizes[p] for p in ps)
        parent_marginals = [marginals[p] for p in ps]
        rows = math.prod(parent_sizes)
        worst = -1.0
        for _ in range(attempts_per_node):
            cpt = rng.dirichlet([concentration] * sizes[v], size=rows)
            mis, child_marginal = _local_edge_mis(parent_marginals, parent_sizes, cpt, sizes[v])
            low = min(mis)
            worst = max(worst, low)
            if low >= min_edge_mi:
                cpts[v] = cpt
                marginals[v] = child_marginal
                break
        else:
            raise RuntimeError(
                f"exhausted {attempts_per_node} CPT attempts at node {v}: best "
                f"min-incoming-edge MI {worst:.6f} < {min_edge_mi} "
                f"(parents {ps}, concentration={concentration})"
            )
    return tuple(cpts)  # type: ignore[arg-type]


def random_polytree(spec: InstanceSpec) -> DiscreteBayesNet:
    """Seeded random d-polytree with (optionally) informative edges throughout."""
    rng = derive_rng(spec.seed)
    undirected = _prufer_tree(spec.n, rng)
    if spec.edge_drop_prob > 0.0 and undirected:
        keep = rng.random(len(undirected)) >= spec.edge_drop_prob
        undirected = [e for e, k in zip(undirected, keep) if k]
    edges = _orient_edges(undirected, spec.n, spec.d, rng)
    graph = PolytreeGraph(spec.n, tuple(edges))
    alphabet = Alphabet((spec.alphabet_size,) * spec.n)
    if spec.min_edge_mi is None:
        return DiscreteBayesNet(graph, alphabet, _sample_cpts(graph, alphabet, spec.cpt_concentration, rng))
    cpts = sample_cpts_with_min_edge_mi(
        graph, alphabet, spec.cpt_concentration, spec.min_edge_mi, rng
    )
    return DiscreteBayesNet(graph, alphabet, cpts)


# Ten-node, in-degree-3 reference network: one deg-3 collider feeding a chain
# of deg-2 colliders, with enough pendant vertices to leave edges undirected.
FIGURE_NETWORK_EDGES = (
    (0, 3),  # a -> d
    (1, 3),  # b -> d
    (2, 3),  # c -> d
    (3, 5),  # d -> f
    (4, 5),  # e -> f
    (5, 6),  # f -> g
    (4, 7),  # e -> h
    (6, 8),  # g -> i
    (9, 6),  # j -> g
)


def figure1_fixture(seed: RngSeed) -> DiscreteBayesNet:
    """The ten-node binary reference polytree with seeded Dirichlet CPTs."""
    graph = PolytreeGraph(10, FIGURE_NETWORK_EDGES)
    alphabet = Alphabet.uniform(10)
    rng = derive_rng(seed)
    return DiscreteBayesNet(graph, alphabet, _sample_cpts(graph, alphabet, 1.0, rng))
