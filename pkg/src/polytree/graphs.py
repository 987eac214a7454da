"""Directed polytrees and their undirected skeletons.

A polytree is a DAG whose underlying undirected graph is a forest. Both graph
types here validate the forest property at construction time and are immutable
afterwards, so they can be shared freely between concurrent experiment runs.
Vertices are integers ``0..n-1``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


class ForestViolationError(ValueError):
    """Raised when an edge set contains an undirected cycle."""


class _UnionFind:
    """Minimal union-find for forest / cycle detection."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the components of a and b; False if already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _check_edge_set(n: int, edges, directed: bool) -> None:
    seen = set()
    uf = _UnionFind(n)
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"duplicate edge between {u} and {v}")
        seen.add(key)
        if not uf.union(u, v):
            kind = "skeleton" if directed else "edge set"
            raise ForestViolationError(f"{kind} contains an undirected cycle through ({u},{v})")


@dataclass(frozen=True)
class Skeleton:
    """Undirected forest on n vertices; edges stored canonically as (u, v), u < v."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        canon = tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges))
        object.__setattr__(self, "edges", canon)
        _check_edge_set(self.n, canon, directed=False)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(b if a == v else a for a, b in self.edges if v in (a, b)))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in set(self.edges)

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest member."""
        adj = {v: [] for v in range(self.n)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen: set[int] = set()
        comps = []
        for start in range(self.n):
            if start in seen:
                continue
            comp = []
            queue = deque([start])
            seen.add(start)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in sorted(adj[x]):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def path(self, u: int, v: int) -> list[int] | None:
        """The unique path from u to v, or None if disconnected."""
        if u == v:
            return [u]
        adj = {x: [] for x in range(self.n)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        prev = {u: u}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if y not in prev:
                    prev[y] = x
                    if y == v:
                        out = [v]
                        while out[-1] != u:
                            out.append(prev[out[-1]])
                        return out[::-1]
                    queue.append(y)
        return None

    def to_text(self) -> str:
        """Edge-list export: one ``u v`` pair per line with u < v."""
        return "".join(f"{u} {v}\n" for u, v in self.edges)


@dataclass(frozen=True)
class PolytreeGraph:
    """Directed graph whose skeleton is a forest.

    Edges are (parent, child) pairs. The forest property of the skeleton is
    what makes the graph a polytree; being a *d*-polytree (all in-degrees at
    most d) is a queryable predicate, not a construction constraint.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    _parents: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())

    def __post_init__(self):
        edges = tuple((int(p), int(c)) for p, c in self.edges)
        object.__setattr__(self, "edges", edges)
        _check_edge_set(self.n, edges, directed=True)
        par: list[list[int]] = [[] for _ in range(self.n)]
        for p, c in edges:
            par[c].append(p)
        object.__setattr__(self, "_parents", tuple(tuple(sorted(ps)) for ps in par))

    def parents(self, v: int) -> tuple[int, ...]:
        """Parent set of v in ascending order."""
        return self._parents[v]

    def children(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(c for p, c in self.edges if p == v))

    def in_degree(self, v: int) -> int:
        return len(self._parents[v])

    @property
    def max_in_degree(self) -> int:
        return max((len(ps) for ps in self._parents), default=0)

    def is_d_polytree(self, d: int) -> bool:
        return self.max_in_degree <= d

    def skeleton(self) -> Skeleton:
        return Skeleton(self.n, self.edges)

    def topological_order(self) -> list[int]:
        """Kahn's algorithm; ties broken by ascending vertex index."""
        from heapq import heapify, heappop, heappush

        indeg = [self.in_degree(v) for v in range(self.n)]
        ready = [v for v in range(self.n) if indeg[v] == 0]
        heapify(ready)
        order = []
        while ready:
            v = heappop(ready)
            order.append(v)
            for c in self.children(v):
                indeg[c] -= 1
                if indeg[c] == 0:
                    heappush(ready, c)
        return order
