"""Exact representation of discrete distributions factorizing over polytrees.

Two substrates live here:

* :class:`DiscreteBayesNet` — per-node conditional probability tables over a
  :class:`~polytree.graphs.PolytreeGraph`; the generative object.
* :class:`JointTable` — a dense probability mass function over all joint
  assignments; the substrate every exact information-theoretic quantity is
  computed from.

Dense tables are capped at ``DENSE_TABLE_BUDGET`` cells. Anything bigger
raises :class:`BudgetExceededError` instead of silently approximating: this
library exists to produce exact desk-scale numbers.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from polytree.graphs import PolytreeGraph

# Exact mode refuses tables beyond 2^24 cells (~128 MiB of float64).
DENSE_TABLE_BUDGET = 2**24

CPT_ROW_SUM_TOL = 1e-12
PMF_SUM_TOL = 1e-10


class BudgetExceededError(ValueError):
    """Requested dense table does not fit the exact-computation budget."""


def require_dense_budget(sizes, what: str = "table") -> int:
    cells = math.prod(sizes) if sizes else 1
    if cells > DENSE_TABLE_BUDGET:
        raise BudgetExceededError(
            f"{what} needs {cells} cells, over the dense budget of {DENSE_TABLE_BUDGET}"
        )
    return cells


@dataclass(frozen=True)
class Alphabet:
    """Per-variable cardinalities; every variable has at least two symbols."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        for i, s in enumerate(sizes):
            if s < 2:
                raise ValueError(f"alphabet size of variable {i} is {s}; must be >= 2")

    @property
    def n_vars(self) -> int:
        return len(self.sizes)

    @property
    def table_cells(self) -> int:
        return math.prod(self.sizes) if self.sizes else 1

    @classmethod
    def uniform(cls, n: int, size: int = 2) -> Alphabet:
        return cls((size,) * n)


@dataclass(frozen=True)
class JointTable:
    """Dense pmf over joint assignments, row-major over variables 0..n-1.

    ``pmf[i]`` is the probability of the assignment ``np.unravel_index(i, sizes)``.
    Entries are nonnegative and sum to 1 within ``PMF_SUM_TOL``. The array is
    frozen after construction.
    """

    alphabet: Alphabet
    pmf: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.pmf, dtype=np.float64).reshape(-1))
        expected = self.alphabet.table_cells
        if arr.size != expected:
            raise ValueError(f"pmf has {arr.size} entries, alphabet implies {expected}")
        if arr.size and arr.min() < 0.0:
            raise ValueError(f"pmf has a negative entry: {arr.min()}")
        total = math.fsum(arr.tolist())
        if abs(total - 1.0) > PMF_SUM_TOL:
            raise ValueError(f"pmf sums to {total!r}, outside tolerance {PMF_SUM_TOL}")
        arr.flags.writeable = False
        object.__setattr__(self, "pmf", arr)

    @property
    def n_vars(self) -> int:
        return self.alphabet.n_vars

    def grid(self) -> np.ndarray:
        """The pmf reshaped to one axis per variable."""
        shape = self.alphabet.sizes if self.alphabet.sizes else (1,)
        return self.pmf.reshape(shape)

    def prob(self, assignment) -> float:
        idx = np.ravel_multi_index(tuple(assignment), self.alphabet.sizes)
        return float(self.pmf[idx])


@dataclass(frozen=True)
class DiscreteBayesNet:
    """Per-node CPTs over a polytree.

    ``cpts[v]`` has shape ``(#parent configurations, |Σ_v|)``. Parent
    configurations are indexed row-major over the parents of v in ascending
    vertex order (the last-listed parent varies fastest). Each row is a
    conditional distribution and must sum to 1 within ``CPT_ROW_SUM_TOL``.
    """

    graph: PolytreeGraph
    alphabet: Alphabet
    cpts: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.graph.n != self.alphabet.n_vars:
            raise ValueError(
                f"graph has {self.graph.n} vertices but alphabet has {self.alphabet.n_vars}"
            )
        if len(self.cpts) != self.graph.n:
            raise ValueError(f"expected {self.graph.n} CPTs, got {len(self.cpts)}")
        frozen = []
        for v in range(self.graph.n):
            table = np.ascontiguousarray(np.asarray(self.cpts[v], dtype=np.float64))
            rows = math.prod(self.parent_sizes(v)) if self.graph.parents(v) else 1
            want = (rows, self.alphabet.sizes[v])
            if table.shape != want:
                raise ValueError(f"CPT of node {v} has shape {table.shape}, expected {want}")
            if table.min() < 0.0 or table.max() > 1.0 + CPT_ROW_SUM_TOL:
                raise ValueError(f"CPT of node {v} has entries outside [0, 1]")
            sums = table.sum(axis=1)
            bad = np.abs(sums - 1.0) > CPT_ROW_SUM_TOL
            if bad.any():
                row = int(np.argmax(bad))
                raise ValueError(
                    f"CPT row {row} of node {v} sums to {sums[row]!r}, "
                    f"outside tolerance {CPT_ROW_SUM_TOL}"
                )
            table.flags.writeable = False
            frozen.append(table)
        object.__setattr__(self, "cpts", tuple(frozen))

    @property
    def n(self) -> int:
        return self.graph.n

    def parent_sizes(self, v: int) -> tuple[int, ...]:
        return tuple(self.alphabet.sizes[p] for p in self.graph.parents(v))

    def parent_config_index(self, v: int, values) -> int:
        """Row index of the CPT of v for the given parent values (ascending order)."""
        ps = self.graph.parents(v)
        if not ps:
            return 0
        return int(np.ravel_multi_index(tuple(values), self.parent_sizes(v)))


# ---------------------------------------------------------------------------
# Dense-table operations
# ---------------------------------------------------------------------------

def _cpt_broadcast_factor(bn: DiscreteBayesNet, v: int) -> np.ndarray:
    """CPT of v reshaped so it broadcasts against the full joint grid."""
    ps = bn.graph.parents(v)
    sizes = bn.alphabet.sizes
    factor = bn.cpts[v].reshape(tuple(sizes[p] for p in ps) + (sizes[v],))
    involved = list(ps) + [v]
    # Reorder factor axes into ascending variable order, then pad with
    # singleton axes so plain broadcasting lines each axis up with its variable.
    factor = np.transpose(factor, axes=np.argsort(involved))
    shape = [1] * bn.n
    for var in involved:
        shape[var] = sizes[var]
    return factor.reshape(shape)


def joint_distribution(bn: DiscreteBayesNet) -> JointTable:
    """Exact joint pmf of the net: the product of all CPT factors."""
    require_dense_budget(bn.alphabet.sizes, "joint distribution")
    grid = np.ones(bn.alphabet.sizes, dtype=np.float64)
    for v in range(bn.n):
        grid = grid * _cpt_broadcast_factor(bn, v)
    return JointTable(bn.alphabet, grid.reshape(-1))


def marginal(joint: JointTable, subset) -> JointTable:
    """Exact marginal over ``subset``, with axes in the order given.

    The empty subset yields the scalar table (1.0).
    """
    keep = [int(v) for v in subset]
    n = joint.n_vars
    if len(set(keep)) != len(keep):
        raise ValueError(f"subset {keep} has repeated variables")
    for v in keep:
        if not 0 <= v < n:
            raise ValueError(f"variable {v} out of range for {n} variables")
    if not keep:
        return JointTable(Alphabet(()), np.array([1.0]))
    drop = tuple(v for v in range(n) if v not in set(keep))
    reduced = joint.grid().sum(axis=drop) if drop else joint.grid()
    # Axes of `reduced` follow ascending variable order; permute to the
    # caller's order.
    kept_sorted = sorted(keep)
    reduced = np.transpose(reduced, axes=[kept_sorted.index(v) for v in keep])
    sizes = tuple(joint.alphabet.sizes[v] for v in keep)
    return JointTable(Alphabet(sizes), reduced.reshape(-1))


def product_table(tables) -> JointTable:
    """Joint pmf of independent blocks, variables concatenated block by block."""
    tables = list(tables)
    if not tables:
        raise ValueError("need at least one table")
    sizes = tuple(s for t in tables for s in t.alphabet.sizes)
    require_dense_budget(sizes, "product distribution")
    pmf = reduce(np.kron, (t.pmf for t in tables))
    return JointTable(Alphabet(sizes), pmf)


# ---------------------------------------------------------------------------
# JSON model format
# ---------------------------------------------------------------------------
#
# {"n": ..., "alphabet": [...], "edges": [[parent, child], ...],
#  "cpts": [{"node": v, "parents": [...], "table": [[...], ...]}, ...]}
#
# Floats are written with 17 significant digits, which round-trips float64
# exactly, so save -> load -> save is byte-stable.

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def bayes_net_to_json(bn: DiscreteBayesNet) -> str:
    lines = [f'{{"n": {bn.n},']
    lines.append(f' "alphabet": [{", ".join(str(s) for s in bn.alphabet.sizes)}],')
    edges = ", ".join(f"[{p}, {c}]" for p, c in sorted(bn.graph.edges))
    lines.append(f' "edges": [{edges}],')
    lines.append(' "cpts": [')
    entries = []
    for v in range(bn.n):
        parents = ", ".join(str(p) for p in bn.graph.parents(v))
        rows = ", ".join(
            "[" + ", ".join(_fmt(x) for x in row) + "]" for row in bn.cpts[v]
        )
        entries.append(f'  {{"node": {v}, "parents": [{parents}], "table": [{rows}]}}')
    lines.append(",\n".join(entries))
    lines.append(" ]}")
    return "\n".join(lines) + "\n"


def bayes_net_from_json(text: str) -> DiscreteBayesNet:
    doc = json.loads(text)
    n = int(doc["n"])
    alphabet = Alphabet(tuple(doc["alphabet"]))
    graph = PolytreeGraph(n, tuple((int(p), int(c)) for p, c in doc["edges"]))
    cpts: list[np.ndarray | None] = [None] * n
    for entry in doc["cpts"]:
        v = int(entry["node"])
        if tuple(int(p) for p in entry["parents"]) != graph.parents(v):
            raise ValueError(f"cpts entry for node {v} disagrees with edge list on parents")
        cpts[v] = np.asarray(entry["table"], dtype=np.float64)
    if any(c is None for c in cpts):
        missing = [v for v, c in enumerate(cpts) if c is None]
        raise ValueError(f"missing CPT entries for nodes {missing}")
    return DiscreteBayesNet(graph, alphabet, tuple(cpts))


def save_model(bn: DiscreteBayesNet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(bayes_net_to_json(bn))


def load_model(path) -> DiscreteBayesNet:
    with open(path, "r", encoding="utf-8") as fh:
        return bayes_net_from_json(fh.read())
