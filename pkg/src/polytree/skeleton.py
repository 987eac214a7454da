"""Skeleton recovery from pairwise mutual information, and its gap condition.

The Chow-Liu step is a maximum-weight spanning forest on pairwise MI
estimates. It provably returns the true skeleton once the distribution has a
positive "gap": every true edge carries at least eps_P of MI, and the MI of
any non-adjacent pair sits at least eps_P below the MI of every edge on the
path between them (a strict data-processing margin). ``check_assumption``
computes the largest such eps_P exactly from a dense joint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from polytree.graphs import PolytreeGraph, Skeleton, _UnionFind
from polytree.information import mutual_information
from polytree.model import JointTable
from polytree.sampling import Dataset, empirical_cmi

# MiMatrix: (n, n) symmetric float array of pairwise MI in bits, diagonal 0.
MiMatrix = np.ndarray


def pairwise_mi(source: Dataset | JointTable) -> MiMatrix:
    """Pairwise MI matrix: exact from a JointTable, plug-in from a Dataset."""
    n = source.n_vars
    if n < 2:
        raise ValueError("need at least two variables")
    out = np.zeros((n, n))
    for u in range(n):
        for v in range(u + 1, n):
            if isinstance(source, Dataset):
                val = empirical_cmi(source, [u], [v], [])
            else:
                val = mutual_information(source, [u], [v])
            out[u, v] = out[v, u] = val
    return out


def chow_liu_skeleton(mi: MiMatrix, prune_below: float | None = None) -> Skeleton:
    """Maximum-weight spanning forest on the MI matrix.

    Kruskal order: descending weight, ties broken by lexicographic edge, so
    the output is a pure function of the matrix. With ``prune_below`` set,
    edges below the cutoff are never added and the forest may stay
    disconnected; without it the output spans every component.
    """
    mi = np.asarray(mi, dtype=np.float64)
    n = mi.shape[0]
    if mi.shape != (n, n):
        raise ValueError(f"MI matrix must be square, got {mi.shape}")
    candidates = sorted(
        ((u, v) for u in range(n) for v in range(u + 1, n)),
        key=lambda e: (-mi[e[0], e[1]], e[0], e[1]),
    )
    uf = _UnionFind(n)
    chosen = []
    for u, v in candidates:
        if prune_below is not None and mi[u, v] < prune_below:
            continue
        if uf.union(u, v):
            chosen.append((u, v))
    return Skeleton(n, tuple(chosen))


@dataclass(frozen=True)
class GapWitness:
    """What broke the gap condition: a weak edge, or a pair tying a path edge."""

    edge: tuple[int, int]
    pair: tuple[int, int] | None
    gap: float


@dataclass(frozen=True)
class GapReport:
    """Largest eps_P satisfying the recovery condition; 0 and a witness if none."""

    epsilon_p: float
    satisfied: bool
    witness: GapWitness | None

    def to_dict(self) -> dict:
        doc: dict = {"epsilon_p": self.epsilon_p, "satisfied": self.satisfied}
        if self.witness is not None:
            doc["witness"] = {
                "edge": list(self.witness.edge),
                "pair": list(self.witness.pair) if self.witness.pair else None,
                "gap": self.witness.gap,
            }
        return doc


def check_assumption(joint: JointTable, g_star: PolytreeGraph) -> GapReport:
    """Exact gap computation for the true distribution against its skeleton.

    Takes the minimum over (a) the MI of every skeleton edge and (b) the
    margin ``I(edge) - I(pair)`` over every non-adjacent pair joined by a
    path (paths of two or more edges) and every edge on that path. An empty
    edge set is vacuously satisfied with an infinite gap.
    """
    skel = g_star.skeleton()
    if not skel.edges:
        return GapReport(epsilon_p=math.inf, satisfied=True, witness=None)
    mi = pairwise_mi(joint)
    best = math.inf
    worst: GapWitness | None = None
    for a, b in skel.edges:
        if mi[a, b] < best:
            best = mi[a, b]
            worst = GapWitness(edge=(a, b), pair=None, gap=mi[a, b])
    n = g_star.n
    adjacent = set(skel.edges)
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) in adjacent:
                continue
            path = skel.path(u, v)
            if path is None:
                continue
            for a, b in zip(path, path[1:]):
                gap = mi[a, b] - mi[u, v]
                if gap < best:
                    best = gap
                    worst = GapWitness(edge=(min(a, b), max(a, b)), pair=(u, v), gap=gap)
    if best <= 0.0:
        return GapReport(epsilon_p=0.0, satisfied=False, witness=worst)
    return GapReport(epsilon_p=best, satisfied=True, witness=None)


def recovery_sample_size(n: int, epsilon_p: float) -> int:
    """Sample count used by the recovery experiments: ceil(100 ln(n) / eps_P^2)."""
    if n < 2:
        raise ValueError("need at least two variables")
    if not epsilon_p > 0.0:
        raise ValueError("epsilon_p must be positive")
    return math.ceil(100.0 * math.log(n) / epsilon_p**2)
