"""CPT estimation for a fixed graph from samples.

Add-kappa smoothing with kappa = 1 by default: pseudo-counts keep every cell
positive, which keeps the KL divergence of the fitted model finite. With
kappa = 0 the fit reproduces the plug-in conditionals exactly on observed
parent configurations; unseen configurations fall back to uniform rows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from polytree.graphs import PolytreeGraph
from polytree.model import DiscreteBayesNet, require_dense_budget
from polytree.sampling import Dataset


@dataclass(frozen=True)
class SmoothingRule:
    """Pseudo-count added to every CPT cell before normalizing."""

    kappa: float = 1.0

    def __post_init__(self):
        if self.kappa < 0.0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")


def fit_cpts(data: Dataset, g: PolytreeGraph, rule: SmoothingRule = SmoothingRule()) -> DiscreteBayesNet:
    """Fit per-node CPTs: (count + kappa) / (parent count + kappa * |Σ_v|)."""
    if g.n != data.n_vars:
        raise ValueError(f"graph has {g.n} vertices, dataset has {data.n_vars}")
    if data.m < 1:
        raise ValueError("fitting needs at least one sample")
    sizes = data.alphabet.sizes
    kappa = rule.kappa
    cpts = []
    for v in range(g.n):
        ps = g.parents(v)
        parent_sizes = tuple(sizes[p] for p in ps)
        rows = math.prod(parent_sizes) if ps else 1
        require_dense_budget(parent_sizes + (sizes[v],), f"CPT of node {v}")
        if ps:
            row_idx = np.ravel_multi_index(tuple(data.rows[:, p] for p in ps), parent_sizes)
        else:
            row_idx = np.zeros(data.m, dtype=np.int64)
        flat = row_idx * sizes[v] + data.rows[:, v]
        counts = np.bincount(flat, minlength=rows * sizes[v]).reshape(rows, sizes[v])
        table = counts + kappa
        denom = counts.sum(axis=1, keepdims=True) + kappa * sizes[v]
        unseen = denom[:, 0] == 0.0
        table = np.where(unseen[:, None], 1.0 / sizes[v], table / np.where(denom == 0.0, 1.0, denom))
        cpts.append(table)
    return DiscreteBayesNet(g, data.alphabet, tuple(cpts))
