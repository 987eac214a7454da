"""Exact information-theoretic quantities on dense joint tables.

All logarithms are base 2, so every returned value is in bits; the convention
``0 * log 0 = 0`` applies throughout, and a KL ratio ``p/0`` with ``p > 0``
yields ``math.inf`` rather than a floating exception.

Mutual-information arguments are variable-index collections. They are
canonicalized by sorting before any table indexing, so results are a pure
function of the *sets* passed in. Sums are accumulated with ``math.fsum`` and
quantities that are nonnegative by theory (MI, CMI, KL) have tiny negative
rounding residues clamped to exactly 0.0.
"""
from __future__ import annotations

import math

import numpy as np

from polytree.graphs import PolytreeGraph
from polytree.model import Alphabet, DiscreteBayesNet, JointTable, marginal

LOG2 = math.log(2.0)


def entropy(table: JointTable) -> float:
    """Shannon entropy ``-sum p log2 p`` in bits."""
    total = math.fsum(-p * math.log2(p) for p in table.pmf.tolist() if p > 0.0)
    return total if total > 0.0 else 0.0


def _validate_groups(n: int, groups, names, allow_empty) -> list[list[int]]:
    out = []
    seen: set[int] = set()
    for g, name, may_be_empty in zip(groups, names, allow_empty):
        vs = sorted(int(v) for v in g)
        if not vs and not may_be_empty:
            raise ValueError(f"variable set {name} must be nonempty")
        for v in vs:
            if not 0 <= v < n:
                raise ValueError(f"variable {v} out of range for {n} variables")
            if v in seen:
                raise ValueError(f"variable {v} appears in more than one of {names}")
            seen.add(v)
        out.append(vs)
    return out


def _grouped_pmf(joint: JointTable, a: list[int], b: list[int], z: list[int]) -> np.ndarray:
    """Marginal over a+b+z collapsed to shape (|Σ_a|, |Σ_b|, |Σ_z|)."""
    sub = marginal(joint, a + b + z)
    sizes = sub.alphabet.sizes
    pa = math.prod(sizes[: len(a)]) if a else 1
    pb = math.prod(sizes[len(a) : len(a) + len(b)]) if b else 1
    pz = math.prod(sizes[len(a) + len(b) :]) if z else 1
    return sub.pmf.reshape(pa, pb, pz)


def conditional_mutual_information(joint: JointTable, a_vars, b_vars, z_vars=()) -> float:
    """``I(A; B | Z)`` in bits; an empty Z reduces to plain mutual information."""
    a, b, z = _validate_groups(
        joint.n_vars, (a_vars, b_vars, z_vars), ("A", "B", "Z"), (False, False, True)
    )
    p = _grouped_pmf(joint, a, b, z)
    p_z = p.sum(axis=(0, 1))
    p_az = p.sum(axis=1)
    p_bz = p.sum(axis=0)
    terms = []
    for ia, ib, iz in np.argwhere(p > 0.0):
        pazb = p[ia, ib, iz]
        terms.append(pazb * math.log2(pazb * p_z[iz] / (p_az[ia, iz] * p_bz[ib, iz])))
    total = math.fsum(terms)
    return total if total > 0.0 else 0.0


def mutual_information(joint: JointTable, a_vars, b_vars) -> float:
    """``I(A; B)`` in bits."""
    return conditional_mutual_information(joint, a_vars, b_vars, ())


def kl_divergence(p: JointTable, q: JointTable) -> float:
    """``KL(P || Q)`` in bits; ``math.inf`` when Q misses part of P's support."""
    if p.alphabet != q.alphabet:
        raise ValueError(
            f"alphabet mismatch: {p.alphabet.sizes} vs {q.alphabet.sizes}"
        )
    terms = []
    for pi, qi in zip(p.pmf.tolist(), q.pmf.tolist()):
        if pi <= 0.0:
            continue
        if qi <= 0.0:
            return math.inf
        terms.append(pi * math.log2(pi / qi))
    total = math.fsum(terms)
    return total if total > 0.0 else 0.0


def hellinger_squared(p: JointTable, q: JointTable) -> float:
    """Squared Hellinger distance ``1 - sum sqrt(P * Q)``, in [0, 1]."""
    if p.alphabet != q.alphabet:
        raise ValueError(
            f"alphabet mismatch: {p.alphabet.sizes} vs {q.alphabet.sizes}"
        )
    affinity = math.fsum(math.sqrt(pi * qi) for pi, qi in zip(p.pmf.tolist(), q.pmf.tolist()))
    return min(1.0, max(0.0, 1.0 - affinity))


def mi_score(p: JointTable, g: PolytreeGraph) -> float:
    """Sum over vertices of ``I(v; parents(v))`` under p, with ``I(v; ∅) = 0``.

    Maximizing this score over candidate graphs minimizes ``KL(P || P_G)``,
    which is how every orientation decision in this library is judged.
    """
    if g.n != p.n_vars:
        raise ValueError(f"graph has {g.n} vertices, table has {p.n_vars}")
    parts = [
        mutual_information(p, [v], g.parents(v))
        for v in range(g.n)
        if g.parents(v)
    ]
    return math.fsum(parts)


def project_onto(p: JointTable, g: PolytreeGraph) -> DiscreteBayesNet:
    """Closest (in KL) distribution to p that factorizes over g.

    The CPT of each vertex is p's conditional given the vertex's parents in g.
    Parent configurations with zero probability contribute nothing to the KL
    objective; their rows are filled with the uniform distribution so the
    result is deterministic.
    """
    if g.n != p.n_vars:
        raise ValueError(f"graph has {g.n} vertices, table has {p.n_vars}")
    sizes = p.alphabet.sizes
    cpts = []
    for v in range(g.n):
        ps = g.parents(v)
        sub = marginal(p, list(ps) + [v])
        rows = math.prod(sizes[q] for q in ps) if ps else 1
        table = sub.pmf.reshape(rows, sizes[v]).copy()
        row_mass = table.sum(axis=1)
        zero = row_mass <= 0.0
        table[zero] = 1.0 / sizes[v]
        table[~zero] /= row_mass[~zero, None]
        cpts.append(table)
    return DiscreteBayesNet(g, Alphabet(sizes), tuple(cpts))
