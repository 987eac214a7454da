"""The three-variable orientation-hardness gadget and its certificate.

Two binary distributions share the skeleton X - Z - Y but demand opposite
orientations of the Y edge: under P1 the chain X -> Z -> Y is exact, under P2
the collider X -> Z <- Y is. Their closed-form atoms (variables ordered
X, Z, Y; parameter ``alpha`` in (0, 1/2]):

    P1(x, y, z) = (3/16 if x == z else 1/16) * (1 + alpha if y == z else 1 - alpha)
    P2(x, y, z) = ((3 if x == z else 1) + (2 alpha if y == z else -2 alpha)) / 16

As alpha -> 0 the pair coincides, and their squared Hellinger distance grows
like alpha^2 / 24, while projecting either distribution onto the wrong graph
costs KL on the order of alpha^2. That separation is what makes any learner
pay ~1/alpha^2 samples per gadget; k independent copies tensorize the cost.

The pmfs are built from the closed-form atoms, not by simulating the
generative mechanisms, so the certificate checks exact numbers.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product

import numpy as np

from polytree.graphs import PolytreeGraph
from polytree.information import (
    conditional_mutual_information,
    hellinger_squared,
    kl_divergence,
    mutual_information,
)
from polytree.model import Alphabet, JointTable, joint_distribution, product_table
from polytree.information import project_onto

# Variable indices within a gadget: X = 0, Z = 1, Y = 2.
X, Z, Y = 0, 1, 2

_CHAIN_EDGES = ((X, Z), (Z, Y))
_COLLIDER_EDGES = ((X, Z), (Y, Z))


def p1_atom(alpha: float, x: int, y: int, z: int) -> float:
    base = 3.0 / 16.0 if x == z else 1.0 / 16.0
    return base * (1.0 + alpha if y == z else 1.0 - alpha)


def p2_atom(alpha: float, x: int, y: int, z: int) -> float:
    lead = 3.0 if x == z else 1.0
    return (lead + (2.0 * alpha if y == z else -2.0 * alpha)) / 16.0


def _table(atom, alpha: float) -> JointTable:
    pmf = np.zeros((2, 2, 2))
    for x, y, z in iter_product((0, 1), repeat=3):
        pmf[x, z, y] = atom(alpha, x, y, z)
    return JointTable(Alphabet((2, 2, 2)), pmf.reshape(-1))


@dataclass(frozen=True)
class GadgetPair:
    """The pair (P1, P2) at a given alpha, plus the two candidate orientations."""

    alpha: float
    p1: JointTable
    p2: JointTable
    g1: PolytreeGraph
    g2: PolytreeGraph


def build_gadget(alpha: float) -> GadgetPair:
    if not 0.0 < alpha <= 0.5:
        raise ValueError(f"alpha must be in (0, 0.5], got {alpha}")
    return GadgetPair(
        alpha=alpha,
        p1=_table(p1_atom, alpha),
        p2=_table(p2_atom, alpha),
        g1=PolytreeGraph(3, _CHAIN_EDGES),
        g2=PolytreeGraph(3, _COLLIDER_EDGES),
    )


@dataclass(frozen=True)
class GadgetReport:
    """Separation certificate: Hellinger gap plus the four projection KLs."""

    alpha: float
    h2: float
    kl_p1_g1: float
    kl_p1_g2: float
    kl_p2_g1: float
    kl_p2_g2: float

    @property
    def checks(self) -> dict[str, bool]:
        return {
            "h2_le_alpha_sq": self.h2 <= self.alpha**2,
            "kl_p1_g1_zero": self.kl_p1_g1 <= 1e-12,
            "kl_p2_g2_zero": self.kl_p2_g2 <= 1e-12,
            "kl_p1_g2_positive": self.kl_p1_g2 > 0.0,
            "kl_p2_g1_positive": self.kl_p2_g1 > 0.0,
        }

    @property
    def all_ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "h2": self.h2,
            "kl": {
                "p1g1": self.kl_p1_g1,
                "p1g2": self.kl_p1_g2,
                "p2g1": self.kl_p2_g1,
                "p2g2": self.kl_p2_g2,
            },
            "checks": self.checks,
        }


def _projection_kl(p: JointTable, g: PolytreeGraph) -> float:
    return kl_divergence(p, joint_distribution(project_onto(p, g)))


def certify_gadget(g: GadgetPair) -> GadgetReport:
    """Exact separation numbers for one gadget pair.

    The cross terms have closed equivalents that tests verify independently:
    projecting P1 onto the collider costs exactly I_{P1}(X; Y), and projecting
    P2 onto the chain costs exactly I_{P2}(X; Y | Z).
    """
    return GadgetReport(
        alpha=g.alpha,
        h2=hellinger_squared(g.p1, g.p2),
        kl_p1_g1=_projection_kl(g.p1, g.g1),
        kl_p1_g2=_projection_kl(g.p1, g.g2),
        kl_p2_g1=_projection_kl(g.p2, g.g1),
        kl_p2_g2=_projection_kl(g.p2, g.g2),
    )


def gadget_mi_identities(g: GadgetPair) -> tuple[float, float]:
    """(I_{P1}(X;Y), I_{P2}(X;Y|Z)): the exact values of the two cross KLs."""
    return (
        mutual_information(g.p1, [X], [Y]),
        conditional_mutual_information(g.p2, [X], [Y], [Z]),
    )


def tensor_copies(g: GadgetPair, k: int) -> tuple[JointTable, PolytreeGraph, PolytreeGraph]:
    """k independent copies of P1 with the block copies of both graphs.

    KL divergence tensorizes over the product, so the projection cost of the
    k-copy table onto the k-copy wrong graph is exactly k times the single-copy
    cost; scaling experiments lean on that additivity.
    """
    if not 1 <= k <= 8:
        raise ValueError(f"k must be in 1..8 to stay within the dense budget, got {k}")
    table = product_table([g.p1] * k)

    def shifted(edges):
        return tuple((u + 3 * i, v + 3 * i) for i in range(k) for u, v in edges)

    return (
        table,
        PolytreeGraph(3 * k, shifted(_CHAIN_EDGES)),
        PolytreeGraph(3 * k, shifted(_COLLIDER_EDGES)),
    )
