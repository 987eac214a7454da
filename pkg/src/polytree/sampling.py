"""Forward sampling and plug-in empirical estimation.

Randomness policy: all draws come from numpy's PCG64 generator. Streams are
derived as ``default_rng(SeedSequence([seed, *stream]))`` so that concurrent
trials with distinct stream indices never share state and a given (seed,
stream) pair reproduces its dataset byte for byte.

The empirical estimators are pure plug-in (maximum likelihood) quantities: the
conditional mutual information of a dataset is, by construction, the exact CMI
of its empirical joint table. No bias correction is applied, because the
threshold tester is stated for the empirical distribution's own MI.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from polytree.information import conditional_mutual_information
from polytree.model import (
    Alphabet,
    DiscreteBayesNet,
    JointTable,
    require_dense_budget,
)

# Seeds are plain 64-bit integers.
RngSeed = int

RNG_ALGORITHM = "numpy PCG64 via default_rng(SeedSequence([seed, *stream]))"


def derive_rng(seed: RngSeed, *stream: int) -> np.random.Generator:
    """Independent generator for (seed, stream...); documented in RNG_ALGORITHM."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, stream)]))


@dataclass(frozen=True)
class Dataset:
    """m i.i.d. rows of symbol indices over n discrete variables."""

    alphabet: Alphabet
    rows: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.rows, dtype=np.int64))
        if arr.ndim != 2 or arr.shape[1] != self.alphabet.n_vars:
            raise ValueError(
                f"rows must be (m, {self.alphabet.n_vars}), got {arr.shape}"
            )
        if arr.size:
            if arr.min() < 0:
                raise ValueError("negative symbol index")
            limits = np.asarray(self.alphabet.sizes)
            if (arr >= limits[None, :]).any():
                raise ValueError("symbol index out of alphabet range")
        arr.flags.writeable = False
        object.__setattr__(self, "rows", arr)

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    @property
    def n_vars(self) -> int:
        return self.alphabet.n_vars

    def to_csv(self) -> str:
        """Header ``v0,...,v{n-1}`` and one integer row per sample."""
        buf = io.StringIO()
        buf.write(",".join(f"v{i}" for i in range(self.n_vars)) + "\n")
        for row in self.rows:
            buf.write(",".join(str(int(x)) for x in row) + "\n")
        return buf.getvalue()


def forward_sample(bn: DiscreteBayesNet, m: int, seed: RngSeed, *stream: int) -> Dataset:
    """Draw m i.i.d. joint samples by ancestral sampling in topological order."""
    if m < 1:
        raise ValueError(f"need m >= 1 samples, got {m}")
    rng = derive_rng(seed, *stream)
    sizes = bn.alphabet.sizes
    out = np.zeros((m, bn.n), dtype=np.int64)
    for v in bn.graph.topological_order():
        ps = bn.graph.parents(v)
        if ps:
            row_idx = np.ravel_multi_index(
                tuple(out[:, p] for p in ps), bn.parent_sizes(v)
            )
            cdf = np.cumsum(bn.cpts[v][row_idx], axis=1)
        else:
            cdf = np.broadcast_to(np.cumsum(bn.cpts[v][0]), (m, sizes[v]))
        u = rng.random(m)
        out[:, v] = np.minimum((cdf <= u[:, None]).sum(axis=1), sizes[v] - 1)
    return Dataset(bn.alphabet, out)


def empirical_joint(data: Dataset, subset) -> JointTable:
    """Relative-frequency table over ``subset`` (in the order given)."""
    if data.m < 1:
        raise ValueError("empirical estimation needs at least one sample")
    keep = [int(v) for v in subset]
    if len(set(keep)) != len(keep):
        raise ValueError(f"subset {keep} has repeated variables")
    for v in keep:
        if not 0 <= v < data.n_vars:
            raise ValueError(f"variable {v} out of range for {data.n_vars} variables")
    if not keep:
        return JointTable(Alphabet(()), np.array([1.0]))
    sizes = tuple(data.alphabet.sizes[v] for v in keep)
    cells = require_dense_budget(sizes, "empirical joint")
    idx = np.ravel_multi_index(tuple(data.rows[:, v] for v in keep), sizes)
    counts = np.bincount(idx, minlength=cells)
    return JointTable(Alphabet(sizes), counts / data.m)


def empirical_cmi(data: Dataset, a_vars, b_vars, z_vars=()) -> float:
    """Plug-in ``Î(A; B | Z)``: the exact CMI of the empirical joint (bits)."""
    a = sorted(int(v) for v in a_vars)
    b = sorted(int(v) for v in b_vars)
    z = sorted(int(v) for v in z_vars)
    table = empirical_joint(data, a + b + z)
    na, nb = len(a), len(b)
    return conditional_mutual_information(
        table,
        range(na),
        range(na, na + nb),
        range(na + nb, na + nb + len(z)),
    )


def empirical_frequencies_table(counts: np.ndarray, alphabet: Alphabet) -> JointTable:
    """Empirical joint from a raw contingency count array.

    The multinomial cell counts are the sufficient statistic of an i.i.d.
    sample, so simulating counts directly is distributionally identical to
    drawing the individual rows; calibration experiments at astronomically
    large sample sizes rely on this.
    """
    counts = np.asarray(counts, dtype=np.float64).reshape(-1)
    total = counts.sum()
    if total <= 0:
        raise ValueError("counts must contain at least one observation")
    return JointTable(alphabet, counts / total)


def median_abs_error_curve(
    bn: DiscreteBayesNet,
    a_vars,
    b_vars,
    z_vars,
    exact_value: float,
    sample_sizes,
    n_seeds: int,
    seed: RngSeed,
) -> list[float]:
    """Median |Î - I| across seeds for each sample size, in order."""
    medians = []
    for j, m in enumerate(sample_sizes):
        errs = [
            abs(
                empirical_cmi(forward_sample(bn, m, seed, j, t), a_vars, b_vars, z_vars)
                - exact_value
            )
            for t in range(n_seeds)
        ]
        medians.append(float(np.median(errs)))
    return medians
