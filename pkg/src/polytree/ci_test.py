"""Threshold-style conditional-independence tester.

The test never estimates a confidence interval: it compares an empirical (or
exact, in oracle mode) conditional mutual information against the fixed
threshold ``C * epsilon`` and reports only which side it fell on. With enough
samples this one-bit verdict is guaranteed in both directions: a true CMI of
zero lands below the threshold, and a verdict below the threshold certifies
the true CMI is under epsilon.

``required_sample_size`` is the explicit-constant version of that guarantee.
It is deliberately conservative (the leading constant is 6.48e6); experiment
harnesses treat it as an upper bound, not a practical operating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from polytree.information import conditional_mutual_information
from polytree.model import JointTable
from polytree.sampling import Dataset, empirical_cmi

# Decision threshold fraction: verdicts compare the estimate to C * epsilon.
DEFAULT_TESTER_CONSTANT = 1.0 / 400.0

# Conservative sample-size bound constants (natural logarithms).
_SAMPLE_LEAD = 6.48e6
_SAMPLE_LOG_OFFSET = 7.2e5


def required_sample_size(
    sigma_x: int, sigma_y: int, sigma_z: int, epsilon: float, delta: float
) -> int:
    """Samples sufficient for the threshold guarantee at (epsilon, delta).

    ``ceil(6.48e6 * σx σy σz * (ln(σ/(εδ)) + ln(7.2e5)) * ln(12 σ²/δ) / ε)``
    with ``σ = max(σx, σy, σz)``. The cardinality product generalizes the
    single-alphabet bound; conditioning on nothing is ``sigma_z = 1``.
    """
    for name, s in (("sigma_x", sigma_x), ("sigma_y", sigma_y), ("sigma_z", sigma_z)):
        if s < 1:
            raise ValueError(f"{name} must be >= 1, got {s}")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    sigma = max(sigma_x, sigma_y, sigma_z)
    lead = _SAMPLE_LEAD * sigma_x * sigma_y * sigma_z / epsilon
    return math.ceil(
        lead
        * (math.log(sigma / (epsilon * delta)) + math.log(_SAMPLE_LOG_OFFSET))
        * math.log(12.0 * sigma**2 / delta)
    )


@dataclass(frozen=True)
class TestVerdict:
    """Estimate, the threshold it was compared to, and the comparison."""

    estimate: float
    threshold: float

    @property
    def is_large(self) -> bool:
        return self.estimate >= self.threshold


@dataclass(frozen=True)
class TesterConfig:
    """Tester configuration and data source.

    ``source`` selects the mode: a :class:`JointTable` runs the tester on
    exact CMI values (the infinite-sample limit, separating algorithmic from
    statistical error), a :class:`Dataset` on plug-in estimates.

    ``epsilon`` is the per-test tolerance in bits; verdicts threshold at
    ``C * epsilon``. ``delta`` is the failure probability budget the sample
    size was (or should have been) provisioned for; the verdict itself does
    not consume it.
    """

    source: JointTable | Dataset
    epsilon: float
    C: float = DEFAULT_TESTER_CONSTANT
    delta: float = 0.05

    def __post_init__(self):
        if not isinstance(self.source, (JointTable, Dataset)):
            raise TypeError(f"source must be JointTable or Dataset, got {type(self.source)}")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not 0.0 < self.C < 1.0:
            raise ValueError(f"C must be in (0, 1), got {self.C}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")

    @property
    def is_oracle(self) -> bool:
        return isinstance(self.source, JointTable)

    @property
    def threshold(self) -> float:
        return self.C * self.epsilon


def test_cmi(cfg: TesterConfig, a_vars, b_vars, z_vars=()) -> TestVerdict:
    """Threshold verdict on ``I(A; B | Z)`` under cfg's source and tolerance."""
    if cfg.is_oracle:
        estimate = conditional_mutual_information(cfg.source, a_vars, b_vars, z_vars)
    else:
        estimate = empirical_cmi(cfg.source, a_vars, b_vars, z_vars)
    return TestVerdict(estimate=estimate, threshold=cfg.threshold)
