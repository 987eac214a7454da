"""Finite-sample learning of bounded-in-degree polytree Bayesian networks.

Exact dense-table machinery for discrete distributions, a threshold
conditional-independence tester, three-phase skeleton orientation, Chow-Liu
skeleton recovery, CPT fitting, lower-bound gadget construction, and a CLI
experiment harness (``polytree --help``).
"""
from polytree.ci_test import (
    DEFAULT_TESTER_CONSTANT,
    TesterConfig,
    TestVerdict,
    required_sample_size,
    test_cmi,
)
from polytree.fitting import SmoothingRule, fit_cpts
from polytree.gadgets import GadgetPair, GadgetReport, build_gadget, certify_gadget, tensor_copies
from polytree.graphs import ForestViolationError, PolytreeGraph, Skeleton
from polytree.information import (
    conditional_mutual_information,
    entropy,
    hellinger_squared,
    kl_divergence,
    mi_score,
    mutual_information,
    project_onto,
)
from polytree.instances import FIGURE_NETWORK_EDGES, InstanceSpec, figure1_fixture, random_polytree
from polytree.model import (
    Alphabet,
    BudgetExceededError,
    DENSE_TABLE_BUDGET,
    DiscreteBayesNet,
    JointTable,
    bayes_net_from_json,
    bayes_net_to_json,
    joint_distribution,
    load_model,
    marginal,
    product_table,
    save_model,
)
from polytree.orientation import (
    OrientationConfig,
    OrientationTrace,
    PartialOrientation,
    default_epsilon_prime,
    learn_orientation,
    phase1,
    phase2,
    phase3,
)
from polytree.sampling import Dataset, RngSeed, derive_rng, empirical_cmi, empirical_joint, forward_sample
from polytree.skeleton import (
    GapReport,
    GapWitness,
    chow_liu_skeleton,
    check_assumption,
    pairwise_mi,
    recovery_sample_size,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "BudgetExceededError",
    "DENSE_TABLE_BUDGET",
    "DEFAULT_TESTER_CONSTANT",
    "Dataset",
    "DiscreteBayesNet",
    "FIGURE_NETWORK_EDGES",
    "ForestViolationError",
    "GadgetPair",
    "GadgetReport",
    "GapReport",
    "GapWitness",
    "InstanceSpec",
    "JointTable",
    "OrientationConfig",
    "OrientationTrace",
    "PartialOrientation",
    "PolytreeGraph",
    "Skeleton",
    "SmoothingRule",
    "TestVerdict",
    "TesterConfig",
    "bayes_net_from_json",
    "bayes_net_to_json",
    "build_gadget",
    "certify_gadget",
    "check_assumption",
    "chow_liu_skeleton",
    "conditional_mutual_information",
    "default_epsilon_prime",
    "derive_rng",
    "empirical_cmi",
    "empirical_joint",
    "entropy",
    "figure1_fixture",
    "fit_cpts",
    "forward_sample",
    "hellinger_squared",
    "joint_distribution",
    "kl_divergence",
    "learn_orientation",
    "load_model",
    "marginal",
    "mi_score",
    "mutual_information",
    "pairwise_mi",
    "phase1",
    "phase2",
    "phase3",
    "product_table",
    "project_onto",
    "random_polytree",
    "recovery_sample_size",
    "required_sample_size",
    "save_model",
    "tensor_copies",
    "test_cmi",
]
