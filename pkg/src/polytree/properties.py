"""Invariant checks and reusable experiment procedures.

Everything here is deterministic given the master seed. ``run_property_suite``
drives one named check per library invariant, prints one PASS/FAIL line each,
and is exposed on the command line as ``polytree property-suite``; the pytest
suite reuses the underlying experiment functions with its own tolerances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from polytree.ci_test import (
    DEFAULT_TESTER_CONSTANT,
    TesterConfig,
    required_sample_size,
    test_cmi,
)
from polytree.fitting import SmoothingRule, fit_cpts
from polytree.gadgets import build_gadget, certify_gadget, p1_atom, p2_atom
from polytree.graphs import PolytreeGraph, Skeleton
from polytree.information import (
    conditional_mutual_information,
    kl_divergence,
    mi_score,
    mutual_information,
    project_onto,
)
from polytree.instances import InstanceSpec, _prufer_tree, random_polytree
from polytree.model import Alphabet, DiscreteBayesNet, JointTable, joint_distribution
from polytree.orientation import (
    OrientationConfig,
    PartialOrientation,
    learn_orientation,
    phase3,
)
from polytree.sampling import (
    Dataset,
    derive_rng,
    empirical_cmi,
    empirical_joint,
    forward_sample,
    median_abs_error_curve,
)
from polytree.skeleton import (
    chow_liu_skeleton,
    check_assumption,
    pairwise_mi,
    recovery_sample_size,
)


# ---------------------------------------------------------------------------
# Shared generators
# ---------------------------------------------------------------------------

def random_joint(sizes, rng: np.random.Generator) -> JointTable:
    """Fully random dense pmf (flat Dirichlet over all cells)."""
    alphabet = Alphabet(tuple(sizes))
    return JointTable(alphabet, rng.dirichlet(np.ones(alphabet.table_cells)))


def random_orientation(skel: Skeleton, rng: np.random.Generator) -> PolytreeGraph:
    """Independent coin-flip direction per skeleton edge (always acyclic)."""
    edges = tuple((u, v) if rng.random() < 0.5 else (v, u) for u, v in skel.edges)
    return PolytreeGraph(skel.n, edges)


def bsc_cpt(q: float) -> np.ndarray:
    """Binary symmetric channel rows: flip the parent with probability q."""
    return np.array([[1.0 - q, q], [q, 1.0 - q]])


def bsc_chain(flip_probs) -> DiscreteBayesNet:
    """Chain 0 -> 1 -> ... with a uniform root and one channel per edge."""
    qs = list(flip_probs)
    n = len(qs) + 1
    graph = PolytreeGraph(n, tuple((i, i + 1) for i in range(n - 1)))
    cpts = [np.array([[0.5, 0.5]])] + [bsc_cpt(q) for q in qs]
    return DiscreteBayesNet(graph, Alphabet.uniform(n), tuple(cpts))


def bsc_tree(n: int, seed: int, q_low: float = 0.08, q_high: float = 0.2) -> DiscreteBayesNet:
    """Random tree rooted at 0 (in-degree 1) with per-edge random channels."""
    rng = derive_rng(seed)
    undirected = _prufer_tree(n, rng)
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for u, v in undirected:
        adj[u].append(v)
        adj[v].append(u)
    edges, stack, visited = [], [0], {0}
    while stack:
        x = stack.pop()
        for y in sorted(adj[x]):
            if y not in visited:
                visited.add(y)
                edges.append((x, y))
                stack.append(y)
    graph = PolytreeGraph(n, tuple(edges))
    cpts: list[np.ndarray] = [None] * n  # type: ignore[list-item]
    cpts[0] = np.array([[0.5, 0.5]])
    for _, c in edges:
        cpts[c] = bsc_cpt(float(rng.uniform(q_low, q_high)))
    return DiscreteBayesNet(graph, Alphabet.uniform(n), tuple(cpts))


def oriented_instance_pool(
    count: int, seed: int, n_range=(4, 10), d: int = 3, min_edge_mi: float = 0.02
) -> list[DiscreteBayesNet]:
    """Random nondegenerate polytrees for orientation experiments."""
    rng = derive_rng(seed, 91)
    out = []
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        spec = InstanceSpec(
            n=n, d=d, cpt_concentration=0.5, min_edge_mi=min_edge_mi, seed=seed * 100003 + i
        )
        out.append(random_polytree(spec))
    return out


def figure_fixture_with_min_edge_mi(
    min_edge_mi: float, seed: int, concentration: float = 0.25
) -> DiscreteBayesNet:
    """Ten-node fixture graph with CPTs resampled to the requested edge MI."""
    from polytree.instances import FIGURE_NETWORK_EDGES, sample_cpts_with_min_edge_mi

    graph = PolytreeGraph(10, FIGURE_NETWORK_EDGES)
    alphabet = Alphabet.uniform(10)
    cpts = sample_cpts_with_min_edge_mi(
        graph, alphabet, concentration, min_edge_mi, derive_rng(seed, 41)
    )
    return DiscreteBayesNet(graph, alphabet, cpts)


def non_increasing_with_slack(values, max_inversions: int = 1, rel_slack: float = 0.1) -> bool:
    """Non-increasing sequence, allowing a bounded number of small inversions."""
    ups = [i for i in range(len(values) - 1) if values[i + 1] > values[i]]
    if len(ups) > max_inversions:
        return False
    return all(values[i + 1] <= values[i] * (1.0 + rel_slack) for i in ups)


# ---------------------------------------------------------------------------
# Experiment procedures
# ---------------------------------------------------------------------------

def tester_false_large_rate(n_trials: int, seed: int) -> tuple[float, int]:
    """Calibration under exact independence of two fair bits.

    Runs at the full conservative sample size. The multinomial cell counts are
    the sufficient statistic of the sample, so they are simulated directly
    rather than materializing ~3e10 raw rows per trial.
    """
    n_req = required_sample_size(2, 2, 1, epsilon=0.1, delta=0.1)
    threshold = DEFAULT_TESTER_CONSTANT * 0.1
    rng = derive_rng(seed, 17)
    alphabet = Alphabet((2, 2))
    hits = 0
    for _ in range(n_trials):
        counts = rng.multinomial(n_req, [0.25] * 4)
        table = JointTable(alphabet, counts / n_req)
        if mutual_information(table, [0], [1]) >= threshold:
            hits += 1
    return hits / n_trials, n_req


def distinguisher_min_samples(
    alpha: float, seed: int, trials: int = 500, error_target: float = 1.0 / 3.0
) -> int:
    """Smallest grid N where a likelihood-ratio test tells P1 from P2.

    Half the trials draw N samples from P1, half from P2 (as multinomial
    counts); classification is by the sign of the summed log-likelihood
    ratio, with ties counted as errors.
    """
    g = build_gadget(alpha)
    llr = np.log(g.p1.pmf) - np.log(g.p2.pmf)
    rng = derive_rng(seed, 23, int(round(alpha * 1000)))
    grid = sorted(set(int(round(4 * 1.2**i)) for i in range(60)))
    half = trials // 2
    for n_samples in grid:
        errors = 0
        for source, sign in ((g.p1, 1.0), (g.p2, -1.0)):
            counts = rng.multinomial(n_samples, source.pmf, size=half)
            scores = sign * (counts @ llr)
            errors += int((scores <= 0.0).sum())
        if errors / (2 * half) <= error_target:
            return n_samples
    raise RuntimeError(f"no grid point distinguished the pair at alpha={alpha}")


def skeleton_recovery_rate(
    instances, trials_per_instance: int, seed: int, min_gap: float = 0.05
) -> tuple[int, int]:
    """(successes, trials) for Chow-Liu recovery at the gap-derived sample size."""
    ok = total = 0
    for idx, bn in enumerate(instances):
        joint = joint_distribution(bn)
        report = check_assumption(joint, bn.graph)
        if not report.satisfied or report.epsilon_p < min_gap:
            raise ValueError(f"instance {idx} has gap {report.epsilon_p}, below {min_gap}")
        m = recovery_sample_size(bn.n, report.epsilon_p)
        truth = bn.graph.skeleton().edges
        for t in range(trials_per_instance):
            data = forward_sample(bn, m, seed, 29, idx, t)
            got = chow_liu_skeleton(pairwise_mi(data))
            ok += int(got.edges == truth)
            total += 1
    return ok, total


def learning_curve_medians(
    bn: DiscreteBayesNet,
    d: int,
    epsilon_prime: float,
    sample_sizes,
    n_trials: int,
    seed: int,
    kappa: float = 1.0,
) -> list[float]:
    """Median exact KL(P || fitted) per sample size, learning the orientation
    from data with the empirical tester and then fitting CPTs."""
    joint = joint_distribution(bn)
    skel = bn.graph.skeleton()
    rule = SmoothingRule(kappa)
    medians = []
    for j, m in enumerate(sample_sizes):
        kls = []
        for t in range(n_trials):
            data = forward_sample(bn, m, seed, 37, j, t)
            cfg = OrientationConfig(d=d, epsilon_prime=epsilon_prime, source=data)
            learned, _ = learn_orientation(skel, cfg)
            fitted = fit_cpts(data, learned, rule)
            kls.append(kl_divergence(joint, joint_distribution(fitted)))
        medians.append(float(np.median(kls)))
    return medians


def oracle_orientation_audit(
    instances, epsilon_prime: float = 1e-9, d: int = 3
) -> tuple[int, float]:
    """(ground-truth violations in phases 1-2, worst score gap) over instances."""
    violations = 0
    worst_gap = 0.0
    for bn in instances:
        joint = joint_distribution(bn)
        cfg = OrientationConfig(d=d, epsilon_prime=epsilon_prime, source=joint)
        learned, trace = learn_orientation(bn.graph.skeleton(), cfg)
        truth = set(bn.graph.edges)
        for ev in trace.events:
            if ev.phase in (1, 2) and (ev.u, ev.v) not in truth:
                violations += 1
        gap = mi_score(joint, bn.graph) - mi_score(joint, learned)
        worst_gap = max(worst_gap, gap - bn.n * (bn.graph.max_in_degree + 1) * epsilon_prime)
    return violations, worst_gap


# ---------------------------------------------------------------------------
# Named checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _check_score_decomposition(seed: int) -> tuple[bool, str]:
    rng = derive_rng(seed, 1)
    worst = 0.0
    for i in range(20):
        bn = random_polytree(InstanceSpec(n=int(rng.integers(3, 9)), d=3, seed=seed + i))
        joint = joint_distribution(bn)
        base = mi_score(joint, bn.graph)
        for _ in range(3):
            cand = random_orientation(bn.graph.skeleton(), rng)
            kl = kl_divergence(joint, joint_distribution(project_onto(joint, cand)))
            worst = max(worst, abs(kl - (base - mi_score(joint, cand))))
    return worst <= 1e-9, f"max residual {worst:.3e} over 60 (instance, orientation) pairs"


def _check_union_mi_identity(seed: int) -> tuple[bool, str]:
    rng = derive_rng(seed, 2)
    worst, cases = 0.0, 0
    while cases < 200:
        n = int(rng.integers(3, 6))
        joint = random_joint([2] * n, rng)
        vs = list(rng.permutation(n))
        v = [vs[0]]
        rest = vs[1:]
        cut = int(rng.integers(1, len(rest)))
        a, b = rest[:cut], rest[cut:]
        if not a or not b:
            continue
        lhs = mutual_information(joint, v, a + b)
        rhs = (
            mutual_information(joint, v, a)
            + mutual_information(joint, v, b)
            + conditional_mutual_information(joint, a, b, v)
            - mutual_information(joint, a, b)
        )
        worst = max(worst, abs(lhs - rhs))
        cases += 1
    return worst <= 1e-9, f"max residual {worst:.3e} over cases={cases}"


def _parent_identity_residuals(instances) -> tuple[float, float, int]:
    worst_eq = worst_super = 0.0
    cases = 0
    for bn in instances:
        joint = joint_distribution(bn)
        for v in range(bn.n):
            parents = bn.graph.parents(v)
            if len(parents) < 2:
                continue
            a, b = [parents[0]], list(parents[1:])
            lhs = mutual_information(joint, [v], list(parents))
            rhs = (
                mutual_information(joint, [v], a)
                + mutual_information(joint, [v], b)
                + conditional_mutual_information(joint, a, b, [v])
            )
            worst_eq = max(worst_eq, abs(lhs - rhs))
            total = math.fsum(mutual_information(joint, [v], [u]) for u in parents)
            worst_super = max(worst_super, total - lhs)
            cases += 1
    return worst_eq, worst_super, cases


def _check_parent_mi_identity(seed: int) -> tuple[bool, str]:
    instances = oriented_instance_pool(100, seed + 3)
    worst_eq, worst_super, cases = _parent_identity_residuals(instances)
    ok = worst_eq <= 1e-9 and worst_super <= 1e-9
    return ok, (
        f"identity residual {worst_eq:.3e}, superadditivity slack {worst_super:.3e} "
        f"over {cases} parent sets in 100 instances"
    )


def _check_nonnegativity(seed: int) -> tuple[bool, str]:
    rng = derive_rng(seed, 4)
    low = 0.0
    for _ in range(100):
        joint = random_joint([2, 2, 2, 2], rng)
        low = min(low, mutual_information(joint, [0], [1]))
        low = min(low, conditional_mutual_information(joint, [0], [1], [2, 3]))
        other = random_joint([2, 2, 2, 2], rng)
        low = min(low, kl_divergence(joint, other))
    return low >= -1e-12, f"lowest reported value {low:.3e}"


def _check_projection_optimality(seed: int) -> tuple[bool, str]:
    rng = derive_rng(seed, 5)
    worst = 0.0
    for i in range(5):
        bn = random_polytree(InstanceSpec(n=5, d=3, seed=seed + 50 + i))
        joint = joint_distribution(bn)
        cand = random_orientation(bn.graph.skeleton(), rng)
        best = kl_divergence(joint, joint_distribution(project_onto(joint, cand)))
        for _ in range(20):
            alt = DiscreteBayesNet(
                cand,
                bn.alphabet,
                tuple(
                    rng.dirichlet(np.ones(bn.alphabet.sizes[v]), size=cpt.shape[0])
                    for v, cpt in enumerate(project_onto(joint, cand).cpts)
                ),
            )
            worst = max(worst, best - kl_divergence(joint, joint_distribution(alt)))
    return worst <= 1e-9, f"max shortfall of projection vs random CPTs {worst:.3e}"


def _check_cpt_negative_control(seed: int) -> tuple[bool, str]:
    try:
        DiscreteBayesNet(
            PolytreeGraph(1, ()), Alphabet((2,)), (np.array([[0.4, 0.5]]),)
        )
    except ValueError as exc:
        return True, f"corrupted row rejected: {exc}"
    return False, "row summing to 0.9 was accepted"


def _check_plugin_consistency(seed: int) -> tuple[bool, str]:
    bn = random_polytree(InstanceSpec(n=6, d=2, seed=seed + 6))
    data = forward_sample(bn, 500, seed, 6)
    a, b = [5, 1], [2, 4]
    direct = empirical_cmi(data, a, b, [])
    table = empirical_joint(data, sorted(a) + sorted(b))
    via_table = mutual_information(table, [0, 1], [2, 3])
    ok = direct == via_table  # bit-identical by construction
    return ok, f"plug-in MI route difference {abs(direct - via_table):.3e}"


def _check_seed_determinism(seed: int) -> tuple[bool, str]:
    bn = random_polytree(InstanceSpec(n=5, d=2, seed=seed + 7))
    one = forward_sample(bn, 2000, seed, 7)
    two = forward_sample(bn, 2000, seed, 7)
    other = forward_sample(bn, 2000, seed, 8)
    ok = bool(np.array_equal(one.rows, two.rows)) and not np.array_equal(one.rows, other.rows)
    spec_ok = random_polytree(InstanceSpec(n=5, d=2, seed=seed + 7)).cpts[0].tobytes() == bn.cpts[0].tobytes()
    return ok and spec_ok, "same (bn, m, seed) reproduces bytes; other stream differs"


def _check_concentration_monotone(seed: int) -> tuple[bool, str]:
    bn = bsc_chain([0.15, 0.25])
    joint = joint_distribution(bn)
    exact = mutual_information(joint, [0], [2])
    medians = median_abs_error_curve(
        bn, [0], [2], [], exact, (10**3, 10**4, 10**5), n_seeds=30, seed=seed + 8
    )
    ok = non_increasing_with_slack(medians)
    return ok, "median |estimate-exact| " + " -> ".join(f"{v:.5f}" for v in medians)


def _check_verdict_purity(seed: int) -> tuple[bool, str]:
    bn = random_polytree(InstanceSpec(n=5, d=2, seed=seed + 9))
    data = forward_sample(bn, 3000, seed, 9)
    cfg = TesterConfig(source=data, epsilon=0.05)
    first = test_cmi(cfg, [0], [1], [2])
    second = test_cmi(cfg, [0], [1], [2])
    ok = first == second and first.is_large == (first.estimate >= first.threshold)
    return ok, f"estimate {first.estimate:.6f} vs threshold {first.threshold:.6f}"


def _check_large_implies_dependent(seed: int) -> tuple[bool, str]:
    checked = 0
    for bn in oriented_instance_pool(10, seed + 10):
        joint = joint_distribution(bn)
        cfg = TesterConfig(source=joint, epsilon=1e-6)
        rng = derive_rng(seed, 10, bn.n)
        for _ in range(20):
            vs = rng.permutation(bn.n)[:3]
            verdict = test_cmi(cfg, [int(vs[0])], [int(vs[1])], [int(vs[2])])
            if verdict.is_large:
                exact = conditional_mutual_information(
                    joint, [int(vs[0])], [int(vs[1])], [int(vs[2])]
                )
                if exact <= 0.0:
                    return False, f"verdict large but exact CMI {exact}"
                checked += 1
    return True, f"{checked} large verdicts all had positive exact CMI"


def _check_tester_calibration(seed: int) -> tuple[bool, str]:
    rate, n_req = tester_false_large_rate(200, seed)
    return rate <= 0.1, f"false-large rate {rate:.3f} at N={n_req} over 200 trials"


def _check_orientation_soundness(seed: int) -> tuple[bool, str]:
    instances = oriented_instance_pool(100, seed + 11)
    violations, worst = oracle_orientation_audit(instances)
    ok = violations == 0 and worst <= 1e-9
    return ok, f"{violations} unsound arcs, worst score-gap excess {worst:.3e} over 100 instances"


def _check_free_phase_degree(seed: int) -> tuple[bool, str]:
    rng = derive_rng(seed, 12)
    for i in range(100):
        n = int(rng.integers(2, 12))
        tree = _prufer_tree(n, rng)
        keep = rng.random(len(tree)) < 0.8
        skel = Skeleton(n, tuple(e for e, k in zip(tree, keep) if k))
        state = PartialOrientation(skel)
        graph, _ = phase3(state)
        if graph.max_in_degree > 1:
            return False, f"free orientation created in-degree {graph.max_in_degree}"
    return True, "in-degree <= 1 within the freely oriented forest, 100 random forests"


def _check_trace_replay(seed: int) -> tuple[bool, str]:
    for bn in oriented_instance_pool(10, seed + 13):
        joint = joint_distribution(bn)
        cfg = OrientationConfig(d=3, epsilon_prime=1e-9, source=joint)
        learned, trace = learn_orientation(bn.graph.skeleton(), cfg)
        if trace.replay(bn.graph.skeleton()).edges != learned.edges:
            return False, "trace replay diverged from the returned orientation"
        oriented = [(ev.u, ev.v) for ev in trace.events]
        undirected = {(min(u, v), max(u, v)) for u, v in oriented}
        if len(undirected) != len(oriented):
            return False, "an edge was oriented twice"
    return True, "replay matches output and no edge is touched twice, 10 instances"


def _check_skeleton_determinism(seed: int) -> tuple[bool, str]:
    mi = np.zeros((4, 4))
    for (u, v), w in {(0, 1): 0.5, (1, 2): 0.5, (2, 3): 0.5, (0, 2): 0.5}.items():
        mi[u, v] = mi[v, u] = w
    first = chow_liu_skeleton(mi)
    second = chow_liu_skeleton(mi.copy())
    expected = ((0, 1), (0, 2), (2, 3))  # lexicographic tie-break among equal weights
    ok = first.edges == second.edges == expected
    return ok, f"tie-broken forest {first.edges}"


def _check_skeleton_recovery(seed: int) -> tuple[bool, str]:
    chains = [
        bsc_chain(derive_rng(seed, 14, i).uniform(0.08, 0.2, size=5)) for i in range(25)
    ]
    trees = [bsc_tree(7, seed * 31 + i) for i in range(25)]
    ok_c, tot_c = skeleton_recovery_rate(chains, 4, seed + 140)
    ok_t, tot_t = skeleton_recovery_rate(trees, 4, seed + 141)
    ok = ok_c >= 0.95 * tot_c and ok_t >= 0.95 * tot_t
    return ok, f"chains {ok_c}/{tot_c}, trees {ok_t}/{tot_t}"


def _check_fit_rows_and_plugin(seed: int) -> tuple[bool, str]:
    bn = random_polytree(InstanceSpec(n=6, d=3, seed=seed + 15))
    data = forward_sample(bn, 400, seed, 15)
    fitted = fit_cpts(data, bn.graph, SmoothingRule(0.0))
    worst_row = max(
        float(np.abs(cpt.sum(axis=1) - 1.0).max()) for cpt in fitted.cpts
    )
    v = max(range(bn.n), key=lambda x: len(bn.graph.parents(x)))
    ps = list(bn.graph.parents(v))
    table = empirical_joint(data, ps + [v])
    grid = table.pmf.reshape(-1, bn.alphabet.sizes[v])
    mask = grid.sum(axis=1) > 0
    plug = grid[mask] / grid[mask].sum(axis=1, keepdims=True)
    match = np.allclose(plug, fitted.cpts[v][mask], rtol=0.0, atol=1e-12)
    return worst_row <= 1e-12 and match, (
        f"max |row sum - 1| = {worst_row:.3e}; kappa=0 matches plug-in conditionals"
    )


def _check_fit_kl_monotone(seed: int) -> tuple[bool, str]:
    bn = figure_fixture_with_min_edge_mi(0.02, seed + 16)
    joint = joint_distribution(bn)
    medians = []
    for j, m in enumerate((10**3, 10**4, 10**5)):
        kls = [
            kl_divergence(
                joint,
                joint_distribution(
                    fit_cpts(forward_sample(bn, m, seed, 16, j, t), bn.graph)
                ),
            )
            for t in range(30)
        ]
        medians.append(float(np.median(kls)))
    ok = medians[0] > medians[1] > medians[2]
    return ok, "median KL " + " -> ".join(f"{v:.5f}" for v in medians)


def _ulps_apart(a: float, b: float) -> int:
    ulp = math.ulp(max(abs(a), abs(b), 1e-300))
    return int(round(abs(a - b) / ulp)) if ulp else 0


def _check_gadget_atoms(seed: int) -> tuple[bool, str]:
    worst = 0
    for alpha in (0.05, 0.1, 0.2, 0.3, 0.4, 0.5):
        af = Fraction(alpha)
        for x in (0, 1):
            for y in (0, 1):
                for z in (0, 1):
                    exact1 = Fraction(3 if x == z else 1, 16) * (
                        (1 + af) if y == z else (1 - af)
                    )
                    exact2 = Fraction((3 if x == z else 1), 16) + Fraction(
                        (2 if y == z else -2), 16
                    ) * af
                    worst = max(worst, _ulps_apart(p1_atom(alpha, x, y, z), float(exact1)))
                    worst = max(worst, _ulps_apart(p2_atom(alpha, x, y, z), float(exact2)))
    return worst <= 2, f"max atom deviation {worst} ulps across 6 alphas"


def _check_gadget_certificates(seed: int) -> tuple[bool, str]:
    failing = [
        alpha
        for alpha in (0.05, 0.1, 0.2, 0.3, 0.4, 0.5)
        if not certify_gadget(build_gadget(alpha)).all_ok
    ]
    return not failing, f"failing alphas: {failing}" if failing else "all six alphas certified"


def _check_distinguisher_scaling(seed: int) -> tuple[bool, str]:
    n_star = {a: distinguisher_min_samples(a, seed) for a in (0.1, 0.2, 0.4)}
    h2 = {a: certify_gadget(build_gadget(a)).h2 for a in n_star}
    details = []
    ok = True
    for low, high in ((0.1, 0.2), (0.2, 0.4)):
        measured = n_star[low] / n_star[high]
        predicted = h2[high] / h2[low]
        ok = ok and 0.5 <= measured / predicted <= 2.0
        details.append(f"N*({low})/N*({high})={measured:.2f} vs h2 ratio {predicted:.2f}")
    return ok, "; ".join(details) + f" (N*={n_star})"


def _check_instance_invariants(seed: int) -> tuple[bool, str]:
    for i in range(500):
        bn = random_polytree(InstanceSpec(n=6, d=1, seed=seed * 7 + i))
        if bn.graph.max_in_degree > 1:
            return False, f"d=1 spec produced in-degree {bn.graph.max_in_degree}"
    spec = InstanceSpec(n=8, d=3, min_edge_mi=0.02, cpt_concentration=0.5, seed=seed)
    bn = random_polytree(spec)
    joint = joint_distribution(bn)
    low = min(mutual_information(joint, [u], [v]) for u, v in bn.graph.edges)
    ok = bn.graph.max_in_degree <= 3 and low >= 0.02
    return ok, f"500 seeds respect d=1; min edge MI {low:.4f} >= 0.02 at n=8, d=3"


def _check_instance_determinism(seed: int) -> tuple[bool, str]:
    spec = InstanceSpec(n=7, d=2, seed=seed + 18)
    one, two = random_polytree(spec), random_polytree(spec)
    same = one.graph.edges == two.graph.edges and all(
        a.tobytes() == b.tobytes() for a, b in zip(one.cpts, two.cpts)
    )
    return same, "identical spec reproduces the instance byte-for-byte"


def _check_parent_independence(seed: int) -> tuple[bool, str]:
    worst = 0.0
    for bn in oriented_instance_pool(20, seed + 19):
        joint = joint_distribution(bn)
        for v in range(bn.n):
            ps = bn.graph.parents(v)
            if len(ps) < 2:
                continue
            worst = max(worst, mutual_information(joint, [ps[0]], list(ps[1:])))
    return worst <= 1e-10, f"max MI between disjoint parent sets {worst:.3e}"


CHECKS: tuple[tuple[str, Callable[[int], tuple[bool, str]]], ...] = (
    ("model.score-decomposition", _check_score_decomposition),
    ("model.union-mi-identity", _check_union_mi_identity),
    ("model.parent-mi-identity", _check_parent_mi_identity),
    ("model.nonnegativity", _check_nonnegativity),
    ("model.projection-optimality", _check_projection_optimality),
    ("model.cpt-validation-negative-control", _check_cpt_negative_control),
    ("sampling.plugin-consistency", _check_plugin_consistency),
    ("sampling.seed-determinism", _check_seed_determinism),
    ("sampling.concentration-monotone", _check_concentration_monotone),
    ("tester.verdict-purity", _check_verdict_purity),
    ("tester.large-implies-dependent", _check_large_implies_dependent),
    ("tester.calibration", _check_tester_calibration),
    ("orientation.soundness-and-score-bound", _check_orientation_soundness),
    ("orientation.free-phase-degree", _check_free_phase_degree),
    ("orientation.trace-replay", _check_trace_replay),
    ("skeleton.determinism", _check_skeleton_determinism),
    ("skeleton.recovery", _check_skeleton_recovery),
    ("fit.row-sums-and-plugin-match", _check_fit_rows_and_plugin),
    ("fit.kl-monotone", _check_fit_kl_monotone),
    ("gadget.atom-exactness", _check_gadget_atoms),
    ("gadget.certificates", _check_gadget_certificates),
    ("gadget.distinguisher-scaling", _check_distinguisher_scaling),
    ("instances.polytree-invariants", _check_instance_invariants),
    ("instances.determinism", _check_instance_determinism),
    ("instances.parent-independence", _check_parent_independence),
)

DEFAULT_SUITE_SEED = 20240801


def run_property_suite(
    seed: int = DEFAULT_SUITE_SEED,
    name_filter: str | None = None,
    report: Callable[[str], None] = print,
) -> list[CheckResult]:
    """Run every registered check; one PASS/FAIL line per check."""
    results = []
    for name, fn in CHECKS:
        if name_filter and name_filter not in name:
            continue
        try:
            ok, detail = fn(seed)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name=name, ok=ok, detail=detail))
        report(f"{'PASS' if ok else 'FAIL'} {name} — {detail}")
    return results
