"""Command-line experiment harness.

Commands: ``learn``, ``certify-gadget``, ``check-assumption``, ``gen-instance``,
``property-suite``. Flags are long-form only and every run starts with a
reproducibility preamble echoing the full configuration, the seeds, and the
RNG scheme. Results are CSV or JSON; exit codes are 0 for success, 1 for a
failed check, 2 for configuration errors.

Exact KL numbers are only ever computed on instances inside the dense-table
budget; runs on larger instances fail per trial rather than silently reporting
empirical surrogates.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

import polytree
from polytree.fitting import SmoothingRule, fit_cpts
from polytree.gadgets import build_gadget, certify_gadget
from polytree.information import kl_divergence, mi_score, mutual_information, project_onto
from polytree.instances import InstanceSpec, figure1_fixture, random_polytree
from polytree.model import bayes_net_to_json, joint_distribution, load_model, save_model
from polytree.orientation import OrientationConfig, default_epsilon_prime, learn_orientation
from polytree.sampling import RNG_ALGORITHM, forward_sample
from polytree.skeleton import chow_liu_skeleton, check_assumption, pairwise_mi
from polytree.properties import DEFAULT_SUITE_SEED, run_property_suite

OUTPUT_DIR_ENV = "POLYTREE_OUTPUT_DIR"

CSV_COLUMNS = (
    "trial",
    "seed",
    "n",
    "d",
    "d_star",
    "m",
    "mode",
    "skeleton_ok",
    "graph_gap_bits",
    "kl_total_bits",
    "kl_param_gap_bits",
    "runtime_ms",
)


class ConfigError(Exception):
    pass


def _resolve_output(path: str | None, default_name: str) -> str:
    base = os.environ.get(OUTPUT_DIR_ENV, ".")
    if path is None:
        return os.path.join(base, default_name)
    if os.path.isabs(path):
        return path
    return os.path.join(base, path)


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# learn
# ---------------------------------------------------------------------------

def _build_instance(cfg: dict, trial: int):
    if cfg["instance"] is not None:
        return load_model(cfg["instance"])
    if cfg["fixture"] == "figure1":
        return figure1_fixture(cfg["seed"])
    spec = InstanceSpec(
        n=cfg["n"],
        d=cfg["in_degree_bound"],
        alphabet_size=cfg["alphabet_size"],
        cpt_concentration=cfg["concentration"],
        min_edge_mi=cfg["min_edge_mi"],
        seed=cfg["seed"] * 1000003 + trial,
    )
    return random_polytree(spec)


def _run_learn_trial(task: tuple[dict, int, int, int]) -> list[str]:
    """One (trial, sample-size) cell; returns formatted CSV fields."""
    cfg, trial, m_index, m = task
    start = time.perf_counter()
    bn = _build_instance(cfg, trial)
    joint = joint_distribution(bn)
    d = cfg["in_degree_bound"]
    eps_prime = cfg["epsilon_prime"]
    if eps_prime is None:
        eps_prime = default_epsilon_prime(cfg["epsilon"], bn.n, d)
    truth_skel = bn.graph.skeleton()

    if cfg["tester"] == "oracle":
        data = None
        source = joint
    else:
        data = forward_sample(bn, m, cfg["seed"], trial, m_index)
        source = data

    if cfg["skeleton"] == "given":
        skel, skeleton_ok = truth_skel, True
    else:
        mi = pairwise_mi(joint if data is None else data)
        skel = chow_liu_skeleton(mi)
        skeleton_ok = skel.edges == truth_skel.edges

    learned, _ = learn_orientation(
        skel, OrientationConfig(d=d, epsilon_prime=eps_prime, source=source, C=cfg["tester_constant"])
    )
    graph_gap = mi_score(joint, bn.graph) - mi_score(joint, learned)
    kl_graph = kl_divergence(joint, joint_distribution(project_onto(joint, learned)))
    if data is None:
        kl_total, kl_param_gap = kl_graph, 0.0
    else:
        fitted = fit_cpts(data, learned, SmoothingRule(cfg["kappa"]))
        kl_total = kl_divergence(joint, joint_distribution(fitted))
        kl_param_gap = kl_total - kl_graph
    runtime_ms = (time.perf_counter() - start) * 1000.0
    return [
        str(trial),
        str(cfg["seed"]),
        str(bn.n),
        str(d),
        str(bn.graph.max_in_degree),
        str(0 if data is None else m),
        cfg["tester"],
        str(int(skeleton_ok)),
        _fmt(graph_gap),
        _fmt(kl_total),
        _fmt(kl_param_gap),
        _fmt(runtime_ms),
    ]


def cmd_learn(args: argparse.Namespace) -> int:
    if args.instance is None and args.fixture is None and args.n is None:
        raise ConfigError("provide --instance, --fixture, or --n for random instances")
    samples = args.samples if args.samples else [10000]
    if args.tester == "oracle":
        samples = [0]
    cfg = {
        "instance": args.instance,
        "fixture": args.fixture,
        "n": args.n,
        "in_degree_bound": args.in_degree_bound,
        "alphabet_size": args.alphabet_size,
        "concentration": args.concentration,
        "min_edge_mi": args.min_edge_mi,
        "seed": args.seed,
        "epsilon": args.epsilon,
        "delta": args.delta,
        "epsilon_prime": args.epsilon_prime,
        "tester_constant": args.tester_constant,
        "tester": args.tester,
        "skeleton": args.skeleton,
        "kappa": args.kappa,
    }
    tasks = [
        (cfg, trial, m_index, m)
        for trial in range(args.trials)
        for m_index, m in enumerate(samples)
    ]
    if args.jobs > 1 and tasks:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_run_learn_trial, tasks))
    else:
        rows = [_run_learn_trial(t) for t in tasks]

    out_path = _resolve_output(args.output, "learn.csv")
    lines = [f"# polytree learn v{polytree.__version__}"]
    for key in sorted(cfg):
        lines.append(f"# {key}={cfg[key]}")
    lines.append(f"# trials={args.trials} samples={samples} jobs={args.jobs}")
    lines.append(f"# rng={RNG_ALGORITHM}; streams keyed by [seed, trial, sample-index]")
    lines.append("# runtime_ms is wall-clock and excluded from reproducibility guarantees")
    lines.append(",".join(CSV_COLUMNS))
    lines.extend(",".join(r) for r in rows)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(out_path)
    return 0


# ---------------------------------------------------------------------------
# certify-gadget
# ---------------------------------------------------------------------------

def cmd_certify_gadget(args: argparse.Namespace) -> int:
    alphas = args.alpha if args.alpha else [0.05, 0.1, 0.2, 0.3, 0.4, 0.5]
    reports = [certify_gadget(build_gadget(a)) for a in alphas]
    h2 = {r.alpha: r.h2 for r in reports}
    ratios = [
        {"alpha_low": low, "alpha_high": 2 * low, "h2_ratio": h2[2 * low] / h2[low]}
        for low in alphas
        if 2 * low in h2
    ]
    doc = {
        "alphas": alphas,
        "reports": [r.to_dict() for r in reports],
        "h2_doubling_ratios": ratios,
        "all_ok": all(r.all_ok for r in reports),
    }
    out_path = _resolve_output(args.output, "gadget-report.json")
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(out_path)
    return 0 if doc["all_ok"] else 1


# ---------------------------------------------------------------------------
# check-assumption
# ---------------------------------------------------------------------------

def cmd_check_assumption(args: argparse.Namespace) -> int:
    bn = load_model(args.instance)
    report = check_assumption(joint_distribution(bn), bn.graph)
    doc = report.to_dict()
    doc["instance"] = args.instance
    doc["note"] = "epsilon_p is +inf for edgeless graphs (vacuously satisfied)"
    text = json.dumps(doc, indent=2, default=str) + "\n"
    if args.output:
        with open(_resolve_output(args.output, "assumption.json"), "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0 if report.satisfied else 1


# ---------------------------------------------------------------------------
# gen-instance
# ---------------------------------------------------------------------------

def cmd_gen_instance(args: argparse.Namespace) -> int:
    if args.fixture == "figure1":
        bn = figure1_fixture(args.seed)
    else:
        bn = random_polytree(
            InstanceSpec(
                n=args.n,
                d=args.in_degree_bound,
                alphabet_size=args.alphabet_size,
                cpt_concentration=args.concentration,
                min_edge_mi=args.min_edge_mi,
                seed=args.seed,
            )
        )
    out_path = _resolve_output(args.output, "instance.json")
    save_model(bn, out_path)
    print(out_path)
    return 0


# ---------------------------------------------------------------------------
# property-suite
# ---------------------------------------------------------------------------

def cmd_property_suite(args: argparse.Namespace) -> int:
    results = run_property_suite(seed=args.seed, name_filter=args.filter)
    failed = [r.name for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        print("failing checks: " + ", ".join(failed))
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polytree",
        description="Polytree Bayesian network learning experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    learn = sub.add_parser("learn", help="run learning trials and write a CSV of exact KL numbers")
    learn.add_argument("--instance", type=str, default=None, help="path to a model JSON file")
    learn.add_argument("--fixture", choices=["figure1"], default=None)
    learn.add_argument("--n", type=int, default=None, help="vertices for random instances")
    learn.add_argument("--in-degree-bound", type=int, default=3)
    learn.add_argument("--alphabet-size", type=int, default=2)
    learn.add_argument("--concentration", type=float, default=1.0)
    learn.add_argument("--min-edge-mi", type=float, default=None)
    learn.add_argument("--trials", type=int, default=1)
    learn.add_argument("--seed", type=int, default=0)
    learn.add_argument("--tester", choices=["oracle", "empirical"], default="oracle")
    learn.add_argument("--skeleton", choices=["given", "chow-liu"], default="given")
    learn.add_argument("--epsilon", type=float, default=0.5)
    learn.add_argument("--delta", type=float, default=0.1)
    learn.add_argument("--epsilon-prime", type=float, default=None,
                       help="override the per-test tolerance epsilon/(2n(d+1))")
    learn.add_argument("--tester-constant", type=float, default=polytree.DEFAULT_TESTER_CONSTANT)
    learn.add_argument("--samples", type=int, action="append", default=None,
                       help="sample size; repeat the flag for a sweep")
    learn.add_argument("--kappa", type=float, default=1.0)
    learn.add_argument("--jobs", type=int, default=1)
    learn.add_argument("--output", type=str, default=None)
    learn.set_defaults(func=cmd_learn)

    gadget = sub.add_parser("certify-gadget", help="certify the lower-bound gadget separations")
    gadget.add_argument("--alpha", type=float, action="append", default=None)
    gadget.add_argument("--output", type=str, default=None)
    gadget.set_defaults(func=cmd_certify_gadget)

    assumption = sub.add_parser("check-assumption", help="exact skeleton-recovery gap of a model")
    assumption.add_argument("--instance", type=str, required=True)
    assumption.add_argument("--output", type=str, default=None)
    assumption.set_defaults(func=cmd_check_assumption)

    gen = sub.add_parser("gen-instance", help="write a random instance or fixture as model JSON")
    gen.add_argument("--fixture", choices=["figure1"], default=None)
    gen.add_argument("--n", type=int, default=8)
    gen.add_argument("--in-degree-bound", type=int, default=3)
    gen.add_argument("--alphabet-size", type=int, default=2)
    gen.add_argument("--concentration", type=float, default=1.0)
    gen.add_argument("--min-edge-mi", type=float, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", type=str, default=None)
    gen.set_defaults(func=cmd_gen_instance)

    suite = sub.add_parser("property-suite", help="run every library invariant check")
    suite.add_argument("--seed", type=int, default=DEFAULT_SUITE_SEED)
    suite.add_argument("--filter", type=str, default=None, help="run only checks whose name contains this")
    suite.set_defaults(func=cmd_property_suite)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
