"""Command line front end.

Subcommands:

    ramnet gen        build a graph and write it as an edge list
    ramnet consensus  run noisy average consensus, write a per-iteration CSV
    ramnet detect     analytic vs Monte Carlo detection curves, write a CSV
    ramnet stopping   optimal-stopping analysis from scalar parameters
    ramnet experiment run a TOML-specified topology comparison

All file outputs are byte-deterministic for fixed arguments: floats are
written with repr (round-trippable), line endings are LF, and randomness
always flows from an explicit ``--seed`` through PCG64.  The consensus
subcommand splits its seed via SeedSequence into one child stream for the
initial state and one for the channel noise.

Examples::

    ramnet gen --family lps2 --p 5 --q 41 --out lps.txt
    ramnet gen --family ws1 --n 42 --k 6 --pw 0.3 --seed 7 --out ws.txt
    ramnet consensus --graph lps.txt --iters 50 --noise 0.1 --seed 3 --out run.csv
    ramnet detect --graph lps.txt --phi 0.1 --max-iters 40 --trials 2000 --out det.csv
    ramnet stopping --n 1000 --snr 1.0 --gamma2 0.7 --phimax 0.1
    ramnet experiment --spec exp.toml --out results/
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .consensus import ConsensusConfig, run_consensus
from .detection import (
    DetectionModel,
    empirical_pe_curve,
    optimal_stopping,
    pe_curve_analytic,
    state_variance_profile,
    variance_upper_bound,
)
from .experiments import parse_experiment_spec, run_experiment, serialize_result
from .generators import GeneratorParams, build_graph
from .graph import read_edge_list, write_edge_list

__all__ = ["main"]


def _alpha_arg(text: str):
    if text == "auto":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {text!r}")


def _noise_arg(text: str):
    if text == "none":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'none' or a number, got {text!r}")


def _phi_arg(text: str):
    """A scalar phi, or a path to a whitespace-separated per-node phi file."""
    try:
        return float(text)
    except ValueError:
        values = np.loadtxt(text, dtype=np.float64, ndmin=1)
        return tuple(float(v) for v in values)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ramnet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="build a graph and write an edge list")
    p.add_argument("--family", required=True, choices=("rrl", "ws1", "er", "lps1", "lps2", "r3l"))
    p.add_argument("--n", type=int, help="vertex count (ring/random families)")
    p.add_argument("--k", type=int, help="degree (ring/random families)")
    p.add_argument("--pw", type=float, help="ws1 rewiring probability")
    p.add_argument("--p", type=int, help="LPS prime p")
    p.add_argument("--q", type=int, help="LPS prime q")
    p.add_argument("--swaps", type=int, help="r3l edge swap count (default 10*m)")
    p.add_argument("--seed", type=int, help="PCG64 seed for stochastic families")
    p.add_argument("--out", required=True, help="edge list output path")

    p = sub.add_parser("consensus", help="run average consensus on a graph")
    p.add_argument("--graph", required=True, help="edge list input path")
    p.add_argument("--alpha", type=_alpha_arg, default=None, help="step size, or 'auto' (default)")
    p.add_argument("--iters", type=int, required=True, help="number of iterations")
    p.add_argument("--noise", type=_noise_arg, default=None, help="noise std dev, or 'none' (default)")
    p.add_argument("--seed", type=int, default=0, help="seed for x0 and noise (default 0)")
    p.add_argument("--out", required=True, help="CSV output path")

    p = sub.add_parser("detect", help="detection error-probability curves")
    p.add_argument("--graph", required=True, help="edge list input path")
    p.add_argument("--mu", type=float, default=1.0, help="signal amplitude (default 1.0)")
    p.add_argument("--sigma2", type=float, default=1.0, help="sensing noise variance (default 1.0)")
    p.add_argument("--phi", type=_phi_arg, default=0.0, help="channel noise std: scalar or file (default 0)")
    p.add_argument("--max-iters", type=int, required=True, help="last iteration to tabulate")
    p.add_argument("--trials", type=int, default=0, help="Monte Carlo trials (0 = analytic only)")
    p.add_argument("--seed", type=int, default=0, help="Monte Carlo seed (default 0)")
    p.add_argument("--out", required=True, help="CSV output path")

    p = sub.add_parser("stopping", help="optimal-stopping analysis of the variance ceiling")
    p.add_argument("--n", type=int, required=True, help="number of sensors")
    p.add_argument("--snr", type=float, required=True, help="mu^2 / sigma^2")
    p.add_argument("--gamma2", type=float, required=True, help="consensus contraction factor")
    p.add_argument("--phimax", type=float, required=True, help="largest per-node channel noise std")
    p.add_argument("--max-iters", type=int, default=None, help="budget when phimax is 0")

    p = sub.add_parser("experiment", help="run a TOML-specified comparison experiment")
    p.add_argument("--spec", required=True, help="TOML experiment spec path")
    p.add_argument("--out", required=True, help="output directory")

    return parser


def _cmd_gen(args) -> int:
    params = GeneratorParams(
        family=args.family,
        n=args.n,
        k=args.k,
        p_w=args.pw,
        p=args.p,
        q=args.q,
        swap_count=args.swaps,
        seed=args.seed,
    )
    g = build_graph(params)
    write_edge_list(g, args.out)
    print(f"{args.out}: {g.n_vertices} vertices, {len(g.edges)} edges")
    return 0


def _cmd_consensus(args) -> int:
    g = read_edge_list(args.graph)
    if args.iters < 0:
        raise ValueError(f"iteration count must be non-negative, got {args.iters}")
    child = np.random.SeedSequence(args.seed).generate_state(2, np.uint64)
    x0 = np.random.default_rng(int(child[0])).standard_normal(g.n_vertices)
    config = ConsensusConfig(
        n_iterations=args.iters, alpha=args.alpha, noise_std=args.noise, seed=int(child[1])
    )
    run = run_consensus(g, x0, config)
    lines = ["iteration,deviation_norm,bound_value\n"]
    for i, (dev, bound) in enumerate(zip(run.deviation_norms, run.bound_values)):
        lines.append(f"{i},{float(dev)!r},{float(bound)!r}\n")
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(lines)
    print(f"{args.out}: {args.iters} iterations, alpha={run.alpha!r}")
    return 0


def _cmd_detect(args) -> int:
    g = read_edge_list(args.graph)
    model = DetectionModel(
        mu=args.mu, sigma2=args.sigma2, n_sensors=g.n_vertices, noise_std=args.phi
    )
    i_max = args.max_iters
    if i_max < 0:
        raise ValueError(f"iteration count must be non-negative, got {i_max}")
    analytic = pe_curve_analytic(g, model, i_max).mean(axis=1)
    var_actual = state_variance_profile(g, model, i_max).max(axis=1)
    var_bound = variance_upper_bound(g, model, np.arange(i_max + 1))
    empirical = None
    if args.trials > 0:
        curve = empirical_pe_curve(g, model, i_max, n_trials=args.trials, seed=args.seed)
        empirical = curve.empirical.mean(axis=1)

    lines = ["iteration,mean_pe_analytic,mean_pe_empirical,var_bound,var_max_actual\n"]
    for i in range(i_max + 1):
        emp = "" if empirical is None else repr(float(empirical[i]))
        lines.append(
            f"{i},{float(analytic[i])!r},{emp},{float(var_bound[i])!r},{float(var_actual[i])!r}\n"
        )
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(lines)
    print(f"{args.out}: {i_max + 1} rows")
    return 0


def _cmd_stopping(args) -> int:
    analysis = optimal_stopping(
        n_sensors=args.n,
        snr=args.snr,
        gamma2=args.gamma2,
        phi_max=args.phimax,
        max_iterations=args.max_iters,
    )
    for field in (
        "n_sensors",
        "snr",
        "gamma2",
        "phi_max",
        "power_assumption_holds",
        "z_star",
        "i_star",
        "f_at_i_star",
        "reduction_factor",
        "worthwhile",
    ):
        print(f"{field}: {getattr(analysis, field)!r}")
    return 0


def _cmd_experiment(args) -> int:
    spec = parse_experiment_spec(args.spec)
    result = run_experiment(spec)
    serialize_result(result, args.out)
    n_fams = len(result.points[0].families) if result.points else 0
    print(f"{args.out}: {len(result.points)} sweep points, {n_fams} families")
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "consensus": _cmd_consensus,
    "detect": _cmd_detect,
    "stopping": _cmd_stopping,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
