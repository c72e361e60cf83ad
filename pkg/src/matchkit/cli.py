"""Command-line surface: ``simulate``, ``match``, ``theory``, ``evaluate``.

Exit codes: 0 success, 1 runtime or numerical failure, 2 usage error. All
commands are deterministic given their flags (seeds are flags, never clocks);
machine-readable output always goes to files, stdout carries a short summary.
"""

from __future__ import annotations

import argparse
import os
import sys

from .evaluation import cycle_decompose, label_confusion, mismatch_loss
from .io import (read_labels_csv, read_matrix_csv, read_permutation_csv,
                 write_permutation_csv)
from .matching import LAPSMatcher
from .model import make_signal_sweep_params
from .rng import make_generator
from .simulate import METHODS, SweepSpec, run_sweep
from .theory import rate_bundle

__all__ = ["main"]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _nonneg_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = _nonneg_float(text)
    if value == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _method_list(text: str) -> tuple[str, ...]:
    methods = tuple(tok.strip() for tok in text.split(","))
    for method in methods:
        if method not in METHODS:
            raise argparse.ArgumentTypeError(
                f"unknown method {method!r}; choose from {','.join(METHODS)}")
    return methods


def _default_threads() -> int:
    env = os.environ.get("MATCHKIT_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchkit",
        description="One-way matching of feature-aligned datasets with low-rank signals.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser(
        "simulate",
        help="run a seeded sweep of repeated sample-and-match experiments")
    sim.add_argument("--axis", required=True, choices=["signal", "p"],
                     help="swept quantity: signal strength or ambient dimension")
    sim.add_argument("--values", required=True, type=_float_list,
                     help="comma-separated axis values, strictly increasing")
    sim.add_argument("--n", required=True, type=_positive_int, help="rows per dataset")
    sim.add_argument("--p", type=_positive_int,
                     help="ambient dimension (required for --axis signal)")
    sim.add_argument("--r", required=True, type=_positive_int, help="signal rank")
    sim.add_argument("--signal", type=_positive_float,
                     help="fixed signal strength (required for --axis p)")
    sim.add_argument("--sigma-x", required=True, type=_nonneg_float,
                     help="noise level of the first dataset")
    sim.add_argument("--sigma-y", required=True, type=_nonneg_float,
                     help="noise level of the second dataset")
    sim.add_argument("--reps", required=True, type=_positive_int,
                     help="repetitions per axis value")
    sim.add_argument("--seed-param", required=True, type=_nonneg_int,
                     help="seed for the fixed parameter draw")
    sim.add_argument("--seed-noise", required=True, type=_nonneg_int,
                     help="seed for the per-repetition noise streams")
    sim.add_argument("--methods", type=_method_list, default=METHODS,
                     help="comma-separated subset of: laps,naive (default both)")
    sim.add_argument("--basis", choices=["x", "y", "auto"], default="x",
                     help="projection basis source for laps (default x)")
    sim.add_argument("--threads", type=_positive_int, default=_default_threads(),
                     help="worker threads; results are identical for any count "
                          "(default: MATCHKIT_THREADS or the available parallelism)")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.set_defaults(func=_cmd_simulate, validate=_validate_simulate)

    match = sub.add_parser(
        "match", help="match the rows of two feature-aligned matrices")
    match.add_argument("--x", required=True, help="first dataset CSV (headerless)")
    match.add_argument("--y", required=True, help="second dataset CSV (headerless)")
    match.add_argument("--r", required=True, type=_positive_int, help="projection rank")
    match.add_argument("--basis", choices=["x", "y", "auto"], default="x")
    match.add_argument("--labels-x", help="optional labels for rows of x")
    match.add_argument("--labels-y", help="optional labels for rows of y")
    match.add_argument("--confusion", help="optional output CSV for the label confusion table")
    match.add_argument("--out", required=True, help="output permutation CSV path")
    match.set_defaults(func=_cmd_match, validate=_validate_match)

    theory = sub.add_parser(
        "theory", help="evaluate closed-form rates for a configuration")
    theory.add_argument("--from-spec", action="store_true",
                        help="regenerate a sweep configuration instead of reading factors")
    theory.add_argument("--u", help="left factor CSV, n rows by r columns")
    theory.add_argument("--d", help="spectrum CSV, r values")
    theory.add_argument("--n", type=_positive_int, help="rows (with --from-spec)")
    theory.add_argument("--p", type=_positive_int, help="ambient dimension (both modes)")
    theory.add_argument("--r", type=_positive_int, help="rank (with --from-spec)")
    theory.add_argument("--signal", type=_positive_float, help="signal strength (with --from-spec)")
    theory.add_argument("--seed-param", type=_nonneg_int, help="parameter seed (with --from-spec)")
    theory.add_argument("--sigma-x", required=True, type=_nonneg_float,
                        help="noise level of the first dataset")
    theory.add_argument("--sigma-y", required=True, type=_nonneg_float,
                        help="noise level of the second dataset")
    theory.add_argument("--out", required=True, help="output CSV path (one key-value row)")
    theory.set_defaults(func=_cmd_theory, validate=_validate_theory)

    ev = sub.add_parser(
        "evaluate", help="compare an estimated matching against the truth")
    ev.add_argument("--pi-hat", required=True, help="estimated permutation CSV")
    ev.add_argument("--pi-star", required=True, help="ground-truth permutation CSV")
    ev.add_argument("--labels-x", help="optional labels for the first dataset")
    ev.add_argument("--labels-y", help="optional labels for the second dataset")
    ev.set_defaults(func=_cmd_evaluate, validate=_validate_evaluate)

    return parser


def _validate_simulate(parser, args) -> None:
    values = args.values
    if any(b <= a for a, b in zip(values, values[1:])):
        parser.error("--values must be strictly increasing")
    if args.axis == "signal":
        if args.p is None:
            parser.error("--axis signal requires --p")
        if args.signal is not None:
            parser.error("--axis signal sweeps the signal; drop --signal")
        if any(v <= 0 for v in values):
            parser.error("signal values must be positive")
        if args.r > min(args.n, args.p):
            parser.error(f"infeasible shape: --r {args.r} > min(n={args.n}, p={args.p})")
    else:
        if args.signal is None:
            parser.error("--axis p requires --signal")
        if args.p is not None:
            parser.error("--axis p sweeps p; drop --p")
        if any(v != int(v) or v < 1 for v in values):
            parser.error("p values must be positive integers")
        if args.r > min(args.n, int(min(values))):
            parser.error(f"infeasible shape: --r {args.r} exceeds the smallest p value")


def _validate_match(parser, args) -> None:
    if (args.labels_x is None) != (args.labels_y is None):
        parser.error("--labels-x and --labels-y must be given together")
    if args.confusion is not None and args.labels_x is None:
        parser.error("--confusion requires --labels-x and --labels-y")


def _validate_theory(parser, args) -> None:
    if args.from_spec:
        missing = [name for name, val in (("--n", args.n), ("--p", args.p),
                                          ("--r", args.r), ("--signal", args.signal),
                                          ("--seed-param", args.seed_param)) if val is None]
        if missing:
            parser.error(f"--from-spec requires {', '.join(missing)}")
        if args.u is not None or args.d is not None:
            parser.error("--from-spec does not take --u/--d")
        if args.r > min(args.n, args.p):
            parser.error(f"infeasible shape: --r {args.r} > min(n={args.n}, p={args.p})")
    else:
        missing = [name for name, val in (("--u", args.u), ("--d", args.d),
                                          ("--p", args.p)) if val is None]
        if missing:
            parser.error(f"factor mode requires {', '.join(missing)} (or use --from-spec)")
        if args.n is not None or args.signal is not None or args.seed_param is not None:
            parser.error("--n/--signal/--seed-param belong to --from-spec")


def _validate_evaluate(parser, args) -> None:
    if (args.labels_x is None) != (args.labels_y is None):
        parser.error("--labels-x and --labels-y must be given together")


def _cmd_simulate(args) -> int:
    spec = SweepSpec(
        n=args.n, r=args.r, axis=args.axis, values=args.values,
        repetitions=args.reps, param_seed=args.seed_param, noise_seed=args.seed_noise,
        sigma_x=args.sigma_x, sigma_y=args.sigma_y, p=args.p, signal=args.signal,
        methods=args.methods, basis_source=args.basis)
    result = run_sweep(spec, threads=args.threads)
    result.write_csv(args.out)
    print(f"wrote {len(result.cells)} rows to {args.out}")
    return 0


def _cmd_match(args) -> int:
    x = read_matrix_csv(args.x)
    y = read_matrix_csv(args.y)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: x is {x.shape}, y is {y.shape}")
    est = LAPSMatcher(rank=args.r, basis_source=args.basis).fit(x, y)
    write_permutation_csv(est.permutation_, args.out)
    print(f"matched {x.shape[0]} rows (basis from {est.basis_source_}, rank {args.r})")
    print(f"objective {est.objective_!r}")
    if args.labels_x is not None:
        labels_x = read_labels_csv(args.labels_x)
        labels_y = read_labels_csv(args.labels_y)
        if len(labels_x) != x.shape[0] or len(labels_y) != x.shape[0]:
            raise ValueError(
                f"label length mismatch: {len(labels_x)} and {len(labels_y)} labels "
                f"for {x.shape[0]} rows")
        accuracy, table = label_confusion(est.permutation_, labels_x, labels_y)
        print(f"accuracy {accuracy!r}")
        if args.confusion is not None:
            table.write_csv(args.confusion)
            print(f"wrote confusion table to {args.confusion}")
    print(f"wrote permutation to {args.out}")
    return 0


def _cmd_theory(args) -> int:
    if args.from_spec:
        params = make_signal_sweep_params(
            make_generator(args.seed_param), args.n, args.p, args.r,
            args.signal, args.sigma_x, args.sigma_y)
        u, d = params.u, params.d
    else:
        u = read_matrix_csv(args.u)
        d = read_matrix_csv(args.d).ravel()
        if d.shape[0] != u.shape[1]:
            print(f"error: inconsistent shapes: u has {u.shape[1]} columns but "
                  f"d has {d.shape[0]} values", file=sys.stderr)
            return 2
        if args.p < u.shape[1]:
            print(f"error: inconsistent shapes: --p {args.p} is below the rank "
                  f"{u.shape[1]}", file=sys.stderr)
            return 2
    bundle = rate_bundle(u, d, args.p, args.sigma_x, args.sigma_y)
    bundle.write_csv(args.out)
    print(f"beta_sq {bundle.beta_sq!r}")
    print(f"rate_exp {bundle.upper_sharp!r}")
    print(f"wrote rate bundle to {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    pi_hat = read_permutation_csv(args.pi_hat)
    pi_star = read_permutation_csv(args.pi_star)
    loss = mismatch_loss(pi_hat, pi_star)
    cycles = cycle_decompose(pi_hat, pi_star)
    print(f"loss {loss!r}")
    pairs = " ".join(f"{k}:{cycles[k]}" for k in sorted(cycles))
    print(f"cycles {pairs}".rstrip())
    if args.labels_x is not None:
        labels_x = read_labels_csv(args.labels_x)
        labels_y = read_labels_csv(args.labels_y)
        accuracy, _ = label_confusion(pi_hat, labels_x, labels_y)
        print(f"accuracy {accuracy!r}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args.validate(parser, args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
