# SPDX-FileCopyrightText: Copyright (c) 2024-present eqprox contributors.
# All rights reserved.
# SPDX-License-Identifier: BSD-3-Clause
#
# "eqprox -h" for help.

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import bounds
from .analysis import (
    PropertyReport,
    SampleSpec,
    check_cocoercive,
    check_contraction,
    check_epsilon_nonexpansive,
    check_firmly_nonexpansive,
    check_monotone,
    check_pseudomonotone,
    check_quasicontraction,
    check_strongly_lipschitz_mvi,
    estimate_lipschitz_type,
    estimate_map_expansion,
    estimate_strong_monotonicity,
)
from .bench import run_bench
from .bifunction import BifunctionKind
from .errors import EqproxError, SubproblemError
from .global_params import (
    BENCH_SAMPLES,
    COUNTEREXAMPLE_LAMBDAS,
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_SEED,
    EXACT_TOL,
    FIXED_POINT_MAX_ITERATIONS,
    FIXED_POINT_TOL,
    KM_ALPHA,
)
from .iteration import (
    IterationConfig,
    TraceStatus,
    run_fixed_point,
    trace_summary,
    write_trace_csv,
)
from .problems import ProblemInstance, builtin, load, registry
from .proxmaps import MapKind, prox_B
from .subproblem import gap_value


logger = logging.getLogger("eqprox")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2
EXIT_VIOLATED = 3

PROPERTIES = [
    "monotone",
    "strong-monotone",
    "pseudomonotone",
    "lipschitz-type",
    "expansion",
    "quasicontraction",
    "firmly-nonexpansive",
    "cocoercive",
    "epsilon-nonexpansive",
    "contraction",
    "strongly-lipschitz-mvi",
]


class _ArgumentParser(argparse.ArgumentParser):
    # usage errors share exit code 1 with internal errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    """Validated payload of one CLI invocation."""

    command: str
    builtin: Optional[str] = None
    problem: Optional[str] = None
    out: Optional[str] = None
    verbose: bool = False
    iteration: Optional[IterationConfig] = None
    x0: Optional[List[float]] = None
    trace: Optional[str] = None
    sample: Optional[SampleSpec] = None
    property: Optional[str] = None
    map_kind: MapKind = MapKind.B
    lam: float = 0.5
    rho: Optional[float] = None
    x_star: Optional[List[float]] = None
    eps: Optional[float] = None
    lambdas: List[float] = field(default_factory=lambda: list(COUNTEREXAMPLE_LAMBDAS))
    tol: float = EXACT_TOL
    workers: int = 1
    describe: bool = False

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise EqproxError(f"unknown configuration keys: {', '.join(unknown)}")
        return cls(**data)

    def load_problem(self) -> ProblemInstance:
        if self.builtin is not None:
            return builtin(self.builtin)
        return load(self.problem)


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _write_json(path: Optional[str], payload: Dict[str, Any]) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# solve


def _config_solve(args: argparse.Namespace) -> RunConfig:
    it = IterationConfig(
        lam=args.lam,
        scheme=args.scheme,
        map_kind=args.map,
        alpha=args.alpha,
        anchor=args.anchor,
        tol_residual=args.tol,
        max_iterations=args.max_iter,
    )
    return RunConfig.from_dict(
        dict(
            command="solve", builtin=args.builtin, problem=args.problem, out=args.out,
            verbose=args.verbose, iteration=it, x0=args.x0, trace=args.trace,
            map_kind=it.map_kind, lam=args.lam, describe=args.describe,
        )
    )


def cmd_solve(cfg: RunConfig) -> int:
    problem = cfg.load_problem()
    f, S = problem.bifunction, problem.convex_set
    x0 = cfg.x0 if cfg.x0 is not None else np.ones(problem.dimension)
    trace = run_fixed_point(f, S, x0, cfg.iteration, problem.known_solution)

    gap = None
    if trace.final_status == TraceStatus.CONVERGED and S.is_bounded:
        try:
            gap = gap_value(f, S, trace.final_point)
        except SubproblemError as err:
            logger.warning("solve: gap not available: %s", err)
    summary = trace_summary(trace, gap)
    summary["problem"] = problem.name
    summary["map"] = cfg.iteration.map_kind.value
    summary["scheme"] = cfg.iteration.scheme.value
    summary["lambda"] = cfg.iteration.lam
    if cfg.describe:
        summary["instance"] = problem.describe()
    if cfg.trace:
        write_trace_csv(trace, cfg.trace)
    _write_json(cfg.out, summary)

    if trace.final_status == TraceStatus.CONVERGED:
        return EXIT_OK
    if trace.final_status == TraceStatus.MAX_ITER:
        logger.warning("solve: no convergence after %d iterations", trace.iterations - 1)
        return EXIT_NOT_CONVERGED
    print(f"solve: fixed-point iteration failed: {trace.message}", file=sys.stderr)
    return EXIT_ERROR


# check


def _config_check(args: argparse.Namespace) -> RunConfig:
    sample = SampleSpec(count=args.samples, seed=args.seed)
    return RunConfig.from_dict(
        dict(
            command="check", builtin=args.builtin, problem=args.problem, out=args.out,
            verbose=args.verbose, sample=sample, property=args.property,
            map_kind=MapKind(args.map), lam=args.lam, rho=args.rho,
            x_star=args.x_star, eps=args.eps,
        )
    )


def run_check(cfg: RunConfig, problem: ProblemInstance) -> PropertyReport:
    f, S, spec, lam, kind = (
        problem.bifunction, problem.convex_set, cfg.sample, cfg.lam, cfg.map_kind,
    )
    prop = cfg.property
    if prop == "monotone":
        return check_monotone(f, spec, S)
    if prop == "strong-monotone":
        return estimate_strong_monotonicity(f, spec, S)
    if prop == "pseudomonotone":
        return check_pseudomonotone(f, spec, S)
    if prop == "lipschitz-type":
        return estimate_lipschitz_type(f, spec, S)
    if prop == "expansion":
        return estimate_map_expansion(kind, lam, f, S, spec)
    if prop == "contraction":
        return check_contraction(kind, lam, f, S, spec)
    if prop == "firmly-nonexpansive":
        return check_firmly_nonexpansive(kind, lam, f, S, spec)
    if prop == "epsilon-nonexpansive":
        return check_epsilon_nonexpansive(f, S, lam, spec, cfg.eps, kind)
    if prop == "quasicontraction":
        x_star = cfg.x_star if cfg.x_star is not None else problem.known_solution
        if x_star is None:
            raise EqproxError("quasicontraction needs --x-star or a problem with a known solution")
        rho = cfg.rho
        if rho is None and kind == MapKind.B:
            rho = bounds.quasicontraction_factor(problem.profile, lam)
        if rho is None:
            rho = 1.0
        return check_quasicontraction(kind, lam, f, S, x_star, rho, spec)
    if f.kind == BifunctionKind.BILINEAR:
        raise EqproxError(f"{prop} needs an MVI bifunction, got {f.kind.value}")
    if prop == "cocoercive":
        return check_cocoercive(f.A, f.b, spec)
    return check_strongly_lipschitz_mvi(f, spec, S)


def _print_report(report: PropertyReport) -> None:
    rows = [
        ("property", report.property),
        ("verdict", report.verdict.value),
        ("worst violation", f"{report.worst_violation:.6e}"),
        (
            "estimated modulus",
            "-" if report.estimated_modulus is None else f"{report.estimated_modulus:.6f}",
        ),
        ("classification", report.classification or "-"),
        ("samples", f"{report.samples_used}" + (" (low confidence)" if report.low_confidence else "")),
        ("seed", str(report.seed)),
        ("tolerance", f"{report.tolerance:.1e}"),
    ]
    if report.worst_witness is not None:
        rows.append(("witness", "; ".join(str(w.tolist()) for w in report.worst_witness)))
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}")


def cmd_check(cfg: RunConfig) -> int:
    if cfg.property not in PROPERTIES:
        print(
            f"check: unknown property {cfg.property!r}; valid: {', '.join(PROPERTIES)}",
            file=sys.stderr,
        )
        return EXIT_ERROR
    report = run_check(cfg, cfg.load_problem())
    _print_report(report)
    if cfg.out:
        _write_json(cfg.out, report.to_dict())
    return EXIT_OK if report.holds else EXIT_VIOLATED


# counterexample


def _config_counterexample(args: argparse.Namespace) -> RunConfig:
    return RunConfig.from_dict(
        dict(command="counterexample", out=args.out, verbose=args.verbose, lambdas=args.lambdas, tol=args.tol)
    )


def counterexample_rows(lambdas: Sequence[float], tol: float = EXACT_TOL) -> List[Dict[str, Any]]:
    p = builtin("rotation")
    x = np.array([1.0, 0.0])
    rows = []
    for lam in lambdas:
        out = prox_B(p.bifunction, p.convex_set, x, lam).output
        formula = np.array([x[0] - lam * x[1], x[1] + lam * x[0]])
        ratio = float(np.linalg.norm(out) / np.linalg.norm(x))
        expected = math.sqrt(1.0 + lam * lam)
        agree = bool(np.max(np.abs(out - formula)) <= tol and abs(ratio - expected) <= tol)
        rows.append(
            {"lambda": lam, "B_x": out.tolist(), "ratio": ratio, "sqrt_1_plus_lambda2": expected, "agree": agree}
        )
    return rows


def cmd_counterexample(cfg: RunConfig) -> int:
    rows = counterexample_rows(cfg.lambdas, cfg.tol)
    print(f"{'lambda':>10}  {'B_lambda((1,0))':>28}  {'ratio':>10}  {'sqrt(1+l^2)':>12}  agree")
    for r in rows:
        bx = "(" + ", ".join(f"{v:.6f}" for v in r["B_x"]) + ")"
        print(f"{r['lambda']:>10g}  {bx:>28}  {r['ratio']:>10.6f}  {r['sqrt_1_plus_lambda2']:>12.6f}  {r['agree']}")
    if cfg.out:
        _write_json(cfg.out, {"rows": rows})
    if all(r["agree"] for r in rows):
        return EXIT_OK
    print("counterexample: computed B_lambda disagrees with the closed form", file=sys.stderr)
    return EXIT_ERROR


# bench


def _config_bench(args: argparse.Namespace) -> RunConfig:
    sample = SampleSpec(count=args.samples, seed=args.seed)
    return RunConfig.from_dict(
        dict(command="bench", out=args.out, verbose=args.verbose, sample=sample, workers=args.workers)
    )


def cmd_bench(cfg: RunConfig) -> int:
    report = run_bench(cfg.sample.count, cfg.sample.seed, cfg.workers)
    _write_json(cfg.out, report)
    if report["passed"]:
        return EXIT_OK
    for cell in report["failing"]:
        print(f"bench: cell {cell} failed", file=sys.stderr)
    return EXIT_VIOLATED


def _add_source(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--builtin", choices=registry(), help="Bundled problem instance")
    group.add_argument("--problem", type=str, help="Path to a JSON problem file")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=str, default=None, help="Write the JSON result here")
    p.add_argument("--verbose", action="store_true", help="Debug logging on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="eqprox",
        description="Proximal mappings and fixed-point iterations for equilibrium problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    solve = sub.add_parser("solve", help="Run a fixed-point iteration on an instance")
    _add_source(solve)
    _add_common(solve)
    solve.add_argument("--map", choices=[k.value for k in MapKind], default="B")
    solve.add_argument("--scheme", choices=["picard", "km", "halpern"], default="picard")
    solve.add_argument("--lambda", dest="lam", type=float, default=0.5)
    solve.add_argument("--alpha", type=float, default=KM_ALPHA, help="KM relaxation")
    solve.add_argument("--anchor", type=_floats, default=None, help="Halpern anchor, comma-separated")
    solve.add_argument("--x0", type=_floats, default=None, help="Starting point, comma-separated")
    solve.add_argument("--tol", type=float, default=FIXED_POINT_TOL)
    solve.add_argument("--max-iter", type=int, default=FIXED_POINT_MAX_ITERATIONS)
    solve.add_argument("--trace", type=str, default=None, help="Write the CSV trace here")
    solve.add_argument(
        "--describe", action="store_true", help="Include the instance profile and lambda ranges"
    )
    solve.set_defaults(configure=_config_solve, run=cmd_solve)

    check = sub.add_parser("check", help="Sampled check of a bifunction or map property")
    _add_source(check)
    _add_common(check)
    check.add_argument("--property", required=True, help=f"One of: {', '.join(PROPERTIES)}")
    check.add_argument("--map", choices=[k.value for k in MapKind], default="B")
    check.add_argument("--lambda", dest="lam", type=float, default=0.5)
    check.add_argument("--samples", type=int, default=DEFAULT_SAMPLE_COUNT)
    check.add_argument("--seed", type=int, default=DEFAULT_SEED)
    check.add_argument("--rho", type=float, default=None)
    check.add_argument("--x-star", type=_floats, default=None)
    check.add_argument("--eps", type=float, default=None)
    check.set_defaults(configure=_config_check, run=cmd_check)

    ce = sub.add_parser("counterexample", help="Reproduce the rotation counterexample for B_lambda")
    _add_common(ce)
    ce.add_argument("--lambdas", type=_floats, default=list(COUNTEREXAMPLE_LAMBDAS))
    ce.add_argument("--tol", type=float, default=EXACT_TOL)
    ce.set_defaults(configure=_config_counterexample, run=cmd_counterexample)

    bench = sub.add_parser("bench", help="Run the acceptance matrix and emit a JSON report")
    _add_common(bench)
    bench.add_argument("--samples", type=int, default=BENCH_SAMPLES)
    bench.add_argument("--seed", type=int, default=DEFAULT_SEED)
    bench.add_argument("--workers", type=int, default=1)
    bench.set_defaults(configure=_config_bench, run=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        format="<%(threadName)s:%(levelname)s> %(message)s",
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
    )
    try:
        cfg = args.configure(args)
        return args.run(cfg)
    except EqproxError as err:
        print(f"{args.command}: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
