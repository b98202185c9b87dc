"""
Spin-Sum Command Line
=====================
Batch terminal interface: build gamma tensors, evaluate spin sums, check
field equations and run the verification suites. JSON goes to stdout (or
--output), status lines and logs go to stderr.
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..', '..'))

from src import __version__
from src.config import OUTPUT_FORMATS, RunConfig, set_settings
from src.core.errors import DomainError, SpinSumError
from src.core.field_physics import (
    causality_constraint,
    proca_report,
    statistics_for,
    verify_field_equation,
    weyl_pair_report,
)
from src.core.gamma import NORMALIZATION_VERSION, TwistKind, predicted_k_range
from src.core.halfint import HalfInt
from src.core.intertwiners import build_coefficients
from src.core.linalg import Tolerance
from src.core.lorentz import METRIC, FourVector, ab_rep, random_on_shell
from src.core.polynomial import poly_pq_split, poly_reduce_p0
from src.core.spin_sums import ab_job, direct_sum, expected_parity, spin_sum_polynomial
from src.core.tensor_cache import TensorCache, get_tensor_cache, reset_tensor_cache
from src.core.utils.serialization import dump_json, matrix_to_json
from src.core.verification import FLIPPED_TIME_METRIC, SUITES, VerificationReport, run_verification

console = Console(stderr=True)
logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def halfint_arg(text: str) -> HalfInt:
    try:
        value = HalfInt.parse(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from e
    if value.twice < 0:
        raise argparse.ArgumentTypeError(f"Label must be non-negative, got {text!r}")
    return value


def twist_arg(text: str) -> TwistKind:
    try:
        return TwistKind.parse(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def momentum_arg(text: str) -> Tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"Momentum must be x,y,z, got {text!r}")
    try:
        return tuple(float(x) for x in parts)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Bad momentum {text!r}") from e


def setup_logging(level: str):
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _add_labels(parser: argparse.ArgumentParser):
    for name in ("A", "B", "C", "D"):
        parser.add_argument(f"--{name}", type=halfint_arg, required=True, help=f"label {name}, e.g. 1/2")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="RNG seed (default 42)")
    common.add_argument("--samples", type=int, help="sample count for randomized checks (≥ 10)")
    common.add_argument("--tol-abs", type=float, help="absolute tolerance")
    common.add_argument("--tol-rel", type=float, help="relative tolerance")
    common.add_argument("--cache-dir", help="T-matrix cache directory")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="json (default) or text")

    parser = argparse.ArgumentParser(
        prog="spinsum",
        description="Spin sums and field equations for (A,B) Lorentz representations",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    gamma = commands.add_parser("gamma", parents=[common], help="build generalized gamma tensors")
    _add_labels(gamma)
    gamma.add_argument("--twist", type=twist_arg, default=TwistKind.HERMITIAN,
                       help="hermitian (spin sums) or inverse (field equations)")
    gamma.add_argument("--K", type=halfint_arg, help="only the tensor of this K")

    spinsum = commands.add_parser("spinsum", parents=[common], help="spin sum at a momentum plus its polynomial")
    _add_labels(spinsum)
    spinsum.add_argument("--j", type=halfint_arg, required=True, help="particle spin")
    spinsum.add_argument("--m", type=float, default=1.0, help="mass (default 1)")
    spinsum.add_argument("--p", type=momentum_arg, help="spatial momentum x,y,z (default at rest)")
    spinsum.add_argument("--twisted", action="store_true", help="use the inverse twist")

    fieldeq = commands.add_parser("fieldeq", parents=[common], help="derive and check a field equation")
    fieldeq.add_argument("--preset", choices=("weyl", "proca"), help="a named example instead of labels")
    for name in ("A", "B", "C", "D"):
        fieldeq.add_argument(f"--{name}", type=halfint_arg, help=f"label {name}")
    fieldeq.add_argument("--j", type=halfint_arg, help="particle spin")
    fieldeq.add_argument("--m", type=float, default=1.0, help="mass (default 1)")

    stats = commands.add_parser("statistics", parents=[common], help="spin-statistics and causality phases")
    stats.add_argument("--A", type=halfint_arg, required=True)
    stats.add_argument("--B", type=halfint_arg, required=True)
    stats.add_argument("--j", type=halfint_arg, required=True)
    stats.add_argument("--C", type=halfint_arg, help="second field label C (for the causality bracket)")
    stats.add_argument("--D", type=halfint_arg, help="second field label D")

    verify = commands.add_parser("verify", parents=[common], help="run the verification suites")
    verify.add_argument("--suite", choices=("all",) + SUITES, default="all")
    verify.add_argument("--timing", action="store_true", help="include per-check runtimes")
    verify.add_argument("--inject-wrong-metric", action="store_true", help=argparse.SUPPRESS)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    base = RunConfig.from_env()
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.samples is not None:
        changes["samples"] = args.samples
    if args.tol_abs is not None or args.tol_rel is not None:
        changes["tol"] = Tolerance(
            abs=base.tol.abs if args.tol_abs is None else args.tol_abs,
            rel=base.tol.rel if args.tol_rel is None else args.tol_rel,
        )
    if args.cache_dir:
        changes["cache_dir"] = Path(args.cache_dir)
    if args.output:
        changes["output"] = args.output
    if args.format:
        changes["format"] = args.format
    return replace(base, **changes)


# commands


@dataclass
class CommandResult:
    payload: Dict
    passed: bool = True
    report: Optional[VerificationReport] = None


def cmd_gamma(args, config: RunConfig, cache: TensorCache) -> CommandResult:
    repL, repR = ab_rep(args.A, args.B), ab_rep(args.C, args.D)
    allowed = predicted_k_range(repL.label, repR.label, args.twist)
    if args.K is not None and args.K not in allowed:
        raise DomainError(
            f"K={args.K} is outside the allowed range {[str(k) for k in allowed]}",
            {"K": str(args.K)},
        )
    tensors = cache.get_tensors(repL, repR, args.twist)
    if args.K is not None:
        tensors = [T for T in tensors if T.K == args.K]
    logger.info("Tensor cache: %d hit(s), %d miss(es)", cache.hits, cache.misses)
    payload = {
        "command": "gamma",
        "version": __version__,
        "convention": NORMALIZATION_VERSION,
        "left": repL.to_json(),
        "right": repR.to_json(),
        "twist": args.twist.value,
        "allowed_K": [k.to_json() for k in allowed],
        "tensors": [T.to_json() for T in tensors],
    }
    return CommandResult(payload)


def cmd_spinsum(args, config: RunConfig, cache: TensorCache) -> CommandResult:
    job = ab_job(args.A, args.B, args.C, args.D, args.j, args.m)
    twist = TwistKind.INVERSE if args.twisted else TwistKind.HERMITIAN
    p = FourVector.on_shell(job.m, args.p) if args.p is not None else FourVector.at_rest(job.m)
    result = spin_sum_polynomial(
        job, twist,
        tensors=cache.get_tensors(job.repL, job.repR, twist),
        samples=config.samples,
        rng_seed=config.seed,
        tol=config.tol,
    )
    reduced = poly_reduce_p0(result.polynomial, job.m)
    P, Q = poly_pq_split(reduced)
    payload = {
        "command": "spinsum",
        "version": __version__,
        "job": job.name,
        "twist": twist.value,
        "momentum": list(p.components),
        "direct": matrix_to_json(direct_sum(job, twist, p)),
        "polynomial": result.polynomial.to_json(),
        "reduced": reduced.to_json(),
        "P": P.to_json(),
        "Q": Q.to_json(),
        "xi": result.xi.to_json(),
        "parity": {
            "expected_sign": expected_parity(job, twist),
            "defect": result.parity_defect,
        },
        "degrees": list(result.degrees),
        "onshell_defect": result.onshell_defect,
    }
    return CommandResult(payload)


def cmd_fieldeq(args, config: RunConfig, cache: TensorCache) -> CommandResult:
    if args.preset == "weyl":
        report = weyl_pair_report(args.m, samples=config.samples, seed=config.seed)
        payload = {"command": "fieldeq", "version": __version__, "preset": "weyl", **report.to_json()}
        return CommandResult(payload, report.passed)
    if args.preset == "proca":
        report = proca_report(args.m, samples=config.samples, seed=config.seed)
        payload = {"command": "fieldeq", "version": __version__, "preset": "proca", **report.to_json()}
        return CommandResult(payload, report.passed)

    missing = [n for n in ("A", "B", "C", "D", "j") if getattr(args, n) is None]
    if missing:
        raise DomainError(f"Missing {', '.join('--' + n for n in missing)} (or pass --preset)")
    csAB = build_coefficients(ab_rep(args.A, args.B), args.j, args.m)
    csCD = build_coefficients(ab_rep(args.C, args.D), args.j, args.m)
    rng = np.random.default_rng(config.seed)
    momenta = [random_on_shell(rng, args.m) for _ in range(config.samples)]
    report = verify_field_equation(csAB, csCD, momenta=momenta, seed=config.seed, tol=config.tol)
    return CommandResult({"command": "fieldeq", "version": __version__, **report.to_json()}, report.passed)


def cmd_statistics(args, config: RunConfig, cache: TensorCache) -> CommandResult:
    report = statistics_for(args.A, args.B, args.j)
    payload = {"command": "statistics", "version": __version__, **report.to_json()}
    passed = True
    if args.C is not None or args.D is not None:
        if args.C is None or args.D is None:
            raise DomainError("--C and --D must be given together")
        causality = causality_constraint(args.A, args.B, args.C, args.D, report.required_sign)
        payload["causality"] = causality.to_json()
        passed = causality.satisfied
    return CommandResult(payload, passed)


def cmd_verify(args, config: RunConfig, cache: TensorCache) -> CommandResult:
    suites = SUITES if args.suite == "all" else (args.suite,)
    metric = FLIPPED_TIME_METRIC if args.inject_wrong_metric else METRIC
    if args.inject_wrong_metric:
        console.print("⚠️ Running with a flipped time-sign metric in the σ-covariance check", style="yellow")
    console.print(f"🔍 Running {', '.join(suites)} suite(s) with seed {config.seed}...", style="blue")
    report = run_verification(config, suites, cache=cache, metric=metric)
    return CommandResult(report.to_json(include_timing=args.timing), report.passed, report)


COMMANDS: Dict[str, Callable] = {
    "gamma": cmd_gamma,
    "spinsum": cmd_spinsum,
    "fieldeq": cmd_fieldeq,
    "statistics": cmd_statistics,
    "verify": cmd_verify,
}


# rendering


def render_report(report: VerificationReport, out: Console):
    summary = f"{len(report.checks)} checks, {len(report.failures)} failed"
    out.print(Panel(summary, title=f"Verification (v{report.version})",
                    border_style="green" if report.passed else "red"))
    rows = report.failures or report.checks
    table = Table(title="Failures" if report.failures else "Checks")
    table.add_column("Check", style="cyan")
    table.add_column("Status")
    table.add_column("Residual", justify="right")
    table.add_column("Limit", justify="right")
    table.add_column("Anchor", style="dim")
    for record in rows:
        style = "green" if record.status == "pass" else "red"
        table.add_row(record.name, f"[{style}]{record.status}[/{style}]",
                      f"{record.residual:.2e}", f"{record.limit:.0e}", record.anchor)
    out.print(table)


def render_payload(payload: Dict, out: Console):
    table = Table(title=f"{payload.get('command', 'result')}")
    table.add_column("Field", style="cyan")
    table.add_column("Value", style="white")
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, (dict, list)):
            text = dump_json(value)
            if len(text) > 400:
                text = text[:400] + " …"
        else:
            text = str(value)
        table.add_row(key, text)
    out.print(table)


def emit(payload: Dict, config: RunConfig, report: Optional[VerificationReport] = None):
    if config.format == "json":
        text = dump_json(payload) + "\n"
        if config.output:
            Path(config.output).write_text(text, encoding="utf-8")
            console.print(f"✅ Wrote {config.output}", style="green")
        else:
            sys.stdout.write(text)
        return
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            _render(payload, report, Console(file=fh, width=160))
        console.print(f"✅ Wrote {config.output}", style="green")
    else:
        _render(payload, report, Console())


def _render(payload: Dict, report: Optional[VerificationReport], out: Console):
    if report is not None:
        render_report(report, out)
    else:
        render_payload(payload, out)


def main(argv: Optional[List[str]] = None) -> int:
    """Main function"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = make_config(args)
    except DomainError as e:
        console.print(f"❌ {e}", style="red")
        return EXIT_USAGE
    setup_logging(config.log_level)
    set_settings(config)
    reset_tensor_cache()
    cache = get_tensor_cache()

    try:
        result = COMMANDS[args.command](args, config, cache)
    except DomainError as e:
        console.print(f"❌ {e}", style="red")
        return EXIT_USAGE
    except SpinSumError as e:
        console.print(f"❌ {type(e).__name__}: {e}", style="red")
        return EXIT_FAILURE

    emit(result.payload, config, result.report)
    if result.passed:
        console.print("✅ All checks passed", style="green")
        return EXIT_PASS
    console.print("❌ Some checks failed", style="red")
    return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
