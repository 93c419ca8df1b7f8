"""Command-line surface: every library quantity as a JSON or CSV report.

Payloads go to standard output only; diagnostics and optional ``--verbose``
summaries go to standard error. Exit codes: 0 success, 2 usage error,
3 domain or capacity error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Optional

from .asymptotics import (
    CONSTITUENT_FACTORS,
    classical_failure_probability,
    gap,
    macroscopic_report,
)
from .configs import Configuration, classify, enumerate_configurations, parse_configuration, Word
from .errors import GhzGapError
from .experiment import (
    ExperimentConfig,
    LhvModel,
    QuantumModel,
    min_trials_to_disprove,
    run_experiment,
)
from .quantum import NoiseModel
from .reporting import build_manifest, dumps_csv, dumps_json
from .strategies import (
    bad_word_count_naive,
    max_classical_mermin_sum,
    mermin_bound,
    minimize_bad_words,
    minimize_bad_words_brute_force,
)

#: Listing individual bad words in reports is capped at this q.
_LIST_BAD_WORDS_LIMIT = 12


def _classification_fields(config: Configuration) -> dict[str, Any]:
    cls = classify(config)
    return {
        "configuration": config.text(),
        "kind": cls.kind,
        "eigenvalue": cls.eigenvalue if isinstance(cls, Word) else None,
    }


def _cmd_classify(args: argparse.Namespace) -> str:
    config = parse_configuration(args.config)
    payload: dict[str, Any] = {
        "manifest": build_manifest("classify", {"config": args.config}).to_payload(),
        "q": config.q,
        "r_count": config.r_count,
        **_classification_fields(config),
    }
    if args.verbose:
        cls = classify(config)
        tail = f" with eigenvalue {cls.eigenvalue:+d}" if isinstance(cls, Word) else ""
        print(f"{config.text()} is a {cls.kind}{tail}", file=sys.stderr)
    return dumps_json(payload)


def _cmd_enumerate(args: argparse.Namespace) -> str:
    items = [
        _classification_fields(config)
        for config in enumerate_configurations(args.q)
        if not (args.words_only and not config.is_word)
    ]
    if args.verbose:
        print(f"{len(items)} configurations at q={args.q}", file=sys.stderr)
    if args.format == "csv":
        return dumps_csv(["configuration", "kind", "eigenvalue"], items)
    manifest = build_manifest(
        "enumerate",
        {"q": args.q, "words_only": args.words_only, "format": args.format},
    )
    return dumps_json(
        {
            "manifest": manifest.to_payload(),
            "q": args.q,
            "words_only": args.words_only,
            "count": len(items),
            "items": items,
        }
    )


def _cmd_lhv_optimize(args: argparse.Namespace) -> str:
    report = minimize_bad_words(args.q)
    strategy = report.strategy
    payload: dict[str, Any] = {
        "manifest": build_manifest(
            "lhv optimize",
            {"q": args.q, "verify_brute_force": args.verify_brute_force},
        ).to_payload(),
        "q": args.q,
        "a_sign": strategy.a_sign,
        "t_mask": strategy.t_mask,
        "flipped_stations": strategy.t_mask.bit_count(),
        "bad_count": report.bad_count,
        "failure_probability": report.probability,
        "failure_probability_float": float(report.probability),
        "bound": mermin_bound(args.q),
        "max_mermin_sum": max_classical_mermin_sum(args.q),
    }
    if args.q <= _LIST_BAD_WORDS_LIMIT:
        listed = bad_word_count_naive(strategy, list_words=True)
        payload["bad_words"] = [c.text() for c in listed.bad_words or ()]
    else:
        payload["bad_words"] = None
    if args.verify_brute_force:
        brute = minimize_bad_words_brute_force(args.q)
        payload["brute_force"] = {
            "bad_count": brute.bad_count,
            "matches": brute.bad_count == report.bad_count,
        }
    if args.verbose:
        print(
            f"optimal strategy misses {report.bad_count} of "
            f"{1 << (args.q - 1)} words (probability {report.probability})",
            file=sys.stderr,
        )
    return dumps_json(payload)


def _cmd_simulate(args: argparse.Namespace) -> str:
    noise = NoiseModel(args.eps)
    model = QuantumModel(noise) if args.model == "qm" else LhvModel(noise=noise)
    cfg = ExperimentConfig(
        q=args.q,
        model=model,
        trials=args.trials,
        master_seed=args.seed,
        ci_level=args.ci_level,
    )
    report = run_experiment(cfg)
    strategy_fields: Optional[dict[str, Any]] = None
    if args.model == "lhv":
        strategy = minimize_bad_words(args.q).strategy
        strategy_fields = {
            "a_sign": strategy.a_sign,
            "t_mask": strategy.t_mask,
            "flipped_stations": strategy.t_mask.bit_count(),
        }
    row: dict[str, Any] = {
        "q": args.q,
        "model": args.model,
        "epsilon": args.eps,
        "trials": report.trials,
        "master_seed": args.seed,
        "ci_level": args.ci_level,
        "word_trials": report.word_trials,
        "string_trials": report.string_trials,
        "failures": report.failures,
        "failure_rate": report.failure_rate,
        "ci_low": report.ci_low,
        "ci_high": report.ci_high,
        "theory": report.theory,
    }
    if args.verbose:
        print(
            f"{report.failures} failures / {report.trials} trials: "
            f"rate {report.failure_rate:.6f}, theory {report.theory:.6f}, "
            f"CI [{report.ci_low:.6f}, {report.ci_high:.6f}]",
            file=sys.stderr,
        )
    if args.csv:
        return dumps_csv(list(row), [row])
    manifest = build_manifest(
        "simulate",
        {
            "q": args.q,
            "model": args.model,
            "eps": args.eps,
            "trials": args.trials,
            "seed": args.seed,
            "ci_level": args.ci_level,
        },
        seed=args.seed,
    )
    payload: dict[str, Any] = {"manifest": manifest.to_payload(), **row}
    payload["strategy"] = strategy_fields
    payload["station_r_counts"] = list(report.station_r_counts)
    return dumps_json(payload)


def _gap_row(q: int | float, eps: float) -> dict[str, Any]:
    report = gap(q, NoiseModel(eps))
    return {
        "q": report.q,
        "eps": report.epsilon,
        "p_qm": report.p_qm,
        "p_classical_exact": report.p_classical_exact,
        "gap_exact": report.gap_exact,
        "gap_asymptotic": report.gap_asymptotic,
    }


def _parse_q(text: str) -> int | float:
    """Integer q gets the exact path; anything else (e.g. 4e27) the real path."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _cmd_gap(args: argparse.Namespace) -> str:
    report = gap(args.q, NoiseModel(args.eps))
    payload: dict[str, Any] = {
        "manifest": build_manifest("gap", {"q": args.q, "eps": args.eps}).to_payload(),
        "q": report.q,
        "eps": report.epsilon,
        "p_qm": report.p_qm,
        "p_classical_exact": report.p_classical_exact,
        "gap_exact": report.gap_exact,
        "gap_asymptotic": report.gap_asymptotic,
        "p_classical_limit": report.p_classical_limit,
    }
    if args.verbose:
        print(
            f"q={args.q}, eps={args.eps}: asymptotic gap {report.gap_asymptotic:.6e}",
            file=sys.stderr,
        )
    return dumps_json(payload)


def _cmd_gap_sweep(args: argparse.Namespace) -> str:
    if args.q_min > args.q_max:
        raise GhzGapError(f"--q-min {args.q_min} exceeds --q-max {args.q_max}")
    rows = [
        _gap_row(q, eps)
        for q in range(args.q_min, args.q_max + 1)
        for eps in args.eps_list
    ]
    if args.verbose:
        print(f"{len(rows)} gap rows", file=sys.stderr)
    columns = ["q", "eps", "p_qm", "p_classical_exact", "gap_exact", "gap_asymptotic"]
    if args.format == "csv":
        return dumps_csv(columns, rows)
    manifest = build_manifest(
        "gap sweep",
        {
            "q_min": args.q_min,
            "q_max": args.q_max,
            "eps_list": list(args.eps_list),
            "format": args.format,
        },
    )
    return dumps_json({"manifest": manifest.to_payload(), "rows": rows})


def _cmd_disprove(args: argparse.Namespace) -> str:
    trials = min_trials_to_disprove(args.p_failure, args.confidence)
    if args.verbose:
        print(
            f"{trials} trials expose a failure with confidence {args.confidence}",
            file=sys.stderr,
        )
    manifest = build_manifest(
        "disprove", {"p_failure": args.p_failure, "confidence": args.confidence}
    )
    return dumps_json(
        {
            "manifest": manifest.to_payload(),
            "p_failure": args.p_failure,
            "confidence": args.confidence,
            "trials": trials,
        }
    )


def _cmd_cat(args: argparse.Namespace) -> str:
    report = macroscopic_report(args.mass_kg, args.delta, args.convention)
    if args.verbose:
        print(
            f"q≈{report.q:.3e}; derived threshold {report.epsilon_derived:.3e} "
            f"vs reference {report.epsilon_reference:.3e}",
            file=sys.stderr,
        )
    manifest = build_manifest(
        "cat",
        {
            "mass_kg": args.mass_kg,
            "delta": args.delta,
            "convention": args.convention,
        },
    )
    return dumps_json(
        {
            "manifest": manifest.to_payload(),
            "mass_kg": report.mass_kg,
            "convention": report.convention,
            "q": report.q,
            "delta": report.delta,
            "epsilon_derived": report.epsilon_derived,
            "epsilon_reference": report.epsilon_reference,
            "gap_at_derived": report.gap_at_derived,
            "gap_at_reference": report.gap_at_reference,
        }
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--verbose", action="store_true", help="human-readable summary on stderr"
    )

    parser = argparse.ArgumentParser(
        prog="ghzgap",
        description="Quantum vs deterministic hidden-variable failure rates "
        "for q-station entangled measurements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a configuration")
    p.add_argument("--config", required=True, help="letter form, e.g. llr")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("enumerate", parents=[common], help="list configurations")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--words-only", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("lhv", help="deterministic strategy tools")
    lhv_sub = p.add_subparsers(dest="lhv_command", required=True)
    p = lhv_sub.add_parser(
        "optimize", parents=[common], help="best deterministic strategy"
    )
    p.add_argument("--q", type=int, required=True)
    p.add_argument(
        "--verify-brute-force",
        action="store_true",
        help="cross-check against all 4^q raw strategies (q <= 8)",
    )
    p.set_defaults(handler=_cmd_lhv_optimize)

    p = sub.add_parser("simulate", parents=[common], help="seeded Monte Carlo run")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--model", choices=["qm", "lhv"], required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True, help="master seed (required)")
    p.add_argument("--ci-level", type=float, default=0.95)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=True)
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("gap", parents=[common], help="quantum-classical failure gap")
    gap_sub = p.add_subparsers(dest="gap_command")
    p.add_argument("--q", type=_parse_q, help="integer for the exact path, real for huge q")
    p.add_argument("--eps", type=float, default=0.0)
    p.set_defaults(handler=_cmd_gap)
    p = gap_sub.add_parser("sweep", parents=[common], help="gap table over a q range")
    p.add_argument("--q-min", type=int, required=True)
    p.add_argument("--q-max", type=int, required=True)
    p.add_argument("--eps-list", type=float, nargs="+", default=[0.01])
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(handler=_cmd_gap_sweep)

    p = sub.add_parser("disprove", parents=[common], help="trials to expose a failure")
    p.add_argument("--p-failure", type=float, required=True)
    p.add_argument("--confidence", type=float, required=True)
    p.set_defaults(handler=_cmd_disprove)

    p = sub.add_parser("cat", parents=[common], help="macroscopic-mass thresholds")
    p.add_argument("--mass-kg", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument(
        "--convention",
        choices=sorted(CONSTITUENT_FACTORS),
        default="electrons-nucleons",
    )
    p.set_defaults(handler=_cmd_cat)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gap" and getattr(args, "gap_command", None) is None:
        if args.q is None:
            parser.error("gap requires --q (or the sweep subcommand)")
    try:
        text = args.handler(args)
    except GhzGapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
