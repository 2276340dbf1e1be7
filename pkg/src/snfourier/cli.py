"""Command-line front end: run | verify | spectrum | sample.

Exit codes are part of the contract: 0 success, 1 verify-battery failure,
2 input/validation problems, 3 degree-guard violations, 4 an annihilated
state. Errors print a single line to stderr. Identical invocations with
identical seeds produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .errors import AnnihilatedStateError, DegreeGuardError, PlanValidationError, \
    check_degree
from .pipeline import run_plan, sample_computational, sample_fourier
from .serialize import (
    format_float,
    fourier_distribution_to_json,
    function_from_csv,
    ledger_to_jsonl,
    partition_samples_to_csv,
    plan_from_json,
    posterior_to_csv,
    report_to_json,
    samples_to_csv,
    spectrum_to_json,
)
from .transform import function_degree, gft_forward
from .verify import format_table, run_battery


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def _load_plan(args):
    plan = plan_from_json(Path(args.plan).read_text(encoding="utf-8"))
    if args.seed is not None:
        plan = replace(plan, seed=args.seed)
    if args.n_guard is not None:
        check_degree(plan.n, args.n_guard)
    return plan


def _cmd_run(args) -> int:
    plan = _load_plan(args)
    state, report = run_plan(plan)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "posterior.csv", posterior_to_csv(report.posterior))
    _write(out / "spectrum.json",
           spectrum_to_json(gft_forward(state.amplitudes, args.normalization)))
    _write(out / "ledger.jsonl", ledger_to_jsonl(report.ledger))
    _write(out / "report.json", report_to_json(plan, report))
    print(f"wrote posterior.csv spectrum.json ledger.jsonl report.json to {out}")
    return 0


def _cmd_verify(args) -> int:
    results = run_battery(args.n_max, seed=args.seed, guard=args.n_guard)
    print(format_table(results), end="")
    return 0 if all(result.passed for result in results) else 1


def _cmd_spectrum(args) -> int:
    values = function_from_csv(Path(args.input).read_text(encoding="utf-8"))
    n = function_degree(values)
    check_degree(n, args.n_guard)
    spectrum = gft_forward(values, args.normalization)
    energies = gft_forward(values, "unitary").energies()
    total = sum(energies.values())
    if total <= 0:
        raise ValueError("the zero function has no sampling distribution")
    distribution = {lam: energy / total for lam, energy in energies.items()}

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "spectrum.json", spectrum_to_json(spectrum))
    if args.format == "json":
        _write(out / "energies.json", fourier_distribution_to_json(distribution))
        written = "spectrum.json energies.json"
    else:
        lines = ["partition,probability"]
        lines += [
            f"{' '.join(str(part) for part in lam.parts)},{format_float(prob)}"
            for lam, prob in distribution.items()
        ]
        _write(out / "energies.csv", "\n".join(lines) + "\n")
        written = "spectrum.json energies.csv"
    print(f"wrote {written} to {out}")
    return 0


def _cmd_sample(args) -> int:
    if args.count < 1:
        raise ValueError(f"count must be >= 1, got {args.count}")
    plan = _load_plan(args)
    state, _ = run_plan(plan)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.mode == "computational":
        draws = sample_computational(state, args.count, seed=plan.seed)
        _write(out / "samples.csv", samples_to_csv(draws))
        written = "samples.csv"
    else:
        draws, exact = sample_fourier(state, args.count, seed=plan.seed)
        _write(out / "samples.csv", partition_samples_to_csv(draws))
        _write(out / "distribution.json", fourier_distribution_to_json(exact))
        written = "samples.csv distribution.json"
    print(f"wrote {written} ({args.count} draws) to {out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snfourier",
        description="Harmonic analysis and statevector inference over permutations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, plan=False):
        if plan:
            p.add_argument("--plan", required=True, help="plan JSON path")
            p.add_argument("--out", required=True, help="output directory")
            p.add_argument("--seed", type=int, default=None,
                           help="override the plan's RNG seed")
        p.add_argument("--n-guard", type=int, default=None,
                       help="tighten the dense-storage degree guard")

    run_p = sub.add_parser("run", help="execute a plan and write its artifacts")
    common(run_p, plan=True)
    run_p.add_argument("--normalization", choices=("plain", "unitary"),
                       default="unitary", help="normalization of spectrum.json")
    run_p.set_defaults(handler=_cmd_run)

    verify_p = sub.add_parser("verify", help="run the self-check battery")
    verify_p.add_argument("--n-max", type=int, default=4,
                          help="largest degree the battery sweeps")
    verify_p.add_argument("--seed", type=int, default=0)
    common(verify_p)
    verify_p.set_defaults(handler=_cmd_verify)

    spectrum_p = sub.add_parser(
        "spectrum", help="transform a rank,value CSV and report block energies"
    )
    spectrum_p.add_argument("--input", required=True, help="rank,value CSV path")
    spectrum_p.add_argument("--out", required=True, help="output directory")
    spectrum_p.add_argument("--normalization", choices=("plain", "unitary"),
                            default="unitary")
    spectrum_p.add_argument("--format", choices=("json", "csv"), default="json",
                            help="format of the energy distribution file")
    common(spectrum_p)
    spectrum_p.set_defaults(handler=_cmd_spectrum)

    sample_p = sub.add_parser("sample", help="run a plan, then draw from the result")
    common(sample_p, plan=True)
    sample_p.add_argument("--count", type=int, default=1000)
    sample_p.add_argument("--mode", choices=("computational", "fourier"),
                          default="computational")
    sample_p.set_defaults(handler=_cmd_sample)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except PlanValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except DegreeGuardError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except AnnihilatedStateError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
