"""Command line: ``trichotomy {classify,simulate,verify,sweep} SPEC.json``.

An equation spec is a JSON object with rational values written as strings::

    {"k": 2, "alpha": "1", "A": "1", "beta": {"2": "1"}, "B": {"1": "1"},
     "initial_conditions": ["2", "1/2"], "constructor": "t2-periodic"}

``initial_conditions`` (x_-1 first) and ``constructor`` are optional.
Exit codes: 0 success, 1 no applicable theorem, 2 input or numeric failure,
3 verification mismatch.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

from .classifier import VerdictKind, classify, recognize_t3
from .dynamics import DEFAULT_PRECISION, DEFAULT_STEPS, DEFAULT_TOLERANCE, EXACT, FLOAT, SimulationConfig, simulate
from .equation import Equation
from .errors import ParseError, TrichotomyError, ZeroDenominator
from .rational import parse_ratio
from .reductions import (
    InitialConditions,
    periodic_ic_t1,
    periodic_ic_t2,
    periodic_ic_t4_case_iv,
    unbounded_ic_t1,
)
from .verify import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_THRESHOLD,
    EXIT_COVERAGE,
    EXIT_INPUT,
    EXIT_OK,
    SWEEP_HEADER,
    RunReport,
    run_sweep,
    run_verify,
)

CONSTRUCTORS = ("t1-periodic", "t2-periodic", "t4iv-periodic", "t1-unbounded")
_KEYS = {"k", "alpha", "A", "beta", "B", "initial_conditions", "constructor"}


@dataclass(frozen=True)
class EquationSpec:
    equation: Equation
    initial_conditions: InitialConditions | None = None
    constructor: str | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "EquationSpec":
        if not isinstance(d, dict):
            raise ParseError("spec must be a JSON object")
        unknown = set(d) - _KEYS
        if unknown:
            raise ParseError(f"unknown keys: {', '.join(sorted(unknown))}")
        missing = {"alpha", "A"} - set(d)
        if missing:
            raise ParseError(f"missing keys: {', '.join(sorted(missing))}")
        try:
            eq = Equation(
                alpha=parse_ratio(d["alpha"]),
                A=parse_ratio(d["A"]),
                beta={int(i): parse_ratio(v) for i, v in d.get("beta", {}).items()},
                B={int(j): parse_ratio(v) for j, v in d.get("B", {}).items()},
                k=d.get("k"),
            )
        except (TrichotomyError, ValueError, AttributeError) as e:
            raise ParseError(str(e)) from None
        ics = d.get("initial_conditions")
        if ics is not None:
            ics = InitialConditions(parse_ratio(v) for v in ics)
            if len(ics) != eq.k:
                raise ParseError(f"initial_conditions needs {eq.k} entries, got {len(ics)}")
        cons = d.get("constructor")
        if cons is not None and cons not in CONSTRUCTORS:
            raise ParseError(f"unknown constructor {cons!r}; choose from {', '.join(CONSTRUCTORS)}")
        return cls(eq, ics, cons)

    def to_dict(self) -> dict:
        d = self.equation.to_dict()
        if self.initial_conditions is not None:
            d["initial_conditions"] = self.initial_conditions.to_list()
        if self.constructor is not None:
            d["constructor"] = self.constructor
        return d


def load_spec(path: str) -> EquationSpec:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read {path}: {e}") from None
    return EquationSpec.from_dict(data)


def construct(name: str, eq: Equation) -> InitialConditions:
    if name == "t1-periodic":
        return periodic_ic_t1(eq)
    if name == "t2-periodic":
        return periodic_ic_t2(eq)
    if name == "t1-unbounded":
        return unbounded_ic_t1(eq)
    if name == "t4iv-periodic":
        shape = recognize_t3(eq)
        if shape is None:
            raise ParseError("t4iv-periodic needs the odd-lag shape")
        return periodic_ic_t4_case_iv(shape)
    raise ParseError(f"unknown constructor {name!r}")


def _emit(lines, out=None):
    text = "\n".join(lines) + "\n"
    (out or sys.stdout).write(text)


def _write_report(run: RunReport, path: str | None):
    if path:
        with open(path, "w") as fh:
            json.dump(run.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def cmd_classify(spec: EquationSpec, args) -> int:
    reports, verdict = classify(spec.equation, nonnegative_ics=args.nonnegative)
    run = RunReport(reports, verdict)
    run.exit_status = EXIT_COVERAGE if verdict.kind is VerdictKind.OUT_OF_SCOPE else EXIT_OK
    _emit(run.lines())
    _write_report(run, args.report)
    return run.exit_status


def cmd_simulate(spec: EquationSpec, args) -> int:
    eq = spec.equation
    if args.ics:
        ics = InitialConditions(parse_ratio(v) for v in args.ics.split(","))
    elif args.constructor or spec.constructor:
        ics = construct(args.constructor or spec.constructor, eq)
    elif spec.initial_conditions is not None:
        ics = spec.initial_conditions
    else:
        raise ParseError("simulate needs initial conditions (--ics, --constructor, or the JSON file)")
    if len(ics) != eq.k:
        raise ParseError(f"need {eq.k} initial conditions, got {len(ics)}")
    cfg = SimulationConfig(steps=args.steps, mode=args.mode, precision_bits=args.precision_bits)
    try:
        traj = simulate(eq, ics, cfg)
    except ZeroDenominator as e:
        print(f"error: vanishing denominator at step {e.step}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        with open(args.out, "w", newline="") as fh:
            traj.to_csv(fh)
    else:
        traj.to_csv(sys.stdout)
    return EXIT_OK


def _verify_kwargs(args) -> dict:
    return dict(seed=args.seed, samples=args.samples, steps=args.steps, tolerance=args.tolerance,
                window=args.window, threshold=args.threshold, nonnegative=args.nonnegative,
                mode=args.mode, precision_bits=args.precision_bits)


def cmd_verify(spec: EquationSpec, args) -> int:
    run = run_verify(spec.equation, **_verify_kwargs(args))
    _emit(run.lines())
    _write_report(run, args.report)
    return run.exit_status


def cmd_sweep(spec: EquationSpec, args) -> int:
    if args.param is None or args.lo is None or args.hi is None:
        raise ParseError("sweep needs --param, --from and --to")
    rows = run_sweep(spec.equation, args.param, parse_ratio(args.lo), parse_ratio(args.hi),
                     args.count, jobs=args.jobs, **_verify_kwargs(args))
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        w.writerows(rows)
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def _check_options(samples: int) -> argparse.ArgumentParser:
    checks = argparse.ArgumentParser(add_help=False)
    checks.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    checks.add_argument("--window", type=int, default=None)
    checks.add_argument("--seed", type=int, default=DEFAULT_SEED)
    checks.add_argument("--samples", type=int, default=samples, help="random initial conditions per run")
    checks.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    return checks


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="equation spec (JSON)")
    common.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    common.add_argument("--mode", choices=(EXACT, FLOAT), default=EXACT)
    common.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION)
    common.add_argument("--nonnegative", action="store_true",
                        help="allow nonnegative initial conditions (T4 case split)")

    parser = argparse.ArgumentParser(prog="trichotomy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="check hypotheses and print the verdict")
    p.add_argument("--report", help="write the JSON run report here")
    p = sub.add_parser("simulate", parents=[common], help="write a trajectory CSV")
    p.add_argument("--ics", help="comma-separated initial conditions, x_-1 first")
    p.add_argument("--constructor", choices=CONSTRUCTORS)
    p.add_argument("--out")
    p = sub.add_parser("verify", parents=[common, _check_options(DEFAULT_SAMPLES)],
                       help="check the verdict end to end")
    p.add_argument("--report", help="write the JSON run report here")
    p = sub.add_parser("sweep", parents=[common, _check_options(3)],
                       help="scan a parameter across the boundary")
    p.add_argument("--param", choices=("A", "alpha"))
    p.add_argument("--from", dest="lo")
    p.add_argument("--to", dest="hi")
    p.add_argument("--count", type=int, default=9)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    return parser


COMMANDS = {"classify": cmd_classify, "simulate": cmd_simulate, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args.spec)
        return COMMANDS[args.command](spec, args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except TrichotomyError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
