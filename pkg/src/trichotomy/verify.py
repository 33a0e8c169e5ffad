"""End-to-end checks of a verdict: constructions, random-IC convergence, witnesses, sweeps."""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2

from .classifier import HypothesisReport, TheoremId, Verdict, VerdictKind, classify, recognize_t3
from .dynamics import (
    DEFAULT_PRECISION,
    DEFAULT_STEPS,
    DEFAULT_TOLERANCE,
    EXACT,
    SimulationConfig,
    Stepper,
    bound_report,
    certify_period,
    converge_to_period,
    default_witness_grid,
    envelopes,
    random_ics,
    simulate,
    unbounded_witness_search,
)
from .equation import Equation, equilibria
from .errors import Degenerate, InvalidEquation, TrichotomyError, ZeroDenominator
from .rational import format_value, to_mpfr
from .reductions import (
    InitialConditions,
    periodic_ic_t1,
    periodic_ic_t2,
    periodic_ic_t3,
    periodic_ic_t4_case_iv,
    shift_equation,
    unbounded_ic_t1,
)

EXIT_OK = 0
EXIT_COVERAGE = 1
EXIT_INPUT = 2
EXIT_MISMATCH = 3

DEFAULT_SEED = 0
DEFAULT_SAMPLES = 50
DEFAULT_THRESHOLD = 10**6


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class RunReport:
    reports: list
    verdict: Verdict
    seed: int | None = None
    constructed_ics: list | None = None
    checks: list = field(default_factory=list)
    period_report: dict | None = None
    bound_report: dict | None = None
    monitors: dict = field(default_factory=dict)
    exit_status: int = EXIT_OK

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "reports": [r.to_dict() for r in self.reports],
            "verdict": self.verdict.to_dict(),
            "seed": self.seed,
            "constructed_ics": self.constructed_ics,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "period_report": self.period_report,
            "bound_report": self.bound_report,
            "monitors": dict(sorted(self.monitors.items())),
            "exit_status": self.exit_status,
        }

    @classmethod
    def from_dict(cls, d) -> "RunReport":
        return cls(
            reports=[HypothesisReport.from_dict(r) for r in d["reports"]],
            verdict=Verdict.from_dict(d["verdict"]),
            seed=d.get("seed"),
            constructed_ics=d.get("constructed_ics"),
            checks=[Check(c["name"], c["passed"], c.get("detail", "")) for c in d.get("checks", [])],
            period_report=d.get("period_report"),
            bound_report=d.get("bound_report"),
            monitors=d.get("monitors", {}),
            exit_status=d.get("exit_status", EXIT_OK),
        )

    def lines(self) -> list[str]:
        out = []
        for r in self.reports:
            if r.holds:
                out.append(f"{r.theorem.value} holds")
            else:
                f = r.failures()[0]
                out.append(f"{r.theorem.value} fails: {f.detail or f.name}")
        out.append(f"verdict: {self.verdict.describe()}")
        if self.seed is not None:
            out.append(f"seed: {self.seed}")
        if self.constructed_ics is not None:
            out.append(f"constructed ICs (x_-1 .. x_-k): {', '.join(self.constructed_ics)}")
        for c in self.checks:
            out.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        for name, status in sorted(self.monitors.items()):
            out.append(f"monitor {name}: {status}")
        return out


def constructed_cycle_ics(eq: Equation, verdict: Verdict) -> InitialConditions:
    """Initial conditions of the prime-period solution the verdict's proof exhibits."""
    if verdict.theorem is TheoremId.T1:
        return periodic_ic_t1(eq)
    if verdict.theorem is TheoremId.T2:
        return periodic_ic_t2(eq)
    shape = recognize_t3(eq)
    if verdict.theorem is TheoremId.T4 and verdict.case == "iv":
        return periodic_ic_t4_case_iv(shape)
    return periodic_ic_t3(shape)


def _near_equilibrium(eq: Equation, value, tolerance) -> bool:
    try:
        eqs = equilibria(eq).values
    except (Degenerate, InvalidEquation):
        return True
    with gmpy2.context(gmpy2.get_context(), precision=DEFAULT_PRECISION):
        v = to_mpfr(value)
        return any(abs(v - to_mpfr(e)) < tolerance for e in eqs)


def _search_unbounded(eq: Equation, verdict: Verdict, threshold, steps):
    """Witness for an unbounded orbit: construction for T1, grid search otherwise."""
    if verdict.theorem is TheoremId.T1:
        ics = unbounded_ic_t1(eq)
        st = Stepper(eq, ics)
        while len(st.values) < steps:
            new = st.advance(min(100, steps - len(st.values)))
            for off, v in enumerate(new):
                if v > threshold:
                    return ics, len(st.values) - len(new) + off, "zero-pattern construction"
        return None
    found = unbounded_witness_search(eq, None, threshold, steps)
    if found:
        return (*found, "grid search")
    shape = recognize_t3(eq)
    if shape is not None:
        # search again on the w = x - 1 image; lifted grid points stay positive
        try:
            reduced, change = shift_equation(shape)
        except InvalidEquation:
            return None
        lifted = [InitialConditions(change.inverse(w) for w in ics) for ics in default_witness_grid(eq.k)]
        found = unbounded_witness_search(eq, lifted, threshold, steps)
        if found:
            return (*found, "lifted grid search")
    return None


def run_verify(eq: Equation, *, seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES,
               steps: int = DEFAULT_STEPS, tolerance=DEFAULT_TOLERANCE, window: int | None = None,
               threshold=DEFAULT_THRESHOLD, nonnegative: bool = False, mode: str = EXACT,
               precision_bits: int = DEFAULT_PRECISION) -> RunReport:
    reports, verdict = classify(eq, nonnegative_ics=nonnegative)
    run = RunReport(reports, verdict, seed=seed)
    if verdict.kind is VerdictKind.OUT_OF_SCOPE:
        run.exit_status = EXIT_COVERAGE
        return run
    rng = random.Random(seed)

    if verdict.kind is VerdictKind.PERIODIC:
        p = verdict.period
        ics = constructed_cycle_ics(eq, verdict)
        run.constructed_ics = ics.to_list()
        cert = certify_period(eq, ics, p)
        detail = (f"exact prime period {cert.prime_period}" if cert.periodic
                  else "orbit is not periodic")
        run.checks.append(Check(f"constructed cycle has prime period {p}", cert.certified, detail))

    if verdict.kind in (VerdictKind.PERIODIC, VerdictKind.EQUILIBRIUM):
        p = verdict.period if verdict.kind is VerdictKind.PERIODIC else 1
        worst, failures, first = Fraction(0), 0, None
        off_equilibrium = 0
        for _ in range(samples):
            ics = random_ics(eq.k, rng)
            rep = converge_to_period(eq, ics, p, tolerance, steps, window, mode, precision_bits)
            first = first or rep
            worst = max(worst, rep.residual)
            if not rep.converged:
                failures += 1
            elif p == 1 and not _near_equilibrium(eq, rep.limit_cycle[0], tolerance * 10):
                off_equilibrium += 1
        run.period_report = first.to_dict() if first else None
        run.checks.append(Check(
            f"{samples} random ICs converge to period {p}", failures == 0,
            f"worst residual {float(worst):.3e}, {failures} inconclusive at horizon {steps}"))
        if p == 1:
            run.checks.append(Check("limits are equilibria", off_equilibrium == 0,
                                    f"{off_equilibrium} limits away from every equilibrium"))
        probe = random_ics(eq.k, random.Random(seed))
        traj = simulate(eq, probe, SimulationConfig(steps=min(steps, 1000), mode=mode,
                                                    precision_bits=precision_bits))
        br = bound_report(traj)
        run.bound_report = {"sup_estimate": format_value(br.sup_estimate),
                            "inf_estimate": format_value(br.inf_estimate),
                            "tail_start": br.tail_start}
        if verdict.theorem in (TheoremId.T1, TheoremId.T2):
            variant = verdict.theorem.value
            bad = [e.phase for e in envelopes(traj, variant) if not e.is_nonincreasing()]
            run.monitors[f"envelope-{variant}"] = "nonincreasing" if not bad else f"increases at phases {bad}"

    if verdict.kind is VerdictKind.UNBOUNDED:
        try:
            found = _search_unbounded(eq, verdict, threshold, steps)
        except ZeroDenominator as e:
            found = None
            run.monitors["witness"] = f"zero denominator at step {e.step}"
        if found:
            ics, n, how = found
            run.constructed_ics = ics.to_list()
            run.checks.append(Check(f"orbit exceeds {threshold}", True, f"at step {n} ({how})"))
        else:
            run.checks.append(Check(f"orbit exceeds {threshold}", False,
                                    f"inconclusive: no witness within {steps} steps"))

    run.exit_status = EXIT_OK if run.passed else EXIT_MISMATCH
    return run


# -- sweeps -----------------------------------------------------------------------------

SWEEP_HEADER = ["param", "value", "verdict", "predicted_period", "detected_prime_period",
                "residual", "witness"]


def sweep_grid(lo: Fraction, hi: Fraction, count: int) -> list[Fraction]:
    if count < 2:
        raise ValueError("count must be at least 2")
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _sweep_point(args):
    eq, param, value, kw = args
    try:
        point = eq.replace(**{param: value})
    except TrichotomyError as e:
        return [param, format_value(value), f"invalid: {e}", "", "", "", ""]
    run = run_verify(point, **kw)
    v = run.verdict
    pr = run.period_report or {}
    witness = ""
    if v.kind is VerdictKind.UNBOUNDED:
        witness = "yes" if run.passed else "inconclusive"
    return [
        param,
        format_value(value),
        v.kind.value,
        v.period if v.period is not None else "",
        pr.get("prime_period") or "",
        f"{pr['residual']:.3e}" if "residual" in pr else "",
        witness,
    ]


def run_sweep(eq: Equation, param: str, lo, hi, count: int, *, jobs: int = 1, **kw) -> list[list]:
    """One row per grid point, in grid order; points run in worker processes when jobs > 1."""
    if param not in ("A", "alpha"):
        raise ValueError("param must be 'A' or 'alpha'")
    tasks = [(eq, param, v, kw) for v in sweep_grid(Fraction(lo), Fraction(hi), count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_point, tasks))
    return [_sweep_point(t) for t in tasks]
