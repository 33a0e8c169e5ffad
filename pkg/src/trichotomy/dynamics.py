"""Orbit simulation, cycle detection, boundedness witnesses and runtime monitors.

Simulation is exact by default: rationals stay ``Fraction`` and surd-valued
data stays in its quadratic field.  Exact orbits of a k-th order rational map
grow in bit size quickly, so once any value exceeds ``bit_budget`` bits the
stepper continues in ``mpfr`` at ``precision_bits`` and records the switch
point.  Float mode runs in ``mpfr`` from the start.
"""
from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import gmpy2

from .classifier import Theorem3Shape
from .equation import Equation, index_profile, step
from .errors import (
    HypothesisFailedAtStep,
    NegativeInput,
    TooShort,
    WindowTooLarge,
    ZeroDenominator,
)
from .numtheory import frobenius_number, reduced_generators
from .rational import QuadraticSurd, bit_size, format_value, to_mpfr
from .reductions import InitialConditions, VariableChange

EXACT = "exact"
FLOAT = "float"

DEFAULT_TOLERANCE = 1e-9
DEFAULT_STEPS = 5000
DEFAULT_PRECISION = 128
DEFAULT_BIT_BUDGET = 2**16

_MPFR = type(gmpy2.mpfr(0))


# -- configuration and monitors ------------------------------------------------

@dataclass(frozen=True)
class Lemma4Lower:
    c: object


@dataclass(frozen=True)
class Lemma4Upper:
    c: object


@dataclass(frozen=True)
class EnvelopeT1:
    pass


@dataclass(frozen=True)
class EnvelopeT2:
    pass


@dataclass(frozen=True)
class SimulationConfig:
    steps: int = DEFAULT_STEPS
    mode: str = EXACT
    precision_bits: int = DEFAULT_PRECISION
    bit_budget: int | None = DEFAULT_BIT_BUDGET
    monitors: tuple = ()

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be positive")
        if self.mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.precision_bits < 64:
            raise ValueError("float mode needs precision_bits >= 64")


def _context(bits: int):
    return gmpy2.context(gmpy2.get_context(), precision=bits)


# -- trajectories -----------------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    """Orbit values x_0 ... x_{steps-1} following the initial conditions.

    ``switch_point`` is the first index computed in mpfr after an exact run
    exceeded its bit budget (None if it never did).
    """

    eq: Equation
    ics: InitialConditions
    values: tuple
    mode: str = EXACT
    precision_bits: int = DEFAULT_PRECISION
    switch_point: int | None = None
    monitor_results: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.values)

    def x(self, n: int):
        """x_n for -k <= n < len(values)."""
        if n < 0:
            if -n > len(self.ics):
                raise IndexError(n)
            return self.ics[-n - 1]
        return self.values[n]

    def full(self) -> list:
        """x_{-k}, ..., x_{-1}, x_0, ... as one list (offset k)."""
        return list(reversed(self.ics.values)) + list(self.values)

    @property
    def is_exact(self) -> bool:
        return self.mode == EXACT and self.switch_point is None

    def to_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "x_n"])
        for n, v in enumerate(self.values):
            w.writerow([n, format_value(v)])


class Stepper:
    """Incremental iteration of an equation from fixed initial conditions."""

    def __init__(self, eq: Equation, ics, mode: str = EXACT,
                 precision_bits: int = DEFAULT_PRECISION, bit_budget: int | None = DEFAULT_BIT_BUDGET):
        ics = ics if isinstance(ics, InitialConditions) else InitialConditions(ics)
        if len(ics) != eq.k:
            raise ValueError(f"need {eq.k} initial conditions, got {len(ics)}")
        for v in ics:
            if v < 0:
                raise NegativeInput(f"initial condition {v} is negative")
        self.eq = eq
        self.ics = ics
        self.mode = mode
        self.bits = precision_bits
        self.budget = bit_budget
        self.switch_point = None
        self.values: list = []
        # seq holds x_{-k} ... x_{n-1}
        self._seq = list(reversed(ics.values))
        self._float = mode == FLOAT
        self._coeffs = self._prepare(exact=not self._float)
        if self._float:
            with _context(self.bits):
                self._seq = [to_mpfr(v) for v in self._seq]

    def _prepare(self, exact: bool):
        eq = self.eq
        conv = (lambda v: v) if exact else to_mpfr
        if exact:
            return (eq.alpha, eq.A, [(i, v) for i, v in eq.beta.items()],
                    [(j, v) for j, v in eq.B.items()])
        with _context(self.bits):
            return (conv(eq.alpha), conv(eq.A), [(i, conv(v)) for i, v in eq.beta.items()],
                    [(j, conv(v)) for j, v in eq.B.items()])

    def _degrade(self):
        self.switch_point = len(self.values)
        self._float = True
        self._coeffs = self._prepare(exact=False)
        k = self.eq.k
        with _context(self.bits):
            self._seq = self._seq[:-k] + [to_mpfr(v) for v in self._seq[-k:]]

    def advance(self, n: int) -> list:
        """Compute ``n`` more values; returns the new ones."""
        start = len(self.values)
        if self._float:
            with _context(self.bits):
                self._run(n)
        else:
            self._run_exact(n)
        return self.values[start:]

    def _run(self, n):
        alpha, A, beta, B = self._coeffs
        seq = self._seq
        for _ in range(n):
            t = len(seq)
            num = alpha
            for i, b in beta:
                num = num + b * seq[t - i]
            den = A
            for j, b in B:
                den = den + b * seq[t - j]
            if den == 0:
                raise ZeroDenominator(seq[-1:-self.eq.k - 1:-1], step=len(self.values))
            x = num / den
            seq.append(x)
            self.values.append(x)

    def _run_exact(self, n):
        alpha, A, beta, B = self._coeffs
        seq = self._seq
        for done in range(n):
            t = len(seq)
            num = alpha
            for i, b in beta:
                num = num + b * seq[t - i]
            den = A
            for j, b in B:
                den = den + b * seq[t - j]
            if den == 0:
                raise ZeroDenominator(seq[-1:-self.eq.k - 1:-1], step=len(self.values))
            x = num / den
            seq.append(x)
            self.values.append(x)
            if self.budget is not None and bit_size(x) > self.budget:
                self._degrade()
                with _context(self.bits):
                    self._run(n - done - 1)
                return

    def trajectory(self, monitors: tuple = ()) -> Trajectory:
        traj = Trajectory(self.eq, self.ics, tuple(self.values), self.mode, self.bits, self.switch_point)
        if monitors:
            traj.monitor_results.update(run_monitors(traj, monitors))
        return traj


def simulate(eq: Equation, ics, cfg: SimulationConfig | None = None) -> Trajectory:
    cfg = cfg or SimulationConfig()
    st = Stepper(eq, ics, cfg.mode, cfg.precision_bits, cfg.bit_budget)
    st.advance(cfg.steps)
    return st.trajectory(cfg.monitors)


# -- numeric helpers ---------------------------------------------------------------

def _absdiff(a, b, bits):
    if isinstance(a, _MPFR) or isinstance(b, _MPFR):
        with _context(bits):
            return abs(to_mpfr(a) - to_mpfr(b))
    return abs(a - b)


def _within(x, tol) -> bool:
    return x == 0 if tol == 0 else x < tol


def _mean(xs, bits):
    if any(isinstance(x, _MPFR) for x in xs):
        with _context(bits):
            return gmpy2.fsum([to_mpfr(x) for x in xs]) / len(xs)
    return sum(xs, Fraction(0)) / len(xs)


def _divisors(p: int) -> list[int]:
    return [d for d in range(1, p + 1) if p % d == 0]


def random_ics(k: int, rng: random.Random, num_range=(1, 20), den_range=(1, 10)) -> InitialConditions:
    """Positive rational initial conditions p/q with p, q uniform in the given ranges."""
    return InitialConditions(
        Fraction(rng.randint(*num_range), rng.randint(*den_range)) for _ in range(k))


# -- cycles ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodReport:
    tested_period: int
    residual: object
    converged: bool
    prime_period: int | None
    limit_cycle: tuple | None
    tolerance: float = DEFAULT_TOLERANCE
    steps: int = 0

    def to_dict(self) -> dict:
        return {
            "tested_period": self.tested_period,
            "residual": float(self.residual),
            "converged": self.converged,
            "prime_period": self.prime_period,
            "limit_cycle": [format_value(v) for v in self.limit_cycle] if self.limit_cycle else None,
            "tolerance": self.tolerance,
            "steps": self.steps,
        }


def default_window(k: int, p: int) -> int:
    return 4 * k * p


def detect_cycle(traj: Trajectory, p: int, tolerance=DEFAULT_TOLERANCE, window: int | None = None) -> PeriodReport:
    """Test the tail of ``traj`` for period ``p`` and refine to the least period."""
    if p < 1:
        raise ValueError("period must be positive")
    window = window or default_window(traj.eq.k, p)
    vals = traj.values
    n = len(vals)
    if n < window + p:
        raise WindowTooLarge(f"trajectory has {n} values, need window + p = {window + p}")
    bits = traj.precision_bits
    residual = max(_absdiff(vals[i + p], vals[i], bits) for i in range(n - window - p, n - p))
    converged = _within(residual, tolerance)
    tail = range(n - window, n)
    cycle = tuple(_mean([vals[i] for i in tail if i % p == j], bits) for j in range(p))
    prime = None
    if converged:
        for d in _divisors(p):
            if all(_within(_absdiff(cycle[(j + d) % p], cycle[j], bits), tolerance) for j in range(p)):
                prime = d
                break
    return PeriodReport(p, residual, converged, prime, cycle, tolerance, n)


def converge_to_period(eq: Equation, ics, p: int, tolerance=DEFAULT_TOLERANCE,
                       max_steps: int = DEFAULT_STEPS, window: int | None = None,
                       mode: str = EXACT, precision_bits: int = DEFAULT_PRECISION,
                       bit_budget: int | None = DEFAULT_BIT_BUDGET, chunk: int = 250) -> PeriodReport:
    """Iterate until the period-``p`` residual falls below ``tolerance`` or ``max_steps`` is reached.

    A non-converged report means inconclusive at this horizon, not divergence.
    """
    window = window or default_window(eq.k, p)
    st = Stepper(eq, ics, mode, precision_bits, bit_budget)
    report = None
    while len(st.values) < max_steps:
        st.advance(min(chunk, max_steps - len(st.values)))
        if len(st.values) >= window + p:
            report = detect_cycle(st.trajectory(), p, tolerance, window)
            if report.converged:
                return report
    if report is None:
        raise WindowTooLarge(f"max_steps {max_steps} is shorter than window + p = {window + p}")
    return report


@dataclass(frozen=True)
class CycleCertificate:
    """Exact verification that an orbit is periodic from its initial conditions."""

    period: int
    periodic: bool
    prime_period: int | None
    cycle: tuple
    refuted_divisors: dict

    @property
    def certified(self) -> bool:
        return self.periodic and self.prime_period == self.period


def certify_period(eq: Equation, ics, period: int, repeats: int = 3) -> CycleCertificate:
    """Simulate ``repeats`` full periods exactly and check x_{n+p} == x_n from x_{-k} on.

    For every proper divisor d the first index breaking d-periodicity is
    recorded, so the least period is established exactly.
    """
    ics = ics if isinstance(ics, InitialConditions) else InitialConditions(ics)
    if any(not isinstance(v, (Fraction, QuadraticSurd)) for v in ics):
        raise TypeError("exact certification needs Fraction or surd initial conditions")
    st = Stepper(eq, ics, EXACT, bit_budget=None)
    st.advance(max(repeats * period, eq.k + period))
    seq = list(reversed(ics.values)) + st.values

    def first_break(d):
        for i in range(len(seq) - d):
            if seq[i + d] != seq[i]:
                return i - eq.k
        return None

    periodic = first_break(period) is None
    refuted = {}
    prime = None
    if periodic:
        for d in _divisors(period):
            b = first_break(d)
            if b is None:
                prime = d
                break
            refuted[d] = b
    cycle = tuple(st.values[:period])
    return CycleCertificate(period, periodic, prime, cycle, refuted)


def _exact(v):
    return Fraction(*v.as_integer_ratio()) if isinstance(v, _MPFR) else v


def conjugacy_defects(eq: Equation, reduced: Equation, change: VariableChange, ics,
                      steps: int = 500, precision_bits: int = DEFAULT_PRECISION) -> list[int]:
    """Steps n where forward(F(window)) != G(forward(window)) in exact arithmetic.

    The x-orbit is followed in mpfr so its size stays bounded; at every step the
    current window is read back as exact rationals and the one-step identity
    between ``eq`` and ``reduced`` is checked with no rounding.  An empty list
    means the change of variables conjugates the two maps at every visited state.
    """
    traj = simulate(eq, ics, SimulationConfig(steps=steps, mode=FLOAT, precision_bits=precision_bits))
    seq = [_exact(v) for v in traj.full()]
    k = eq.k
    bad = []
    for n in range(steps):
        window = seq[n:n + k][::-1]
        x = step(eq, window)
        w = step(reduced, [change.forward(v) for v in window])
        if change.forward(x) != w:
            bad.append(n)
    return bad


# -- unboundedness ---------------------------------------------------------------------

def default_witness_grid(k: int) -> list[InitialConditions]:
    """Deterministic grid: constants, then high-on-one-class / low-elsewhere patterns.

    For each modulus d in 2..max(k, 2) and each residue class c mod d the
    pattern is ``hi`` on indices -m with -m = c (mod d) and ``lo`` elsewhere,
    for (lo, hi) in (1/10, 10) and (1/100, 100).
    """
    grid = [InitialConditions([Fraction(v)] * k) for v in (Fraction(1, 10), 1, 10)]
    for lo, hi in ((Fraction(1, 10), Fraction(10)), (Fraction(1, 100), Fraction(100))):
        for d in range(2, max(k, 2) + 1):
            for c in range(d):
                grid.append(InitialConditions(hi if (-m) % d == c else lo for m in range(1, k + 1)))
    return grid


def unbounded_witness_search(eq: Equation, grid: Iterable | None = None, threshold=10**6,
                             steps: int = DEFAULT_STEPS, mode: str = EXACT,
                             precision_bits: int = DEFAULT_PRECISION):
    """First grid entry whose orbit exceeds ``threshold``, as ``(ics, n)``; None if none does.

    None is inconclusive: it does not show that all orbits are bounded.
    """
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    grid = default_witness_grid(eq.k) if grid is None else grid
    for ics in grid:
        st = Stepper(eq, ics, mode, precision_bits)
        try:
            while len(st.values) < steps:
                new = st.advance(min(100, steps - len(st.values)))
                for off, v in enumerate(new):
                    if v > threshold:
                        return (st.ics, len(st.values) - len(new) + off)
        except ZeroDenominator:
            continue
    return None


@dataclass(frozen=True)
class BoundReport:
    sup_estimate: object
    inf_estimate: object
    tail_start: int
    exceeded: int | None = None


def bound_report(traj: Trajectory, tail_start: int | None = None, threshold=None) -> BoundReport:
    """Finite-horizon estimates of limsup / liminf over the tail, and the first threshold crossing."""
    n = len(traj.values)
    tail_start = n // 2 if tail_start is None else tail_start
    if not 0 <= tail_start < n:
        raise TooShort("tail_start outside the trajectory")
    tail = traj.values[tail_start:]
    exceeded = None
    if threshold is not None:
        exceeded = next((i for i, v in enumerate(traj.values) if v > threshold), None)
    return BoundReport(max(tail), min(tail), tail_start, exceeded)


def lemma2_bound(eq: Equation, ics):
    """max(ICs, alpha / (A - sum(beta))): an a priori orbit bound when A > sum(beta)."""
    gap = eq.A - eq.sum_beta
    if not gap > 0:
        raise ValueError("bound needs A > sum(beta)")
    return max(max(ics), eq.alpha / gap)


# -- monotone envelopes ------------------------------------------------------------------

@dataclass(frozen=True)
class Envelope:
    phase: int
    modulus: int
    rho: int
    values: tuple
    precision_bits: int = DEFAULT_PRECISION

    def violations(self) -> list[int]:
        """Indices m where values[m+1] > values[m] (with float slack for mpfr entries)."""
        out = []
        slack = 2.0 ** -(self.precision_bits - 16)
        for m in range(len(self.values) - 1):
            a, b = self.values[m], self.values[m + 1]
            if isinstance(a, _MPFR) or isinstance(b, _MPFR):
                if b > a and b - a > slack * abs(a):
                    out.append(m)
            elif b > a:
                out.append(m)
        return out

    def is_nonincreasing(self) -> bool:
        return not self.violations()


def _recip(alpha, x, sum_b, bits):
    if x == 0:
        return math.inf
    if isinstance(x, _MPFR):
        with _context(bits):
            return to_mpfr(alpha) / (x * to_mpfr(sum_b))
    return alpha / (x * sum_b)


def envelope(traj: Trajectory, phase: int, modulus: int, variant: str = "T1") -> Envelope:
    """Running block maximum along one residue class.

    T1: y_m = max_{l=1..rho} x_{(m-l) M + a}, rho = k // M, M = gcd(I_beta).
    T2: y_m = max over l=1..rho of x_{M(m-l)+a} and alpha / (sum(B) x_{M(m-l)+a-g}),
        together with alpha / (sum(B) x_{Mm+a-g}); M = 2g, rho = k // M.
    The sequence starts at m = 1 and runs while every referenced index exists.
    """
    eq = traj.eq
    k, n = eq.k, len(traj.values)
    M, a = modulus, phase
    if not 0 <= a < M:
        raise ValueError("phase must lie in [0, modulus)")
    rho = k // M
    bits = traj.precision_bits
    vals = []
    m = 1
    if variant == "T1":
        if rho < 1:
            raise TooShort("modulus exceeds the order")
        while (m - 1) * M + a <= n - 1:
            vals.append(max(traj.x((m - l) * M + a) for l in range(1, rho + 1)))
            m += 1
    elif variant == "T2":
        if M % 2:
            raise ValueError("T2 envelope needs an even modulus 2g")
        g = M // 2
        alpha, sum_b = eq.alpha, eq.sum_B
        while max((m - 1) * M + a, M * m + a - g) <= n - 1:
            terms = [_recip(alpha, traj.x(M * m + a - g), sum_b, bits)]
            for l in range(1, rho + 1):
                terms.append(traj.x(M * (m - l) + a))
                terms.append(_recip(alpha, traj.x(M * (m - l) + a - g), sum_b, bits))
            vals.append(max(terms))
            m += 1
    else:
        raise ValueError(f"unknown envelope variant {variant!r}")
    if len(vals) < 2:
        raise TooShort("trajectory too short for two envelope values")
    return Envelope(a, M, rho, tuple(vals), bits)


def envelopes(traj: Trajectory, variant: str = "T1") -> list[Envelope]:
    """Envelopes for every phase, with the modulus the variant's proof uses."""
    prof = index_profile(traj.eq)
    M = prof.g_beta if variant == "T1" else 2 * prof.g_union
    return [envelope(traj, a, M, variant) for a in range(M)]


# -- recursive lower / upper bound monitor ------------------------------------------------

LOWER = "lower"
UPPER = "upper"


def lemma4_monitor(traj: Trajectory, c, kind: str = LOWER) -> bool:
    """Check the recursive premise at every step, then the conclusion.

    Lower premise: x_n >= min(x_{n-1}, ..., x_{n-k}, c); conclusion: every x_n is
    at least min(x_{-1}, ..., x_{-k}, c).  Upper is the mirror image.  A failed
    premise raises HypothesisFailedAtStep; a failed conclusion returns False.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    k = traj.eq.k
    bits = traj.precision_bits
    slack = 2.0 ** -(bits - 16)
    lower = kind == LOWER
    if kind not in (LOWER, UPPER):
        raise ValueError(f"unknown kind {kind!r}")

    def ok(x, bound):
        if x == bound:
            return True
        good = x > bound if lower else x < bound
        if good:
            return True
        if isinstance(x, _MPFR) or isinstance(bound, _MPFR):
            return _absdiff(x, bound, bits) <= slack * max(abs(to_mpfr(bound)), 1)
        return False

    pick = min if lower else max
    for n in range(len(traj.values)):
        window = [traj.x(n - i) for i in range(1, k + 1)]
        if not ok(traj.values[n], pick(pick(window), c)):
            raise HypothesisFailedAtStep(n)
    bound = pick(pick(traj.ics.values), c)
    return all(ok(v, bound) for v in traj.values)


def delta_split(shape: Theorem3Shape):
    """delta = A - s + (1 + s - A)/2 for a shape in reduced form (alpha = 0), s = sum(beta_2i).

    With A < 1 + s every orbit satisfies the lower premise with c = 1 - delta.
    """
    if shape.alpha != 0:
        raise ValueError("delta split needs the reduced form alpha = 0")
    s = shape.sum_even_beta
    if not shape.A < 1 + s:
        raise ValueError("delta split needs A < 1 + sum(beta_2i)")
    return shape.A - s + (1 + s - shape.A) / 2


def run_monitors(traj: Trajectory, monitors) -> dict:
    out = {}
    for mon in monitors:
        if isinstance(mon, Lemma4Lower | Lemma4Upper):
            kind = LOWER if isinstance(mon, Lemma4Lower) else UPPER
            name = f"lemma4-{kind}(c={format_value(mon.c)})"
            try:
                out[name] = "holds" if lemma4_monitor(traj, mon.c, kind) else "conclusion violated"
            except HypothesisFailedAtStep as e:
                out[name] = f"premise fails at step {e.step}"
        elif isinstance(mon, EnvelopeT1 | EnvelopeT2):
            variant = "T1" if isinstance(mon, EnvelopeT1) else "T2"
            try:
                bad = [e.phase for e in envelopes(traj, variant) if not e.is_nonincreasing()]
                out[f"envelope-{variant}"] = "nonincreasing" if not bad else f"increases at phases {bad}"
            except (TooShort, ValueError) as e:
                out[f"envelope-{variant}"] = f"not evaluated: {e}"
        else:
            raise TypeError(f"unknown monitor {mon!r}")
    return out


# -- positivity along residue classes ------------------------------------------------------

IDENTICALLY_ZERO = "IdenticallyZero"
EVENTUALLY_POSITIVE = "EventuallyPositive"


@dataclass(frozen=True)
class ClassStatus:
    kind: str
    step: int | None = None
    confirmed_through: int | None = None


def _chain_start(f: int, lags) -> int:
    if f + min(lags) >= 0:
        return f
    return min(f + i for i in lags if f + i >= 0)


def positivity_classes(shape: Theorem3Shape, ics, horizon: int | None = None) -> dict:
    """Per residue class mod gcd(I_beta): identically zero, or positive from a provable index on.

    With alpha = 0 each class evolves on its own, and x_n > 0 (n >= 0) exactly
    when x_{n-i} > 0 for some i in I_beta.  A class with no positive initial
    value stays zero.  A positive initial value at index f first propagates to
    the computed indices f + i >= 0; from such an index n0 every n0 + g m with
    m > N_f (the Frobenius number of I_beta / g) is positive.  If f + i >= 0 for
    all i the chain starts at f itself.  The reported step is the smallest such
    bound over the class's positive initial values, clamped at 0.  If
    ``horizon`` is given the orbit is simulated and each claim checked through
    that index.
    """
    if shape.alpha != 0:
        raise ValueError("positivity classes need alpha = 0")
    ics = ics if isinstance(ics, InitialConditions) else InitialConditions(ics)
    g, gens = reduced_generators(shape.i_beta)
    nf = frobenius_number(gens)
    k = len(ics)
    out = {}
    traj = None
    if horizon is not None:
        traj = simulate(shape.equation(), ics, SimulationConfig(steps=max(horizon, 1)))
    for a in range(g):
        starts = [-m for m in range(1, k + 1) if (-m) % g == a and ics[m - 1] > 0]
        if not starts:
            status = ClassStatus(IDENTICALLY_ZERO)
            if traj is not None and any(traj.values[n] != 0 for n in range(a, len(traj), g)):
                raise AssertionError(f"class {a} predicted zero but the orbit is not")
        else:
            step = max(0, min(_chain_start(f, shape.i_beta) for f in starts) + g * (nf + 1))
            status = ClassStatus(EVENTUALLY_POSITIVE, step)
        if traj is not None:
            start = a if status.kind == IDENTICALLY_ZERO else status.step
            for n in range(start, len(traj)):
                if n % g != a:
                    continue
                if status.kind == EVENTUALLY_POSITIVE and not traj.values[n] > 0:
                    raise AssertionError(f"class {a} not positive at step {n}")
            status = ClassStatus(status.kind, status.step, len(traj) - 1)
        out[a] = status
    return out


def positivity_bound(shape: Theorem3Shape) -> int:
    """N_f * gcd(I_beta) + k: horizon after which positivity has propagated through every class."""
    g, gens = reduced_generators(shape.i_beta)
    return max(frobenius_number(gens), 0) * g + shape.equation().k
