"""Hypothesis checks for the four trichotomy families and the resulting verdict.

Families, in precedence order:

* T1: alpha = 0, sum(beta) > 0, A > 0, and no j in I_B is divisible by gcd(I_beta).
  Threshold A vs sum(beta); boundary period gcd(I_beta).
* T2: alpha > 0, sum(B) > 0, every i in I_beta is an even multiple of
  g = gcd(I_beta u I_B) and every j in I_B an odd multiple.  Threshold A vs
  sum(beta); boundary period 2g.
* T3 (positive initial conditions) and T4 (nonnegative ones): the shape
  x_n = (alpha + sum beta_2i x_{n-2i} + x_{n-l}) / (A + x_{n-l}) with l odd.
  Threshold A + 1 vs sum(beta_2i); periods are stated in terms of gcd(I_beta),
  where I_beta contains the odd lag l.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .equation import Equation, index_profile
from .numtheory import gcd_set
from .rational import format_value


class TheoremId(str, Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"


@dataclass(frozen=True)
class Condition:
    name: str
    satisfied: bool
    detail: str = ""


@dataclass(frozen=True)
class HypothesisReport:
    theorem: TheoremId
    conditions: tuple

    @property
    def holds(self) -> bool:
        return all(c.satisfied for c in self.conditions)

    def failures(self):
        return [c for c in self.conditions if not c.satisfied]

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem.value,
            "holds": self.holds,
            "conditions": [
                {"name": c.name, "satisfied": c.satisfied, "detail": c.detail}
                for c in self.conditions
            ],
        }

    @classmethod
    def from_dict(cls, d) -> "HypothesisReport":
        return cls(TheoremId(d["theorem"]), tuple(
            Condition(c["name"], c["satisfied"], c.get("detail", "")) for c in d["conditions"]))


@dataclass(frozen=True)
class Theorem3Shape:
    """An equation already normalized so the odd lag ``ell`` has coefficient 1 above and below."""

    ell: int
    even_beta: Mapping[int, object]
    alpha: object
    A: object

    @property
    def sum_even_beta(self):
        return sum(self.even_beta.values(), Fraction(0))

    @property
    def i_beta(self) -> frozenset:
        return frozenset(self.even_beta) | {self.ell}

    @property
    def g_beta(self) -> int:
        """gcd(I_beta) with the odd lag included."""
        return gcd_set(self.i_beta)

    def equation(self) -> Equation:
        beta = dict(self.even_beta)
        beta[self.ell] = Fraction(1)
        return Equation(self.alpha, self.A, beta, {self.ell: Fraction(1)})

    def __hash__(self):
        return hash((self.ell, tuple(sorted(self.even_beta.items())), self.alpha, self.A))


class VerdictKind(str, Enum):
    EQUILIBRIUM = "EquilibriumConvergence"
    PERIODIC = "PeriodicConvergence"
    UNBOUNDED = "UnboundedExists"
    OUT_OF_SCOPE = "OutOfScope"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    theorem: TheoremId | None = None
    case: str = ""
    period: int | None = None
    globally_asymptotically_stable: bool = False
    reason: str = ""

    def __post_init__(self):
        if self.kind is VerdictKind.PERIODIC and (self.period is None or self.period < 1):
            raise ValueError("periodic verdict needs a positive period")

    def describe(self) -> str:
        if self.kind is VerdictKind.OUT_OF_SCOPE:
            return f"OutOfScope: {self.reason}"
        head = f"{self.theorem.value} case {self.case}: " if self.theorem else ""
        if self.kind is VerdictKind.PERIODIC:
            return f"{head}PeriodicConvergence period {self.period}"
        if self.kind is VerdictKind.EQUILIBRIUM:
            gas = ", globally asymptotically stable" if self.globally_asymptotically_stable else ""
            return f"{head}EquilibriumConvergence{gas}"
        return f"{head}UnboundedExists"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "theorem": self.theorem.value if self.theorem else None,
            "case": self.case,
            "period": self.period,
            "globally_asymptotically_stable": self.globally_asymptotically_stable,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, d) -> "Verdict":
        return cls(
            VerdictKind(d["kind"]),
            TheoremId(d["theorem"]) if d.get("theorem") else None,
            d.get("case", ""),
            d.get("period"),
            d.get("globally_asymptotically_stable", False),
            d.get("reason", ""),
        )


def _fmt_set(s) -> str:
    return "{" + ", ".join(str(x) for x in sorted(s)) + "}"


def check_t1(eq: Equation) -> HypothesisReport:
    prof = index_profile(eq)
    g = prof.g_beta
    conds = [
        Condition("alpha = 0", eq.alpha == 0, f"alpha = {format_value(eq.alpha)}"),
        Condition("sum(beta) > 0", prof.sum_beta > 0, f"sum(beta) = {format_value(prof.sum_beta)}"),
        Condition("A > 0", eq.A > 0, f"A = {format_value(eq.A)}"),
    ]
    if g == 0:
        conds.append(Condition("no j in I_B divisible by gcd(I_beta)", False, "I_beta is empty"))
    else:
        bad = sorted(j for j in prof.i_b if j % g == 0)
        detail = (f"gcd(I_beta) = {g} divides j = {bad[0]}" if bad
                  else f"gcd(I_beta) = {g} divides no j in I_B = {_fmt_set(prof.i_b)}")
        conds.append(Condition("no j in I_B divisible by gcd(I_beta)", not bad, detail))
    return HypothesisReport(TheoremId.T1, tuple(conds))


def check_t2(eq: Equation) -> HypothesisReport:
    prof = index_profile(eq)
    g = prof.g_union
    conds = [
        Condition("alpha > 0", eq.alpha > 0, f"alpha = {format_value(eq.alpha)}"),
        Condition("sum(B) > 0", prof.sum_b > 0, f"sum(B) = {format_value(prof.sum_b)}"),
    ]
    bad_i = sorted(i for i in prof.i_beta if i % (2 * g))
    bad_j = sorted(j for j in prof.i_b if (j + g) % (2 * g))
    conds.append(Condition(
        "2g | i for all i in I_beta", not bad_i,
        f"g = {g}" + (f"; 2g does not divide i = {bad_i[0]}" if bad_i else "")))
    conds.append(Condition(
        "2g | (j + g) for all j in I_B", not bad_j,
        f"g = {g}" + (f"; 2g does not divide j + g for j = {bad_j[0]}" if bad_j else "")))
    return HypothesisReport(TheoremId.T2, tuple(conds))


def _t3_conditions(eq: Equation):
    prof = index_profile(eq)
    conds = []
    single = len(prof.i_b) == 1
    conds.append(Condition("I_B = {l}", single, f"I_B = {_fmt_set(prof.i_b)}"))
    if not single:
        return conds, None
    (ell,) = prof.i_b
    conds.append(Condition("l odd", ell % 2 == 1, f"l = {ell}"))
    b_ell = eq.B[ell]
    same = eq.beta.get(ell) == b_ell
    conds.append(Condition("beta_l = B_l", same,
                           f"beta_l = {format_value(eq.beta.get(ell, 0))}, B_l = {format_value(b_ell)}"))
    odd = sorted(i for i in prof.i_beta if i != ell and i % 2)
    conds.append(Condition("other beta lags even", not odd,
                           f"odd lags {odd}" if odd else ""))
    if not all(c.satisfied for c in conds):
        return conds, None
    shape = Theorem3Shape(
        ell=ell,
        even_beta={i: v / b_ell for i, v in eq.beta.items() if i != ell},
        alpha=eq.alpha / b_ell,
        A=eq.A / b_ell,
    )
    return conds, shape


def recognize_t3(eq: Equation) -> Theorem3Shape | None:
    """The odd-lag shape after dividing through by B_l, or None if ``eq`` has another form."""
    return _t3_conditions(eq)[1]


def check_t3(eq: Equation) -> HypothesisReport:
    conds, _ = _t3_conditions(eq)
    return HypothesisReport(TheoremId.T3, tuple(conds))


def check_t4(eq: Equation) -> HypothesisReport:
    conds, shape = _t3_conditions(eq)
    if shape is not None and shape.A == 0 and shape.alpha == 0:
        # denominator is x_{n-l} alone; admissibility is a dynamic question
        conds.append(Condition("denominator nonvanishing", True, "requires x_{n-l} > 0 along the orbit"))
    return HypothesisReport(TheoremId.T4, tuple(conds))


def _three_way(lhs, rhs):
    return (lhs > rhs) - (lhs < rhs)


def _t3_verdict(shape: Theorem3Shape, nonnegative: bool) -> Verdict:
    s, A, alpha = shape.sum_even_beta, shape.A, shape.alpha
    g = shape.g_beta
    theorem = TheoremId.T4 if nonnegative else TheoremId.T3
    if not nonnegative:
        if s == 0:
            return Verdict(VerdictKind.EQUILIBRIUM, theorem, "i (Riccati)")
        c = _three_way(A + 1, s)
        if c > 0:
            return Verdict(VerdictKind.EQUILIBRIUM, theorem, "i")
        if c == 0:
            return Verdict(VerdictKind.PERIODIC, theorem, "ii", period=2 * g)
        return Verdict(VerdictKind.UNBOUNDED, theorem, "iii")
    if A > s:
        return Verdict(VerdictKind.EQUILIBRIUM, theorem, "i")
    if A + 1 > s:
        if alpha > 0:
            return Verdict(VerdictKind.EQUILIBRIUM, theorem, "ii")
        if A == 0:
            return Verdict(VerdictKind.EQUILIBRIUM, theorem, "iii")
        return Verdict(VerdictKind.PERIODIC, theorem, "iv", period=g)
    if A + 1 == s:
        return Verdict(VerdictKind.PERIODIC, theorem, "v", period=2 * g)
    return Verdict(VerdictKind.UNBOUNDED, theorem, "vi")


def classify(eq: Equation, *, nonnegative_ics: bool = False):
    """Run every check and return ``(reports, verdict)`` for the first family that applies.

    ``nonnegative_ics`` selects the T4 case split for the odd-lag shape
    instead of the positive-initial-condition T3 split.
    """
    r1, r2, r3, r4 = check_t1(eq), check_t2(eq), check_t3(eq), check_t4(eq)
    reports = [r1, r2, r3, r4]
    prof = index_profile(eq)
    if r1.holds:
        c = _three_way(eq.A, prof.sum_beta)
        if c > 0:
            v = Verdict(VerdictKind.EQUILIBRIUM, TheoremId.T1, "i", globally_asymptotically_stable=True)
        elif c == 0:
            v = Verdict(VerdictKind.PERIODIC, TheoremId.T1, "ii", period=prof.g_beta)
        else:
            v = Verdict(VerdictKind.UNBOUNDED, TheoremId.T1, "iii")
    elif r2.holds:
        c = _three_way(eq.A, prof.sum_beta)
        if c > 0:
            v = Verdict(VerdictKind.EQUILIBRIUM, TheoremId.T2, "i", globally_asymptotically_stable=True)
        elif c == 0:
            v = Verdict(VerdictKind.PERIODIC, TheoremId.T2, "ii", period=2 * prof.g_union)
        else:
            v = Verdict(VerdictKind.UNBOUNDED, TheoremId.T2, "iii")
    elif r3.holds:
        v = _t3_verdict(recognize_t3(eq), nonnegative_ics)
    else:
        reasons = []
        for r in reports[:3]:
            f = r.failures()[0]
            reasons.append(f"{r.theorem.value}: {f.name} fails" + (f" ({f.detail})" if f.detail else ""))
        v = Verdict(VerdictKind.OUT_OF_SCOPE, reason="; ".join(reasons))
    return reports, v
