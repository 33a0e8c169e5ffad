"""Changes of variables for the odd-lag shape and explicit initial-condition constructors.

A :class:`VariableChange` is the affine map ``w = (x + shift) / scale``.  The
odd-lag shape is carried to the even/odd-lag family (alpha > 0) by
``w = x - 1`` when ``alpha >= A``, and to its own ``alpha = 0`` form by
``w = (x + r) / (1 + r)`` when ``0 < alpha < A``, where ``r`` is the positive
root of ``t^2 + (sum(beta_2i) + 1 - A) t - alpha``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .classifier import Theorem3Shape, check_t1, check_t2
from .equation import Equation, index_profile
from .errors import HypothesisViolated, NegativeLift, NotApplicable
from .numtheory import residue_pattern
from .rational import QuadraticSurd, format_value, surd


@dataclass(frozen=True)
class VariableChange:
    shift: object
    scale: object

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def forward(self, x):
        return (x + self.shift) / self.scale

    def inverse(self, w):
        return self.scale * w - self.shift

    @classmethod
    def identity(cls) -> "VariableChange":
        return cls(Fraction(0), Fraction(1))


@dataclass(frozen=True)
class InitialConditions:
    """Values x_{-1}, x_{-2}, ..., x_{-k} (newest first)."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def irrational(self) -> bool:
        return any(isinstance(v, QuadraticSurd) for v in self.values)

    def to_list(self) -> list:
        return [format_value(v) for v in self.values]


def shift_equation(shape: Theorem3Shape) -> tuple[Equation, VariableChange]:
    """The ``w = x - 1`` image of the shape without the ``alpha >= A`` guard.

    The identity holds algebraically for every orbit; the guard only ensures
    ``w`` stays nonnegative for arbitrary positive data.
    """
    s = shape.sum_even_beta
    reduced = Equation(
        alpha=s + shape.alpha - shape.A,
        A=shape.A + 1,
        beta=dict(shape.even_beta),
        B={shape.ell: Fraction(1)},
    )
    return reduced, VariableChange(Fraction(-1), Fraction(1))


def shift_reduce(shape: Theorem3Shape) -> tuple[Equation, VariableChange]:
    if shape.alpha < shape.A:
        raise NotApplicable(f"shift reduction needs alpha >= A (alpha = {shape.alpha}, A = {shape.A})")
    return shift_equation(shape)


def positive_root_h(shape: Theorem3Shape):
    """Positive root of t^2 + (sum(beta_2i) + 1 - A) t - alpha, exact (Fraction or surd)."""
    if not (0 < shape.alpha < shape.A):
        raise NotApplicable("positive_root_h needs 0 < alpha < A")
    b = shape.sum_even_beta + 1 - shape.A
    disc = b * b + 4 * shape.alpha
    return surd(-b / 2, Fraction(1, 2), disc)


def surd_reduce(shape: Theorem3Shape) -> tuple[Equation, VariableChange]:
    r = positive_root_h(shape)
    beta = dict(shape.even_beta)
    beta[shape.ell] = 1 + r
    reduced = Equation(alpha=Fraction(0), A=shape.A - r, beta=beta, B={shape.ell: 1 + r})
    return reduced, VariableChange(r, 1 + r)


def lift_cycle(change: VariableChange, cycle: Sequence) -> tuple:
    out = []
    for idx, w in enumerate(cycle):
        x = change.inverse(w)
        if x < 0:
            raise NegativeLift(idx, x)
        out.append(x)
    return tuple(out)


def push_forward(change: VariableChange, values: Sequence) -> tuple:
    return tuple(change.forward(x) for x in values)


def _t1_pattern(eq: Equation) -> InitialConditions:
    g = index_profile(eq).g_beta
    return InitialConditions(residue_pattern(eq.k, g, {0: Fraction(1)}, Fraction(0)))


def periodic_ic_t1(eq: Equation) -> InitialConditions:
    """1 on the residue class 0 mod gcd(I_beta), 0 elsewhere; prime period gcd(I_beta)."""
    if not check_t1(eq).holds or eq.A != eq.sum_beta:
        raise HypothesisViolated("periodic_ic_t1 needs the T1 hypotheses with A = sum(beta)")
    return _t1_pattern(eq)


def unbounded_ic_t1(eq: Equation) -> InitialConditions:
    """Same zero pattern; the nonzero class then follows x_n = sum(beta_i x_{n-i}) / A."""
    if not check_t1(eq).holds or not eq.A < eq.sum_beta:
        raise HypothesisViolated("unbounded_ic_t1 needs the T1 hypotheses with A < sum(beta)")
    return _t1_pattern(eq)


def periodic_ic_t2(eq: Equation) -> InitialConditions:
    """Three-level pattern with prime period 2g, g = gcd(I_beta u I_B).

    xbar/2 on class 0 mod 2g, 2 alpha / (xbar sum(B)) on class g, xbar elsewhere,
    where xbar = sqrt(alpha / sum(B)) is the positive equilibrium at A = sum(beta).
    Values are surds when alpha / sum(B) is not a rational square.
    """
    if not check_t2(eq).holds or eq.A != eq.sum_beta:
        raise HypothesisViolated("periodic_ic_t2 needs the T2 hypotheses with A = sum(beta)")
    ratio = eq.alpha / eq.sum_B
    if not isinstance(ratio, Fraction):
        raise NotApplicable("periodic_ic_t2 needs rational alpha / sum(B)")
    g = index_profile(eq).g_union
    xbar = surd(0, 1, ratio)
    low = xbar / 2
    high = 2 * eq.alpha / (xbar * eq.sum_B)
    return InitialConditions(residue_pattern(eq.k, 2 * g, {0: low, g: high}, xbar))


def periodic_ic_t4_case_iv(shape: Theorem3Shape) -> InitialConditions:
    """v = sum(beta_2i) + 1 - A on class 0 mod gcd(I_beta), 0 elsewhere; prime period gcd(I_beta)."""
    s, A = shape.sum_even_beta, shape.A
    if not (shape.alpha == 0 and A > 0 and A <= s and A + 1 > s):
        raise HypothesisViolated("case iv needs alpha = 0 and 0 < A with s - 1 < A <= s")
    v = s + 1 - A
    k = shape.equation().k
    return InitialConditions(residue_pattern(k, shape.g_beta, {0: v}, Fraction(0)))


def periodic_ic_t3(shape: Theorem3Shape) -> InitialConditions:
    """Prime-period 2 gcd(I_beta) solution on the boundary A + 1 = sum(beta_2i).

    Built in the ``w = x - 1`` coordinates from the T2 pattern and lifted back.
    The lifted values exceed 1, so the shift identity applies even when alpha < A.
    """
    if shape.A + 1 != shape.sum_even_beta:
        raise HypothesisViolated("periodic_ic_t3 needs A + 1 = sum(beta_2i)")
    reduced, change = shift_equation(shape)
    return InitialConditions(lift_cycle(change, periodic_ic_t2(reduced).values))
