"""The linear-fractional recurrence

    x_n = (alpha + sum_i beta_i x_{n-i}) / (A + sum_j B_j x_{n-j}),

its index sets, single-step evaluation and fixed points.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

from .errors import Degenerate, InvalidEquation, ZeroDenominator
from .numtheory import gcd_set
from .rational import QuadraticSurd, format_value, parse_ratio, rational_sqrt, surd


def coerce_value(v):
    """Strings, ints and Fractions become Fractions; surds pass through."""
    if isinstance(v, QuadraticSurd):
        return v
    return parse_ratio(v)


def _coerce_map(name, m) -> Mapping[int, object]:
    out = {}
    for lag, v in dict(m or {}).items():
        try:
            lag = int(lag)
        except (TypeError, ValueError):
            raise InvalidEquation(f"{name}: lag {lag!r} is not an integer") from None
        if lag < 1:
            raise InvalidEquation(f"{name}: lag {lag} must be >= 1")
        v = coerce_value(v)
        if v < 0:
            raise InvalidEquation(f"{name}[{lag}] = {v} is negative")
        if v == 0:
            warnings.warn(f"dropping zero coefficient {name}[{lag}]", stacklevel=3)
            continue
        out[lag] = v
    return MappingProxyType(dict(sorted(out.items())))


@dataclass(frozen=True)
class Equation:
    """Coefficient bundle of the recurrence.  Absent lags have coefficient zero."""

    alpha: object
    A: object
    beta: Mapping[int, object] = field(default_factory=dict)
    B: Mapping[int, object] = field(default_factory=dict)
    k: int | None = None

    def __post_init__(self):
        alpha, A = coerce_value(self.alpha), coerce_value(self.A)
        if alpha < 0 or A < 0:
            raise InvalidEquation("alpha and A must be nonnegative")
        beta = _coerce_map("beta", self.beta)
        B = _coerce_map("B", self.B)
        lags = set(beta) | set(B)
        if not lags:
            raise InvalidEquation("equation has no lags")
        kmax = max(lags)
        if self.k is not None and int(self.k) != kmax:
            raise InvalidEquation(f"k = {self.k} but the largest lag is {kmax}")
        if A == 0 and not B:
            raise InvalidEquation("denominator is identically zero (A = 0 and no B terms)")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "k", kmax)

    def __hash__(self):
        return hash((self.alpha, self.A, tuple(self.beta.items()), tuple(self.B.items())))

    def __eq__(self, other):
        if not isinstance(other, Equation):
            return NotImplemented
        return (self.alpha, self.A, dict(self.beta), dict(self.B)) == (
            other.alpha, other.A, dict(other.beta), dict(other.B))

    def __reduce__(self):
        return (Equation, (self.alpha, self.A, dict(self.beta), dict(self.B)))

    @property
    def sum_beta(self):
        return sum(self.beta.values(), Fraction(0))

    @property
    def sum_B(self):
        return sum(self.B.values(), Fraction(0))

    @property
    def is_rational(self) -> bool:
        vals = [self.alpha, self.A, *self.beta.values(), *self.B.values()]
        return all(isinstance(v, Fraction) for v in vals)

    def scaled(self, c) -> "Equation":
        """Multiply every coefficient by ``c > 0``; the recurrence is unchanged."""
        c = coerce_value(c)
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return Equation(
            self.alpha * c, self.A * c,
            {i: v * c for i, v in self.beta.items()},
            {j: v * c for j, v in self.B.items()},
        )

    def replace(self, **changes) -> "Equation":
        fields = dict(alpha=self.alpha, A=self.A, beta=dict(self.beta), B=dict(self.B))
        fields.update(changes)
        return Equation(**fields)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "alpha": format_value(self.alpha),
            "A": format_value(self.A),
            "beta": {str(i): format_value(v) for i, v in self.beta.items()},
            "B": {str(j): format_value(v) for j, v in self.B.items()},
        }

    def __str__(self):
        def term(v):
            return f"({format_value(v)})" if isinstance(v, QuadraticSurd) else format_value(v)

        num = [format_value(self.alpha)] if self.alpha else []
        num += [f"{term(v)}*x[n-{i}]" for i, v in self.beta.items()]
        den = [format_value(self.A)] if self.A else []
        den += [f"{term(v)}*x[n-{j}]" for j, v in self.B.items()]
        return f"x[n] = ({' + '.join(num) or '0'}) / ({' + '.join(den)})"


@dataclass(frozen=True)
class IndexProfile:
    i_beta: frozenset
    i_b: frozenset
    g_beta: int
    g_union: int
    sum_beta: object
    sum_b: object


def index_profile(eq: Equation) -> IndexProfile:
    i_beta, i_b = frozenset(eq.beta), frozenset(eq.B)
    return IndexProfile(
        i_beta=i_beta,
        i_b=i_b,
        g_beta=gcd_set(i_beta),
        g_union=gcd_set(i_beta | i_b),
        sum_beta=eq.sum_beta,
        sum_b=eq.sum_B,
    )


def step(eq: Equation, history: Sequence):
    """One application of the right-hand side.  ``history[0]`` is x_{n-1}."""
    if len(history) < eq.k:
        raise ValueError(f"need {eq.k} history values, got {len(history)}")
    num = eq.alpha
    for i, b in eq.beta.items():
        num = num + b * history[i - 1]
    den = eq.A
    for j, b in eq.B.items():
        den = den + b * history[j - 1]
    if den == 0:
        raise ZeroDenominator(history[: eq.k])
    return num / den


@dataclass(frozen=True)
class EquilibriumSet:
    rational_roots: tuple = ()
    quadratic_root: QuadraticSurd | None = None

    @property
    def values(self) -> tuple:
        extra = (self.quadratic_root,) if self.quadratic_root is not None else ()
        return tuple(self.rational_roots) + extra


def equilibria(eq: Equation) -> EquilibriumSet:
    """Nonnegative roots of sum(B) x^2 + (A - sum(beta)) x - alpha = 0."""
    if not eq.is_rational:
        raise InvalidEquation("equilibria needs rational coefficients")
    a, b, c = eq.sum_B, eq.A - eq.sum_beta, -eq.alpha
    if a == 0:
        if b == 0:
            if c == 0:
                raise Degenerate("every constant sequence is an equilibrium")
            return EquilibriumSet()
        root = -c / b
        return EquilibriumSet((root,) if root >= 0 else ())
    disc = b * b - 4 * a * c
    s = rational_sqrt(disc)
    if s is not None:
        roots = sorted({(-b - s) / (2 * a), (-b + s) / (2 * a)})
        return EquilibriumSet(tuple(r for r in roots if r >= 0))
    # irrational roots come only with alpha > 0, so exactly one is positive
    root = surd(-b / (2 * a), 1 / (2 * a), disc)
    return EquilibriumSet((), root if root >= 0 else None)


def mediant_bounds(a, b, c, d):
    """``(min(a/c, b/d), max(a/c, b/d))``, which bracket ``(a+b)/(c+d)``."""
    a, b, c, d = (Fraction(x) for x in (a, b, c, d))
    if a < 0 or b < 0 or c <= 0 or d <= 0:
        raise ValueError("need a, b >= 0 and c, d > 0")
    r, s = a / c, b / d
    return min(r, s), max(r, s)
