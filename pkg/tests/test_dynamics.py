import io
import random
from fractions import Fraction as F

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from trichotomy import Equation, recognize_t3
from trichotomy.classifier import Theorem3Shape
from trichotomy.dynamics import (
    EVENTUALLY_POSITIVE,
    FLOAT,
    IDENTICALLY_ZERO,
    LOWER,
    UPPER,
    EnvelopeT1,
    Lemma4Upper,
    SimulationConfig,
    bound_report,
    certify_period,
    converge_to_period,
    delta_split,
    detect_cycle,
    envelopes,
    lemma2_bound,
    lemma4_monitor,
    positivity_bound,
    positivity_classes,
    random_ics,
    simulate,
    unbounded_witness_search,
)
from trichotomy.errors import HypothesisFailedAtStep, NegativeInput, WindowTooLarge, ZeroDenominator
from trichotomy.reductions import periodic_ic_t2, push_forward, surd_reduce, unbounded_ic_t1


def test_riccati_alpha_equals_A_is_constant():
    eq = Equation(2, 2, {3: 1}, {3: 1})
    traj = simulate(eq, [F(5), F(1, 3), F(7)], SimulationConfig(steps=20))
    assert set(traj.values) == {1}


def test_riccati_converges_to_equilibrium():
    eq = Equation(3, 1, {1: 1}, {1: 1})  # x^2 = 3, equilibrium sqrt(3)
    rep = converge_to_period(eq, [F(1, 2)], 1, max_steps=500)
    assert rep.converged
    assert abs(float(rep.limit_cycle[0]) - 3 ** 0.5) < 1e-9


def test_boundary_orbit_converges_to_two_cycle(odd_lag_example):
    eq = odd_lag_example(F(1, 2))
    rng = random.Random(1)
    for _ in range(3):
        rep = converge_to_period(eq, random_ics(7, rng), 2, max_steps=6000, mode=FLOAT)
        assert rep.converged and rep.prime_period in (1, 2)


def test_trajectory_indexing_and_csv():
    eq = Equation(1, 1, {2: 1}, {1: 1})
    traj = simulate(eq, [F(2), F(1, 2)], SimulationConfig(steps=4))
    assert traj.x(-1) == 2 and traj.x(-2) == F(1, 2) and traj.x(0) == F(1, 2)
    assert traj.full()[:3] == [F(1, 2), 2, F(1, 2)]
    with pytest.raises(IndexError):
        traj.x(-3)
    buf = io.StringIO()
    traj.to_csv(buf)
    assert buf.getvalue().splitlines() == ["n,x_n", "0,1/2", "1,2", "2,1/2", "3,2"]


def test_input_errors():
    eq = Equation(0, 0, {1: 1}, {1: 1})
    with pytest.raises(NegativeInput):
        simulate(eq, [F(-1)])
    with pytest.raises(ZeroDenominator) as e:
        simulate(eq, [F(0)])
    assert e.value.step == 0
    with pytest.raises(ValueError):
        simulate(eq, [F(1), F(2)])


def test_degrade_switch_point():
    eq = Equation(0, 1, {2: 1, 4: 1}, {1: 1})
    ics = [F(3, 7), F(11, 13), F(5, 3), F(2, 9)]
    traj = simulate(eq, ics, SimulationConfig(steps=300, bit_budget=64))
    sp = traj.switch_point
    assert sp is not None and not traj.is_exact
    assert all(isinstance(v, F) for v in traj.values[:sp])
    assert all(isinstance(v, type(gmpy2.mpfr(0))) for v in traj.values[sp:])
    exact = simulate(eq, ics, SimulationConfig(steps=sp + 5, bit_budget=None))
    assert exact.is_exact and exact.values[:sp] == traj.values[:sp]
    for a, b in zip(exact.values[sp:], traj.values[sp:]):
        assert abs(float(a) - float(b)) <= 1e-30 * abs(float(a))


def test_float_mode_tracks_exact():
    eq = Equation(1, 1, {2: 1}, {1: 1})
    ics = [F(3), F(1, 7)]
    ex = simulate(eq, ics, SimulationConfig(steps=14, bit_budget=None)).values
    fl = simulate(eq, ics, SimulationConfig(steps=14, mode=FLOAT, precision_bits=200)).values
    with gmpy2.context(gmpy2.get_context(), precision=200):
        assert max(abs(gmpy2.mpfr(a.numerator) / a.denominator - b) for a, b in zip(ex, fl)) < 1e-50


def test_determinism():
    a = random_ics(5, random.Random(42))
    b = random_ics(5, random.Random(42))
    assert a == b
    eq = Equation(1, 2, {2: 1, 5: 1}, {1: 1, 3: 1})
    cfg = SimulationConfig(steps=15, bit_budget=None)
    assert simulate(eq, a, cfg) == simulate(eq, b, cfg)


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=F(1, 10), max_value=10, max_denominator=10), st.integers(0, 10**6))
def test_scaled_equation_same_orbit(c, seed):
    eq = Equation(F(1, 3), 2, {2: 1, 3: F(1, 2)}, {1: 2})
    ics = random_ics(eq.k, random.Random(seed))
    cfg = SimulationConfig(steps=10, bit_budget=None)
    assert simulate(eq, ics, cfg).values == simulate(eq.scaled(c), ics, cfg).values


def test_detect_cycle_examples():
    eq = Equation(4, 2, {6: 2}, {3: 1})
    traj = simulate(eq, periodic_ic_t2(eq), SimulationConfig(steps=200))
    rep = detect_cycle(traj, 6, tolerance=0)
    assert rep.converged and rep.residual == 0 and rep.prime_period == 6
    assert rep.limit_cycle == (1, 2, 2, 4, 2, 2)
    # a 6-cycle is also 12-periodic; the refinement finds 6
    assert detect_cycle(traj, 12, tolerance=0, window=100).prime_period == 6
    assert not detect_cycle(traj, 3, tolerance=0).converged
    with pytest.raises(WindowTooLarge):
        detect_cycle(traj, 6, window=199)


def test_converge_equilibrium_prime_period_one(t1_family):
    rep = converge_to_period(t1_family(3), [F(1), F(2), F(3), F(4)], 2, max_steps=3000)
    assert rep.converged and rep.prime_period == 1


def test_certify_refutes_divisors():
    sh = recognize_t3(Equation(3, 1, {6: 2, 3: 1}, {3: 1}))
    cert = certify_period(sh.equation(), [F(3), F(3), F(5), F(3), F(3), F(2)], 6)
    assert cert.certified and set(cert.refuted_divisors) == {1, 2, 3}
    bad = certify_period(sh.equation(), [F(1)] * 6, 6)
    assert not bad.periodic


def test_witness_search_finds_growth(t2_family):
    found = unbounded_witness_search(t2_family(F(1, 2)), steps=400)
    assert found is not None
    ics, n = found
    traj = simulate(t2_family(F(1, 2)), ics, SimulationConfig(steps=n + 1))
    assert traj.values[n] > 10**6


def test_witness_search_none_when_bounded(t1_family, t2_family):
    assert unbounded_witness_search(t1_family(3), steps=300) is None
    assert unbounded_witness_search(t2_family(2), steps=300) is None


def test_t1_unbounded_construction_crosses(t1_family):
    eq = t1_family(1)
    traj = simulate(eq, unbounded_ic_t1(eq), SimulationConfig(steps=80))
    assert bound_report(traj, threshold=10**6).exceeded is not None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.fractions(min_value=F(21, 10), max_value=5, max_denominator=10))
def test_a_priori_bound_above_boundary(seed, A):
    eq = Equation(F(1, 2), A, {2: 1, 5: 1}, {1: 1, 3: 1})
    ics = random_ics(eq.k, random.Random(seed))
    traj = simulate(eq, ics, SimulationConfig(steps=60, mode=FLOAT))
    b = lemma2_bound(eq, ics)
    assert all(v <= b for v in traj.values)
    with pytest.raises(ValueError):
        lemma2_bound(eq.replace(A=2), ics)


@pytest.mark.parametrize("variant, make", [
    ("T1", lambda: Equation(0, 2, {2: 1, 4: 1}, {1: 1})),
    ("T1", lambda: Equation(0, 3, {2: 1, 4: 1}, {1: 1})),
    ("T1", lambda: Equation(0, 2, {3: 1, 6: 1}, {1: 1, 2: 1})),
    ("T2", lambda: Equation(1, 1, {2: 1}, {1: 1})),
    ("T2", lambda: Equation(4, 2, {6: 2}, {3: 1})),
    ("T2", lambda: Equation(1, 2, {2: 1, 4: 1}, {1: 1})),
])
def test_envelopes_nonincreasing(variant, make):
    eq = make()
    rng = random.Random(7)
    for _ in range(200):
        traj = simulate(eq, random_ics(eq.k, rng), SimulationConfig(steps=120, mode=FLOAT))
        assert all(e.is_nonincreasing() for e in envelopes(traj, variant))


def test_envelope_monitor_in_config():
    eq = Equation(0, 2, {2: 1, 4: 1}, {1: 1})
    traj = simulate(eq, [F(1), F(2), F(3), F(4)],
                    SimulationConfig(steps=50, monitors=(EnvelopeT1(), Lemma4Upper(F(1)))))
    assert traj.monitor_results == {"envelope-T1": "nonincreasing", "lemma4-upper(c=1)": "holds"}


def test_envelope_detects_growth():
    eq = Equation(0, 1, {2: 1, 4: 1}, {1: 1})
    traj = simulate(eq, unbounded_ic_t1(eq), SimulationConfig(steps=40))
    assert not all(e.is_nonincreasing() for e in envelopes(traj, "T1"))


def test_bound_monitor_upper_and_failure():
    eq = Equation(0, 2, {2: 1, 4: 1}, {1: 1})
    traj = simulate(eq, [F(5), F(1), F(2), F(9)], SimulationConfig(steps=100))
    assert lemma4_monitor(traj, F(1, 2), UPPER)
    grow = Equation(0, 1, {2: 1, 4: 1}, {1: 1})
    traj = simulate(grow, unbounded_ic_t1(grow), SimulationConfig(steps=10))
    with pytest.raises(HypothesisFailedAtStep):
        lemma4_monitor(traj, F(1), UPPER)
    with pytest.raises(ValueError):
        lemma4_monitor(traj, 0, LOWER)


@st.composite
def reduced_shapes(draw):
    """Reduced (alpha = 0) images of random odd-lag shapes with 0 < alpha < A."""
    ell = draw(st.sampled_from([1, 3, 5]))
    lags = draw(st.sets(st.sampled_from([2, 4, 6]), min_size=1, max_size=2))
    even = {i: draw(st.fractions(min_value=F(1, 8), max_value=2, max_denominator=8)) for i in lags}
    A = draw(st.fractions(min_value=F(1, 8), max_value=4, max_denominator=8))
    alpha = A * draw(st.fractions(min_value=F(1, 8), max_value=F(7, 8), max_denominator=8))
    shape = Theorem3Shape(ell, even, alpha, A)
    red, change = surd_reduce(shape)
    return shape, recognize_t3(red), change


@settings(max_examples=30, deadline=None)
@given(reduced_shapes(), st.integers(0, 10**6))
def test_bound_monitors_on_reduced_orbits(data, seed):
    shape, red, change = data
    assert red.alpha == 0
    ics = random_ics(shape.equation().k, random.Random(seed))
    traj = simulate(red.equation(), push_forward(change, ics), SimulationConfig(steps=150, mode=FLOAT))
    s, A = red.sum_even_beta, red.A
    if s < A:
        assert lemma4_monitor(traj, 1, UPPER)
    if s > A:
        assert lemma4_monitor(traj, 1, LOWER)
    if s - 1 <= A < 1 + s:
        c = 1 - delta_split(red)
        assert 0 < c <= 1
        assert lemma4_monitor(traj, c, LOWER)


def test_bound_monitors_constant_orbit():
    eq = Equation(0, 1, {2: F(1, 2), 3: 1}, {3: 1})  # reduced form, equilibrium 1/2
    traj = simulate(eq, [F(1, 2)] * 3, SimulationConfig(steps=30))
    assert set(traj.values) == {F(1, 2)}
    assert lemma4_monitor(traj, F(1, 2), LOWER) and lemma4_monitor(traj, F(1, 2), UPPER)


def test_delta_split_guards():
    sh = Theorem3Shape(3, {2: F(1)}, F(0), F(3, 2))
    assert delta_split(sh) == F(3, 4)
    with pytest.raises(ValueError):
        delta_split(Theorem3Shape(3, {2: F(1)}, F(0), F(2)))
    with pytest.raises(ValueError):
        delta_split(Theorem3Shape(3, {2: F(1)}, F(1), F(1)))


def _semigroup(gens, limit):
    reach = {0}
    for n in range(1, limit + 1):
        if any(n - g in reach for g in gens if n >= g):
            reach.add(n)
    return reach


def test_positivity_classes_examples():
    sh = recognize_t3(Equation(0, F(3, 2), {6: 2, 3: 1}, {3: 1}))
    out = positivity_classes(sh, [F(0), F(0), F(1), F(0), F(0), F(2)], horizon=60)
    assert out[0].kind == EVENTUALLY_POSITIVE and out[0].step == 0
    assert out[1].kind == out[2].kind == IDENTICALLY_ZERO
    assert out[0].confirmed_through == 59


def test_positivity_frobenius_is_tight():
    # I_beta = {6, 10, 15}: gcd 1, Frobenius number 29; every hop from x_-1 lands at n >= 0
    sh = Theorem3Shape(15, {6: F(1), 10: F(1)}, F(0), F(2))
    ics = [F(1)] + [F(0)] * 14
    out = positivity_classes(sh, ics, horizon=200)
    assert out[0].step == 29
    vals = simulate(sh.equation(), ics, SimulationConfig(steps=40)).values
    assert vals[28] == 0 and vals[29] > 0
    assert positivity_bound(sh) == 29 + 15


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([1, 3, 5, 7, 9]),
       st.sets(st.sampled_from([2, 4, 6, 8, 10]), min_size=1, max_size=3),
       st.integers(0, 10**6))
def test_positivity_single_seed_matches_semigroup(ell, lags, seed):
    sh = Theorem3Shape(ell, {i: F(1) for i in lags}, F(0), F(1))
    k = sh.equation().k
    g = sh.g_beta
    rng = random.Random(seed)
    m = rng.randint(1, k)
    ics = [F(0)] * k
    ics[m - 1] = F(rng.randint(1, 5))
    horizon = positivity_bound(sh) + 3 * k
    out = positivity_classes(sh, ics, horizon=horizon)
    vals = simulate(sh.equation(), ics, SimulationConfig(steps=horizon)).values
    reach = _semigroup(sh.i_beta, horizon + k)
    # the first hop from x_{-m} must land on a computed index
    for n, v in enumerate(vals):
        assert (v > 0) == any(n + m - i in reach for i in sh.i_beta if m <= i <= n + m)
    a = (-m) % g
    assert out[a].kind == EVENTUALLY_POSITIVE
    assert all(vals[n] > 0 for n in range(out[a].step, horizon) if n % g == a)
    assert all(out[b].kind == IDENTICALLY_ZERO for b in out if b != a)


def test_envelope_constant_on_exact_cycle():
    eq = Equation(0, 2, {2: 1, 4: 1}, {1: 1})
    traj = simulate(eq, [F(0), F(1), F(0), F(1)], SimulationConfig(steps=40))
    for e in envelopes(traj, "T1"):
        assert len(set(e.values)) == 1


def test_positivity_all_positive_immediate():
    sh = recognize_t3(Equation(0, F(3, 2), {6: 2, 3: 1}, {3: 1}))
    out = positivity_classes(sh, [F(1)] * 6, horizon=30)
    assert all(c.kind == EVENTUALLY_POSITIVE and c.step == 0 for c in out.values())
