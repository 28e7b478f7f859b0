import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levyrest.errors import HorizonExceeded, ScalingMismatch, UnsupportedCoupling
from levyrest.sampling import DiscreteAtoms, TailLaw, UniformSphere, derive_stream
from levyrest.stats import hill_estimator
from levyrest.walk import (
    EqualRests,
    IndependentRests,
    NoRests,
    Order,
    ScalingSpec,
    Steps,
    TheoremCase,
    WalkKind,
    WalkParams,
    build_trajectory,
    check_scaling,
    cone_bound,
    count_renewals,
    evaluate,
    generate_steps,
    scaled_both,
    scaled_marginal,
    steps_covering,
    theorem_case,
)

U = WalkKind(Order.WAIT_FIRST, False)
O = WalkKind(Order.JUMP_FIRST, False)
UR = WalkKind(Order.WAIT_FIRST, True)
OR = WalkKind(Order.JUMP_FIRST, True)


def _value(steps, kind, t, horizon=None):
    traj = build_trajectory(steps, kind, None, horizon or t)
    return float(evaluate(traj, t)[0])


# --- hand-computed trajectories --------------------------------------------
# Jumps are J_i = v0 * u_i * T_i, so directions (+1, -1, +1, +1) with waits
# (1, 2, 3, 4) give jumps (1, -2, 3, 4). A fourth step is appended so the
# steps strictly cover t = 6.

HAND = Steps.from_directions([1.0, 2.0, 3.0, 4.0], [1.0, -1.0, 1.0, 1.0])


@pytest.mark.parametrize("t,expected", [(0.0, 0.0), (0.5, 0.0), (1.0, 1.0), (2.9, 1.0), (3.0, -1.0), (6.0, 2.0)])
def test_wait_first_hand_values(t, expected):
    assert _value(HAND, U, t, horizon=6.0) == expected


@pytest.mark.parametrize("t,expected", [(0.5, 1.0), (1.0, -1.0), (3.0, 2.0)])
def test_jump_first_hand_values(t, expected):
    assert _value(HAND, O, t, horizon=6.0) == expected


@pytest.mark.parametrize("t,expected", [(1.5, 0.0), (2.0, 1.0), (5.0, -1.0)])
def test_wait_first_rests_hand_values(t, expected):
    steps = Steps.from_directions([1.0, 2.0, 3.0], [1.0, -1.0, 1.0], rests=np.ones(3))
    assert _value(steps, UR, t, horizon=5.0) == expected


def test_jump_first_rests_includes_next_jump_during_rest():
    steps = Steps.from_directions([1.0, 2.0, 3.0], [1.0, -1.0, 1.0], rests=np.ones(3))
    # N^R(1.5) = 0 although the first wait is over; O^R sums to N^R + 1
    assert _value(steps, OR, 1.5, horizon=5.0) == 1.0
    assert _value(steps, OR, 2.0, horizon=5.0) == -1.0


def test_unit_jump_walk_matches_counting_examples():
    # same epochs with unit jumps u_i (positions count signed renewals)
    unit = Steps(np.array([1.0, 2.0, 3.0, 4.0]), np.zeros(4), np.array([1.0, -1.0, 1.0, 1.0]))
    assert [_value(unit, U, t, 6.0) for t in (0.5, 1.0, 2.9, 3.0, 6.0)] == [0, 1, 1, 0, 1]
    assert [_value(unit, O, t, 6.0) for t in (0.5, 1.0, 3.0)] == [1, 0, 1]
    rested = Steps(np.array([1.0, 2.0, 3.0]), np.ones(3), np.array([1.0, -1.0, 1.0]))
    assert [_value(rested, UR, t, 5.0) for t in (1.5, 2.0, 5.0)] == [0, 1, 0]


def test_count_renewals_examples():
    steps = Steps.from_directions([1.0, 2.0, 3.0], [1.0, 1.0, 1.0], rests=np.full(3, 0.5))
    assert count_renewals(steps, 5.0, True) == 2
    assert count_renewals(steps, 5.0, False) == 2
    assert count_renewals(steps, 0.99, False) == 0
    with pytest.raises(HorizonExceeded):
        count_renewals(steps, 6.0, False)
    with pytest.raises(ValueError):
        count_renewals(steps, -1.0, False)


def test_evaluate_errors_and_right_continuity():
    traj = build_trajectory(HAND, U, None, 6.0)
    assert evaluate(traj, 3.0)[0] == -1.0
    assert evaluate(traj, np.nextafter(3.0, 0))[0] == 1.0
    with pytest.raises(HorizonExceeded):
        evaluate(traj, 6.5)
    with pytest.raises(HorizonExceeded):
        build_trajectory(HAND, U, None, 10.0)


def test_trajectory_events():
    traj = build_trajectory(HAND, O, None, 6.0)
    times = [t for t, _ in traj.events]
    assert times == [0.0, 1.0, 3.0, 6.0]
    assert traj.positions[:, 0].tolist() == [1.0, -1.0, 2.0, 6.0]


_durations = st.lists(st.floats(0.01, 5.0), min_size=1, max_size=30)


@given(_durations, _durations, st.floats(0.0, 1.0), st.booleans())
def test_count_renewals_matches_brute_force(waits, rests, frac, with_rests):
    m = min(len(waits), len(rests))
    steps = Steps.from_directions(waits[:m], np.ones(m), rests=np.array(rests[:m]))
    total = float(steps.durations(with_rests).sum())
    t = frac * total * 0.999
    brute, acc = 0, 0.0
    for d in steps.durations(with_rests):
        acc += d
        if acc > t:
            break
        brute += 1
    assert count_renewals(steps, t, with_rests) == brute


@settings(max_examples=50)
@given(st.integers(0, 10_000), st.sampled_from([U, O, UR, OR]), st.floats(0.0, 1.0))
def test_evaluate_matches_linear_scan(seed, kind, frac):
    params = WalkParams(UniformSphere(2), IndependentRests(TailLaw(0.6), TailLaw(0.4)), dim=2)
    horizon = 40.0
    steps = steps_covering(params, horizon, False, derive_stream(seed, 0))
    traj = build_trajectory(steps, kind, params, horizon)
    t = frac * horizon
    # linear scan over the defining sum
    acc, n = 0.0, 0
    for d in steps.durations(kind.with_rests):
        if acc + d > t:
            break
        acc += d
        n += 1
    upto = n + (1 if kind.order is Order.JUMP_FIRST else 0)
    expected = steps.jumps[:upto].sum(axis=0)
    assert np.allclose(evaluate(traj, t), expected, rtol=1e-12, atol=1e-12)


def test_equal_rests_records():
    params = WalkParams(DiscreteAtoms.symmetric_1d(), EqualRests(TailLaw(0.5)), v0=2.0)
    steps = generate_steps(params, 1000, derive_stream(1, 0))
    assert np.array_equal(steps.rests, steps.waits)
    assert np.allclose(np.abs(steps.jumps[:, 0]), 2.0 * steps.waits, rtol=1e-15)
    record = steps[3]
    assert record.rest == record.wait


def test_no_rests_records():
    params = WalkParams(DiscreteAtoms.symmetric_1d(), NoRests(TailLaw(0.5)))
    assert np.all(generate_steps(params, 100, derive_stream(1, 0)).rests == 0)


def test_independent_rests_equal_indices_rejected():
    with pytest.raises(UnsupportedCoupling):
        IndependentRests(TailLaw(0.5), TailLaw(0.5, 2.0))


def test_cycle_tail_is_min_index():
    params = WalkParams(DiscreteAtoms.symmetric_1d(), IndependentRests(TailLaw(0.5), TailLaw(0.8)))
    steps = generate_steps(params, 1_000_000, derive_stream(2, 0))
    assert 0.45 <= hill_estimator(steps.durations(True), 2000).index_hat <= 0.55


def test_batching_does_not_change_steps():
    params = WalkParams(UniformSphere(3), IndependentRests(TailLaw(0.5), TailLaw(0.8)), dim=3)
    whole = generate_steps(params, 40, derive_stream(5, 0))
    rng = derive_stream(5, 0)
    parts = generate_steps(params, 15, rng).concat(generate_steps(params, 25, rng))
    for name in ("waits", "rests", "jumps"):
        assert np.array_equal(getattr(whole, name), getattr(parts, name))


def test_walk_params_dimension_check():
    with pytest.raises(ValueError):
        WalkParams(UniformSphere(2), NoRests(TailLaw(0.5)), dim=1)


def test_theorem_cases():
    assert theorem_case(IndependentRests(TailLaw(0.5), TailLaw(0.8))) is TheoremCase.COUPLED
    assert theorem_case(IndependentRests(TailLaw(0.5), TailLaw(0.3))) is TheoremCase.INDEPENDENT
    assert theorem_case(EqualRests(TailLaw(0.5))) is TheoremCase.EQUAL_RESTS
    assert theorem_case(NoRests(TailLaw(0.5))) is TheoremCase.COUPLED


def test_scaling_factors():
    spec = ScalingSpec.for_coupling(NoRests(TailLaw(0.5)), 16)
    assert spec.time_factor == 256.0
    assert spec.space_factor == 1.0 / 256.0
    case_ii = ScalingSpec.for_coupling(IndependentRests(TailLaw(0.5), TailLaw(0.25)), 16)
    assert (case_ii.space_exponent, case_ii.time_exponent) == (2.0, 4.0)


def test_check_scaling_rejects_wrong_time_exponent():
    coupling = IndependentRests(TailLaw(0.5), TailLaw(0.3))
    with pytest.raises(ScalingMismatch, match="case table"):
        check_scaling(ScalingSpec(100, 2.0, 2.0), coupling)
    check_scaling(ScalingSpec(100, 2.0, 1 / 0.3), coupling)


@pytest.mark.parametrize("kind", [U, O, UR, OR])
def test_unit_scaling_equals_plain_evaluation(kind):
    params = WalkParams(DiscreteAtoms.symmetric_1d(), IndependentRests(TailLaw(0.5), TailLaw(0.8)))
    spec = ScalingSpec.for_coupling(params.coupling, 1)
    got = scaled_marginal(params, kind, spec, 7.5, derive_stream(9, 3))
    steps = steps_covering(params, 7.5, kind.with_rests, derive_stream(9, 3))
    expected = evaluate(build_trajectory(steps, kind, params, 7.5), 7.5)
    assert np.array_equal(got, expected)


def test_scaled_marginal_on_a_grid():
    params = WalkParams(DiscreteAtoms.symmetric_1d(), EqualRests(TailLaw(0.5)))
    spec = ScalingSpec.for_coupling(params.coupling, 10)
    grid = scaled_marginal(params, UR, spec, [0.5, 1.0], derive_stream(9, 4))
    assert grid.shape == (2, 1)
    with pytest.raises(ValueError):
        scaled_marginal(params, UR, spec, 0.0, derive_stream(9, 4))


@settings(max_examples=40)
@given(st.integers(0, 10_000), st.sampled_from(["i", "iii"]), st.floats(0.1, 3.0), st.sampled_from([1, 10, 1000]))
def test_scaled_wait_first_within_cone(seed, case, t, n):
    law = TailLaw.normalized(0.5)
    coupling = IndependentRests(law, TailLaw.normalized(0.8)) if case == "i" else EqualRests(law)
    params = WalkParams(DiscreteAtoms.symmetric_1d(), coupling, v0=1.5)
    spec = ScalingSpec.for_coupling(coupling, n)
    wait_first, jump_first = scaled_both(params, True, spec, [t], derive_stream(seed, 0))
    assert np.linalg.norm(wait_first[0]) <= cone_bound(params, UR, t) * (1 + 1e-12)
    assert cone_bound(params, UR, t) == (0.75 * t if case == "iii" else 1.5 * t)
