"""Invariant and oracle checks behind the ``validate`` subcommand."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .config import ConfigError, RunConfig, check_config_scaling
from .ensemble import LANE_CHECKS, LANE_HILL, ordered_map
from .limit import (
    LimitRegime,
    inverse_subordinator,
    simulate_jump_series,
    simulate_until,
    subordinator_left_limit,
    subordinator_value,
    tail_intensity,
)
from .sampling import DiscreteAtoms, derive_stream, sample_one_sided_stable, sample_waiting_time
from .stats import hill_estimator, inverse_mean_reference, ks_two_sample
from .walk import (
    EqualRests,
    IndependentRests,
    Order,
    TheoremCase,
    WalkKind,
    WalkParams,
    build_trajectory,
    cone_bound,
    count_renewals,
    evaluate,
    steps_covering,
)

HILL_TOL = 0.05
KS_EQUAL_RESTS_TOL = 0.015
LAPLACE_REL_TOL = 0.01
INVERSE_MEAN_REL_TOL = 0.02
IDENTITY_TOL = 1e-12


@dataclass
class Check:
    name: str
    passed: bool
    value: Optional[float] = None
    target: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"[{status}] {self.name}"]
        if self.value is not None:
            parts.append(f"value={self.value:.6g}")
        if self.target is not None:
            parts.append(f"target={self.target:.6g}")
        if self.tolerance is not None:
            parts.append(f"tol={self.tolerance:.3g}")
        if self.detail:
            parts.append(self.detail)
        return " ".join(parts)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SubordinatorAtJob:
    """``S(op_time)`` of one truncated-series path."""

    regime: LimitRegime
    seed: int
    epsilon: float
    op_time: float = 1.0
    lane: int = LANE_CHECKS

    def __call__(self, i: int) -> np.ndarray:
        rng = derive_stream(self.seed, i, self.lane)
        path = simulate_jump_series(self.regime, DiscreteAtoms.symmetric_1d(), self.epsilon, self.op_time, rng)
        return np.array(subordinator_value(path, self.op_time))


@dataclass(frozen=True)
class FirstPassageJob:
    regime: LimitRegime
    seed: int
    epsilon: float
    level: float = 1.0
    lane: int = LANE_CHECKS

    def __call__(self, i: int) -> np.ndarray:
        rng = derive_stream(self.seed, i, self.lane)
        path = simulate_until(self.regime, DiscreteAtoms.symmetric_1d(), self.level, rng, self.epsilon)
        return np.array(inverse_subordinator(path, self.level).op_time)


def hill_check(name: str, samples: np.ndarray, k: int, target: float) -> Check:
    est = hill_estimator(samples, k)
    err = abs(est.index_hat - target)
    return Check(name, err < HILL_TOL, est.index_hat, target, HILL_TOL)


def laplace_checks(index: float, sub_values: np.ndarray, s_values=(0.5, 1.0, 2.0)) -> list[Check]:
    out = []
    for s in s_values:
        est = float(np.mean(np.exp(-s * sub_values)))
        target = math.exp(-(s**index))
        rel = abs(est - target) / target
        out.append(Check(f"laplace_transform(alpha={index}, s={s})", rel < LAPLACE_REL_TOL, est, target, LAPLACE_REL_TOL))
    return out


def tail_identity_check(index: float) -> Check:
    worst = 0.0
    for x in (0.1, 1.0, 10.0):
        lhs = tail_intensity(index, x, rest_scaled=True)
        rhs = tail_intensity(index, x / 2.0)
        worst = max(worst, abs(lhs - rhs) / rhs)
    return Check(f"rest_scaled_tail_identity(alpha={index})", worst <= IDENTITY_TOL, worst, 0.0, IDENTITY_TOL)


def pathwise_checks(params: WalkParams, count: int, seed: int, epsilon: float) -> list[Check]:
    """Exact pathwise relations on ``count`` randomised instances each."""
    rng = derive_stream(seed, 0, LANE_CHECKS + 1)
    gen = rng.generator
    cone_ok = bridge_ok = renew_ok = True
    for i in range(count):
        t = float(gen.uniform(0.1, 50.0))
        # waits alone exceeding t cover both walk flavours
        steps = steps_covering(params, t, False, derive_stream(seed, i, LANE_CHECKS + 2))
        for with_rests in (False, True):
            n = count_renewals(steps, t, with_rests)
            brute = 0
            acc = 0.0
            for d in steps.durations(with_rests):
                acc += d
                if acc > t:
                    break
                brute += 1
            renew_ok &= n == brute
        kind_u = WalkKind(Order.WAIT_FIRST, True)
        kind_o = WalkKind(Order.JUMP_FIRST, True)
        u = evaluate(build_trajectory(steps, kind_u, params, t), t)
        o = evaluate(build_trajectory(steps, kind_o, params, t), t)
        bound = cone_bound(params, kind_u, t)
        cone_ok &= bool(np.linalg.norm(u) <= bound * (1 + 1e-12))
        n = count_renewals(steps, t, True)
        bridge_ok &= bool(np.allclose(o - u, steps.jumps[n], rtol=1e-12, atol=1e-9 * max(1.0, t)))
    regime = LimitRegime.from_coupling(params.coupling)
    spectral = params.spectral
    sandwich_ok = True
    for i in range(count):
        t = float(gen.uniform(0.01, 5.0))
        path = simulate_until(regime, spectral, t, derive_stream(seed, i, LANE_CHECKS + 3), epsilon)
        fp = inverse_subordinator(path, t)
        hi = subordinator_value(path, fp.op_time)
        lo = subordinator_left_limit(path, fp.op_time)
        slack = 1e-12 * max(1.0, t)
        sandwich_ok &= lo <= t + slack and hi >= t - slack
    return [
        Check("renewal_count_bruteforce", renew_ok, detail=f"instances={count}"),
        Check("wait_first_cone_bound", cone_ok, detail=f"instances={count}"),
        Check("jump_first_bridge", bridge_ok, detail=f"instances={count}"),
        Check("first_passage_sandwich", sandwich_ok, detail=f"instances={count}"),
    ]


def run_validation(cfg: RunConfig) -> list[Check]:
    checks: list[Check] = []
    try:
        check_config_scaling(cfg)
        checks.append(Check("scaling_consistency", True))
    except ConfigError as exc:
        checks.append(Check("scaling_consistency", False, detail=str(exc)))

    sizes = cfg.validation
    coupling = cfg.params.coupling
    alpha = coupling.wait_law.index
    workers = cfg.worker_count
    hill_rng = derive_stream(cfg.seed, 0, LANE_HILL)
    waits = sample_waiting_time(coupling.wait_law, hill_rng.child(0), sizes.hill_samples)
    checks.append(hill_check("wait_tail_index", waits, sizes.hill_k, alpha))
    if isinstance(coupling, IndependentRests):
        rests = sample_waiting_time(coupling.rest_law, hill_rng.child(1), sizes.hill_samples)
        beta = coupling.rest_law.index
        checks.append(hill_check("rest_tail_index", rests, sizes.hill_k, beta))
        checks.append(hill_check("cycle_tail_index_min", waits + rests, sizes.hill_k, min(alpha, beta)))
    elif isinstance(coupling, EqualRests):
        checks.append(hill_check("cycle_tail_index_equal_rests", 2 * waits, sizes.hill_k, alpha))

    checks.append(tail_identity_check(alpha))

    coupled = LimitRegime(TheoremCase.COUPLED, alpha)
    sub_one = ordered_map(SubordinatorAtJob(coupled, cfg.seed, cfg.epsilon), sizes.limit_paths, workers).ravel()
    checks.extend(laplace_checks(alpha, sub_one))

    equal = LimitRegime(TheoremCase.EQUAL_RESTS, alpha)
    sub_r = ordered_map(SubordinatorAtJob(equal, cfg.seed, cfg.epsilon, lane=LANE_CHECKS + 4), sizes.limit_paths, workers).ravel()
    oracle = 2.0 * sample_one_sided_stable(alpha, derive_stream(cfg.seed, 1, LANE_HILL), sizes.limit_paths)
    ks = ks_two_sample(sub_r, oracle).statistic
    checks.append(Check("equal_rests_subordinator_vs_2x_stable_ks", ks < KS_EQUAL_RESTS_TOL, ks, 0.0, KS_EQUAL_RESTS_TOL))

    sub_index = LimitRegime.from_coupling(coupling).sub_index
    plain = LimitRegime(TheoremCase.COUPLED, sub_index)
    passages = ordered_map(FirstPassageJob(plain, cfg.seed, cfg.epsilon), sizes.limit_paths, workers).ravel()
    target = inverse_mean_reference(sub_index, 1.0)
    mean = float(passages.mean())
    checks.append(
        Check(
            f"inverse_subordinator_mean(alpha={sub_index})",
            abs(mean - target) / target < INVERSE_MEAN_REL_TOL,
            mean,
            target,
            INVERSE_MEAN_REL_TOL,
        )
    )

    checks.extend(pathwise_checks(cfg.params, sizes.pathwise_instances, cfg.seed, cfg.epsilon))
    return checks
