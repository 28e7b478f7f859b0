"""Lévy walks with and without rests: step generation, renewal counting,
càdlàg trajectories and scaled finite-dimensional marginals."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import HorizonExceeded, ScalingMismatch, UnsupportedCoupling
from .sampling import (
    DiscreteAtoms,
    RngStream,
    SpectralMeasure,
    TailLaw,
    UniformSphere,
    sample_direction,
    sample_waiting_time,
)


@dataclass(frozen=True)
class IndependentRests:
    wait_law: TailLaw
    rest_law: TailLaw

    def __post_init__(self):
        if self.wait_law.index == self.rest_law.index:
            raise UnsupportedCoupling(
                "independent rests need distinct wait/rest indices; "
                f"got alpha = beta = {self.wait_law.index}"
            )


@dataclass(frozen=True)
class EqualRests:
    """Rest equal to the waiting time, ``R_i = T_i`` pathwise."""

    wait_law: TailLaw


@dataclass(frozen=True)
class NoRests:
    """Plain Lévy walk, every rest is zero."""

    wait_law: TailLaw


CouplingMode = Union[IndependentRests, EqualRests, NoRests]


class TheoremCase(enum.Enum):
    """Limit regime of a coupling.

    COUPLED: alpha < beta (or no rests), space and time both scale with 1/alpha.
    INDEPENDENT: alpha > beta, time scales with 1/beta.
    EQUAL_RESTS: R = T, scaling 1/alpha, time consumed per jump doubles.
    """

    COUPLED = "i"
    INDEPENDENT = "ii"
    EQUAL_RESTS = "iii"


def theorem_case(coupling: CouplingMode) -> TheoremCase:
    if isinstance(coupling, EqualRests):
        return TheoremCase.EQUAL_RESTS
    if isinstance(coupling, IndependentRests):
        if coupling.wait_law.index < coupling.rest_law.index:
            return TheoremCase.COUPLED
        return TheoremCase.INDEPENDENT
    return TheoremCase.COUPLED


def effective_coupling(coupling: CouplingMode, with_rests: bool) -> CouplingMode:
    """The coupling seen by a walk that does (or does not) serve rests."""
    return coupling if with_rests else NoRests(coupling.wait_law)


def time_index(coupling: CouplingMode) -> float:
    """Tail index governing the cycle durations ``T_i + R_i``."""
    if isinstance(coupling, IndependentRests):
        return min(coupling.wait_law.index, coupling.rest_law.index)
    return coupling.wait_law.index


@dataclass(frozen=True)
class WalkParams:
    spectral: SpectralMeasure
    coupling: CouplingMode
    v0: float = 1.0
    dim: int = 1

    def __post_init__(self):
        if not self.v0 > 0:
            raise ValueError(f"v0 must be positive, got {self.v0}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.spectral.dim != self.dim:
            raise ValueError(
                f"spectral measure lives in R^{self.spectral.dim} but dim = {self.dim}"
            )

    @property
    def alpha(self) -> float:
        return self.coupling.wait_law.index


class Order(enum.Enum):
    WAIT_FIRST = "wait_first"
    JUMP_FIRST = "jump_first"


@dataclass(frozen=True)
class WalkKind:
    order: Order
    with_rests: bool

    @property
    def label(self) -> str:
        return self.order.value + ("_rests" if self.with_rests else "")


@dataclass(frozen=True)
class StepRecord:
    wait: float
    rest: float
    jump: np.ndarray


@dataclass
class Steps:
    """Columnar storage for an IID sequence of ``(R_i, T_i, J_i)``."""

    waits: np.ndarray
    rests: np.ndarray
    jumps: np.ndarray

    def __post_init__(self):
        self.waits = np.asarray(self.waits, dtype=float)
        self.rests = np.asarray(self.rests, dtype=float)
        jumps = np.asarray(self.jumps, dtype=float)
        self.jumps = jumps[:, None] if jumps.ndim == 1 else jumps
        if not (len(self.waits) == len(self.rests) == len(self.jumps)):
            raise ValueError("waits, rests and jumps must have equal length")

    @classmethod
    def from_directions(cls, waits, directions, rests=None, v0: float = 1.0) -> "Steps":
        waits = np.asarray(waits, dtype=float)
        dirs = np.asarray(directions, dtype=float)
        if dirs.ndim == 1:
            dirs = dirs[:, None]
        rests = np.zeros_like(waits) if rests is None else rests
        return cls(waits, rests, v0 * dirs * waits[:, None])

    def __len__(self) -> int:
        return len(self.waits)

    def __getitem__(self, i: int) -> StepRecord:
        return StepRecord(float(self.waits[i]), float(self.rests[i]), self.jumps[i].copy())

    @property
    def dim(self) -> int:
        return self.jumps.shape[1]

    def durations(self, with_rests: bool) -> np.ndarray:
        return self.waits + self.rests if with_rests else self.waits

    def epochs(self, with_rests: bool) -> np.ndarray:
        """Renewal epochs ``sum_{i<=k} (T_i + R_i)`` for k = 1..len."""
        return np.cumsum(self.durations(with_rests))

    def concat(self, other: "Steps") -> "Steps":
        return Steps(
            np.concatenate([self.waits, other.waits]),
            np.concatenate([self.rests, other.rests]),
            np.concatenate([self.jumps, other.jumps]),
        )


def generate_steps(params: WalkParams, count: int, rng: RngStream) -> Steps:
    """Draw ``count`` IID records.

    Waits, rests and directions come from three child streams of ``rng``,
    each consumed sequentially, so step ``i`` uses the same variates no
    matter how the steps are batched.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    coupling = params.coupling
    waits = sample_waiting_time(coupling.wait_law, rng.child(0), count)
    if isinstance(coupling, IndependentRests):
        rests = sample_waiting_time(coupling.rest_law, rng.child(1), count)
    elif isinstance(coupling, EqualRests):
        rests = waits.copy()
    else:
        rests = np.zeros(count)
    dirs = sample_direction(params.spectral, rng.child(2), count)
    return Steps(waits, rests, params.v0 * dirs * waits[:, None])


def count_renewals(steps: Steps, t: float, with_rests: bool) -> int:
    """Largest n with ``sum_{i<=n} (T_i [+ R_i]) <= t``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    epochs = steps.epochs(with_rests)
    if len(epochs) == 0 or epochs[-1] <= t:
        raise HorizonExceeded(f"steps cover duration {epochs[-1] if len(epochs) else 0.0!r}, need > {t!r}")
    return int(np.searchsorted(epochs, t, side="right"))


@dataclass
class Trajectory:
    """Piecewise-constant right-continuous path given by its events.

    ``positions[j]`` holds on ``[times[j], times[j+1])``.
    """

    kind: WalkKind
    times: np.ndarray
    positions: np.ndarray
    horizon: float
    steps_used: int

    @property
    def events(self) -> list[tuple[float, np.ndarray]]:
        return [(float(t), p) for t, p in zip(self.times, self.positions)]


def _partial_sums(steps: Steps) -> np.ndarray:
    out = np.zeros((len(steps) + 1, steps.dim))
    np.cumsum(steps.jumps, axis=0, out=out[1:])
    return out


def build_trajectory(steps: Steps, kind: WalkKind, params: WalkParams | None, horizon: float) -> Trajectory:
    """Events of ``U``/``O`` (or ``U^R``/``O^R``) on ``[0, horizon]``.

    Positions only change at renewal epochs, so the order of rest and wait
    inside a cycle does not matter here.
    """
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    if params is not None and steps.dim != params.dim:
        raise ValueError("steps and params disagree on dimension")
    n_done = count_renewals(steps, horizon, kind.with_rests)
    epochs = steps.epochs(kind.with_rests)[:n_done]
    sums = _partial_sums(steps)
    times = np.concatenate([[0.0], epochs])
    shift = 1 if kind.order is Order.JUMP_FIRST else 0
    positions = sums[shift : n_done + 1 + shift]
    return Trajectory(kind, times, positions.copy(), float(horizon), n_done + shift)


def evaluate(traj: Trajectory, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be non-negative")
    if t > traj.horizon:
        raise HorizonExceeded(f"t = {t!r} beyond trajectory horizon {traj.horizon!r}")
    j = int(np.searchsorted(traj.times, t, side="right")) - 1
    return traj.positions[j].copy()


@dataclass(frozen=True)
class ScalingSpec:
    n: float
    space_exponent: float
    time_exponent: float

    def __post_init__(self):
        if not self.n >= 1:
            raise ValueError(f"scale parameter n must be >= 1, got {self.n}")

    @classmethod
    def for_coupling(cls, coupling: CouplingMode, n: float) -> "ScalingSpec":
        alpha = coupling.wait_law.index
        if theorem_case(coupling) is TheoremCase.INDEPENDENT:
            return cls(n, 1.0 / alpha, 1.0 / coupling.rest_law.index)
        return cls(n, 1.0 / alpha, 1.0 / alpha)

    @property
    def space_factor(self) -> float:
        return self.n**-self.space_exponent

    @property
    def time_factor(self) -> float:
        return self.n**self.time_exponent


def check_scaling(spec: ScalingSpec, coupling: CouplingMode, rel_tol: float = 1e-12) -> None:
    """Raise ScalingMismatch unless the exponents follow the case table:
    case (i) and (iii) scale space and time by 1/alpha, case (ii) scales
    space by 1/alpha and time by 1/beta."""
    want = ScalingSpec.for_coupling(coupling, spec.n)
    case = theorem_case(coupling)
    for name in ("space_exponent", "time_exponent"):
        got, exp = getattr(spec, name), getattr(want, name)
        if not math.isclose(got, exp, rel_tol=rel_tol):
            raise ScalingMismatch(
                f"{name} = {got!r} but limit case ({case.value}) requires {exp!r} "
                "(case table: (i) alpha<beta -> 1/alpha, 1/alpha; "
                "(ii) alpha>beta -> 1/alpha, 1/beta; (iii) R=T -> 1/alpha, 1/alpha)"
            )


def _initial_batch(params: WalkParams, duration: float) -> int:
    coupling = params.coupling
    a = time_index(coupling)
    if isinstance(coupling, IndependentRests) and coupling.rest_law.index < coupling.wait_law.index:
        floor = coupling.rest_law.floor
    else:
        floor = coupling.wait_law.floor
    guess = (max(duration, floor) / floor) ** a
    return int(min(guess, 1e7)) + 16


def steps_covering(params: WalkParams, duration: float, with_rests: bool, rng: RngStream) -> Steps:
    """Draw steps in geometric batches until the total duration exceeds
    ``duration``; batch sizes depend only on the draws themselves."""
    steps = generate_steps(params, _initial_batch(params, duration), rng)
    total = float(steps.durations(with_rests).sum())
    while total <= duration:
        extra = generate_steps(params, len(steps), rng)
        total += float(extra.durations(with_rests).sum())
        steps = steps.concat(extra)
    return steps


def scaled_both(params: WalkParams, with_rests: bool, spec: ScalingSpec, times, rng: RngStream):
    """Wait-first and jump-first scaled positions from one simulated path.

    Returns two arrays of shape ``(len(times), dim)`` holding
    ``n^{-space} X(n^{time} t)`` for each requested ``t``.
    """
    check_scaling(spec, effective_coupling(params.coupling, with_rests))
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times <= 0):
        raise ValueError("marginal times must be positive")
    physical = spec.time_factor * times
    steps = steps_covering(params, float(physical.max()), with_rests, rng)
    counts = np.searchsorted(steps.epochs(with_rests), physical, side="right")
    sums = _partial_sums(steps)
    scale = spec.space_factor
    return scale * sums[counts], scale * sums[counts + 1]


def scaled_marginal(params: WalkParams, kind: WalkKind, spec: ScalingSpec, t, rng: RngStream) -> np.ndarray:
    """``n^{-1/alpha} X(n^{time_exponent} t)`` for the requested walk.

    ``t`` may be a scalar (returns a ``dim``-vector) or a grid of times
    evaluated on a single path (returns ``(len(t), dim)``).
    """
    wait_first, jump_first = scaled_both(params, kind.with_rests, spec, t, rng)
    out = wait_first if kind.order is Order.WAIT_FIRST else jump_first
    return out[0] if np.ndim(t) == 0 else out


def cone_bound(params: WalkParams, kind: WalkKind, t: float) -> float:
    """Deterministic bound on the wait-first displacement at time ``t``."""
    if kind.with_rests and isinstance(params.coupling, EqualRests):
        return params.v0 * t / 2.0
    return params.v0 * t


__all__ = [
    "DiscreteAtoms",
    "UniformSphere",
    "IndependentRests",
    "EqualRests",
    "NoRests",
    "TheoremCase",
    "WalkParams",
    "Order",
    "WalkKind",
    "StepRecord",
    "Steps",
    "Trajectory",
    "ScalingSpec",
    "generate_steps",
    "count_renewals",
    "build_trajectory",
    "evaluate",
    "scaled_marginal",
    "scaled_both",
    "check_scaling",
    "theorem_case",
    "effective_coupling",
]
