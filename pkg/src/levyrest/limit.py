"""Limit processes: stable subordinators and stable space processes built
from truncated jump series, first-passage inversion and the wait-first /
jump-first subordinated marginals.

A path is simulated on operational time with every jump of size above a
truncation level ``epsilon`` kept exactly and the small jumps replaced by
their mean (finite because the index is below one).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import HorizonExceeded
from .io import dumps17 as _dumps
from .sampling import RngStream, SpectralMeasure, sample_direction
from .walk import CouplingMode, TheoremCase, theorem_case

DEFAULT_EPSILON = 1e-4

_CASE_NAMES = {
    TheoremCase.COUPLED: "coupled",
    TheoremCase.INDEPENDENT: "independent",
    TheoremCase.EQUAL_RESTS: "equal_rests",
}


def tail_intensity(index: float, x: float, rest_scaled: bool = False) -> float:
    """Mass ``nu((x, inf)) = x^{-index} / Gamma(1 - index)``; times
    ``2^index`` for the equal-rests subordinator."""
    if not x > 0:
        raise ValueError("x must be positive")
    base = x**-index / math.gamma(1.0 - index)
    return base * 2.0**index if rest_scaled else base


def small_jump_mean(index: float, epsilon: float) -> float:
    """``int_0^epsilon x nu(dx)``: drift that replaces the truncated jumps."""
    a = index
    return epsilon ** (1.0 - a) * a / ((1.0 - a) * math.gamma(1.0 - a))


@dataclass(frozen=True)
class LimitRegime:
    """Which joint limit ``(L, S)`` to simulate.

    ``alpha`` indexes the space process, ``beta`` the subordinator when the
    two are independent.
    """

    case: TheoremCase
    alpha: float
    beta: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.case is TheoremCase.INDEPENDENT:
            if self.beta is None or not 0 < self.beta < 1:
                raise ValueError("independent limit needs beta in (0, 1)")

    @classmethod
    def from_coupling(cls, coupling: CouplingMode) -> "LimitRegime":
        case = theorem_case(coupling)
        if case is TheoremCase.INDEPENDENT:
            return cls(case, coupling.wait_law.index, coupling.rest_law.index)
        return cls(case, coupling.wait_law.index)

    @property
    def sub_index(self) -> float:
        return self.beta if self.case is TheoremCase.INDEPENDENT else self.alpha

    @property
    def coupled(self) -> bool:
        return self.case is not TheoremCase.INDEPENDENT


@dataclass
class JumpSeriesPath:
    """Truncated jump-series realisation of ``(L, S)`` on ``[0, op_horizon]``.

    Subordinator jumps sit at ``op_times``; in coupled regimes each carries
    its space increment. In the independent regime the space process has
    its own jump list (``space_times``, ``space_jumps``).
    """

    regime: LimitRegime
    dim: int
    epsilon: float
    op_horizon: float
    op_times: np.ndarray
    sub_increments: np.ndarray
    directions: np.ndarray
    space_increments: np.ndarray
    drift_rate: float
    space_drift: np.ndarray
    space_times: Optional[np.ndarray] = None
    space_jumps: Optional[np.ndarray] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def level_after(self) -> np.ndarray:
        """``S(tau_k)`` right after each jump."""
        if "post" not in self._cache:
            self._cache["post"] = self.drift_rate * self.op_times + np.cumsum(self.sub_increments)
        return self._cache["post"]

    @property
    def space_times_all(self) -> np.ndarray:
        return self.op_times if self.regime.coupled else self.space_times

    @property
    def space_cumsum(self) -> np.ndarray:
        if "space" not in self._cache:
            jumps = self.space_increments if self.regime.coupled else self.space_jumps
            out = np.zeros((len(jumps) + 1, self.dim))
            np.cumsum(jumps, axis=0, out=out[1:])
            self._cache["space"] = out
        return self._cache["space"]


def _segment(index: float, epsilon: float, start: float, stop: float, rng: RngStream):
    gen = rng.generator
    rate = tail_intensity(index, epsilon)
    count = int(gen.poisson(rate * (stop - start)))
    times = np.sort(gen.uniform(start, stop, count))
    sizes = epsilon * rng.uniform_open_closed(count) ** (-1.0 / index)
    return times, sizes


def _append(path: JumpSeriesPath, spectral: SpectralMeasure, stop: float, rng: RngStream) -> None:
    regime = path.regime
    start = path.op_horizon
    times, sizes = _segment(regime.sub_index, path.epsilon, start, stop, rng)
    if regime.coupled:
        dirs = sample_direction(spectral, rng, len(times)).reshape(len(times), path.dim)
        space = dirs * sizes[:, None]
        sub = 2.0 * sizes if regime.case is TheoremCase.EQUAL_RESTS else sizes
    else:
        dirs = np.zeros((len(times), path.dim))
        space = np.zeros((len(times), path.dim))
        sub = sizes
        s_times, s_sizes = _segment(regime.alpha, path.epsilon, start, stop, rng)
        s_dirs = sample_direction(spectral, rng, len(s_times)).reshape(len(s_times), path.dim)
        path.space_times = np.concatenate([path.space_times, s_times])
        path.space_jumps = np.concatenate([path.space_jumps, s_dirs * s_sizes[:, None]])
    path.op_times = np.concatenate([path.op_times, times])
    path.sub_increments = np.concatenate([path.sub_increments, sub])
    path.directions = np.concatenate([path.directions, dirs])
    path.space_increments = np.concatenate([path.space_increments, space])
    path.op_horizon = float(stop)
    path._cache.clear()


def simulate_jump_series(
    regime: LimitRegime,
    spectral: SpectralMeasure,
    epsilon: float,
    op_horizon: float,
    rng: RngStream,
) -> JumpSeriesPath:
    """Compound-Poisson jumps above ``epsilon`` plus small-jump drift.

    Coupled regimes: each subordinator jump ``w`` comes with a space jump
    ``u w`` (``w`` doubled on the subordinator side for equal rests).
    Independent regime: the space process gets its own Poisson series.
    """
    if not 0 < epsilon <= 0.01:
        raise ValueError(f"epsilon must lie in (0, 0.01], got {epsilon}")
    if not op_horizon > 0:
        raise ValueError("op_horizon must be positive")
    d = spectral.dim
    mean_u = np.asarray(spectral.mean_direction(), dtype=float)
    sub_drift = small_jump_mean(regime.sub_index, epsilon)
    if regime.case is TheoremCase.EQUAL_RESTS:
        space_drift = sub_drift * mean_u
        sub_drift *= 2.0
    elif regime.case is TheoremCase.COUPLED:
        space_drift = sub_drift * mean_u
    else:
        space_drift = small_jump_mean(regime.alpha, epsilon) * mean_u
    empty = np.zeros((0, d))
    path = JumpSeriesPath(
        regime=regime,
        dim=d,
        epsilon=float(epsilon),
        op_horizon=0.0,
        op_times=np.zeros(0),
        sub_increments=np.zeros(0),
        directions=empty,
        space_increments=empty,
        drift_rate=sub_drift,
        space_drift=space_drift,
        space_times=None if regime.coupled else np.zeros(0),
        space_jumps=None if regime.coupled else empty,
    )
    _append(path, spectral, float(op_horizon), rng)
    return path


def extend_jump_series(path: JumpSeriesPath, spectral: SpectralMeasure, op_horizon: float, rng: RngStream) -> JumpSeriesPath:
    """Continue ``path`` onto ``(path.op_horizon, op_horizon]`` in place."""
    if op_horizon > path.op_horizon:
        _append(path, spectral, op_horizon, rng)
    return path


def subordinator_value(path: JumpSeriesPath, tau: float) -> float:
    """``S(tau) = drift * tau + sum of jumps with op_time <= tau``."""
    if tau < 0 or tau > path.op_horizon:
        raise HorizonExceeded(f"tau = {tau!r} outside [0, {path.op_horizon!r}]")
    k = int(np.searchsorted(path.op_times, tau, side="right"))
    jumps = float(np.sum(path.sub_increments[:k])) if k else 0.0
    return path.drift_rate * tau + jumps


def subordinator_left_limit(path: JumpSeriesPath, tau: float) -> float:
    """``S(tau-)``, jumps strictly before ``tau`` only."""
    if tau < 0 or tau > path.op_horizon:
        raise HorizonExceeded(f"tau = {tau!r} outside [0, {path.op_horizon!r}]")
    k = int(np.searchsorted(path.op_times, tau, side="left"))
    jumps = float(np.sum(path.sub_increments[:k])) if k else 0.0
    return path.drift_rate * tau + jumps


@dataclass(frozen=True)
class FirstPassage:
    op_time: float
    in_flight: Optional[int]


def inverse_subordinator(path: JumpSeriesPath, t: float) -> FirstPassage:
    """First passage ``inf{tau >= 0 : S(tau) > t}``.

    ``in_flight`` is the index of the jump that carries S across ``t``, or
    None when the drift does.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    post = path.level_after
    k = int(np.searchsorted(post, t, side="right"))
    if k < len(post):
        pre = post[k] - path.sub_increments[k]
        if pre <= t:
            return FirstPassage(float(path.op_times[k]), k)
    completed = float(np.sum(path.sub_increments[:k])) if k else 0.0
    if path.drift_rate <= 0:
        raise HorizonExceeded(f"S(op_horizon) does not exceed {t!r}")
    tau = (t - completed) / path.drift_rate
    if k == len(post) and tau >= path.op_horizon:
        raise HorizonExceeded(f"S(op_horizon) does not exceed {t!r}")
    return FirstPassage(float(tau), None)


class LimitKind(enum.Enum):
    WAIT_FIRST = "wait_first"
    JUMP_FIRST = "jump_first"


@dataclass(frozen=True)
class LimitMarginalRequest:
    t: float
    which: LimitKind

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("physical time must be positive")


def _space_at(path: JumpSeriesPath, tau: float, inclusive: bool) -> np.ndarray:
    side = "right" if inclusive else "left"
    k = int(np.searchsorted(path.space_times_all, tau, side=side))
    return path.space_drift * tau + path.space_cumsum[k]


def limit_marginal(path: JumpSeriesPath, req: LimitMarginalRequest) -> np.ndarray:
    """Space process evaluated at the first passage over ``req.t``.

    Jump-first includes the in-flight jump, ``L(S^{-1}(t))``. Wait-first
    uses the left limit ``L^-(S^{-1}(t))``; levels hit exactly by a jump
    are passed only after it, so completed jumps are included.
    """
    passage = inverse_subordinator(path, req.t)
    return _space_at(path, passage.op_time, inclusive=req.which is LimitKind.JUMP_FIRST)


def limit_marginals(path: JumpSeriesPath, times: Iterable[float]) -> tuple[np.ndarray, np.ndarray]:
    """Wait-first and jump-first marginals for each time on one path."""
    wf, jf = [], []
    for t in times:
        passage = inverse_subordinator(path, t)
        wf.append(_space_at(path, passage.op_time, inclusive=False))
        jf.append(_space_at(path, passage.op_time, inclusive=True))
    return np.array(wf), np.array(jf)


def initial_op_horizon(regime: LimitRegime, level: float) -> float:
    a = regime.sub_index
    if regime.case is TheoremCase.EQUAL_RESTS:
        level = level / 2.0
    return max(2.0 * level**a / math.gamma(1.0 + a), 0.25)


def simulate_until(
    regime: LimitRegime,
    spectral: SpectralMeasure,
    level: float,
    rng: RngStream,
    epsilon: float = DEFAULT_EPSILON,
) -> JumpSeriesPath:
    """Simulate, doubling the operational horizon, until ``S`` exceeds
    ``level``. The path is extended rather than redrawn so no conditioning
    bias enters."""
    path = simulate_jump_series(regime, spectral, epsilon, initial_op_horizon(regime, level), rng)
    while path.drift_rate * path.op_horizon + path.sub_increments.sum() <= level:
        extend_jump_series(path, spectral, 2.0 * path.op_horizon, rng)
    return path


def wait_first_cone_check(path: JumpSeriesPath, t: float) -> bool:
    """Whether ``|L^-(S^{-1}(t))| <= t`` (``t/2`` for equal rests).

    The bound only holds for coupled regimes; for the independent regime
    the check is vacuous and returns True (``path.regime.coupled`` tells
    the two apart).
    """
    if not path.regime.coupled:
        return True
    value = limit_marginal(path, LimitMarginalRequest(t, LimitKind.WAIT_FIRST))
    bound = t / 2.0 if path.regime.case is TheoremCase.EQUAL_RESTS else t
    return bool(np.linalg.norm(value) <= bound * (1.0 + 1e-12))


def path_to_jsonl(path: JumpSeriesPath) -> str:
    """One header line, then one JSON object per jump."""
    reg = path.regime
    header = {
        "record": "header",
        "regime": _CASE_NAMES[reg.case],
        "alpha": reg.alpha,
        "beta": reg.beta,
        "dim": path.dim,
        "epsilon": path.epsilon,
        "op_horizon": path.op_horizon,
        "drift_rate": path.drift_rate,
        "space_drift": list(map(float, path.space_drift)),
    }
    lines = [_dumps(header)]
    for k in range(len(path.op_times)):
        lines.append(
            _dumps(
                {
                    "record": "jump",
                    "series": "subordinator" if not reg.coupled else "coupled",
                    "op_time": path.op_times[k],
                    "sub_increment": path.sub_increments[k],
                    "direction": list(path.directions[k]),
                    "space_increment": list(path.space_increments[k]),
                }
            )
        )
    if not reg.coupled:
        for tau, jump in zip(path.space_times, path.space_jumps):
            lines.append(
                _dumps({"record": "jump", "series": "space", "op_time": tau, "sub_increment": 0.0, "space_increment": list(jump)})
            )
    return "\n".join(lines) + "\n"


def path_from_jsonl(text: str) -> JumpSeriesPath:
    records = [json.loads(line) for line in text.splitlines() if line.strip()]
    head = records[0]
    case = {v: k for k, v in _CASE_NAMES.items()}[head["regime"]]
    regime = LimitRegime(case, head["alpha"], head["beta"])
    d = head["dim"]
    sub = [r for r in records[1:] if r["series"] != "space"]
    space = [r for r in records[1:] if r["series"] == "space"]
    return JumpSeriesPath(
        regime=regime,
        dim=d,
        epsilon=head["epsilon"],
        op_horizon=head["op_horizon"],
        op_times=np.array([r["op_time"] for r in sub], dtype=float),
        sub_increments=np.array([r["sub_increment"] for r in sub], dtype=float),
        directions=np.array([r["direction"] for r in sub], dtype=float).reshape(-1, d),
        space_increments=np.array([r["space_increment"] for r in sub], dtype=float).reshape(-1, d),
        drift_rate=head["drift_rate"],
        space_drift=np.array(head["space_drift"], dtype=float),
        space_times=None if regime.coupled else np.array([r["op_time"] for r in space], dtype=float),
        space_jumps=None if regime.coupled else np.array([r["space_increment"] for r in space], dtype=float).reshape(-1, d),
    )
