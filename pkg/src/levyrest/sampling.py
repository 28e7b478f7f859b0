"""Seedable variate generation: Pareto waiting times, one-sided stable
variates and jump directions drawn from a spectral measure."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

ATOM_TOL = 1e-12


@dataclass(frozen=True)
class TailLaw:
    """Exact Pareto law ``P(T > t) = (floor / t) ** index`` for ``t >= floor``.

    The tail constant ``lim t^index P(T > t)`` is therefore ``floor ** index``.
    """

    index: float
    floor: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.index < 1.0:
            raise ValueError(f"tail index must lie in (0, 1), got {self.index}")
        if not self.floor > 0.0:
            raise ValueError(f"floor must be positive, got {self.floor}")

    @property
    def tail_constant(self) -> float:
        return self.floor**self.index

    @classmethod
    def with_tail_constant(cls, index: float, tail_constant: float) -> "TailLaw":
        if not tail_constant > 0.0:
            raise ValueError(f"tail constant must be positive, got {tail_constant}")
        return cls(index, tail_constant ** (1.0 / index))

    @classmethod
    def normalized(cls, index: float) -> "TailLaw":
        """Pareto law whose tail constant is ``1 / Gamma(1 - index)``.

        With this constant the partial sums ``n^{-1/index} sum T_i`` converge
        to the stable subordinator with Laplace exponent ``s ** index``.
        """
        return cls.with_tail_constant(index, 1.0 / math.gamma(1.0 - index))

    def survival(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t < self.floor, 1.0, (self.floor / np.maximum(t, self.floor)) ** self.index)

    def inverse_survival(self, u):
        """Map ``u`` in (0, 1] to ``floor * u ** (-1 / index)``."""
        return self.floor * np.asarray(u, dtype=float) ** (-1.0 / self.index)


@dataclass(frozen=True)
class DiscreteAtoms:
    """Spectral measure with finitely many atoms on the unit sphere."""

    directions: tuple[tuple[float, ...], ...]
    probabilities: tuple[float, ...]

    def __post_init__(self):
        dirs = np.asarray(self.directions, dtype=float)
        probs = np.asarray(self.probabilities, dtype=float)
        if dirs.ndim != 2 or dirs.shape[0] == 0 or dirs.shape[1] < 1:
            raise ValueError("atoms must be a non-empty list of d-vectors, d >= 1")
        if probs.shape != (dirs.shape[0],):
            raise ValueError("need exactly one probability per atom")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > ATOM_TOL:
            raise ValueError(f"atom probabilities must be non-negative and sum to 1, got {probs.sum()!r}")
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(np.abs(norms - 1.0) > ATOM_TOL):
            raise ValueError("every atom must be a unit vector")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[Sequence[float], float]]) -> "DiscreteAtoms":
        return cls(
            tuple(tuple(float(c) for c in np.atleast_1d(u)) for u, _ in pairs),
            tuple(float(p) for _, p in pairs),
        )

    @classmethod
    def symmetric_1d(cls) -> "DiscreteAtoms":
        return cls(((1.0,), (-1.0,)), (0.5, 0.5))

    @property
    def dim(self) -> int:
        return len(self.directions[0])

    def mean_direction(self) -> np.ndarray:
        return np.asarray(self.probabilities) @ np.asarray(self.directions, dtype=float)


@dataclass(frozen=True)
class UniformSphere:
    """Uniform law on the unit sphere of R^dim."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")

    def mean_direction(self) -> np.ndarray:
        return np.zeros(self.dim)


SpectralMeasure = Union[DiscreteAtoms, UniformSphere]


@dataclass
class RngStream:
    """A named, reproducible random stream.

    The stream is keyed by ``(root_seed, lane, stream_index, sub)``; the
    underlying bit generator is Philox (counter based) seeded through
    :class:`numpy.random.SeedSequence`, so any stream can be rebuilt in
    isolation regardless of which other streams exist.
    """

    root_seed: int
    stream_index: int
    lane: int = 0
    sub: tuple[int, ...] = ()
    generator: np.random.Generator = field(init=False, repr=False, compare=False)
    _children: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if self.stream_index < 0 or self.lane < 0:
            raise ValueError("stream index and lane must be non-negative")
        seq = np.random.SeedSequence(
            entropy=int(self.root_seed) & 0xFFFFFFFFFFFFFFFF,
            spawn_key=(int(self.lane), int(self.stream_index)) + tuple(self.sub),
        )
        self.generator = np.random.Generator(np.random.Philox(seq))

    def child(self, j: int) -> "RngStream":
        """Independent sub-stream ``j``; repeated calls return the same
        (stateful) object so consumption continues where it stopped."""
        if j not in self._children:
            self._children[j] = RngStream(self.root_seed, self.stream_index, self.lane, self.sub + (j,))
        return self._children[j]

    def uniform_open_closed(self, size=None):
        """Uniform variates on (0, 1]."""
        return 1.0 - self.generator.random(size)


def derive_stream(root_seed: int, index: int, lane: int = 0) -> RngStream:
    """Build stream ``index`` of namespace ``lane`` under ``root_seed``."""
    return RngStream(root_seed, index, lane)


def sample_waiting_time(law: TailLaw, rng: RngStream, size=None):
    """Draw Pareto waiting times by inverse CDF."""
    return law.inverse_survival(rng.uniform_open_closed(size))


def one_sided_stable_from_uniforms(index: float, angle, expo):
    """Kanter's representation of a positive stable variate.

    ``angle`` is uniform on (0, pi), ``expo`` is standard exponential. The
    result has Laplace transform ``exp(-s ** index)``.
    """
    a = index
    angle = np.asarray(angle, dtype=float)
    expo = np.asarray(expo, dtype=float)
    head = np.sin(a * angle) / np.sin(angle) ** (1.0 / a)
    tail = (np.sin((1.0 - a) * angle) / expo) ** ((1.0 - a) / a)
    return head * tail


def sample_one_sided_stable(index: float, rng: RngStream, size=None):
    if not 0.0 < index < 1.0:
        raise ValueError(f"stable index must lie in (0, 1), got {index}")
    gen = rng.generator
    # angle strictly inside (0, pi): sin(angle) = 0 would give inf/nan
    angle = math.pi * (1.0 - gen.random(size))
    angle = np.where(angle >= math.pi, math.nextafter(math.pi, 0.0), angle)
    expo = gen.standard_exponential(size)
    out = one_sided_stable_from_uniforms(index, angle, expo)
    return float(out) if size is None else out


def sample_direction(measure: SpectralMeasure, rng: RngStream, size=None) -> np.ndarray:
    """Unit vectors of shape ``(dim,)`` or ``(size, dim)``."""
    gen = rng.generator
    count = 1 if size is None else int(size)
    if isinstance(measure, DiscreteAtoms):
        dirs = np.asarray(measure.directions, dtype=float)
        if len(dirs) == 1:
            out = np.repeat(dirs, count, axis=0)
        else:
            cdf = np.cumsum(measure.probabilities)
            cdf[-1] = 1.0
            picks = np.searchsorted(cdf, gen.random(count), side="right")
            out = dirs[picks]
    elif isinstance(measure, UniformSphere):
        if measure.dim == 1:
            out = np.where(gen.random(count) < 0.5, 1.0, -1.0)[:, None]
        else:
            g = gen.standard_normal((count, measure.dim))
            out = g / np.linalg.norm(g, axis=1, keepdims=True)
    else:
        raise TypeError(f"unsupported spectral measure {measure!r}")
    return out[0] if size is None else out
