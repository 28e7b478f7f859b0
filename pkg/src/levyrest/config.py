"""Run configuration: a schema-versioned JSON document.

Example::

    {
      "schema_version": 1,
      "model": {
        "v0": 1.0,
        "dim": 1,
        "spectral": {"type": "atoms", "atoms": [
            {"direction": [1.0], "probability": 0.5},
            {"direction": [-1.0], "probability": 0.5}]},
        "coupling": {"type": "independent_rests",
                     "wait": {"index": 0.5, "floor": 1.0},
                     "rest": {"index": 0.8, "floor": 1.0}},
        "order": "wait_first",
        "with_rests": true
      },
      "scaling": {"n": 100, "space_exponent": 2.0, "time_exponent": 2.0},
      "ensemble_size": 1000,
      "time_grid": [0.5, 1.0],
      "seed": 42,
      "output_path": "out.csv",
      "threads": "auto"
    }

Optional keys: ``n_ladder`` (converge), ``epsilon`` (limit truncation),
``validation`` (sample sizes for the validate subcommand).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .errors import ScalingMismatch, UnsupportedCoupling
from .limit import DEFAULT_EPSILON
from .sampling import DiscreteAtoms, TailLaw, UniformSphere
from .walk import (
    EqualRests,
    IndependentRests,
    NoRests,
    Order,
    ScalingSpec,
    WalkKind,
    WalkParams,
    check_scaling,
    effective_coupling,
)

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class ValidationSizes:
    hill_samples: int = 1_000_000
    hill_k: int = 2000
    limit_paths: int = 100_000
    pathwise_instances: int = 10_000


@dataclass(frozen=True)
class RunConfig:
    params: WalkParams
    kind: WalkKind
    scaling: Optional[ScalingSpec]
    ensemble_size: int
    time_grid: tuple[float, ...]
    seed: int
    output_path: str
    threads: Union[int, str] = 1
    n_ladder: Optional[tuple[float, ...]] = None
    epsilon: float = DEFAULT_EPSILON
    validation: ValidationSizes = field(default_factory=ValidationSizes)

    @property
    def worker_count(self) -> int:
        if self.threads == "auto":
            return os.cpu_count() or 1
        return int(self.threads)

    @property
    def coupling(self):
        return effective_coupling(self.params.coupling, self.kind.with_rests)


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ConfigError(f"{where}.{key}" if where else key, "missing required field")
    return obj[key]


def _number(value, name: str, positive: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(name, f"expected a finite number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(name, f"must be positive, got {value!r}")
    return float(value)


def _integer(value, name: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(name, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(name, f"must be >= {minimum}, got {value!r}")
    return value


def _tail_law(obj, name: str) -> TailLaw:
    if not isinstance(obj, dict):
        raise ConfigError(name, "expected an object with 'index' and one of 'floor', 'tail_constant', 'normalized'")
    index = _number(_require(obj, "index", name), f"{name}.index")
    given = [k for k in ("floor", "tail_constant", "normalized") if k in obj]
    if len(given) > 1:
        raise ConfigError(name, f"give at most one of floor / tail_constant / normalized, got {given}")
    try:
        if obj.get("normalized") is True:
            return TailLaw.normalized(index)
        if "normalized" in obj:
            raise ConfigError(f"{name}.normalized", "only the value true is accepted")
        if "tail_constant" in obj:
            return TailLaw.with_tail_constant(index, _number(obj["tail_constant"], f"{name}.tail_constant"))
        return TailLaw(index, _number(obj.get("floor", 1.0), f"{name}.floor"))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(name, str(exc)) from None


def _spectral(obj, dim: int):
    name = "model.spectral"
    if not isinstance(obj, dict):
        raise ConfigError(name, "expected an object")
    kind = _require(obj, "type", name)
    try:
        if kind == "atoms":
            atoms = _require(obj, "atoms", name)
            if not isinstance(atoms, list) or not atoms:
                raise ConfigError(f"{name}.atoms", "expected a non-empty list")
            pairs = []
            for i, atom in enumerate(atoms):
                where = f"{name}.atoms[{i}]"
                direction = _require(atom, "direction", where)
                prob = _number(_require(atom, "probability", where), f"{where}.probability")
                if not isinstance(direction, list) or len(direction) != dim:
                    raise ConfigError(f"{where}.direction", f"expected a list of {dim} numbers")
                pairs.append(([_number(c, f"{where}.direction") for c in direction], prob))
            return DiscreteAtoms.from_pairs(pairs)
        if kind == "uniform_sphere":
            return UniformSphere(dim)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(name, str(exc)) from None
    raise ConfigError(f"{name}.type", f"unknown spectral type {kind!r} (atoms | uniform_sphere)")


def _coupling(obj):
    name = "model.coupling"
    if not isinstance(obj, dict):
        raise ConfigError(name, "expected an object")
    kind = _require(obj, "type", name)
    wait = _tail_law(_require(obj, "wait", name), f"{name}.wait")
    if kind == "independent_rests":
        rest = _tail_law(_require(obj, "rest", name), f"{name}.rest")
        try:
            return IndependentRests(wait, rest)
        except UnsupportedCoupling as exc:
            raise ConfigError(name, str(exc)) from None
    if kind == "equal_rests":
        return EqualRests(wait)
    if kind == "no_rests":
        return NoRests(wait)
    raise ConfigError(f"{name}.type", f"unknown coupling {kind!r} (independent_rests | equal_rests | no_rests)")


def parse_config(doc: dict[str, Any]) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "expected a JSON object")
    version = _require(doc, "schema_version", "")
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"unsupported version {version!r}, expected {SCHEMA_VERSION}")
    model = _require(doc, "model", "")
    if not isinstance(model, dict):
        raise ConfigError("model", "expected an object")
    dim = _integer(model.get("dim", 1), "model.dim", 1)
    v0 = _number(model.get("v0", 1.0), "model.v0", positive=True)
    spectral = _spectral(_require(model, "spectral", "model"), dim)
    coupling = _coupling(_require(model, "coupling", "model"))
    try:
        order = Order(model.get("order", "wait_first"))
    except ValueError:
        raise ConfigError("model.order", f"expected wait_first or jump_first, got {model.get('order')!r}") from None
    with_rests = model.get("with_rests", not isinstance(coupling, NoRests))
    if not isinstance(with_rests, bool):
        raise ConfigError("model.with_rests", "expected true or false")
    params = WalkParams(spectral, coupling, v0=v0, dim=dim)
    kind = WalkKind(order, with_rests)

    scaling = None
    raw_scaling = doc.get("scaling")
    if raw_scaling is not None:
        if not isinstance(raw_scaling, dict):
            raise ConfigError("scaling", "expected an object or null")
        n = _number(_require(raw_scaling, "n", "scaling"), "scaling.n")
        if n < 1:
            raise ConfigError("scaling.n", f"must be >= 1, got {n!r}")
        scaling = ScalingSpec(
            n,
            _number(_require(raw_scaling, "space_exponent", "scaling"), "scaling.space_exponent"),
            _number(_require(raw_scaling, "time_exponent", "scaling"), "scaling.time_exponent"),
        )

    ensemble = _integer(_require(doc, "ensemble_size", ""), "ensemble_size", 1)
    grid = _require(doc, "time_grid", "")
    if not isinstance(grid, list) or not grid:
        raise ConfigError("time_grid", "expected a non-empty list of positive times")
    grid = tuple(_number(t, "time_grid", positive=True) for t in grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("time_grid", "times must be strictly increasing")
    seed = _integer(_require(doc, "seed", ""), "seed")
    if not -(2**63) <= seed < 2**64:
        raise ConfigError("seed", "must fit in 64 bits")
    output = _require(doc, "output_path", "")
    if not isinstance(output, str) or not output:
        raise ConfigError("output_path", "expected a non-empty string")
    threads = doc.get("threads", 1)
    if threads != "auto":
        threads = _integer(threads, "threads", 1)

    ladder = doc.get("n_ladder")
    if ladder is not None:
        if not isinstance(ladder, list) or not ladder:
            raise ConfigError("n_ladder", "expected a non-empty list")
        ladder = tuple(_number(n, "n_ladder", positive=True) for n in ladder)
        if any(n < 1 for n in ladder):
            raise ConfigError("n_ladder", "scale parameters must be >= 1")
        if any(b <= a for a, b in zip(ladder, ladder[1:])):
            raise ConfigError("n_ladder", "must be strictly increasing")
    epsilon = _number(doc.get("epsilon", DEFAULT_EPSILON), "epsilon", positive=True)
    if epsilon > 0.01:
        raise ConfigError("epsilon", f"must be <= 0.01, got {epsilon!r}")

    sizes = ValidationSizes()
    raw_val = doc.get("validation")
    if raw_val is not None:
        if not isinstance(raw_val, dict):
            raise ConfigError("validation", "expected an object")
        unknown = set(raw_val) - set(ValidationSizes.__dataclass_fields__)
        if unknown:
            raise ConfigError("validation", f"unknown keys {sorted(unknown)}")
        sizes = ValidationSizes(**{k: _integer(v, f"validation.{k}", 1) for k, v in raw_val.items()})

    return RunConfig(
        params=params,
        kind=kind,
        scaling=scaling,
        ensemble_size=ensemble,
        time_grid=grid,
        seed=seed,
        output_path=output,
        threads=threads,
        n_ladder=ladder,
        epsilon=epsilon,
        validation=sizes,
    )


def check_config_scaling(cfg: RunConfig) -> None:
    """Raise ConfigError when the scaling block breaks the case table."""
    if cfg.scaling is None:
        return
    try:
        check_scaling(cfg.scaling, cfg.coupling)
    except ScalingMismatch as exc:
        raise ConfigError("scaling", str(exc)) from None


def _law_dict(law: TailLaw) -> dict:
    return {"index": law.index, "floor": law.floor}


def config_to_dict(cfg: RunConfig) -> dict[str, Any]:
    p = cfg.params
    if isinstance(p.spectral, DiscreteAtoms):
        spectral = {
            "type": "atoms",
            "atoms": [
                {"direction": list(u), "probability": q}
                for u, q in zip(p.spectral.directions, p.spectral.probabilities)
            ],
        }
    else:
        spectral = {"type": "uniform_sphere"}
    c = p.coupling
    if isinstance(c, IndependentRests):
        coupling = {"type": "independent_rests", "wait": _law_dict(c.wait_law), "rest": _law_dict(c.rest_law)}
    elif isinstance(c, EqualRests):
        coupling = {"type": "equal_rests", "wait": _law_dict(c.wait_law)}
    else:
        coupling = {"type": "no_rests", "wait": _law_dict(c.wait_law)}
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "model": {
            "v0": p.v0,
            "dim": p.dim,
            "spectral": spectral,
            "coupling": coupling,
            "order": cfg.kind.order.value,
            "with_rests": cfg.kind.with_rests,
        },
        "scaling": None
        if cfg.scaling is None
        else {
            "n": cfg.scaling.n,
            "space_exponent": cfg.scaling.space_exponent,
            "time_exponent": cfg.scaling.time_exponent,
        },
        "ensemble_size": cfg.ensemble_size,
        "time_grid": list(cfg.time_grid),
        "seed": cfg.seed,
        "output_path": cfg.output_path,
        "threads": cfg.threads,
        "epsilon": cfg.epsilon,
        "validation": {k: getattr(cfg.validation, k) for k in ValidationSizes.__dataclass_fields__},
    }
    if cfg.n_ladder is not None:
        doc["n_ladder"] = list(cfg.n_ladder)
    return doc


def load_config(path) -> RunConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"not valid JSON: {exc}") from None
    return parse_config(doc)


def dump_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2) + "\n"
