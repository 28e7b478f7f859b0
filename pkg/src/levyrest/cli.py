"""Command line: ``levyrest {simulate,limit,converge,validate} --config PATH``.

Every output is a pure function of the configuration (after ``--seed``,
``--threads`` and ``--out`` overrides); the thread count never changes a
byte of it.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, check_config_scaling, load_config
from .ensemble import LANE_HILL, LimitJob, WalkJob, limit_ensemble, walk_ensemble
from .io import dumps17, fmt
from .limit import LimitRegime
from .sampling import derive_stream
from .stats import default_hill_k, hill_estimator, ks_two_sample
from .walk import IndependentRests, Order, ScalingSpec, generate_steps

MONOTONE_SLACK = 0.01
HILL_CYCLE_SAMPLES = 100_000

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def _order_axis(cfg: RunConfig) -> int:
    return 0 if cfg.kind.order is Order.WAIT_FIRST else 1


def write_positions_csv(path, times, positions: np.ndarray) -> None:
    """Rows ``path_id, t, x_1..x_d``; ``positions`` is ``(paths, times, dim)``."""
    d = positions.shape[2]
    header = ",".join(["path_id", "t"] + [f"x_{i + 1}" for i in range(d)])
    tcol = [fmt(t) for t in times]
    lines = [header]
    for pid, block in enumerate(positions):
        for j, row in enumerate(block):
            lines.append(f"{pid},{tcol[j]}," + ",".join(fmt(c) for c in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _scaling(cfg: RunConfig) -> ScalingSpec:
    check_config_scaling(cfg)
    return cfg.scaling if cfg.scaling is not None else ScalingSpec.for_coupling(cfg.coupling, 1.0)


def cmd_simulate(cfg: RunConfig, plot: bool = False) -> Path:
    job = WalkJob(cfg.params, cfg.kind.with_rests, _scaling(cfg), cfg.time_grid, cfg.seed)
    both = walk_ensemble(job, cfg.ensemble_size, cfg.worker_count)
    positions = both[:, _order_axis(cfg)]
    out = Path(cfg.output_path)
    write_positions_csv(out, cfg.time_grid, positions)
    if plot:
        from .plotting import figure_path, plot_marginals

        plot_marginals(cfg.time_grid, positions, figure_path(out), title=f"{cfg.kind.label} walk")
    return out


def _limit_positions(cfg: RunConfig) -> np.ndarray:
    regime = LimitRegime.from_coupling(cfg.coupling)
    job = LimitJob(regime, cfg.params.spectral, cfg.time_grid, cfg.seed, cfg.epsilon)
    return limit_ensemble(job, cfg.ensemble_size, cfg.worker_count)


def cmd_limit(cfg: RunConfig, plot: bool = False) -> Path:
    check_config_scaling(cfg)
    positions = _limit_positions(cfg)[:, _order_axis(cfg)]
    out = Path(cfg.output_path)
    write_positions_csv(out, cfg.time_grid, positions)
    if plot:
        from .plotting import figure_path, plot_marginals

        plot_marginals(cfg.time_grid, positions, figure_path(out), title=f"{cfg.kind.order.value} limit")
    return out


def converge_report(cfg: RunConfig) -> dict:
    if cfg.n_ladder is None:
        raise ConfigError("n_ladder", "converge needs a strictly increasing n_ladder")
    check_config_scaling(cfg)
    coupling = cfg.coupling
    regime = LimitRegime.from_coupling(coupling)
    limit = _limit_positions(cfg)
    kinds = (Order.WAIT_FIRST.value, Order.JUMP_FIRST.value)
    entries = []
    hill_marginal = []
    for n in cfg.n_ladder:
        spec = ScalingSpec.for_coupling(coupling, n)
        # same walk streams on every rung: common random numbers across n
        job = WalkJob(cfg.params, cfg.kind.with_rests, spec, cfg.time_grid, cfg.seed)
        walk = walk_ensemble(job, cfg.ensemble_size, cfg.worker_count)
        for axis, kind in enumerate(kinds):
            for j, t in enumerate(cfg.time_grid):
                w = walk[:, axis, j]
                lim = limit[:, axis, j]
                entries.append(
                    {
                        "n": n,
                        "t": t,
                        "kind": kind,
                        "ks": ks_two_sample(w[:, 0], lim[:, 0]).statistic,
                        "ks_norm": ks_two_sample(np.linalg.norm(w, axis=1), np.linalg.norm(lim, axis=1)).statistic,
                        "space_exponent": spec.space_exponent,
                        "time_exponent": spec.time_exponent,
                    }
                )
        norms = np.linalg.norm(walk[:, 1, -1], axis=1)
        norms = norms[norms > 0]
        est = hill_estimator(norms) if len(norms) > 1 else None
        hill_marginal.append({"n": n, "t": cfg.time_grid[-1], "index_hat": None if est is None else est.index_hat, "k": None if est is None else est.k})

    monotone = None
    if len(cfg.n_ladder) > 1:
        monotone = []
        for kind in kinds:
            for t in cfg.time_grid:
                seq = [e["ks"] for e in entries if e["kind"] == kind and e["t"] == t]
                ok = all(b <= a + MONOTONE_SLACK for a, b in zip(seq, seq[1:]))
                monotone.append({"kind": kind, "t": t, "non_increasing_within_slack": ok, "slack": MONOTONE_SLACK})

    steps = generate_steps(cfg.params, HILL_CYCLE_SAMPLES, derive_stream(cfg.seed, 0, LANE_HILL))
    cycles = steps.durations(cfg.kind.with_rests)
    cycle_est = hill_estimator(cycles)
    wait_index = coupling.wait_law.index
    expected_cycle = min(wait_index, coupling.rest_law.index) if isinstance(coupling, IndependentRests) else wait_index

    return {
        "schema_version": 1,
        "case": regime.case.value,
        "alpha": regime.alpha,
        "beta": regime.beta,
        "ensemble_size": cfg.ensemble_size,
        "n_ladder": list(cfg.n_ladder),
        "time_grid": list(cfg.time_grid),
        "entries": entries,
        "monotone": monotone,
        "hill": {
            "cycle_duration": {
                "index_hat": cycle_est.index_hat,
                "expected": expected_cycle,
                "k": cycle_est.k,
                "samples": HILL_CYCLE_SAMPLES,
                "default_k": default_hill_k(HILL_CYCLE_SAMPLES),
            },
            "jump_first_norm": hill_marginal,
        },
    }


def cmd_converge(cfg: RunConfig, plot: bool = False) -> Path:
    report = converge_report(cfg)
    out = Path(cfg.output_path)
    out.write_text(dumps17(report, indent=2) + "\n")
    if plot:
        from .plotting import figure_path, plot_convergence

        plot_convergence(report, figure_path(out))
    return out


def cmd_validate(cfg: RunConfig, plot: bool = False) -> tuple[Path, bool]:
    from .validation import run_validation

    checks = run_validation(cfg)
    passed = all(c.passed for c in checks)
    for c in checks:
        print(c.line())
    out = Path(cfg.output_path)
    out.write_text(dumps17({"schema_version": 1, "passed": passed, "checks": [c.to_dict() for c in checks]}, indent=2) + "\n")
    return out, passed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="levyrest", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("simulate", "sample (scaled) walk marginals on the time grid"),
        ("limit", "sample limit-process marginals on the time grid"),
        ("converge", "KS distances between walk and limit over an n-ladder"),
        ("validate", "run the invariant and oracle checks"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--seed", type=int, help="override the configured seed")
        p.add_argument("--threads", help="worker processes (integer or 'auto')")
        p.add_argument("--out", help="override the configured output path")
        p.add_argument("--plot", action="store_true", help="also write a PNG figure next to the output")
    return parser


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.threads is not None:
        if args.threads == "auto":
            changes["threads"] = "auto"
        else:
            try:
                threads = int(args.threads)
            except ValueError:
                raise ConfigError("threads", f"expected an integer or 'auto', got {args.threads!r}") from None
            if threads < 1:
                raise ConfigError("threads", "must be >= 1")
            changes["threads"] = threads
    if args.out is not None:
        changes["output_path"] = args.out
    return dataclasses.replace(cfg, **changes)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        if args.command == "validate":
            out, passed = cmd_validate(cfg, args.plot)
            print(f"validation {'passed' if passed else 'FAILED'}; report written to {out}")
            return EXIT_OK if passed else EXIT_FAILED
        command = {"simulate": cmd_simulate, "limit": cmd_limit, "converge": cmd_converge}[args.command]
        out = command(cfg, args.plot)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    print(f"wrote {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
