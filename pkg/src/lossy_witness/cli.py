"""Command-line sweeps writing CSV.

Subcommands: fig1, fig2, bell-overlap, witness, oracle-check. A JSON config
(``--config``) supplies any field of ``SweepConfig``; flags override it.
Ranges are given as ``START STOP COUNT`` (linear) or a single value; in JSON
also as ``{"values": [...]}``.

Exit codes: 0 success, 2 bad config or arguments, 3 oracle deviation above
tolerance, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from functools import partial
from itertools import product
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import gaussian as gs
from . import oracle, qudit
from .core import partial_trace, purity
from .random_states import (
    haar_pure,
    hilbert_schmidt_mixed,
    isotropic,
    maximally_entangled,
    random_separable,
)
from .witness import DegenerateProjectionError

OUT_DIR_ENV = "LOSSY_WITNESS_OUT_DIR"
ORACLE_TOL = 1e-5

EXIT_OK, EXIT_CONFIG, EXIT_ACCEPTANCE, EXIT_IO = 0, 2, 3, 4

MODES = ("qudit-witness", "cv-witness", "bell-overlap", "fig1", "fig2", "oracle-check")
QUDIT_INPUTS = ("isotropic", "max-entangled", "random-pure", "random-mixed", "random-separable")
RANGE_FIELDS = ("d", "p", "sigma", "Sigma", "Gamma")

STANDARD_WIDTHS = {"values": [0.25 * k for k in range(1, 13)]}
STANDARD_GAMMAS = {"values": [0.25, 0.5, 1.0, 2.0, 4.0]}

DEFAULT_RANGES: dict[str, dict[str, Any]] = {
    "fig1": {"sigma": STANDARD_WIDTHS, "Sigma": STANDARD_WIDTHS},
    "fig2": {"Gamma": [0.05, 4.0, 80], "sigma": 2.0, "Sigma": 0.5},
    "bell-overlap": {"d": {"values": [2, 3, 4, 5, 8, 16, 32, 64, 128, 200, 256, 512, 1000, 2000]}},
    "cv-witness": {"sigma": STANDARD_WIDTHS, "Sigma": STANDARD_WIDTHS, "Gamma": STANDARD_GAMMAS},
    "qudit-witness": {"d": {"values": [2, 3, 4, 5, 6]}, "p": [0.0, 1.0, 11]},
    "oracle-check": {"sigma": STANDARD_WIDTHS, "Sigma": STANDARD_WIDTHS, "Gamma": STANDARD_GAMMAS},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Range:
    values: tuple[float, ...]

    @classmethod
    def parse(cls, name: str, spec) -> "Range":
        if isinstance(spec, dict):
            if set(spec) != {"values"}:
                raise ConfigError(f"{name}: expected {{'values': [...]}}, got keys {sorted(spec)}")
            vals = list(spec["values"])
        elif isinstance(spec, (list, tuple)):
            if len(spec) == 1:
                vals = [spec[0]]
            elif len(spec) == 3:
                start, stop, count = spec
                if int(count) != count or count < 1:
                    raise ConfigError(f"{name}: count must be an integer >= 1, got {count}")
                vals = np.linspace(float(start), float(stop), int(count)).tolist()
            else:
                raise ConfigError(f"{name}: give a value or START STOP COUNT, got {list(spec)}")
        else:
            vals = [spec]
        try:
            vals = [float(v) for v in vals]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{name}: non-numeric entry ({exc})") from None
        if not vals:
            raise ConfigError(f"{name}: empty range")
        return cls(tuple(vals))


@dataclass(frozen=True)
class SweepConfig:
    mode: str
    ranges: dict[str, Range] = field(default_factory=dict)
    seed: int = 0
    output_path: str | None = None
    qudit_input: str = "isotropic"
    samples: int = 1
    points_per_sigma: int = 4
    extent_sigmas: float = oracle.EXTENT_SIGMAS
    tolerance: float = ORACLE_TOL
    jobs: int = 1

    def values(self, name: str) -> tuple[float, ...]:
        return self.ranges[name].values

    def validate(self) -> "SweepConfig":
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; choose from {', '.join(MODES)}")
        if self.qudit_input not in QUDIT_INPUTS:
            raise ConfigError(f"unknown qudit input {self.qudit_input!r}; choose from {', '.join(QUDIT_INPUTS)}")
        for name in ("sigma", "Sigma", "Gamma"):
            if name in self.ranges and min(self.values(name)) <= 0:
                raise ConfigError(f"{name} values must be positive")
        if "d" in self.ranges:
            for d in self.values("d"):
                if d != int(d) or d < 2:
                    raise ConfigError(f"d values must be integers >= 2, got {d}")
        if "p" in self.ranges and not all(0 <= p <= 1 for p in self.values("p")):
            raise ConfigError("p values must lie in [0, 1]")
        if self.samples < 1 or self.jobs < 1 or self.points_per_sigma < 1:
            raise ConfigError("samples, jobs and points_per_sigma must be >= 1")
        if self.extent_sigmas <= 0 or self.tolerance <= 0:
            raise ConfigError("extent_sigmas and tolerance must be positive")
        missing = [k for k in DEFAULT_RANGES[self.mode] if k not in self.ranges]
        if missing:
            raise ConfigError(f"mode {self.mode} needs ranges for {', '.join(missing)}")
        return self


def build_config(mode: str, overrides: dict[str, Any] | None = None) -> SweepConfig:
    """Merge defaults for ``mode`` with a flat dict of overrides (JSON layout)."""
    overrides = dict(overrides or {})
    raw_ranges = dict(DEFAULT_RANGES.get(mode, {}))
    raw_ranges.update(overrides.pop("ranges", {}) or {})
    for name in RANGE_FIELDS:
        if name in overrides:
            raw_ranges[name] = overrides.pop(name)
    known = {f.name for f in fields(SweepConfig)} - {"mode", "ranges"}
    unknown = set(overrides) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {', '.join(sorted(unknown))}")
    ranges = {k: Range.parse(k, v) for k, v in raw_ranges.items()}
    return SweepConfig(mode=mode, ranges=ranges, **overrides).validate()


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def output_path(config: SweepConfig) -> Path:
    if config.output_path:
        return Path(config.output_path)
    return Path(os.environ.get(OUT_DIR_ENV, ".")) / f"{config.mode}.csv"


def write_csv(path: Path, header: Sequence[str], rows: Iterable[dict]) -> Path:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([fmt(row.get(k)) for k in header])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def _map(fn: Callable, points: list, jobs: int) -> list:
    if jobs == 1 or len(points) < 2:
        return [fn(pt) for pt in points]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map yields in submission order, so rows stay in grid order
        return list(pool.map(fn, points, chunksize=max(1, len(points) // (4 * jobs))))


def _fig1_row(pt):
    sigma, Sigma = pt
    g = gs.GaussianPair(sigma, Sigma)
    return {
        "sigma": sigma,
        "Sigma": Sigma,
        "purity_input": gs.purity_input(g),
        "purity_output_limit": gs.purity_output_limit(g),
    }


def run_fig1(config: SweepConfig) -> Path:
    points = list(product(config.values("sigma"), config.values("Sigma")))
    rows = _map(_fig1_row, points, config.jobs)
    return write_csv(output_path(config), ["sigma", "Sigma", "purity_input", "purity_output_limit"], rows)


def _fig2_row(pt):
    Gamma, sigma, Sigma = pt
    w = gs.ProjectionWidth(Gamma)
    return {
        "Gamma": Gamma,
        "sigma": sigma,
        "Sigma": Sigma,
        "purity_extreme": gs.purity_extreme(w),
        "purity_output": gs.purity_output(gs.GaussianPair(sigma, Sigma), w),
    }


def run_fig2(config: SweepConfig) -> Path:
    points = list(product(config.values("Gamma"), config.values("sigma"), config.values("Sigma")))
    rows = _map(_fig2_row, points, config.jobs)
    return write_csv(output_path(config), ["Gamma", "sigma", "Sigma", "purity_extreme", "purity_output"], rows)


def _bell_row(d):
    overlap = qudit.bell_overlap(int(d))
    return {
        "d": int(d),
        "overlap": overlap,
        "asymptote": qudit.BELL_ASYMPTOTE,
        "deviation": abs(overlap - qudit.BELL_ASYMPTOTE),
    }


def run_bell_overlap(config: SweepConfig) -> Path:
    rows = _map(_bell_row, list(config.values("d")), config.jobs)
    path = write_csv(output_path(config), ["d", "overlap", "asymptote", "deviation"], rows)
    last = rows[-1]
    print(f"d={last['d']}: deviation from pi^2/(pi^2+4) is {last['deviation']:.3e}", file=sys.stderr)
    return path


WITNESS_FIELDS = ["status", "entangled", "concurrence", "ppt_min_eig", "purity_input", "purity_output", "success_probability"]


def _report_fields(report, purity_in) -> dict:
    return {
        "status": "ok",
        "entangled": report.entangled,
        "concurrence": report.concurrence,
        "ppt_min_eig": report.ppt_min_eig,
        "purity_input": purity_in,
        "purity_output": report.output_subsystem_purity,
        "success_probability": report.success_probability,
    }


def _cv_witness_row(pt):
    sigma, Sigma, Gamma = pt
    g, w = gs.GaussianPair(sigma, Sigma), gs.ProjectionWidth(Gamma)
    row = {"sigma": sigma, "Sigma": Sigma, "Gamma": Gamma}
    try:
        row.update(_report_fields(gs.witness_gaussian(g, w), gs.purity_input(g)))
    except DegenerateProjectionError:
        row["status"] = "degenerate-projection"
    return row


def qudit_input_state(kind: str, d: int, p: float, seed: int, sample: int):
    rng = np.random.default_rng([seed, d, sample])
    if kind == "isotropic":
        return isotropic(d, p)
    if kind == "max-entangled":
        return maximally_entangled(d)
    if kind == "random-pure":
        return haar_pure(rng, [d, d])
    if kind == "random-mixed":
        return hilbert_schmidt_mixed(rng, [d, d])
    if kind == "random-separable":
        return random_separable(rng, d, d)
    raise ConfigError(f"unknown qudit input {kind!r}")


def _qudit_witness_row(pt, kind: str, seed: int):
    d, p, sample = pt
    d = int(d)
    state = qudit_input_state(kind, d, p, seed, sample)
    row = {"d": d, "p": p if kind == "isotropic" else None, "sample": sample, "input": kind}
    try:
        report = qudit.witness_qudit_pair(state)
        row.update(_report_fields(report, purity(partial_trace(state, [0]))))
    except DegenerateProjectionError:
        row["status"] = "degenerate-projection"
    return row


def run_witness(config: SweepConfig) -> Path:
    if config.mode == "cv-witness":
        points = list(product(config.values("sigma"), config.values("Sigma"), config.values("Gamma")))
        rows = _map(_cv_witness_row, points, config.jobs)
        header = ["sigma", "Sigma", "Gamma"] + WITNESS_FIELDS
    elif config.mode == "qudit-witness":
        ps = config.values("p") if config.qudit_input == "isotropic" else (float("nan"),)
        points = list(product(config.values("d"), ps, range(config.samples)))
        fn = partial(_qudit_witness_row, kind=config.qudit_input, seed=config.seed)
        rows = _map(fn, points, config.jobs)
        header = ["d", "p", "sample", "input"] + WITNESS_FIELDS
    else:
        raise ConfigError(f"witness runs need mode cv-witness or qudit-witness, got {config.mode}")
    return write_csv(output_path(config), header, rows)


ORACLE_HEADER = [
    "sigma", "Sigma", "Gamma", "status", "grid_n",
    "concurrence", "ppt_min_eig", "purity_output",
    "oracle_concurrence", "oracle_ppt_min_eig", "oracle_purity_output", "oracle_deviation",
]


def _oracle_row(pt, points_per_sigma: int, extent_sigmas: float):
    sigma, Sigma, Gamma = pt
    g, w = gs.GaussianPair(sigma, Sigma), gs.ProjectionWidth(Gamma)
    row = {"sigma": sigma, "Sigma": Sigma, "Gamma": Gamma}
    try:
        grid = oracle.make_grid(
            max(sigma, Sigma), 0.0, points_per_sigma, sigma_min=min(sigma, Sigma, Gamma), extent_sigmas=extent_sigmas
        )
        row["grid_n"] = grid.n
        analytic = gs.witness_gaussian(g, w)
        numeric = oracle.oracle_witness(g, w, grid)
    except oracle.GridTooLargeError:
        row["status"] = "grid-too-large"
        return row
    except DegenerateProjectionError:
        row["status"] = "degenerate-projection"
        return row
    row.update(
        status="ok",
        concurrence=analytic.concurrence,
        ppt_min_eig=analytic.ppt_min_eig,
        purity_output=analytic.output_subsystem_purity,
        oracle_concurrence=numeric.concurrence,
        oracle_ppt_min_eig=numeric.ppt_min_eig,
        oracle_purity_output=numeric.output_subsystem_purity,
        oracle_deviation=oracle.compare_reports(analytic, numeric),
    )
    return row


def run_oracle_check(config: SweepConfig) -> tuple[Path, bool]:
    """Returns the CSV path and whether every point met the tolerance."""
    points = list(product(config.values("sigma"), config.values("Sigma"), config.values("Gamma")))
    fn = partial(_oracle_row, points_per_sigma=config.points_per_sigma, extent_sigmas=config.extent_sigmas)
    rows = _map(fn, points, config.jobs)
    path = write_csv(output_path(config), ORACLE_HEADER, rows)
    failed = [r for r in rows if r["status"] != "ok" or r["oracle_deviation"] > config.tolerance]
    worst = max((r["oracle_deviation"] for r in rows if r["status"] == "ok"), default=float("nan"))
    print(f"{len(rows)} points, max oracle deviation {worst:.3e}, {len(failed)} above {config.tolerance:g}", file=sys.stderr)
    return path, not failed


def _range_arg(text: str) -> float:
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lossy-witness", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON config file; flags override its fields")
    common.add_argument("--out", dest="output_path", help=f"CSV path (default: ${OUT_DIR_ENV}/<mode>.csv)")
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", type=int, help="worker processes; output order is unaffected")
    for name in RANGE_FIELDS:
        common.add_argument(f"--{name}", nargs="+", type=_range_arg, metavar="V", help="VALUE or START STOP COUNT")

    sub.add_parser("fig1", parents=[common], help="input and output purity over (sigma, Sigma)")
    sub.add_parser("fig2", parents=[common], help="output purity against Gamma")
    sub.add_parser("bell-overlap", parents=[common], help="compressed maximally entangled qudits vs d")
    wit = sub.add_parser("witness", parents=[common], help="witness reports on CV or qudit inputs")
    wit.add_argument("--mode", choices=["cv-witness", "qudit-witness"])
    wit.add_argument("--qudit-input", dest="qudit_input", choices=QUDIT_INPUTS)
    wit.add_argument("--samples", type=int, help="random inputs per (d, p) point")
    orc = sub.add_parser("oracle-check", parents=[common], help="closed forms against quadrature")
    orc.add_argument("--points-per-sigma", dest="points_per_sigma", type=int)
    orc.add_argument("--extent-sigmas", dest="extent_sigmas", type=float, help="grid half-width in units of the widest sigma")
    orc.add_argument("--tolerance", type=float)
    return parser


def config_from_args(args: argparse.Namespace) -> SweepConfig:
    raw: dict[str, Any] = {}
    if args.config is not None:
        try:
            raw = json.loads(args.config.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON ({exc})") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{args.config}: top level must be an object")
    mode = args.command if args.command != "witness" else "cv-witness"
    mode = getattr(args, "mode", None) or raw.pop("mode", None) or mode
    raw.pop("mode", None)
    for key, value in vars(args).items():
        if key in ("command", "config", "mode") or value is None:
            continue
        raw[key] = value
    if args.command == "witness" and mode not in ("cv-witness", "qudit-witness"):
        raise ConfigError(f"witness needs mode cv-witness or qudit-witness, got {mode}")
    if args.command != "witness" and mode != args.command:
        raise ConfigError(f"config mode {mode!r} does not match subcommand {args.command!r}")
    return build_config(mode, raw)


RUNNERS = {
    "fig1": run_fig1,
    "fig2": run_fig2,
    "bell-overlap": run_bell_overlap,
    "cv-witness": run_witness,
    "qudit-witness": run_witness,
}


def run(config: SweepConfig) -> int:
    if config.mode == "oracle-check":
        path, ok = run_oracle_check(config)
        print(path)
        return EXIT_OK if ok else EXIT_ACCEPTANCE
    print(RUNNERS[config.mode](config))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return run(config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
