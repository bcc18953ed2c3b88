"""Command-line harness: simulate, estimate, theory and experiment runs.

Configuration comes from an INI file (see config module), from presets
by name, or from flags; flags always win.  Outputs are delimited text
with a header row and 12-significant-digit floats, written to the
configured output directory.  Runs are deterministic given the config
and base seed: replication r uses seed base_seed + r and aggregation is
keyed by replication index, so worker count does not affect results.

Exit codes: 0 success, 1 configuration error, 2 runtime or estimation
failure.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import ExperimentConfig, parse_config
from .errors import ConfigError, CrossArfimaError
from .estimators import dcca, dfa, fit_hurst, hxa, sample_ccf
from .models import cross_spectrum, simulate, theoretical_ccf, theoretical_exponents

SPECTRUM_GRID = (1e-4, float(np.pi), 200)


def _fmt(v) -> str:
    return format(float(v), ".12g")


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path}")


def _ensure_outdir(cfg: ExperimentConfig) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    return cfg.output_dir


@dataclass(frozen=True)
class EstimateRow:
    estimator: str
    target: str
    ok: bool
    exponent: float
    stderr: float
    n_points: int
    message: str


def _fit_row(estimator: str, target: str, make_fluct) -> EstimateRow:
    """Run one estimator, capturing skip warnings and estimation errors."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            fit = fit_hurst(make_fluct())
        except (CrossArfimaError, ValueError) as e:
            return EstimateRow(estimator, target, False, np.nan, np.nan, 0, str(e))
    notes = "; ".join(str(w.message) for w in caught)
    return EstimateRow(estimator, target, True, fit.exponent, fit.stderr, fit.n_points, notes)


def _estimate_pair(x, y, cfg: ExperimentConfig):
    """All configured Hurst estimates for one (x, y) pair, plus the CCF."""
    rows: list[EstimateRow] = []
    ccf_values = None
    for name in cfg.estimators:
        if name == "dfa":
            for target, z in (("hx", x), ("hy", y)):
                rows.append(
                    _fit_row(
                        "dfa",
                        target,
                        lambda z=z: dfa(
                            z,
                            s_min=cfg.dfa_s_min,
                            s_max=cfg.dfa_s_max,
                            step=cfg.dfa_step,
                            detrend_order=cfg.detrend_order,
                        ),
                    )
                )
        elif name == "dcca":
            rows.append(
                _fit_row(
                    "dcca",
                    "hxy",
                    lambda: dcca(
                        x,
                        y,
                        s_min=cfg.dcca_s_min,
                        s_max=cfg.dcca_s_max,
                        step=cfg.dcca_step,
                        detrend_order=cfg.detrend_order,
                    ),
                )
            )
        elif name == "hxa":
            rows.append(
                _fit_row(
                    "hxa",
                    "hxy",
                    lambda: hxa(x, y, tau_min=cfg.hxa_tau_min, tau_max=cfg.hxa_tau_max),
                )
            )
        elif name == "ccf":
            ccf_values = sample_ccf(x, y, cfg.ccf_max_lag).values
    return rows, ccf_values


def _estimate_rows_to_csv(rows: list[tuple]) -> list[list[str]]:
    out = []
    for prefix, row in rows:
        out.append(
            prefix
            + [
                row.estimator,
                row.target,
                "ok" if row.ok else "failed",
                _fmt(row.exponent) if row.ok else "",
                _fmt(row.stderr) if row.ok else "",
                str(row.n_points),
                row.message,
            ]
        )
    return out


def cmd_simulate(cfg: ExperimentConfig) -> int:
    outdir = _ensure_outdir(cfg)
    for rep, seed in enumerate(cfg.seeds()):
        series = simulate(cfg.model, cfg.T, seed, truncation=cfg.sim_truncation)
        path = os.path.join(outdir, f"series_r{rep:04d}.csv")
        rows = (
            [str(t), _fmt(series.x[t]), _fmt(series.y[t])] for t in range(cfg.T)
        )
        _write_csv(path, ["t", "x", "y"], rows)
    return 0


def _load_series_file(path: str) -> tuple[np.ndarray, np.ndarray]:
    """Read a two- or three-column delimited file, tolerating a header row."""
    with open(path) as f:
        first = f.readline()
    skip = 1 if any(c.isalpha() for c in first) else 0
    data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    if data.shape[1] == 3:
        return data[:, 1], data[:, 2]
    if data.shape[1] == 2:
        return data[:, 0], data[:, 1]
    raise ValueError(f"{path}: expected 2 columns (x,y) or 3 (t,x,y), got {data.shape[1]}")


def cmd_estimate(cfg: ExperimentConfig, inputs: list[str]) -> int:
    outdir = _ensure_outdir(cfg)
    table: list[tuple] = []
    any_ok = False
    for path in inputs:
        x, y = _load_series_file(path)
        rows, ccf_values = _estimate_pair(x, y, cfg)
        stem = os.path.splitext(os.path.basename(path))[0]
        table.extend(([path], row) for row in rows)
        any_ok = any_ok or any(r.ok for r in rows)
        if ccf_values is not None:
            any_ok = True
            lags = np.arange(-cfg.ccf_max_lag, cfg.ccf_max_lag + 1)
            _write_csv(
                os.path.join(outdir, f"ccf_{stem}.csv"),
                ["lag", "rho"],
                ([str(k), _fmt(v)] for k, v in zip(lags, ccf_values)),
            )
    _write_csv(
        os.path.join(outdir, "estimates.csv"),
        ["file", "estimator", "target", "status", "exponent", "stderr", "n_points", "notes"],
        _estimate_rows_to_csv(table),
    )
    if not any_ok:
        print("all estimations failed", file=sys.stderr)
        return 2
    return 0


def cmd_theory(cfg: ExperimentConfig, spectrum_mode: str, spectrum_points: int) -> int:
    outdir = _ensure_outdir(cfg)
    rep = theoretical_exponents(cfg.model, truncation=cfg.sim_truncation)
    pair = "" if rep.dominating_pair is None else f"{rep.dominating_pair[0]}-{rep.dominating_pair[1]}"
    _write_csv(
        os.path.join(outdir, "exponents.csv"),
        ["quantity", "value"],
        [
            ["H_x", _fmt(rep.H_x)],
            ["H_y", _fmt(rep.H_y)],
            ["H_xy", _fmt(rep.H_xy)],
            ["sigma_x", _fmt(rep.sigma_x)],
            ["sigma_y", _fmt(rep.sigma_y)],
            ["dominating_pair", pair],
        ],
    )

    L = cfg.ccf_max_lag
    values = theoretical_ccf(cfg.model, max_lag=L, truncation=cfg.ccf_truncation)
    _write_csv(
        os.path.join(outdir, "theoretical_ccf.csv"),
        ["lag", "rho"],
        ([str(k), _fmt(v)] for k, v in zip(range(-L, L + 1), values)),
    )

    if spectrum_mode == "never":
        return 0
    if not cfg.model.all_fractional:
        if spectrum_mode == "always":
            raise ConfigError("spectrum requires a model with only fractional components")
        print("spectrum skipped: model has non-fractional components", file=sys.stderr)
        return 0
    lo, hi, _ = SPECTRUM_GRID
    grid = np.geomspace(lo, hi, spectrum_points)
    f = cross_spectrum(cfg.model, grid)
    _write_csv(
        os.path.join(outdir, "spectrum.csv"),
        ["lambda", "re", "im", "abs"],
        (
            [_fmt(l), _fmt(v.real), _fmt(v.imag), _fmt(abs(v))]
            for l, v in zip(grid, f)
        ),
    )
    return 0


def _replication_worker(args: tuple[ExperimentConfig, int]):
    cfg, rep = args
    seed = cfg.base_seed + rep
    series = simulate(cfg.model, cfg.T, seed, truncation=cfg.sim_truncation)
    rows, ccf_values = _estimate_pair(series.x, series.y, cfg)
    return rep, seed, rows, ccf_values


def cmd_experiment(cfg: ExperimentConfig, workers: int) -> int:
    outdir = _ensure_outdir(cfg)
    jobs = [(cfg, rep) for rep in range(cfg.replications)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_replication_worker, jobs))
    else:
        results = [_replication_worker(job) for job in jobs]
    results.sort(key=lambda item: item[0])

    rep_table: list[tuple] = []
    ccf_stack = []
    for rep, seed, rows, ccf_values in results:
        rep_table.extend(([str(rep), str(seed)], row) for row in rows)
        if ccf_values is not None:
            ccf_stack.append(ccf_values)
    _write_csv(
        os.path.join(outdir, "replications.csv"),
        [
            "replication",
            "seed",
            "estimator",
            "target",
            "status",
            "exponent",
            "stderr",
            "n_points",
            "notes",
        ],
        _estimate_rows_to_csv(rep_table),
    )

    theory = theoretical_exponents(cfg.model, truncation=cfg.sim_truncation)
    theory_for = {
        ("dfa", "hx"): theory.H_x,
        ("dfa", "hy"): theory.H_y,
        ("dcca", "hxy"): theory.H_xy,
        ("hxa", "hxy"): theory.H_xy,
    }
    groups: dict[tuple[str, str], list[float]] = {}
    n_failed = 0
    for _, row in rep_table:
        if row.ok:
            groups.setdefault((row.estimator, row.target), []).append(row.exponent)
        else:
            n_failed += 1
    summary_rows = []
    for key in theory_for:
        if key not in groups:
            continue
        vals = np.array(groups[key])
        summary_rows.append(
            [
                key[0],
                key[1],
                str(vals.size),
                _fmt(vals.mean()),
                _fmt(vals.std(ddof=1) if vals.size > 1 else 0.0),
                _fmt(vals.min()),
                _fmt(vals.max()),
                _fmt(theory_for[key]),
            ]
        )
    _write_csv(
        os.path.join(outdir, "summary.csv"),
        ["estimator", "target", "n_ok", "mean", "sd", "min", "max", "theory"],
        summary_rows,
    )
    for row in summary_rows:
        print(
            f"{row[0]:>5s} {row[1]:>3s}  n={row[2]:>4s}  mean={float(row[3]):.4f}  "
            f"sd={float(row[4]):.4f}  theory={float(row[7]):.4f}"
        )

    if ccf_stack:
        mean_ccf = np.mean(np.stack(ccf_stack), axis=0)
        L = cfg.ccf_max_lag
        theory_ccf = theoretical_ccf(cfg.model, max_lag=L, truncation=cfg.ccf_truncation)
        _write_csv(
            os.path.join(outdir, "ccf_mean.csv"),
            ["lag", "mean_sample_rho", "theory_rho", "abs_diff"],
            (
                [str(k), _fmt(m), _fmt(t), _fmt(abs(m - t))]
                for k, m, t in zip(range(-L, L + 1), mean_ccf, theory_ccf)
            ),
        )

    if not groups and not ccf_stack:
        print("all replications failed", file=sys.stderr)
        return 2
    return 0


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to the config-error exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(p: _Parser, *, reps: bool = True) -> None:
    p.add_argument("--config", help="INI config file; flags override its values")
    p.add_argument("--model", help="preset name (model1/model2/model3) or 'inline'")
    p.add_argument("--T", type=int, help="series length")
    if reps:
        p.add_argument("--reps", type=int, help="number of replications")
    p.add_argument("--seed", type=int, help="base seed; replication r uses seed+r")
    p.add_argument("--output", help="output directory")


def _add_estimator_flags(p: _Parser) -> None:
    p.add_argument("--estimators", help="comma list from dfa,dcca,hxa,ccf")
    p.add_argument("--s-min", type=int, help="smallest DCCA box size")
    p.add_argument("--s-max", type=int, help="largest DCCA box size")
    p.add_argument("--step", type=int, help="DCCA box size step")
    p.add_argument("--dfa-s-min", type=int, help="smallest DFA box size")
    p.add_argument("--dfa-s-max", type=int, help="largest DFA box size")
    p.add_argument("--dfa-step", type=int, help="DFA box size step")
    p.add_argument("--detrend-order", type=int, help="polynomial detrend order")
    p.add_argument("--tau-min", type=int, help="smallest HXA lag")
    p.add_argument("--tau-max", type=int, help="largest HXA lag")
    p.add_argument("--max-lag", type=int, help="CCF maximum lag")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="crossarfima",
        description="Simulate correlated long-memory pairs and estimate Hurst exponents.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_sim = sub.add_parser("simulate", help="write simulated series files")
    _add_common(p_sim)
    p_sim.add_argument("--truncation", type=int, help="MA truncation horizon M")

    p_est = sub.add_parser("estimate", help="estimate exponents from series files")
    _add_common(p_est, reps=False)
    _add_estimator_flags(p_est)
    p_est.add_argument("inputs", nargs="+", help="series files (columns x,y or t,x,y)")

    p_theory = sub.add_parser("theory", help="write theoretical exponents, CCF, spectrum")
    _add_common(p_theory, reps=False)
    p_theory.add_argument("--max-lag", type=int, help="CCF table maximum lag")
    p_theory.add_argument("--ccf-truncation", type=int, help="CCF weight-sum truncation K")
    p_theory.add_argument("--truncation", type=int, help="variance truncation horizon")
    p_theory.add_argument(
        "--spectrum",
        choices=("auto", "always", "never"),
        default="auto",
        help="spectrum table policy for non-fractional models (default auto: skip)",
    )
    p_theory.add_argument(
        "--spectrum-points", type=int, default=SPECTRUM_GRID[2], help="spectrum grid size"
    )

    p_exp = sub.add_parser("experiment", help="replicated simulate+estimate with summary")
    _add_common(p_exp)
    _add_estimator_flags(p_exp)
    p_exp.add_argument("--workers", type=int, default=1, help="parallel replication workers")

    return parser


_FLAG_TO_KEY = {
    "model": ("experiment", "model"),
    "T": ("experiment", "t"),
    "reps": ("experiment", "replications"),
    "seed": ("experiment", "base_seed"),
    "output": ("experiment", "output_dir"),
    "estimators": ("experiment", "estimators"),
    "s_min": ("dcca", "s_min"),
    "s_max": ("dcca", "s_max"),
    "step": ("dcca", "step"),
    "dfa_s_min": ("dfa", "s_min"),
    "dfa_s_max": ("dfa", "s_max"),
    "dfa_step": ("dfa", "step"),
    "detrend_order": ("dcca", "detrend_order"),
    "tau_min": ("hxa", "tau_min"),
    "tau_max": ("hxa", "tau_max"),
    "max_lag": ("ccf", "max_lag"),
    "truncation": ("simulation", "truncation"),
    "ccf_truncation": ("theory", "ccf_truncation"),
}


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        with open(args.config) as f:
            text = f.read()
    else:
        text = "[experiment]\n"
    overrides = {}
    for flag, key in _FLAG_TO_KEY.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = str(value)
    return parse_config(text, overrides=overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "estimate":
            return cmd_estimate(cfg, args.inputs)
        if args.command == "theory":
            return cmd_theory(cfg, args.spectrum, args.spectrum_points)
        if args.command == "experiment":
            return cmd_experiment(cfg, args.workers)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except (CrossArfimaError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
