"""Runnable workflows shared by the CLI and the HTTP service.

Each workflow has a pure compute function returning a result object and a
writer that lays the results out in an output directory together with a
manifest.ini echoing the fully resolved config. Files are written with
repr-exact floats, so a re-run from the manifest reproduces them
byte-for-byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig
from .mc import MCResult, sweep
from .narma import NarmaOutcome, run_narma_benchmark
from .pipeline import (
    DiagnosticsReport,
    ForecastOutcome,
    MarketSeries,
    diagnostics,
    load_market_csv,
    run_forecast,
)
from .quantum import NoiseModel, ideal_spin, run_step
from .topology import edge_density

MANIFEST_NAME = "manifest.ini"


def _write_manifest(cfg: RunConfig, outdir: Path) -> None:
    cfg.to_ini(outdir / MANIFEST_NAME)


def _dump_json(obj, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- memory-capacity sweep ---------------------------------------------------


@dataclass
class McSweepOutcome:
    results: list[MCResult]
    argmax_index: int
    cfg: RunConfig


def run_mc_sweep(cfg: RunConfig) -> McSweepOutcome:
    results, argmax = sweep(cfg.n_qubits, cfg)
    return McSweepOutcome(results=results, argmax_index=argmax, cfg=cfg)


def write_mc_sweep(outcome: McSweepOutcome, outdir: str | Path) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "mc_results.csv"
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("sequence_index,n_loops,n_edges,edge_density,mc_mean,mc_stderr\n")
        for r in outcome.results:
            t = r.topology
            fh.write(
                f"{t.sequence_index},{t.n_loops},{t.n_edges},"
                f"{edge_density(t)!r},{r.mc!r},{r.mc_stderr!r}\n"
            )
    sidecar = {
        "argmax_index": outcome.argmax_index,
        "seeds": outcome.results[0].seeds if outcome.results else 0,
        "config": outcome.cfg.as_dict(),
        "topologies": [
            {
                "sequence_index": r.topology.sequence_index,
                "topology": r.topology.to_json_dict(),
                "edge_density": edge_density(r.topology),
                "mc": r.mc,
                "mc_stderr": r.mc_stderr,
                "per_seed_mc": list(r.per_seed_mc),
                "r_sq": [float(v) for v in r.r_sq],
            }
            for r in outcome.results
        ],
    }
    json_path = outdir / "mc_curves.json"
    _dump_json(sidecar, json_path)
    _write_manifest(outcome.cfg, outdir)
    return [csv_path, json_path, outdir / MANIFEST_NAME]


# -- NARMA benchmark ----------------------------------------------------------


def run_narma(cfg: RunConfig) -> NarmaOutcome:
    return run_narma_benchmark(cfg)


def write_narma(outcome: NarmaOutcome, cfg: RunConfig, outdir: str | Path) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    pred_path = outdir / "narma_predictions.csv"
    with open(pred_path, "w", encoding="utf-8") as fh:
        fh.write("t,actual,predicted\n")
        for rec in outcome.loop.records:
            fh.write(f"{rec.t},{rec.actual!r},{rec.predicted!r}\n")
    metrics = {
        "nmse": outcome.nmse,
        "nmse_normalization": "sum((actual-predicted)^2)/sum(actual^2)",
        "n_records": len(outcome.loop.records),
        "burn_in_records": outcome.loop.burn_in,
        "feedback_scale": outcome.loop.feedback_scale,
        "config": cfg.as_dict(),
    }
    metrics_path = outdir / "narma_metrics.json"
    _dump_json(metrics, metrics_path)
    _write_manifest(cfg, outdir)
    return [pred_path, metrics_path, outdir / MANIFEST_NAME]


# -- market forecast ----------------------------------------------------------


def run_forecast_csv(data_path: str | Path, cfg: RunConfig) -> ForecastOutcome:
    series = load_market_csv(data_path)
    return run_forecast(series, cfg)


def write_forecast(
    outcome: ForecastOutcome, cfg: RunConfig, outdir: str | Path
) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    fc_path = outdir / "forecast.csv"
    with open(fc_path, "w", encoding="utf-8") as fh:
        fh.write("date,actual_vix,predicted_vix,actual_dvix,predicted_dvix,residual\n")
        for row in outcome.rows():
            fh.write(
                f"{row['date']},{row['actual_vix']!r},{row['predicted_vix']!r},"
                f"{row['actual_dvix']!r},{row['predicted_dvix']!r},{row['residual']!r}\n"
            )
    plot_path = outdir / "plot_data.csv"
    with open(plot_path, "w", encoding="utf-8") as fh:
        fh.write("date,actual_vix,predicted_vix\n")
        for row in list(outcome.rows())[outcome.loop.burn_in :]:
            fh.write(f"{row['date']},{row['actual_vix']!r},{row['predicted_vix']!r}\n")
    metrics_path = outdir / "metrics.json"
    _dump_json({"metrics": outcome.metrics, "config": cfg.as_dict()}, metrics_path)
    _write_manifest(cfg, outdir)
    return [fc_path, plot_path, metrics_path, outdir / MANIFEST_NAME]


# -- diagnostics ---------------------------------------------------------------


def run_diagnostics_csv(data_path: str | Path) -> DiagnosticsReport:
    return diagnostics(load_market_csv(data_path))


def run_diagnostics_series(series: MarketSeries) -> DiagnosticsReport:
    return diagnostics(series)


def write_diagnostics(
    report: DiagnosticsReport, cfg: RunConfig, outdir: str | Path
) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "diagnostics.json"
    _dump_json({"diagnostics": report.as_dict(), "config": cfg.as_dict()}, path)
    _write_manifest(cfg, outdir)
    return [path, outdir / MANIFEST_NAME]


def format_diagnostics(report: DiagnosticsReport) -> str:
    corr = report.corr_pct_changes
    lines = [
        f"rows:                {report.n_rows}",
        f"range:               {report.first_date} .. {report.last_date}",
        f"corr(dSPX%, dVIX%):  "
        + (f"{corr:+.4f}" if corr is not None else "undefined (zero variance)"),
        f"mean VIX:            {report.mean_vix:.4f}",
        f"max VIX:             {report.max_vix:.4f} on {report.max_vix_date}",
        f"all levels positive: {report.all_positive}",
    ]
    return "\n".join(lines)


# -- simulator self-checks ------------------------------------------------------


@dataclass
class SimCheck:
    name: str
    passed: bool
    detail: str


@dataclass
class SimCheckOutcome:
    checks: list[SimCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def run_sim_check(cfg: RunConfig, n_seeds: int = 50) -> SimCheckOutcome:
    """Statistical self-tests of the sampled register against closed forms."""
    thetas = np.arange(7) * math.pi / 6.0
    shots = cfg.shots
    checks: list[SimCheck] = []

    def seed_rng(tag: int, k: int) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence(cfg.seed, spawn_key=(9, tag, k))
        )

    # 1: zero-noise sampled spin matches cos(theta) within 4/sqrt(shots)
    clean = NoiseModel()
    samples = np.vstack(
        [run_step(thetas, clean, shots, seed_rng(0, k)) for k in range(n_seeds)]
    )
    err = np.abs(samples.mean(axis=0) - np.cos(thetas))
    tol = 4.0 / math.sqrt(shots)
    frac_ok = float(np.mean(err <= tol))
    checks.append(
        SimCheck(
            "spin_matches_cos",
            frac_ok >= 0.95,
            f"max |mean spin - cos(theta)| = {err.max():.5f}, tol {tol:.5f}, "
            f"{frac_ok:.0%} of angles within tol",
        )
    )

    # 2: symmetric readout flips scale the mean spin by (1 - 2p)
    p = 0.1
    flip = NoiseModel(p_flip_0to1=p, p_flip_1to0=p)
    flipped = np.vstack(
        [run_step(thetas, flip, shots, seed_rng(1, k)) for k in range(n_seeds)]
    )
    expected = (1.0 - 2.0 * p) * np.cos(thetas)
    stderr = flipped.std(axis=0, ddof=1) / math.sqrt(n_seeds)
    gap = np.abs(flipped.mean(axis=0) - expected)
    ok = bool(np.all(gap <= 3.0 * np.maximum(stderr, 1e-12)))
    checks.append(
        SimCheck(
            "flip_scaling",
            ok,
            f"max |mean - (1-2p) cos| = {gap.max():.5f} vs 3*stderr "
            f"{(3 * stderr).max():.5f}",
        )
    )

    # 3: identical seeds give bit-identical spins
    a = run_step(thetas, cfg.noise, shots, seed_rng(2, 0))
    b = run_step(thetas, cfg.noise, shots, seed_rng(2, 0))
    checks.append(
        SimCheck(
            "reproducibility",
            bool(np.array_equal(a, b)),
            "same seed, same inputs, identical spin vectors",
        )
    )

    # 4: zero-noise mean spin is non-increasing over [0, pi]
    means = samples.mean(axis=0)
    mono = bool(np.all(np.diff(means) <= 1e-9))
    checks.append(
        SimCheck(
            "monotone_in_theta",
            mono,
            f"mean spins over theta grid: {np.array2string(means, precision=4)}",
        )
    )

    # 5: analytic anchor for the test oracle itself
    anchor = (
        abs(ideal_spin(0.0) - 1.0) < 1e-15
        and abs(ideal_spin(math.pi / 3) - 0.5) < 1e-15
    )
    checks.append(SimCheck("ideal_spin_anchor", anchor, "cos(0)=1, cos(pi/3)=0.5"))

    return SimCheckOutcome(checks=checks)


def write_sim_check(
    outcome: SimCheckOutcome, cfg: RunConfig, outdir: str | Path
) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "simcheck.json"
    _dump_json(
        {
            "passed": outcome.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in outcome.checks
            ],
            "config": cfg.as_dict(),
        },
        path,
    )
    _write_manifest(cfg, outdir)
    return [path, outdir / MANIFEST_NAME]
