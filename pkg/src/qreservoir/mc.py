"""Memory-capacity benchmarking over the reservoir complexity sequence.

The benchmark drives a reservoir with an i.i.d. uniform [0, 1] sequence,
records its spin trajectory, and asks how well a linear readout of the state
at time k can reconstruct the input from tau steps earlier. The squared
Pearson correlation between reconstruction and truth on a held-out segment,
summed over tau = 1..tau_max, is the memory capacity. Sweeping the topology
sequence locates the design with maximal capacity.

During characterization every qubit receives the current drive value and the
error-feedback channel is held at zero, so any measured recall comes from
reservoir feedback rather than an input lag window.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .reservoir import build_reservoir
from .topology import ReservoirTopology, build_sequence

if TYPE_CHECKING:
    from .config import RunConfig


def gen_drive(length: int, seed) -> np.ndarray:
    """I.i.d. uniform [0, 1] drive sequence, deterministic per seed."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    return np.random.default_rng(seed).random(length)


def collect_states(
    drive: np.ndarray,
    topo: ReservoirTopology,
    cfg: "RunConfig",
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Spin trajectory under the characterization drive, burn-in discarded.

    Returns a (len(drive) - burn_in) x n_qubits matrix whose row k holds the
    spins sampled after feeding drive value burn_in + k.
    """
    drive = np.asarray(drive, dtype=float)
    burn_in = int(len(drive) * cfg.burn_in_fraction)
    if len(drive) <= burn_in + 1:
        raise ValueError("drive shorter than its burn-in")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)

    reservoir = build_reservoir(cfg, topo, rng)
    n = topo.n_qubits
    states = np.empty((len(drive) - burn_in, n), dtype=float)
    for k, u in enumerate(drive):
        spins = reservoir.step(np.full(n, u), error=0.0)
        if k >= burn_in:
            states[k - burn_in] = spins
    return states


def delay_r_squared(
    states: np.ndarray,
    drive: np.ndarray,
    tau: int,
    train_fraction: float = 0.7,
    ridge_lambda: float = 1e-6,
) -> float:
    """Held-out squared correlation of a linear tau-step-back reconstruction.

    Fits a ridge readout (with intercept) mapping the state at time k to the
    drive value at k - tau on the leading train_fraction of rows and returns
    the squared Pearson correlation on the remaining rows, floored at 0 when
    either side is degenerate.
    """
    if tau < 1:
        raise ValueError(f"tau must be >= 1, got {tau}")
    states = np.asarray(states, dtype=float)
    drive = np.asarray(drive, dtype=float)
    offset = len(drive) - len(states)
    if offset < 0:
        raise ValueError("drive must be at least as long as the state matrix")

    first_row = max(0, tau - offset)
    X = states[first_row:]
    idx = np.arange(first_row, len(states)) + offset - tau
    y = drive[idx]
    n_rows = len(X)
    n_train = int(n_rows * train_fraction)
    if n_train < states.shape[1] + 1 or n_rows - n_train < 3:
        raise ValueError(f"not enough rows ({n_rows}) after aligning tau={tau}")

    Xb = np.hstack([X, np.ones((n_rows, 1))])
    A = Xb[:n_train]
    w = np.linalg.solve(
        ridge_lambda * np.eye(Xb.shape[1]) + A.T @ A, A.T @ y[:n_train]
    )
    pred = Xb[n_train:] @ w
    truth = y[n_train:]

    vp = np.var(pred)
    vt = np.var(truth)
    if vp <= 0.0 or vt <= 0.0:
        return 0.0
    cov = np.mean((pred - pred.mean()) * (truth - truth.mean()))
    return float(np.clip(cov * cov / (vp * vt), 0.0, 1.0))


@dataclass
class MCResult:
    """Memory capacity of one reservoir configuration.

    r_sq holds the per-delay squared correlations (the mean curve when
    aggregated over seeds); mc is their sum. mc_stderr is the standard error
    of the per-seed capacities (0 for a single run).
    """

    topology: ReservoirTopology | None
    r_sq: np.ndarray
    mc: float
    mc_stderr: float
    seeds: int
    per_seed_mc: tuple[float, ...] = ()


def memory_capacity(
    states: np.ndarray,
    drive: np.ndarray,
    tau_max: int = 120,
    train_fraction: float = 0.7,
    ridge_lambda: float = 1e-6,
    topo: ReservoirTopology | None = None,
) -> MCResult:
    """Sum of delay_r_squared over tau = 1..tau_max for one trajectory."""
    states = np.asarray(states, dtype=float)
    Xb = np.hstack([states, np.ones((len(states), 1))])
    r_sq = np.empty(tau_max, dtype=float)

    # the design matrix varies only through row alignment; cache per first_row
    offset = len(np.asarray(drive)) - len(states)
    gram_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for i, tau in enumerate(range(1, tau_max + 1)):
        first_row = max(0, tau - offset)
        if first_row not in gram_cache:
            rows = Xb[first_row:]
            n_train = int(len(rows) * train_fraction)
            A = rows[:n_train]
            gram_cache[first_row] = (
                ridge_lambda * np.eye(Xb.shape[1]) + A.T @ A,
                rows,
            )
        gram, rows = gram_cache[first_row]
        n_train = int(len(rows) * train_fraction)
        idx = np.arange(first_row, len(states)) + offset - tau
        y = np.asarray(drive)[idx]
        if n_train < states.shape[1] + 1 or len(rows) - n_train < 3:
            raise ValueError(f"not enough rows after aligning tau={tau}")
        w = np.linalg.solve(gram, rows[:n_train].T @ y[:n_train])
        pred = rows[n_train:] @ w
        truth = y[n_train:]
        vp, vt = np.var(pred), np.var(truth)
        if vp <= 0.0 or vt <= 0.0:
            r_sq[i] = 0.0
        else:
            cov = np.mean((pred - pred.mean()) * (truth - truth.mean()))
            r_sq[i] = np.clip(cov * cov / (vp * vt), 0.0, 1.0)

    mc = float(r_sq.sum())
    return MCResult(
        topology=topo, r_sq=r_sq, mc=mc, mc_stderr=0.0, seeds=1, per_seed_mc=(mc,)
    )


def _drive_seed(cfg_seed: int, seed_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(cfg_seed, spawn_key=(0, seed_index))


def _reservoir_seed(cfg_seed: int, topo_index: int, seed_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(cfg_seed, spawn_key=(1, topo_index, seed_index))


def _run_cell(args) -> tuple[int, int, np.ndarray]:
    """One (topology, seed) cell of the sweep; used by the process pool."""
    cfg, n, topo_index, seed_index = args
    topo = build_sequence(n)[topo_index]
    drive = gen_drive(cfg.mc_drive_length, _drive_seed(cfg.seed, seed_index))
    rng = np.random.default_rng(_reservoir_seed(cfg.seed, topo_index, seed_index))
    states = collect_states(drive, topo, cfg, rng)
    result = memory_capacity(
        states,
        drive,
        tau_max=cfg.mc_tau_max,
        train_fraction=cfg.mc_train_fraction,
        ridge_lambda=cfg.mc_ridge_lambda,
        topo=topo,
    )
    return topo_index, seed_index, result.r_sq


def sweep(
    n: int,
    cfg: "RunConfig",
    seeds: int | None = None,
    jobs: int | None = None,
) -> tuple[list[MCResult], int]:
    """Memory capacity of every complexity-sequence member, seed-averaged.

    Each seed index uses one shared drive across all topologies so that
    configurations are compared on identical input realizations. Cells are
    independent and may run in parallel; aggregation is in topology order,
    so the output does not depend on the job count.

    Returns the per-topology results and the index of the maximal mean MC.
    """
    if n < 2:
        raise ValueError(f"sweep needs n >= 2, got {n}")
    seeds = cfg.mc_seeds if seeds is None else seeds
    jobs = cfg.jobs if jobs is None else jobs
    if seeds < 1:
        raise ValueError(f"seeds must be >= 1, got {seeds}")

    topos = build_sequence(n)
    tasks = [
        (cfg, n, t_idx, s_idx)
        for t_idx in range(len(topos))
        for s_idx in range(seeds)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_run_cell, tasks, chunksize=4))
    else:
        cells = [_run_cell(t) for t in tasks]

    curves: dict[int, dict[int, np.ndarray]] = {}
    for t_idx, s_idx, r_sq in cells:
        curves.setdefault(t_idx, {})[s_idx] = r_sq

    results: list[MCResult] = []
    for t_idx, topo in enumerate(topos):
        per_seed = [curves[t_idx][s] for s in range(seeds)]
        mean_curve = np.vstack(per_seed).mean(axis=0)
        per_seed_mc = tuple(float(c.sum()) for c in per_seed)
        stderr = (
            float(np.std(per_seed_mc, ddof=1) / np.sqrt(seeds)) if seeds > 1 else 0.0
        )
        results.append(
            MCResult(
                topology=topo,
                r_sq=mean_curve,
                # sum of the stored curve, so mc == r_sq.sum() holds exactly
                mc=float(mean_curve.sum()),
                mc_stderr=stderr,
                seeds=seeds,
                per_seed_mc=per_seed_mc,
            )
        )

    argmax = int(np.argmax([r.mc for r in results]))
    return results, argmax
