"""Monte Carlo experiment runner.

One *run* draws a fresh sparse channel, a binary training signal and a
Gaussian-mixture noise sequence from its own random substream, filters the
observations with one algorithm configuration, and records the normalized
deviation at every iteration.  Experiments aggregate many independent runs
into dB curves, sweep the regularization weight with a stability-aware
selection rule, and compare algorithms across impulse strength or sparsity.

Seeding
-------
Run ``i`` of a labeled curve uses the substream
``SeedSequence(root_seed, spawn_key=(hash(label), i))`` (just ``(i,)`` when
common random numbers are requested, so every label shares variates).
Within a run the draw order is fixed: channel support, channel taps,
training signal, noise component selectors, noise normals.  Together this
makes every experiment a pure function of (config, root_seed), regardless
of how many worker threads execute the runs.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .channel import generate_channel, generate_training, regressor_at
from .config import ExperimentConfig, InvalidConfigError
from .filters import Algorithm, FilterConfig, FilterState, Sample, step
from .metrics import AggregateCurve, MseTrace, aggregate, run_deviation, steady_state
from .noise import GmmParams, sigma_from_snr
from .noise import sample as gmm_sample

_ALGO_CODES = {
    Algorithm.LMS: _kernels.ALGO_LMS,
    Algorithm.SLMS: _kernels.ALGO_SLMS,
    Algorithm.LMS_RL1: _kernels.ALGO_LMS_RL1,
    Algorithm.SLMS_RL1: _kernels.ALGO_SLMS_RL1,
}


class SelectionInfeasibleError(RuntimeError):
    """No grid value is stable for every sparsity; message lists verdicts."""


@dataclass(frozen=True)
class RunParams:
    """Everything a single run needs: algorithm, filter, channel and noise
    parameters plus the iteration budget."""

    algorithm: Algorithm
    mu: float
    lam: float
    delta_r: float
    n: int
    k: int
    snr_db: float
    phi: float
    t: float
    iterations: int
    normalize_channel: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not (1 <= self.k <= self.n):
            raise ValueError(f"k must satisfy 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        # Filter and noise parameter ranges are enforced by the dataclasses
        # built below; construct them eagerly so bad values fail here.
        self.filter_config()
        self.gmm_params()

    def filter_config(self) -> FilterConfig:
        return FilterConfig(
            algorithm=self.algorithm, mu=self.mu, lam=self.lam, delta_r=self.delta_r
        )

    def gmm_params(self) -> GmmParams:
        return GmmParams(phi=self.phi, sigma_n_sq=sigma_from_snr(self.snr_db), t=self.t)


@dataclass
class SweepCell:
    """One (lambda, K) cell of the sweep."""

    lam: float
    k: int
    curve: AggregateCurve
    steady_state_db: float
    stable: bool


@dataclass
class SweepResult:
    cells: dict
    selected_lambda: float
    lambda_grid: tuple
    k_set: tuple


@dataclass
class LabeledCurve:
    """An aggregate curve tagged with the algorithm and swept-axis value."""

    label: str
    algorithm: Algorithm
    axis: str
    axis_value: float
    curve: AggregateCurve


def _label_u32(label: str) -> int:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def substream(root_seed: int, run_index: int, label: str | None = None) -> np.random.SeedSequence:
    """Independent per-run substream, optionally keyed by a curve label."""
    if run_index < 0:
        raise ValueError(f"run index must be >= 0, got {run_index}")
    if label is None:
        key = (run_index,)
    else:
        key = (_label_u32(label), run_index)
    return np.random.SeedSequence(root_seed, spawn_key=key)


def _draw_run_inputs(params: RunParams, rng):
    """Per-run variates in the documented order (channel, training, noise)."""
    chan = generate_channel(params.n, params.k, rng, normalize=params.normalize_channel)
    signal = generate_training(params.iterations + params.n - 1, rng)
    noise = gmm_sample(params.gmm_params(), rng, size=params.iterations)
    return chan, signal, noise


def run_once(params: RunParams, seed, engine: str = "fast") -> MseTrace:
    """Simulate and filter one run; deterministic given (params, seed).

    ``seed`` may be an integer or a ``numpy.random.SeedSequence``.  The
    trace holds the deviation of the estimate *entering* each iteration, so
    it starts at exactly 1 (0 dB after aggregation) for the zero start.  A
    run whose estimate goes non-finite is truncated there, frozen at its
    last finite deviation, and flagged diverged.
    """
    rng = np.random.default_rng(seed)
    chan, signal, noise = _draw_run_inputs(params, rng)
    if engine == "fast":
        padded = np.concatenate([np.zeros(params.n - 1), signal])
        values, diverged, diverged_at = _kernels.run_filter(
            padded,
            noise,
            chan.taps,
            _ALGO_CODES[params.algorithm],
            params.mu,
            params.mu * params.lam,
            params.delta_r,
            params.iterations,
        )
        return MseTrace(values, bool(diverged), int(diverged_at) if diverged else None)
    if engine == "reference":
        return _run_reference(params, chan.taps, signal, noise)
    raise ValueError(f"unknown engine {engine!r} (expected 'fast' or 'reference')")


def _run_reference(params: RunParams, truth, signal, noise) -> MseTrace:
    """Straight-line composition of the public filter operations.

    Slow path kept as an independent oracle for the compiled kernel.
    """
    fc = params.filter_config()
    state = FilterState.zeros(params.n)
    values = np.empty(params.iterations)
    for n in range(params.iterations):
        ok = bool(np.isfinite(state.current).all())
        # A hugely-grown (still finite) estimate can overflow the squared
        # norm; that is exactly the divergence signal, not an error.
        with np.errstate(over="ignore"):
            dev = run_deviation(state.current, truth) if ok else np.nan
        if not (ok and np.isfinite(dev)):
            values[n:] = values[n - 1] if n > 0 else 1.0
            return MseTrace(values, diverged=True, diverged_at=n)
        values[n] = dev
        x = regressor_at(signal, n, params.n)
        d = float(truth @ x) + noise[n]
        state = step(state, Sample(x=x, d=d), fc)
    return MseTrace(values)


def monte_carlo(
    params: RunParams,
    runs: int,
    root_seed: int,
    *,
    label: str | None = None,
    workers: int = 1,
    exclude_diverged: bool = False,
    engine: str = "fast",
    seed_for_run=None,
) -> AggregateCurve:
    """Aggregate ``runs`` independent runs on index-derived substreams.

    The result does not depend on ``workers``: substreams are derived from
    the run index, traces are collected in index order, and aggregation is
    permutation-invariant.  ``seed_for_run`` (a callable ``index -> seed``)
    overrides the seed schedule; it exists for tests that force identical
    variates across runs.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    if seed_for_run is None:
        seeds = [substream(root_seed, i, label) for i in range(runs)]
    else:
        seeds = [seed_for_run(i) for i in range(runs)]
    if workers <= 1:
        traces = [run_once(params, s, engine=engine) for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(lambda s: run_once(params, s, engine=engine), seeds))
    return aggregate(traces, exclude_diverged=exclude_diverged)


def channel_realizations(params: RunParams, runs: int, root_seed: int, label: str | None = None):
    """Re-derive the channel realizations a ``monte_carlo`` call used.

    The channel is the first draw of a run's substream, so replaying just
    that draw reproduces the exact channels without re-filtering.
    """
    out = []
    for i in range(runs):
        rng = np.random.default_rng(substream(root_seed, i, label))
        out.append(generate_channel(params.n, params.k, rng, normalize=params.normalize_channel))
    return out


def stability_verdict(curve: AggregateCurve) -> bool:
    """Stable iff the curve is finite everywhere and ends at or below its
    starting level.  The weakest formal proxy that flags curves which rise
    or blow up instead of converging."""
    mse_db = curve.mse_db
    return bool(np.isfinite(mse_db).all() and mse_db[-1] <= mse_db[0])


def _cell_label(config: ExperimentConfig, text: str) -> str | None:
    return None if config.common_random_numbers else text


def sweep_cells(config: ExperimentConfig, *, workers: int = 1, engine: str = "fast") -> dict:
    """Run the full (lambda, K) grid with SLMS_RL1 and judge each cell."""
    config.validate()
    if Algorithm.SLMS_RL1 not in config.algorithms:
        raise InvalidConfigError("the sweep runs SLMS_RL1; add it to 'algorithms'")
    cells = {}
    for k in config.k_set:
        for lam in config.lambda_grid:
            params = RunParams(
                algorithm=Algorithm.SLMS_RL1,
                mu=config.mu,
                lam=lam,
                delta_r=config.delta_r,
                n=config.n,
                k=k,
                snr_db=config.snr_db,
                phi=config.phi,
                t=config.t_fixed,
                iterations=config.iterations,
                normalize_channel=config.normalize_channel_per_run,
            )
            curve = monte_carlo(
                params,
                config.runs,
                config.root_seed,
                label=_cell_label(config, f"SLMS_RL1_K{k}_lam{lam:g}"),
                workers=workers,
                exclude_diverged=config.exclude_diverged,
                engine=engine,
            )
            cells[(lam, k)] = SweepCell(
                lam=lam,
                k=k,
                curve=curve,
                steady_state_db=steady_state(curve, config.tail_fraction),
                stable=stability_verdict(curve),
            )
    return cells


def select_lambda(cells: dict, lambda_grid, k_set) -> float:
    """Pick the grid value that is stable for *every* sparsity and, among
    those, minimizes the worst-case (max over K) steady-state level.  Ties
    go to the smaller lambda."""
    feasible = []
    for lam in lambda_grid:
        if all(cells[(lam, k)].stable for k in k_set):
            worst = max(cells[(lam, k)].steady_state_db for k in k_set)
            feasible.append((lam, worst))
    if not feasible:
        lines = ["no lambda in the grid is stable for every sparsity"]
        for lam in lambda_grid:
            verdicts = ", ".join(
                f"K={k}: {'stable' if cells[(lam, k)].stable else 'UNSTABLE'}" for k in k_set
            )
            lines.append(f"  lambda={lam:g}: {verdicts}")
        raise SelectionInfeasibleError("\n".join(lines))
    best_lam, best_worst = feasible[0]
    for lam, worst in feasible[1:]:
        if worst < best_worst:
            best_lam, best_worst = lam, worst
    return best_lam


def repa_sweep(config: ExperimentConfig, *, workers: int = 1, engine: str = "fast") -> SweepResult:
    """Sweep the regularization-weight grid and select a value by the
    stability-aware rule."""
    cells = sweep_cells(config, workers=workers, engine=engine)
    selected = select_lambda(cells, config.lambda_grid, config.k_set)
    return SweepResult(
        cells=cells,
        selected_lambda=selected,
        lambda_grid=tuple(config.lambda_grid),
        k_set=tuple(config.k_set),
    )


def compare_algorithms(
    config: ExperimentConfig, axis: str, *, workers: int = 1, engine: str = "fast"
):
    """Run every configured algorithm across one swept axis.

    ``axis="T"`` sweeps impulse strength at fixed sparsity ``k_fixed``;
    ``axis="K"`` sweeps sparsity at fixed strength ``t_fixed``.  The
    regularized variants use ``lambda_fixed``; plain LMS/SLMS ignore it.
    Returns one labeled curve per (algorithm, axis value), in configuration
    order.
    """
    config.validate()
    if axis not in ("T", "K"):
        raise ValueError(f"axis must be 'T' or 'K', got {axis!r}")
    axis_values = config.t_set if axis == "T" else config.k_set
    results = []
    for algorithm in config.algorithms:
        lam = config.lambda_fixed if algorithm.uses_zero_attractor else 0.0
        for value in axis_values:
            label_text = f"{algorithm.name}_{axis}{value:g}"
            params = RunParams(
                algorithm=algorithm,
                mu=config.mu,
                lam=lam,
                delta_r=config.delta_r,
                n=config.n,
                k=config.k_fixed if axis == "T" else int(value),
                snr_db=config.snr_db,
                phi=config.phi,
                t=float(value) if axis == "T" else config.t_fixed,
                iterations=config.iterations,
                normalize_channel=config.normalize_channel_per_run,
            )
            curve = monte_carlo(
                params,
                config.runs,
                config.root_seed,
                label=_cell_label(config, label_text),
                workers=workers,
                exclude_diverged=config.exclude_diverged,
                engine=engine,
            )
            results.append(
                LabeledCurve(
                    label=label_text,
                    algorithm=algorithm,
                    axis=axis,
                    axis_value=float(value),
                    curve=curve,
                )
            )
    return results


def fixed_cell_params(config: ExperimentConfig, algorithm: Algorithm) -> RunParams:
    """Parameters of the single (k_fixed, t_fixed, lambda_fixed) cell."""
    lam = config.lambda_fixed if algorithm.uses_zero_attractor else 0.0
    return RunParams(
        algorithm=algorithm,
        mu=config.mu,
        lam=lam,
        delta_r=config.delta_r,
        n=config.n,
        k=config.k_fixed,
        snr_db=config.snr_db,
        phi=config.phi,
        t=config.t_fixed,
        iterations=config.iterations,
        normalize_channel=config.normalize_channel_per_run,
    )


def run_configuration(config: ExperimentConfig, *, workers: int = 1, engine: str = "fast"):
    """Run the single fixed cell (k_fixed, t_fixed, lambda_fixed) for every
    configured algorithm.  Backs the ``run`` CLI subcommand."""
    config.validate()
    results = []
    for algorithm in config.algorithms:
        params = fixed_cell_params(config, algorithm)
        curve = monte_carlo(
            params,
            config.runs,
            config.root_seed,
            label=_cell_label(config, algorithm.name),
            workers=workers,
            exclude_diverged=config.exclude_diverged,
            engine=engine,
        )
        results.append(
            LabeledCurve(
                label=algorithm.name,
                algorithm=algorithm,
                axis="",
                axis_value=0.0,
                curve=curve,
            )
        )
    return results
