"""Per-run error traces and their dB aggregation across Monte Carlo runs.

The per-iteration figure of merit is the normalized squared deviation
``||estimate - truth||^2 / ||truth||^2`` of one run.  Aggregation averages
the *linear* deviations across runs at each iteration and only then takes
``10 * log10`` -- mean before log, so a single diverging run rightly blows
up the average.

Aggregation sums run values in a canonical (sorted) order, which makes the
result exactly invariant to the order in which traces are supplied; this is
what lets parallel experiment execution reproduce byte-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Curves are clamped here instead of reaching -inf when a mean deviation
#: is exactly zero (only possible in contrived tests); keeps CSV finite.
DB_FLOOR = -300.0


@dataclass
class MseTrace:
    """Normalized squared deviation of one run, one value per iteration.

    A run that produced a non-finite estimate carries ``diverged=True`` and
    ``diverged_at`` (the first bad iteration); its remaining values hold the
    last finite deviation, so the array itself is always finite.
    """

    values: np.ndarray
    diverged: bool = False
    diverged_at: int | None = None

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)

    def __len__(self) -> int:
        return self.values.shape[0]


@dataclass
class AggregateCurve:
    """Across-run average deviation in dB, one value per iteration."""

    mse_db: np.ndarray
    runs_used: int
    diverged_runs: int = 0

    def __post_init__(self) -> None:
        self.mse_db = np.asarray(self.mse_db, dtype=np.float64)

    def __len__(self) -> int:
        return self.mse_db.shape[0]


def run_deviation(estimate, truth) -> float:
    """Normalized squared deviation ``||estimate - truth||^2 / ||truth||^2``."""
    estimate = np.asarray(estimate, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if estimate.shape != truth.shape:
        raise ValueError(f"length mismatch: estimate {estimate.shape} vs truth {truth.shape}")
    energy = float(truth @ truth)
    if energy == 0.0:
        raise ValueError("truth vector has zero norm; deviation undefined")
    diff = estimate - truth
    return float(diff @ diff) / energy


def aggregate(traces, m=None, exclude_diverged=False) -> AggregateCurve:
    """Average traces at each iteration and convert to dB.

    ``m``, when given, must equal the number of traces (consistency check).
    With ``exclude_diverged=True`` flagged runs are dropped from the mean;
    the default keeps them in, so unstable parameter choices show up as a
    rising curve rather than being silently masked.
    """
    traces = list(traces)
    if not traces:
        raise ValueError("cannot aggregate an empty trace list")
    if m is not None and m != len(traces):
        raise ValueError(f"m={m} does not match number of traces {len(traces)}")
    length = len(traces[0])
    if any(len(t) != length for t in traces):
        raise ValueError("all traces must have the same length")

    included = [t for t in traces if not (exclude_diverged and t.diverged)]
    if not included:
        raise ValueError("no traces left to aggregate after excluding diverged runs")

    stacked = np.stack([t.values for t in included], axis=0)
    # Canonical summation order => exact permutation invariance of the mean.
    stacked = np.sort(stacked, axis=0)
    mean = stacked.sum(axis=0) / len(included)
    with np.errstate(divide="ignore"):
        mse_db = 10.0 * np.log10(mean)
    mse_db = np.maximum(mse_db, DB_FLOOR)
    return AggregateCurve(
        mse_db=mse_db,
        runs_used=len(included),
        diverged_runs=sum(1 for t in traces if t.diverged),
    )


def steady_state(curve: AggregateCurve, tail_fraction: float = 0.1) -> float:
    """Mean of the final ``ceil(tail_fraction * length)`` dB values."""
    if len(curve) == 0:
        raise ValueError("cannot take steady state of an empty curve")
    if not (0.0 < tail_fraction < 1.0):
        raise ValueError(f"tail_fraction must lie in (0, 1), got {tail_fraction}")
    tail = math.ceil(tail_fraction * len(curve))
    return float(np.mean(curve.mse_db[-tail:]))


def write_curves_csv(path, labels, curves) -> None:
    """Write labeled curves as CSV: header ``iteration,<label1>,...``, one
    row per iteration, dB values with 6 significant digits."""
    labels = list(labels)
    curves = list(curves)
    if len(labels) != len(curves):
        raise ValueError("labels and curves must have equal length")
    if not curves:
        raise ValueError("nothing to write")
    length = len(curves[0])
    if any(len(c) != length for c in curves):
        raise ValueError("all curves must have the same length")
    with open(path, "w", newline="") as fh:
        fh.write("iteration," + ",".join(labels) + "\n")
        for i in range(length):
            row = ",".join(f"{float(c.mse_db[i]):.6g}" for c in curves)
            fh.write(f"{i},{row}\n")
