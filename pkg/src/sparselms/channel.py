"""Random sparse FIR channels and binary training signals.

A channel realization is a length-``n`` tap vector with exactly ``k``
nonzero entries at uniformly chosen positions.  Nonzero taps are i.i.d.
zero-mean Gaussian with variance ``1/k`` so the expected squared norm of
the whole vector is 1.  Training signals are i.i.d. equiprobable +/-1
sequences (unit power by construction).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


@dataclass
class ChannelRealization:
    """True sparse tap vector plus the sorted index set of its nonzeros."""

    taps: np.ndarray
    support: np.ndarray

    def __post_init__(self) -> None:
        self.taps = np.asarray(self.taps, dtype=np.float64)
        self.support = np.asarray(self.support, dtype=np.int64)

    @property
    def n(self) -> int:
        return self.taps.shape[0]

    @property
    def k(self) -> int:
        return self.support.shape[0]


def generate_channel(n, k, rng, normalize=False):
    """Draw one sparse channel realization.

    Support positions are sampled uniformly without replacement, then the
    ``k`` nonzero taps are drawn ``N(0, 1/k)`` (in that order, so the stream
    layout is fixed).  With ``normalize=True`` each realization is rescaled
    to exactly unit norm instead of unit norm in expectation.
    """
    if not (1 <= k <= n):
        raise ValueError(f"sparsity k must satisfy 1 <= k <= n, got k={k}, n={n}")
    support = np.sort(rng.choice(n, size=k, replace=False))
    values = rng.standard_normal(k) / np.sqrt(k)
    if normalize:
        values = values / np.linalg.norm(values)
    taps = np.zeros(n)
    taps[support] = values
    return ChannelRealization(taps=taps, support=support)


def generate_training(length, rng):
    """I.i.d. equiprobable +/-1 training sequence of the requested length."""
    if length < 1:
        raise ValueError(f"training length must be >= 1, got {length}")
    return rng.integers(0, 2, size=length).astype(np.float64) * 2.0 - 1.0


def regressor_at(signal, n, n_taps):
    """Sliding regressor window at time ``n``: the ``n_taps`` most recent
    samples, newest first.  Sample indices before time 0 read as zero.
    """
    if n < 0:
        raise ValueError(f"time index must be >= 0, got {n}")
    signal = np.asarray(signal, dtype=np.float64)
    if signal.shape[0] <= n:
        raise ValueError(f"signal of length {signal.shape[0]} does not cover time index {n}")
    out = np.zeros(n_taps)
    m = min(n_taps, n + 1)
    out[:m] = signal[n - m + 1 : n + 1][::-1]
    return out


def write_channel_dump(path, realizations) -> None:
    """CSV dump of realizations: one row per nonzero tap, columns
    ``run_id,tap_index,value`` (zero taps omitted)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run_id", "tap_index", "value"])
        for run_id, chan in enumerate(realizations):
            for idx in chan.support:
                writer.writerow([run_id, int(idx), repr(float(chan.taps[idx]))])
