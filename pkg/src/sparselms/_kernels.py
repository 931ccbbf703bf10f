"""Compiled inner loop for single-run filtering.

The sequential coefficient update cannot be vectorized across time, so the
per-iteration loop is JIT-compiled with numba (``nogil`` lets independent
runs execute on a thread pool).  The kernel mirrors ``filters.step``
exactly; ``harness`` keeps a plain-Python reference path built from
``filters.step`` and the test suite asserts the two agree.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

# Keep in sync with _ALGO_CODES in harness.py.
ALGO_LMS = 0
ALGO_SLMS = 1
ALGO_LMS_RL1 = 2
ALGO_SLMS_RL1 = 3


@njit(cache=True, nogil=True)
def run_filter(padded_signal, noise, truth, algo, mu, rho, delta_r, iterations):
    """Filter one run and record its normalized deviation trace.

    padded_signal : training signal with ``n_taps - 1`` leading zeros, so the
        regressor at time n is ``padded_signal[n : n + n_taps]`` reversed.
    noise : per-iteration additive noise, length >= iterations.
    truth : true tap vector (length n_taps).

    Returns ``(values, diverged, diverged_at)``.  ``values[n]`` is the
    deviation of the estimate *entering* iteration n (so ``values[0] == 1``
    for the zero start).  If the estimate or its deviation goes non-finite,
    the trace is frozen at the last finite value from that point on.
    """
    n_taps = truth.shape[0]
    w = np.zeros(n_taps)
    w_prev = np.zeros(n_taps)
    values = np.empty(iterations)

    truth_energy = 0.0
    for j in range(n_taps):
        truth_energy += truth[j] * truth[j]

    diverged = False
    diverged_at = -1
    for n in range(iterations):
        dev = 0.0
        ok = True
        for j in range(n_taps):
            wj = w[j]
            if not math.isfinite(wj):
                ok = False
                break
            diff = wj - truth[j]
            dev += diff * diff
        if ok:
            dev /= truth_energy
            if not math.isfinite(dev):
                ok = False
        if not ok:
            last = values[n - 1] if n > 0 else 1.0
            for m in range(n, iterations):
                values[m] = last
            diverged = True
            diverged_at = n
            break
        values[n] = dev

        base = n_taps - 1 + n
        est = 0.0
        clean = 0.0
        for j in range(n_taps):
            xj = padded_signal[base - j]
            est += w[j] * xj
            clean += truth[j] * xj
        e = clean + noise[n] - est

        if algo == ALGO_LMS or algo == ALGO_LMS_RL1:
            gain = mu * e
        else:
            gain = mu * (1.0 if e > 0.0 else (-1.0 if e < 0.0 else 0.0))

        if (algo == ALGO_LMS_RL1 or algo == ALGO_SLMS_RL1) and rho != 0.0:
            for j in range(n_taps):
                wj = w[j]
                s = 1.0 if wj > 0.0 else (-1.0 if wj < 0.0 else 0.0)
                w_prev_j = w_prev[j]
                w_prev[j] = wj
                w[j] = wj + gain * padded_signal[base - j] - rho * s / (delta_r + abs(w_prev_j))
        else:
            for j in range(n_taps):
                wj = w[j]
                w_prev[j] = wj
                w[j] = wj + gain * padded_signal[base - j]

    return values, diverged, diverged_at
