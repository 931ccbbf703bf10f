"""Adaptive update rules for sparse FIR identification under impulsive noise.

Four variants of the stochastic-gradient family are implemented:

* ``LMS``      -- plain least mean squares,
* ``SLMS``     -- sign-error LMS (the error is replaced by its sign, which
  bounds the step under heavy-tailed noise),
* ``LMS_RL1``  -- LMS with a reweighted-L1 zero attractor,
* ``SLMS_RL1`` -- sign-error LMS with the same zero attractor.

The zero attractor subtracts ``rho * sgn(w[i]) / (delta_r + |w_prev[i]|)``
from every coefficient, where ``rho = mu * lam``.  The reweighting shrinks
small coefficients harder than large ones, which is what exploits sparsity.
Note the denominator uses the *previous* iterate while the numerator sign
uses the current one, so filter state carries two consecutive estimates.

All operations are pure functions: they never mutate their inputs and a
:class:`FilterState` is safe to share across threads as long as it is only
read.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class Algorithm(enum.Enum):
    """The supported adaptive update rules."""

    LMS = "LMS"
    SLMS = "SLMS"
    LMS_RL1 = "LMS_RL1"
    SLMS_RL1 = "SLMS_RL1"

    @property
    def uses_sign_error(self) -> bool:
        return self in (Algorithm.SLMS, Algorithm.SLMS_RL1)

    @property
    def uses_zero_attractor(self) -> bool:
        return self in (Algorithm.LMS_RL1, Algorithm.SLMS_RL1)

    @classmethod
    def parse(cls, name: str) -> "Algorithm":
        """Parse a (case-insensitive, dash-tolerant) algorithm name."""
        key = name.strip().upper().replace("-", "_")
        try:
            return cls[key]
        except KeyError:
            known = ", ".join(a.name for a in cls)
            raise ValueError(f"unknown algorithm {name!r} (expected one of {known})") from None


@dataclass(frozen=True)
class FilterConfig:
    """Static parameters of one adaptive filter.

    Parameters
    ----------
    algorithm : Algorithm
        Which update rule to apply.
    mu : float
        Step size, must be positive.
    lam : float
        Regularization weight of the sparsity penalty, must be >= 0.
        Ignored by ``LMS`` and ``SLMS``.
    delta_r : float
        Reweighting threshold, must be positive.  Bounds the attractor
        strength for coefficients near zero.
    """

    algorithm: Algorithm
    mu: float
    lam: float = 0.0
    delta_r: float = 0.05

    def __post_init__(self) -> None:
        if not (self.mu > 0.0):
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not (self.delta_r > 0.0):
            raise ValueError(f"delta_r must be positive, got {self.delta_r}")
        if not (self.lam >= 0.0):
            raise ValueError(f"lam must be non-negative, got {self.lam}")

    @property
    def rho(self) -> float:
        """Zero-attractor gain; always derived as ``mu * lam``."""
        return self.mu * self.lam


@dataclass
class FilterState:
    """Two consecutive coefficient estimates.

    ``current`` is the estimate at the present iteration and ``previous``
    the one before it; the reweighted attractor needs both.  Both vectors
    always have the same length.
    """

    current: np.ndarray
    previous: np.ndarray

    def __post_init__(self) -> None:
        self.current = np.asarray(self.current, dtype=np.float64)
        self.previous = np.asarray(self.previous, dtype=np.float64)
        if self.current.ndim != 1 or self.previous.ndim != 1:
            raise ValueError("filter state vectors must be one-dimensional")
        if self.current.shape != self.previous.shape:
            raise ValueError(
                f"current and previous must have identical length, got "
                f"{self.current.shape[0]} and {self.previous.shape[0]}"
            )

    @classmethod
    def zeros(cls, n: int) -> "FilterState":
        """Fresh all-zero state of length ``n`` (the conventional start)."""
        if n < 1:
            raise ValueError(f"filter length must be >= 1, got {n}")
        return cls(current=np.zeros(n), previous=np.zeros(n))

    def __len__(self) -> int:
        return self.current.shape[0]


@dataclass
class Sample:
    """One observation pair: regressor ``x`` (newest entry first) and scalar ``d``."""

    x: np.ndarray
    d: float

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=np.float64)
        if self.x.ndim != 1:
            raise ValueError("regressor must be one-dimensional")
        self.d = float(self.d)


def sgn(v: float) -> float:
    """Sign nonlinearity with the convention ``sgn(0) = 0``.

    Returning 0 at 0 keeps an exactly-zero coefficient (and the all-zero
    state under zero error) a fixed point of the update.
    """
    if v > 0.0:
        return 1.0
    if v < 0.0:
        return -1.0
    return 0.0


def _check_dims(state: FilterState, sample: Sample) -> None:
    if sample.x.shape[0] != state.current.shape[0]:
        raise ValueError(
            f"regressor length {sample.x.shape[0]} does not match "
            f"filter length {state.current.shape[0]}"
        )


def error(state: FilterState, sample: Sample) -> float:
    """Instantaneous estimation error ``e = d - current . x``."""
    _check_dims(state, sample)
    return float(sample.d - state.current @ sample.x)


def reweight(previous: np.ndarray, delta_r: float) -> np.ndarray:
    """Reweighting vector ``f[i] = 1 / (delta_r + |previous[i]|)``.

    Every element is strictly positive because ``delta_r > 0``.
    """
    if not (delta_r > 0.0):
        raise ValueError(f"delta_r must be positive, got {delta_r}")
    previous = np.asarray(previous, dtype=np.float64)
    return 1.0 / (delta_r + np.abs(previous))


def cost(state: FilterState, sample: Sample, config: FilterConfig) -> float:
    """Instantaneous cost ``|e| + lam * sum_i f[i] * |current[i]|``.

    The weights ``f`` are computed from ``state.previous``, so perturbing
    ``state.current`` leaves them fixed.  Reduces to ``|e|`` when
    ``lam == 0``.
    """
    e = error(state, sample)
    if config.lam == 0.0:
        return abs(e)
    f = reweight(state.previous, config.delta_r)
    return abs(e) + config.lam * float(np.abs(f * state.current).sum())


def step(state: FilterState, sample: Sample, config: FilterConfig) -> FilterState:
    """Apply one update of the configured algorithm and return the new state.

    The returned state's ``previous`` is exactly the input ``current``.
    Raises ``ValueError`` on dimension mismatch or non-finite inputs (a
    non-finite estimate signals a diverged run and must not be stepped).
    """
    _check_dims(state, sample)
    if not (
        math.isfinite(sample.d)
        and np.isfinite(sample.x).all()
        and np.isfinite(state.current).all()
        and np.isfinite(state.previous).all()
    ):
        raise ValueError("non-finite value in filter step input (diverged run?)")

    e = float(sample.d - state.current @ sample.x)
    if config.algorithm.uses_sign_error:
        gain = config.mu * sgn(e)
    else:
        gain = config.mu * e
    new = state.current + gain * sample.x
    # rho == 0 makes the attractor vanish identically; skipping it keeps the
    # lam=0 variants bit-identical to their unregularized counterparts.
    if config.algorithm.uses_zero_attractor and config.rho != 0.0:
        new = new - config.rho * np.sign(state.current) / (config.delta_r + np.abs(state.previous))
    return FilterState(current=new, previous=state.current)
