"""Two-component Gaussian-mixture impulsive noise.

Each draw comes from ``N(0, sigma_n_sq)`` with probability ``1 - phi`` and
from ``N(0, t * sigma_n_sq)`` with probability ``phi``.  Both components are
zero-mean; ``t >= 1`` scales the impulsive component's variance and ``phi``
sets how often impulses occur.  ``phi = 0`` degenerates to plain Gaussian
noise.

All sampling is real-valued double precision and driven by an explicit
``numpy.random.Generator``; a sampler call consumes one block of uniforms
(component selection) followed by one block of standard normals, in that
order, which keeps streams reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GmmParams:
    """Parameters of the Gaussian-mixture noise law.

    phi : mixture weight of the impulsive component, in [0, 1].
    sigma_n_sq : variance of the background component (linear power units), > 0.
    t : impulsive strength multiplier, >= 1; impulsive variance is ``t * sigma_n_sq``.
    """

    phi: float
    sigma_n_sq: float
    t: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.phi <= 1.0):
            raise ValueError(f"phi must lie in [0, 1], got {self.phi}")
        if not (self.sigma_n_sq > 0.0):
            raise ValueError(f"sigma_n_sq must be positive, got {self.sigma_n_sq}")
        if not (self.t >= 1.0):
            raise ValueError(f"t must be >= 1, got {self.t}")

    @property
    def impulsive_variance(self) -> float:
        return self.t * self.sigma_n_sq


def analytic_variance(params: GmmParams) -> float:
    """Closed-form variance of the mixture:
    ``(1 - phi) * sigma_n_sq + phi * t * sigma_n_sq``."""
    return (1.0 - params.phi) * params.sigma_n_sq + params.phi * params.t * params.sigma_n_sq


def sample_with_labels(params, rng, size=None):
    """Draw noise and return ``(draws, impulsive)`` where ``impulsive`` marks
    which component produced each draw.

    With ``size=None`` both return values are scalars.  Exposing the labels
    lets tests verify the empirical mixture fraction directly.
    """
    n = 1 if size is None else int(size)
    if n < 0:
        raise ValueError(f"size must be non-negative, got {size}")
    impulsive = rng.random(n) < params.phi
    scale = np.where(
        impulsive,
        np.sqrt(params.t * params.sigma_n_sq),
        np.sqrt(params.sigma_n_sq),
    )
    draws = rng.standard_normal(n) * scale
    if size is None:
        return float(draws[0]), bool(impulsive[0])
    return draws, impulsive


def sample(params, rng, size=None):
    """Draw one value (``size=None``) or a vector of ``size`` values."""
    draws, _ = sample_with_labels(params, rng, size)
    return draws


def sigma_from_snr(snr_db: float) -> float:
    """Background noise variance for a given SNR in dB, assuming unit
    training power: ``10 ** (-snr_db / 10)``."""
    return 10.0 ** (-snr_db / 10.0)
