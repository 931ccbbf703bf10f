"""Sparse FIR channel estimation with LMS-family adaptive filters under
Gaussian-mixture impulsive noise, plus the Monte Carlo experiment harness
used to pick the sparsity-regularization weight."""

from .channel import ChannelRealization, generate_channel, generate_training, regressor_at
from .config import DEFAULT_LAMBDA_GRID, ExperimentConfig, InvalidConfigError
from .filters import (
    Algorithm,
    FilterConfig,
    FilterState,
    Sample,
    cost,
    error,
    reweight,
    sgn,
    step,
)
from .harness import (
    LabeledCurve,
    RunParams,
    SelectionInfeasibleError,
    SweepCell,
    SweepResult,
    compare_algorithms,
    monte_carlo,
    repa_sweep,
    run_once,
    select_lambda,
    stability_verdict,
    substream,
    sweep_cells,
)
from .metrics import (
    AggregateCurve,
    MseTrace,
    aggregate,
    run_deviation,
    steady_state,
    write_curves_csv,
)
from .noise import GmmParams, analytic_variance, sample, sample_with_labels, sigma_from_snr

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "AggregateCurve",
    "ChannelRealization",
    "DEFAULT_LAMBDA_GRID",
    "ExperimentConfig",
    "FilterConfig",
    "FilterState",
    "GmmParams",
    "InvalidConfigError",
    "LabeledCurve",
    "MseTrace",
    "RunParams",
    "Sample",
    "SelectionInfeasibleError",
    "SweepCell",
    "SweepResult",
    "aggregate",
    "analytic_variance",
    "compare_algorithms",
    "cost",
    "error",
    "generate_channel",
    "generate_training",
    "monte_carlo",
    "regressor_at",
    "repa_sweep",
    "reweight",
    "run_deviation",
    "run_once",
    "sample",
    "sample_with_labels",
    "select_lambda",
    "sgn",
    "sigma_from_snr",
    "stability_verdict",
    "steady_state",
    "step",
    "substream",
    "sweep_cells",
    "write_curves_csv",
]
