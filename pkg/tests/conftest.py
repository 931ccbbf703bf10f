import pytest

from sparselms.filters import Algorithm
from sparselms import harness

#: Default experiment parameters shared by the statistical suites.
TABLE_DEFAULTS = dict(mu=0.01, delta_r=0.05, n=80, snr_db=10.0, phi=0.1)


def default_cell(algorithm, *, k=8, t=400.0, lam=8e-3, iterations=20000):
    """RunParams at the default experiment cell; lam applies only to the
    regularized variants."""
    lam_eff = lam if algorithm.uses_zero_attractor else 0.0
    return harness.RunParams(
        algorithm=algorithm, lam=lam_eff, k=k, t=t, iterations=iterations, **TABLE_DEFAULTS
    )


@pytest.fixture(scope="session")
def comparison_curves():
    """Aggregate curves at the default cell (100 runs x 20000 iterations)
    for the (algorithm, T) combinations the statistical criteria need.

    Computed once per session; takes a couple of minutes' worth of kernel
    time in total, spread over worker threads.
    """
    combos = [
        (Algorithm.SLMS_RL1, 200.0),
        (Algorithm.SLMS_RL1, 400.0),
        (Algorithm.SLMS_RL1, 600.0),
        (Algorithm.LMS, 200.0),
        (Algorithm.LMS, 400.0),
        (Algorithm.LMS, 600.0),
        (Algorithm.LMS_RL1, 400.0),
        (Algorithm.SLMS, 200.0),
        (Algorithm.SLMS, 400.0),
        (Algorithm.SLMS, 600.0),
    ]
    curves = {}
    for algorithm, t in combos:
        params = default_cell(algorithm, t=t)
        curves[(algorithm.name, t)] = harness.monte_carlo(
            params, 100, 1234, label=f"{algorithm.name}_T{t:g}", workers=4
        )
    return curves
