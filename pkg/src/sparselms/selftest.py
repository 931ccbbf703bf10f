"""Quick invariant suite behind the ``selftest`` CLI subcommand.

Small, fast checks of the core contracts: algebraic identities of the
update rules, noise and channel statistics, metric identities, and
determinism of the runner.  Prints one PASS/FAIL line per check.
"""

from __future__ import annotations

import numpy as np

from . import harness, noise
from .channel import generate_channel, generate_training
from .filters import Algorithm, FilterConfig, FilterState, Sample, step
from .metrics import MseTrace, aggregate, steady_state


def _check_reduction_identities() -> None:
    rng = np.random.default_rng(7)
    n = 32
    for _ in range(10):
        pairs = [
            (FilterConfig(Algorithm.SLMS_RL1, mu=0.01, lam=0.0), FilterConfig(Algorithm.SLMS, mu=0.01)),
            (FilterConfig(Algorithm.LMS_RL1, mu=0.01, lam=0.0), FilterConfig(Algorithm.LMS, mu=0.01)),
        ]
        for cfg_reg, cfg_plain in pairs:
            a = FilterState.zeros(n)
            b = FilterState.zeros(n)
            for _ in range(50):
                sample = Sample(x=rng.standard_normal(n), d=float(rng.standard_normal()))
                a = step(a, sample, cfg_reg)
                b = step(b, sample, cfg_plain)
                assert np.array_equal(a.current, b.current)


def _check_step_oracle() -> None:
    cfg = FilterConfig(Algorithm.SLMS_RL1, mu=0.01, lam=0.1, delta_r=0.05)
    state = FilterState(current=np.array([0.5, -0.2]), previous=np.array([0.4, -0.1]))
    out = step(state, Sample(x=np.array([1.0, -1.0]), d=0.4), cfg)
    expected = np.array([0.5 - 0.01 - 0.001 / 0.45, -0.2 + 0.01 + 0.001 / 0.15])
    assert np.max(np.abs(out.current - expected)) < 1e-12


def _check_reweight_sign() -> None:
    from .filters import reweight

    rng = np.random.default_rng(11)
    w = rng.standard_normal(64)
    f = reweight(w, 0.05)
    assert (f > 0).all()
    assert np.array_equal(np.sign(f * w), np.sign(w))


def _check_gmm_variance() -> None:
    params = noise.GmmParams(phi=0.1, sigma_n_sq=0.1, t=400.0)
    draws = noise.sample(params, np.random.default_rng(3), size=200_000)
    target = noise.analytic_variance(params)
    assert abs(float(np.var(draws)) - target) / target < 0.05


def _check_training_and_channel() -> None:
    rng = np.random.default_rng(5)
    sig = generate_training(10_000, rng)
    assert set(np.unique(sig)) == {-1.0, 1.0}
    assert float(np.mean(sig**2)) == 1.0
    norms = [
        float(np.sum(generate_channel(80, 8, rng).taps ** 2)) for _ in range(2000)
    ]
    assert abs(float(np.mean(norms)) - 1.0) < 0.1
    assert all(np.count_nonzero(generate_channel(80, 8, rng).taps) == 8 for _ in range(20))


def _check_metric_identities() -> None:
    trace = MseTrace(np.array([1.0, 0.5, 0.25]))
    single = aggregate([trace])
    double = aggregate([trace, MseTrace(trace.values.copy())])
    assert np.array_equal(single.mse_db, double.mse_db)
    two = aggregate([MseTrace(np.array([0.1])), MseTrace(np.array([0.3]))])
    assert abs(two.mse_db[0] - 10.0 * np.log10(0.2)) < 1e-12
    assert steady_state(single, 0.5) == float(np.mean(single.mse_db[-2:]))


def _check_runner_determinism() -> None:
    params = harness.RunParams(
        algorithm=Algorithm.SLMS_RL1, mu=0.01, lam=8e-3, delta_r=0.05,
        n=40, k=4, snr_db=10.0, phi=0.1, t=400.0, iterations=400,
    )
    a = harness.run_once(params, harness.substream(99, 0))
    b = harness.run_once(params, harness.substream(99, 0))
    assert np.array_equal(a.values, b.values)


def _check_engines_agree() -> None:
    params = harness.RunParams(
        algorithm=Algorithm.SLMS_RL1, mu=0.01, lam=8e-3, delta_r=0.05,
        n=24, k=4, snr_db=10.0, phi=0.1, t=400.0, iterations=200,
    )
    fast = harness.run_once(params, 123, engine="fast")
    ref = harness.run_once(params, 123, engine="reference")
    assert np.allclose(fast.values, ref.values, rtol=1e-10, atol=1e-12)


def _check_worker_invariance() -> None:
    params = harness.RunParams(
        algorithm=Algorithm.SLMS, mu=0.01, lam=0.0, delta_r=0.05,
        n=24, k=4, snr_db=10.0, phi=0.1, t=400.0, iterations=200,
    )
    serial = harness.monte_carlo(params, 8, 17, workers=1)
    threaded = harness.monte_carlo(params, 8, 17, workers=4)
    assert np.array_equal(serial.mse_db, threaded.mse_db)


CHECKS = [
    ("filter reduction identities (lam=0)", _check_reduction_identities),
    ("worked update-step value", _check_step_oracle),
    ("reweight positivity and sign identity", _check_reweight_sign),
    ("mixture noise variance vs closed form", _check_gmm_variance),
    ("training signal and channel statistics", _check_training_and_channel),
    ("aggregation identities", _check_metric_identities),
    ("single-run determinism", _check_runner_determinism),
    ("compiled kernel matches reference loop", _check_engines_agree),
    ("worker-count invariance", _check_worker_invariance),
]


def run_selftest() -> bool:
    """Run all checks; print one line each; return overall success."""
    all_ok = True
    for name, check in CHECKS:
        try:
            check()
        except Exception as exc:  # noqa: BLE001 - report and keep going
            print(f"FAIL  {name}: {exc}")
            all_ok = False
        else:
            print(f"PASS  {name}")
    return all_ok
