import csv

import numpy as np
import pytest

from sparselms.channel import (
    ChannelRealization,
    generate_channel,
    generate_training,
    regressor_at,
    write_channel_dump,
)


def test_channel_has_exact_sparsity():
    chan = generate_channel(80, 4, np.random.default_rng(0))
    assert np.count_nonzero(chan.taps) == 4
    assert np.sum(chan.taps == 0.0) == 76
    assert chan.n == 80 and chan.k == 4


def test_support_is_sorted_unique_and_matches_taps():
    rng = np.random.default_rng(1)
    for _ in range(20):
        chan = generate_channel(30, 7, rng)
        assert np.array_equal(chan.support, np.sort(chan.support))
        assert len(np.unique(chan.support)) == 7
        assert np.array_equal(np.flatnonzero(chan.taps), chan.support)


def test_degenerate_single_tap_channel():
    rng = np.random.default_rng(2)
    draws = np.array([generate_channel(1, 1, rng).taps[0] for _ in range(20_000)])
    # k = 1: the single tap is N(0, 1).
    assert abs(float(np.var(draws)) - 1.0) < 0.05
    assert abs(float(np.mean(draws))) < 0.03


@pytest.mark.parametrize("n,k", [(10, 0), (10, 11), (10, -1)])
def test_generate_channel_rejects_bad_sparsity(n, k):
    with pytest.raises(ValueError, match="sparsity"):
        generate_channel(n, k, np.random.default_rng(0))


def test_expected_energy_is_one():
    rng = np.random.default_rng(3)
    norms = [float(np.sum(generate_channel(80, 8, rng).taps ** 2)) for _ in range(10_000)]
    assert abs(float(np.mean(norms)) - 1.0) < 0.05


def test_normalized_realizations_have_unit_norm():
    rng = np.random.default_rng(4)
    for _ in range(10):
        chan = generate_channel(40, 6, rng, normalize=True)
        assert float(np.sum(chan.taps**2)) == pytest.approx(1.0, abs=1e-12)


def test_training_codomain_and_length():
    sig = generate_training(10, np.random.default_rng(5))
    assert sig.shape == (10,)
    assert set(np.unique(sig)) <= {-1.0, 1.0}


def test_training_power_is_exactly_one():
    sig = generate_training(1000, np.random.default_rng(6))
    assert float(np.mean(sig**2)) == 1.0


def test_training_mean_is_balanced():
    sig = generate_training(1_000_000, np.random.default_rng(7))
    assert abs(float(np.mean(sig))) < 0.004


def test_training_rejects_empty():
    with pytest.raises(ValueError, match="length"):
        generate_training(0, np.random.default_rng(0))


def test_regressor_zero_prehistory():
    signal = np.array([1.0, -1.0, 1.0, 1.0])
    assert np.array_equal(regressor_at(signal, 0, 3), [1.0, 0.0, 0.0])


def test_regressor_direct_window():
    signal = np.array([1.0, -1.0, 1.0, -1.0])
    # newest first: x(2), x(1), x(0)
    assert np.array_equal(regressor_at(signal, 2, 3), [1.0, -1.0, 1.0])


def test_regressor_windows_overlap():
    rng = np.random.default_rng(8)
    signal = generate_training(50, rng)
    for n in range(1, 40):
        a = regressor_at(signal, n, 8)
        b = regressor_at(signal, n - 1, 8)
        assert np.array_equal(a[1:], b[:-1])


def test_regressor_is_pure():
    signal = generate_training(20, np.random.default_rng(9))
    assert np.array_equal(regressor_at(signal, 5, 4), regressor_at(signal, 5, 4))


def test_regressor_rejects_bad_index():
    signal = np.ones(4)
    with pytest.raises(ValueError, match="time index"):
        regressor_at(signal, -1, 3)
    with pytest.raises(ValueError, match="cover"):
        regressor_at(signal, 4, 3)


def test_channel_dump_format(tmp_path):
    chans = [
        ChannelRealization(taps=np.array([0.0, 0.25, 0.0, -1.5]), support=np.array([1, 3])),
        ChannelRealization(taps=np.array([2.0, 0.0, 0.0, 0.0]), support=np.array([0])),
    ]
    path = tmp_path / "channels.csv"
    write_channel_dump(path, chans)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["run_id", "tap_index", "value"]
    assert rows[1:] == [
        ["0", "1", "0.25"],
        ["0", "3", "-1.5"],
        ["1", "0", "2.0"],
    ]
