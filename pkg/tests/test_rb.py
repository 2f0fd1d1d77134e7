import csv

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rbfourier.errors import FitDiverged, InsufficientData, TableMismatch, ValidationError
from rbfourier.fourier import convolve, fourier_transform
from rbfourier.rb import (RbConfig, RbData, fit_decay, rb_enumerate, rb_exact, rb_exact_curve, rb_monte_carlo,
                          sample_sequences, sequence_average, write_decay_csv)
from rbfourier.reps import MatrixFunction, builtin_irreps, ideal_qubit_gateset
from rbfourier.sampling import random_noisy_gateset


@pytest.fixture(scope="module")
def proctor_cfg(s4, proctor, ideal):
    return RbConfig(proctor, ideal, s4, sequences_per_length=2000, lengths=(1, 2, 4, 8, 16, 32), seed=7)


@pytest.fixture(scope="module")
def random_sets(s4):
    rng = np.random.default_rng(99)
    return [random_noisy_gateset(s4.table, rng, strength=0.2, max_loss=0.05) for _ in range(5)]


def test_ideal_survival_is_one(s4, ideal):
    cfg = RbConfig(ideal, ideal, s4, lengths=(1, 2, 5, 17), sequences_per_length=50)
    assert np.allclose(rb_exact_curve(cfg, cfg.lengths), 1, atol=1e-12)
    data = rb_monte_carlo(cfg)
    assert np.allclose(data.mean, 1, atol=1e-12)
    assert np.allclose(data.stderr, 0, atol=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_exact_matches_enumeration_proctor(proctor_cfg, m):
    assert rb_exact(proctor_cfg, m) == pytest.approx(rb_enumerate(proctor_cfg, m), abs=1e-12)


def test_exact_matches_enumeration_random(s4, ideal, random_sets):
    for phi in random_sets:
        cfg = RbConfig(phi, ideal, s4)
        for m in (2, 3):
            assert rb_exact(cfg, m) == pytest.approx(rb_enumerate(cfg, m), abs=1e-12)


def test_nested_convolution_form(s4, ideal, random_sets):
    # Phi_m(e) = E over sequences, i.e. the m-fold group convolution of phi at e
    phi = random_sets[0]
    cfg = RbConfig(phi, ideal, s4)
    conv = phi
    for m in (1, 2, 3):
        assert np.allclose(sequence_average(cfg, m), conv[s4.table.identity_index], atol=1e-12)
        conv = convolve(conv, phi)


def test_monte_carlo_agrees_with_exact(proctor_cfg):
    data = rb_monte_carlo(proctor_cfg)
    exact = rb_exact_curve(proctor_cfg, proctor_cfg.lengths)
    assert np.all(np.abs(data.mean - exact) <= 3 * data.stderr + 1e-12)


def test_monte_carlo_unbiased_over_seeds(s4, ideal, random_sets):
    phi = random_sets[1]
    means = []
    for seed in range(20):
        cfg = RbConfig(phi, ideal, s4, lengths=(6,), sequences_per_length=200, seed=seed)
        means.append(rb_monte_carlo(cfg).mean[0])
    exact = rb_exact(RbConfig(phi, ideal, s4), 6)
    se = np.std(means, ddof=1) / np.sqrt(len(means))
    assert abs(np.mean(means) - exact) <= 4 * se + 1e-12


def test_monte_carlo_deterministic(proctor_cfg):
    a, b = rb_monte_carlo(proctor_cfg), rb_monte_carlo(proctor_cfg)
    assert np.array_equal(a.mean, b.mean) and np.array_equal(a.stderr, b.stderr)


def test_sequences_prefix_stable_and_seeded(s4):
    a = sample_sequences(s4.table, 9, 10, seed=3)
    b = sample_sequences(s4.table, 9, 25, seed=3)
    assert np.array_equal(a, b[:10])
    assert not np.array_equal(a, sample_sequences(s4.table, 9, 10, seed=4))
    assert a.shape == (10, 8)
    assert sample_sequences(s4.table, 1, 5, 0).shape == (5, 0)


def test_config_validation(s4, csu23, ideal):
    with pytest.raises(ValidationError):
        RbConfig(ideal, ideal, s4, sequences_per_length=0)
    with pytest.raises(ValidationError):
        RbConfig(ideal, ideal, s4, lengths=(0, 1))
    with pytest.raises(TableMismatch):
        RbConfig(ideal, ideal, csu23)
    with pytest.raises(ValidationError):
        rb_exact(RbConfig(ideal, ideal, s4), 0)


def test_third_eigenvalue_dies_quickly(s4, random_sets):
    for phi in random_sets:
        ev = np.sort(np.abs(fourier_transform(phi, s4).all_eigenvalues()))[::-1]
        assert ev[2] ** 20 < 1e-10


def test_fit_synthetic_recovery():
    m = np.array([1, 2, 4, 8, 16, 32, 64, 128, 256])
    fit = fit_decay(m, 0.5 + 0.5 * 0.99 ** m)
    assert fit.A == pytest.approx(0.5, abs=1e-6)
    assert fit.B == pytest.approx(0.5, abs=1e-6)
    assert fit.p_bar == pytest.approx(0.99, abs=1e-6)
    assert fit.residual < 1e-10


@given(st.floats(0.2, 0.8), st.floats(0.1, 0.7), st.floats(0.8, 0.999))
def test_fit_recovers_random_models(A, B, p):
    m = np.unique(np.geomspace(1, 2000, 16).astype(int))
    fit = fit_decay(m, A + B * p ** m)
    assert fit.p_bar == pytest.approx(p, abs=1e-6)
    assert fit.A == pytest.approx(A, abs=1e-5)


def test_fit_double_mode():
    m = np.arange(1, 120, 3)
    y = 0.1 + 0.5 * 0.9 ** m + 0.4 * 0.98 ** m
    fit = fit_decay(m, y, mode="double")
    assert sorted([fit.p_bar, fit.t_bar]) == pytest.approx([0.9, 0.98], abs=1e-5)
    assert fit.residual < 1e-8


def test_fit_constant_data():
    fit = fit_decay([1, 2, 4, 8], [0.7] * 4)
    assert fit.B == 0 and fit.A == pytest.approx(0.7)
    assert not fit.identifiable


def test_fit_errors():
    with pytest.raises(InsufficientData):
        fit_decay([1, 2], [0.9, 0.8])
    with pytest.raises(InsufficientData):
        fit_decay([1, 2, 3, 4], [0.9, 0.8, 0.7, 0.6], mode="double")
    rng = np.random.default_rng(0)
    with pytest.raises(FitDiverged):
        fit_decay(np.arange(1, 30), rng.uniform(0, 1, 29), max_rms=1e-3)
    with pytest.raises(ValidationError):
        fit_decay([1, 2, 3], [1, 2])


def test_fit_proctor_exact_curve(proctor_cfg):
    m = np.unique(np.geomspace(8, 40000, 25).astype(int))
    fit = fit_decay(m, rb_exact_curve(proctor_cfg, m))
    p_bar = fourier_transform(proctor_cfg.gate_set, proctor_cfg.registry)["P"].eigenvalues[0].real
    assert (1 - fit.p_bar) == pytest.approx(1 - p_bar, rel=1e-4)
    assert (1 - fit.p_bar) == pytest.approx(2.94e-5, rel=0.02)


def test_fit_weighted_stderr():
    m = np.array([1, 2, 4, 8, 16, 32, 64])
    y = 0.5 + 0.5 * 0.95 ** m
    sigma = np.full(m.shape, 1e-3)
    fit = fit_decay(m, y, sigma=sigma)
    assert fit.p_bar == pytest.approx(0.95, abs=1e-8)
    assert 0 < fit.p_stderr < 1e-2


def test_decay_csv(tmp_path, proctor_cfg):
    data = rb_monte_carlo(proctor_cfg)
    data.exact = rb_exact_curve(proctor_cfg, proctor_cfg.lengths)
    path = tmp_path / "decay.csv"
    write_decay_csv(path, data)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["m", "mean", "stderr", "exact"]
    assert len(rows) == len(proctor_cfg.lengths) + 1
    assert [int(r[0]) for r in rows[1:]] == list(proctor_cfg.lengths)


def test_trace_decreasing_survival_below_one(s4, ideal):
    leaky = MatrixFunction(s4.table, ideal.values * 0.99)
    cfg = RbConfig(leaky, ideal, s4)
    assert rb_exact(cfg, 5) == pytest.approx(0.99 ** 5)
