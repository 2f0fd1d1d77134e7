import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rbfourier.errors import (ComplexDominantEigenvalue, DegenerateDominantEigenvalue, IdealNotRankOne,
                              SingularGauge)
from rbfourier.fourier import FourierBlock, FourierSpectrum, fourier_transform, inverse_transform_all
from rbfourier.gauge import (bounds_hold, check_bounds, choi_cp_check, depolarizing_gauge, optimal_gauge,
                             process_to_choi, spectral_summary)
from rbfourier.reps import MatrixFunction, builtin_irreps, ideal_qubit_gateset, mean_entanglement_fidelity, x90
from rbfourier.reps import unitary_to_process
from rbfourier.sampling import random_gauge, random_small_delta_gateset
from rbfourier.scenarios import depolarizing_process, proctor_gateset

seeds = st.integers(0, 2 ** 32 - 1)

# frozen from the published-decomposition gate-set at theta = 0.1
PROCTOR_DELTA = 3.69586e-3
PROCTOR_ONE_MINUS_P = 2.93638e-5
PROCTOR_DEP_ERROR = 2.2023e-5
PROCTOR_OPT_ERROR = 1.6175e-5
PROCTOR_NEXT_EIG = 1.88319e-3


def depolarized(ideal, nu):
    return MatrixFunction(ideal.table, depolarizing_process(nu) @ ideal.values)


@pytest.fixture(scope="module")
def proctor_spec(s4, proctor):
    return fourier_transform(proctor, s4)


def test_ideal_summary(ideal_spec):
    s = spectral_summary(ideal_spec, ideal_spec)
    assert s.t == pytest.approx(1) and s.p == pytest.approx(1)
    assert s.t_bar == pytest.approx(1) and s.p_bar == pytest.approx(1)
    assert s.q == pytest.approx(0, abs=1e-12) and s.delta == pytest.approx(0, abs=1e-12)
    checks = check_bounds(s)
    assert bounds_hold(checks)
    assert all(c.slack >= -1e-12 for c in checks)


def test_proctor_summary(proctor_spec, ideal_spec):
    s = spectral_summary(proctor_spec, ideal_spec)
    assert s.delta == pytest.approx(PROCTOR_DELTA, rel=1e-5)
    assert s.t_bar == pytest.approx(1, abs=1e-12)
    assert 1 - s.p_bar.real == pytest.approx(PROCTOR_ONE_MINUS_P, rel=1e-5)
    assert s.next_eigenvalue == pytest.approx(PROCTOR_NEXT_EIG, rel=1e-5)
    assert s.q >= s.next_eigenvalue
    assert bounds_hold(check_bounds(s))


def test_proctor_gauges(s4, proctor, proctor_spec, ideal):
    dep = depolarizing_gauge(proctor_spec, ideal, proctor)
    opt = optimal_gauge(proctor_spec, ideal, proctor)
    assert dep.error == pytest.approx(PROCTOR_DEP_ERROR, rel=1e-4)
    assert opt.error == pytest.approx(PROCTOR_OPT_ERROR, rel=1e-4)
    assert dep.D_residual <= 1e-8
    assert dep.S[1, 1] == pytest.approx(0.997701, abs=1e-4)
    assert opt.S[1, 2] == pytest.approx(-0.0509382, abs=1e-4)
    # phi recovered from the spectrum gives the same gauge
    again = depolarizing_gauge(proctor_spec, ideal)
    assert np.allclose(again.S, dep.S) and again.fidelity == pytest.approx(dep.fidelity, abs=1e-12)


def test_proctor_dep_gauge_slightly_non_cp(proctor, proctor_spec, ideal):
    dep = depolarizing_gauge(proctor_spec, ideal, proctor)
    worst = min(dep.min_choi)
    assert worst < 0
    assert 1e-7 < abs(worst) < 1e-3


def test_depolarizing_gauge_fidelity_formula(proctor_spec, proctor, ideal):
    dep = depolarizing_gauge(proctor_spec, ideal, proctor)
    formula = (dep.t_bar + 3 * dep.p_bar).real / 4
    assert dep.fidelity == pytest.approx(formula, abs=1e-12)


def test_global_depolarizing(s4, ideal, ideal_spec):
    nu = 0.97
    phi = depolarized(ideal, nu)
    spec = fourier_transform(phi, s4)
    s = spectral_summary(spec, ideal_spec)
    assert s.t == pytest.approx(1) and s.t_bar == pytest.approx(1)
    assert s.p == pytest.approx(nu) and s.p_bar == pytest.approx(nu)
    dep = depolarizing_gauge(spec, ideal, phi)
    opt = optimal_gauge(spec, ideal, phi)
    assert np.allclose(dep.S, np.eye(4), atol=1e-10)
    assert np.allclose(dep.average_error, np.diag([1, nu, nu, nu]), atol=1e-10)
    assert np.allclose(opt.S, dep.S, atol=1e-10)


def test_ideal_gauges_identity(ideal_spec, ideal):
    assert np.allclose(depolarizing_gauge(ideal_spec, ideal).S, np.eye(4), atol=1e-10)
    assert np.allclose(optimal_gauge(ideal_spec, ideal).S, np.eye(4), atol=1e-10)


def test_non_cp_counterexample_flagged(s4, ideal, ideal_spec):
    # scale the Pauli rows up: no longer CP, and p exceeds t
    A = np.diag([1.0, 1.05, 1.05, 1.05])
    phi = MatrixFunction(s4.table, A @ ideal.values)
    s = spectral_summary(fourier_transform(phi, s4), ideal_spec)
    checks = {c.name: c for c in check_bounds(s)}
    assert not checks["p <= t"].ok
    assert checks["p <= t"].slack < 0
    assert choi_cp_check(A)[0] < 0


@given(seeds)
def test_bounds_on_random_cp_gatesets(seed):
    reg = builtin_irreps("S4")
    ideal_spec = fourier_transform(ideal_qubit_gateset(reg.table), reg)
    phi = random_small_delta_gateset(reg, np.random.default_rng(seed))
    assert all(choi_cp_check(m)[0] >= -1e-12 and choi_cp_check(m)[1] for m in phi.values)
    s = spectral_summary(fourier_transform(phi, reg), ideal_spec)
    assert s.delta < 0.133
    assert bounds_hold(check_bounds(s))


@given(seeds)
def test_optimal_gauge_is_best(seed):
    reg = builtin_irreps("S4")
    ideal = ideal_qubit_gateset(reg.table)
    phi = random_small_delta_gateset(reg, np.random.default_rng(seed), strength=0.1)
    spec = fourier_transform(phi, reg)
    comp = mean_entanglement_fidelity(phi, ideal)
    dep = depolarizing_gauge(spec, ideal, phi)
    opt = optimal_gauge(spec, ideal, phi)
    assert opt.fidelity >= dep.fidelity - 1e-12
    assert opt.fidelity >= comp - 1e-12
    assert dep.D_residual <= 1e-8


@given(seeds)
def test_gauge_invariance_of_decay_rates(seed):
    reg = builtin_irreps("S4")
    rng = np.random.default_rng(seed)
    phi = random_small_delta_gateset(reg, rng)
    S = random_gauge(4, rng, max_cond=10)
    assert np.linalg.cond(S) <= 10
    a, b = fourier_transform(phi, reg), fourier_transform(phi.gauge(S), reg)
    for k in ("I", "P"):
        assert abs(a[k].eigenvalues[0] - b[k].eigenvalues[0]) <= 1e-10


def test_choi_examples():
    min_eig, tni = choi_cp_check(unitary_to_process(x90()))
    assert min_eig >= -1e-12 and tni
    nu = 0.99
    min_eig, tni = choi_cp_check(depolarizing_process(nu))
    assert min_eig == pytest.approx((1 - nu) / 4, abs=1e-14)
    J = process_to_choi(depolarizing_process(nu))
    assert np.trace(J).real == pytest.approx(1)
    assert np.allclose(np.sort(np.linalg.eigvalsh(J)), [(1 - nu) / 4] * 3 + [(1 + 3 * nu) / 4])
    _, tni = choi_cp_check(np.diag([1.1, 0, 0, 0]))
    assert not tni


def test_choi_of_identity_is_maximally_entangled():
    J = process_to_choi(np.eye(4))
    w = np.linalg.eigvalsh(J)
    assert np.allclose(w, [0, 0, 0, 1], atol=1e-12)


def test_complex_dominant_eigenvalue(s4, ideal):
    A = np.diag([1, *[0.99 * np.exp(0.2j)] * 3])
    phi = MatrixFunction(s4.table, A @ ideal.values)
    spec = fourier_transform(phi, s4)
    with pytest.raises(ComplexDominantEigenvalue):
        depolarizing_gauge(spec, ideal, phi)
    # the symmetrized blocks are Hermitian, so the optimal gauge still exists
    optimal_gauge(spec, ideal, phi)


def test_degenerate_dominant_eigenvalue(s4, ideal):
    zero = MatrixFunction(s4.table, np.zeros((24, 4, 4)))
    with pytest.raises(DegenerateDominantEigenvalue):
        depolarizing_gauge(fourier_transform(zero, s4), ideal, zero)


def test_singular_gauge(s4, ideal, ideal_spec):
    # trivial-block eigenvector inside the span of the adjoint columns
    v = np.zeros(4)
    v[1] = 1
    blocks = {k: b for k, b in ideal_spec.blocks.items()}
    blocks["I"] = FourierBlock("I", 4, 1, np.outer(v, v).astype(complex))
    spec = FourierSpectrum(blocks, 4, s4)
    phi = MatrixFunction(s4.table, np.real_if_close(inverse_transform_all(spec, s4)))
    with pytest.raises(SingularGauge):
        depolarizing_gauge(fourier_transform(phi, s4), ideal, phi)


def test_ideal_not_rank_one(s4, proctor_spec, proctor):
    spec_bad = fourier_transform(proctor, s4)
    with pytest.raises(IdealNotRankOne):
        spectral_summary(proctor_spec, spec_bad)


def test_bfs_decomposition_differs_slightly(ideal_spec):
    phi, ideal, reg = proctor_gateset(0.1, decomposition="bfs")
    s = spectral_summary(fourier_transform(phi, reg), ideal_spec)
    assert s.delta == pytest.approx(PROCTOR_DELTA, rel=0.05)
    assert s.delta != pytest.approx(PROCTOR_DELTA, rel=1e-3)


def test_theta_sweep_monotone(ideal_spec):
    vals = []
    for theta in (0.0, 0.05, 0.1):
        phi, ideal, reg = proctor_gateset(theta)
        s = spectral_summary(fourier_transform(phi, reg), ideal_spec)
        assert bounds_hold(check_bounds(s))
        vals.append(s.p_bar.real)
    assert vals[0] == pytest.approx(1) and vals[0] >= vals[1] >= vals[2]


def test_gauge_to_dict(proctor_spec, ideal, proctor):
    d = depolarizing_gauge(proctor_spec, ideal, proctor).to_dict()
    assert d["kind"] == "depolarizing"
    assert np.array(d["S"]).shape == (4, 4)
    assert len(d["min_choi_eigenvalues"]) == 24
