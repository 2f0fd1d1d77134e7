"""Quick structural and numerical property checks, run by ``rbfourier selftest``.

Each check returns ``(ok, detail)``; the runner prints one line per check.
"""
from __future__ import annotations

import time
from typing import Callable

import numpy as np

from .fourier import (convolve_check, fourier_transform, inverse_transform_all, parseval_check,
                      parseval_norm_check, partial_trace_check)
from .gauge import bounds_hold, check_bounds, choi_cp_check, spectral_summary
from .reps import builtin_irreps, ideal_qubit_gateset
from .rb import RbConfig, rb_enumerate, rb_exact
from .sampling import random_gauge, random_matrix_function, random_small_delta_gateset
from .scenarios import depolarizing_process, proctor_gateset

TOL = 1e-10


def check_groups():
    s4, csu = builtin_irreps("S4"), builtin_irreps("CSU23")
    got = (s4.table.order, len(s4.table.classes), sum(d * d for d in s4.dims),
           csu.table.order, len(csu.table.classes), sum(d * d for d in csu.dims))
    ok = got == (24, 5, 24, 48, 8, 48) and s4.table.check_axioms() and csu.table.check_axioms()
    return ok, f"(|S4|, classes, sum d^2, |CSU23|, classes, sum d^2) = {got}"


def check_character_orthogonality():
    worst = 0.0
    for name in ("S4", "CSU23"):
        reg = builtin_irreps(name)
        sizes = np.array(reg.table.class_sizes)
        chi = reg.characters
        gram = (chi * sizes) @ chi.conj().T / reg.table.order
        worst = max(worst, float(np.max(np.abs(gram - np.eye(len(reg))))))
    return worst < TOL, f"max |<chi_a, chi_b> - delta_ab| = {worst:.1e}"


def check_fourier_identities(n: int = 10, seed: int = 0):
    reg = builtin_irreps("S4")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        phi = random_matrix_function(reg.table, 3, rng)
        eta = random_matrix_function(reg.table, 3, rng)
        lhs, rhs = parseval_check(phi, eta, reg)
        a, b = parseval_norm_check(phi, reg)
        back = inverse_transform_all(fourier_transform(phi, reg), reg)
        worst = max(worst, abs(lhs - rhs), abs(a - b), convolve_check(phi, eta, reg),
                    float(np.max(np.abs(back - phi.values))))
    return worst < TOL, f"worst deviation over {n} random functions = {worst:.1e}"


def check_ideal_structure():
    reg = builtin_irreps("S4")
    spec = fourier_transform(ideal_qubit_gateset(reg.table), reg)
    ranks = {b.irrep: b.rank() for b in spec}
    # sum_sigma d_sigma Tr_sigma F(sigma) = phi(e); for an irrep input Tr_sigma F = I / d
    total = sum(b.d_sigma * partial_trace_check(b) for b in spec)
    irrep_pt = partial_trace_check(fourier_transform(reg["P"], reg)["P"])
    ok = (ranks == {k: (1 if k in ("I", "P") else 0) for k in reg.names}
          and np.allclose(total, np.eye(4), atol=TOL) and np.allclose(irrep_pt, np.eye(3) / 3, atol=TOL))
    return ok, f"block ranks {ranks}"


def check_rb_oracle():
    phi, ideal, reg = proctor_gateset(0.1)
    cfg = RbConfig(phi, ideal, reg)
    err = max(abs(rb_exact(cfg, m) - rb_enumerate(cfg, m)) for m in (1, 2, 3))
    return err < 1e-12, f"|exact - enumerated| = {err:.1e} for m <= 3"


def check_bounds_random(n: int = 50, seed: int = 0):
    reg = builtin_irreps("S4")
    rng = np.random.default_rng(seed)
    ideal_spec = fourier_transform(ideal_qubit_gateset(reg.table), reg)
    bad = 0
    for _ in range(n):
        phi = random_small_delta_gateset(reg, rng)
        bad += not bounds_hold(check_bounds(spectral_summary(fourier_transform(phi, reg), ideal_spec)))
    return bad == 0, f"{bad} violations over {n} random CP gate-sets"


def check_gauge_invariance(n: int = 5, seed: int = 0):
    reg = builtin_irreps("S4")
    rng = np.random.default_rng(seed)
    phi = random_small_delta_gateset(reg, rng)
    base = fourier_transform(phi, reg)
    worst = 0.0
    for _ in range(n):
        spec = fourier_transform(phi.gauge(random_gauge(4, rng)), reg)
        for k in ("I", "P"):
            worst = max(worst, abs(spec[k].eigenvalues[0] - base[k].eigenvalues[0]))
    return worst < TOL, f"max eigenvalue shift under {n} gauges = {worst:.1e}"


def check_choi_depolarizing(nu: float = 0.9):
    min_eig, tni = choi_cp_check(depolarizing_process(nu))
    ok = abs(min_eig - (1 - nu) / 4) < 1e-12 and tni
    return ok, f"min Choi eigenvalue {min_eig:.6f} (expected {(1 - nu) / 4:.6f})"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "group structure": check_groups,
    "character orthogonality": check_character_orthogonality,
    "fourier identities": check_fourier_identities,
    "ideal block structure": check_ideal_structure,
    "rb exact vs enumeration": check_rb_oracle,
    "fidelity bounds": check_bounds_random,
    "gauge invariance": check_gauge_invariance,
    "choi of depolarizing": check_choi_depolarizing,
}


def run_selftest(echo: Callable[[str], None] = print) -> bool:
    all_ok = True
    for name, fn in CHECKS.items():
        t0 = time.perf_counter()
        ok, detail = fn()
        all_ok &= ok
        echo(f"{'PASS' if ok else 'FAIL'}  {name:<26} {detail}  ({time.perf_counter() - t0:.2f}s)")
    return all_ok
