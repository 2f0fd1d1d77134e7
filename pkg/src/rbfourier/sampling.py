"""Random test objects: matrix functions, noisy gate-sets, gauge matrices.

All draws take an explicit ``numpy.random.Generator``.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import sqrtm
from scipy.stats import ortho_group, unitary_group

from .fourier import fourier_transform
from .gauge import spectral_summary
from .groups import GroupTable
from .reps import IrrepRegistry, MatrixFunction, ideal_qubit_gateset, process_from_kraus

# generator-level infidelity below which the q bound is meaningful
DELTA_LIMIT = 0.133


def random_matrix_function(table: GroupTable, d: int, rng: np.random.Generator, complex_: bool = True) -> MatrixFunction:
    shape = (table.order, d, d)
    vals = rng.normal(size=shape)
    if complex_:
        vals = vals + 1j * rng.normal(size=shape)
    return MatrixFunction(table, vals, name="random")


def random_channel_kraus(d: int, rng: np.random.Generator, strength: float, rank: int = 3,
                         loss: float = 0.0) -> np.ndarray:
    """Kraus operators of a random channel within ~``strength`` of the identity.

    A near-identity Ginibre family is normalised to be trace preserving and
    then scaled by ``sqrt(1 - loss)``, which keeps it CP and trace
    non-increasing.
    """
    ks = strength * (rng.normal(size=(rank, d, d)) + 1j * rng.normal(size=(rank, d, d))) / np.sqrt(2 * d)
    ks[0] += np.eye(d)
    M = np.einsum("kba,kbc->ac", ks.conj(), ks)
    ks = ks @ np.linalg.inv(sqrtm(M))
    return ks * np.sqrt(1.0 - loss)


def random_noisy_gateset(table: GroupTable, rng: np.random.Generator, strength: float = 0.05,
                         max_loss: float = 0.01, ideal: MatrixFunction | None = None) -> MatrixFunction:
    """Each ideal gate followed by its own random CP trace non-increasing channel."""
    ideal = ideal_qubit_gateset(table) if ideal is None else ideal
    d = int(round(np.sqrt(ideal.dim)))
    noise = np.array([process_from_kraus(random_channel_kraus(d, rng, strength, loss=rng.uniform(0, max_loss)))
                      for _ in range(table.order)])
    return MatrixFunction(table, np.real_if_close(noise @ ideal.values), name="noisy")


def random_small_delta_gateset(reg: IrrepRegistry, rng: np.random.Generator, strength: float = 0.2,
                               max_loss: float = 0.02, limit: float = DELTA_LIMIT) -> MatrixFunction:
    """A random noisy gate-set whose infidelity ``delta`` is below ``limit`` (strength halved until it is)."""
    ideal = ideal_qubit_gateset(reg.table)
    ideal_spec = fourier_transform(ideal, reg)
    s = strength
    while True:
        phi = random_noisy_gateset(reg.table, rng, s, max_loss, ideal)
        if spectral_summary(fourier_transform(phi, reg), ideal_spec).delta < limit:
            return phi
        s /= 2


def random_gauge(d: int, rng: np.random.Generator, max_cond: float = 10.0, complex_: bool = False) -> np.ndarray:
    """``U diag(s) V`` with singular values in ``[1, max_cond]`` (so cond(S) <= max_cond)."""
    group = unitary_group if complex_ else ortho_group
    U = group.rvs(d, random_state=rng)
    V = group.rvs(d, random_state=rng)
    s = rng.uniform(1.0, max_cond, size=d)
    # pin the extremes just inside the limit
    s[0], s[-1] = 1.0, max_cond * (1 - 1e-9)
    return (U * s) @ V
