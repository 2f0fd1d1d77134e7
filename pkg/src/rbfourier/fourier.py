"""Matrix-valued Fourier transform over a finite group.

For a gate-set ``phi`` (``d_phi x d_phi`` per element) and an irrep ``sigma``
the transform is the ``d_phi d_sigma`` square matrix

    F(sigma) = E_g  phi(g) (x) conj(sigma(g))

with the expectation an exact uniform average over the group.  Index
convention: row ``i * d_sigma + a`` pairs gate-set index ``i`` with irrep
index ``a``, so an eigenvector reshaped row-major to ``(d_phi, d_sigma)``
is the matrix ``V`` solving ``lambda V = E_g phi(g) V sigma(g)^+``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, IncompleteSpectrum, TableMismatch
from .reps import IrrepRegistry, MatrixFunction

RANK_TOL = 1e-8


def sorted_eigvals(block: np.ndarray) -> np.ndarray:
    """Eigenvalues by descending magnitude, ties by descending real part."""
    ev = np.linalg.eigvals(block)
    order = np.lexsort((-ev.real, -np.round(np.abs(ev), 12)))
    return ev[order]


def eig_sorted(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ev, vec = np.linalg.eig(block)
    order = np.lexsort((-ev.real, -np.round(np.abs(ev), 12)))
    return ev[order], vec[:, order]


@dataclass(frozen=True, eq=False)
class FourierBlock:
    irrep: str
    d_phi: int
    d_sigma: int
    block: np.ndarray
    eigenvalues: np.ndarray = field(init=False)
    singular_values: np.ndarray = field(init=False)

    def __post_init__(self):
        self.block.setflags(write=False)
        object.__setattr__(self, "eigenvalues", sorted_eigvals(self.block))
        object.__setattr__(self, "singular_values", np.linalg.svd(self.block, compute_uv=False))

    @property
    def dim(self) -> int:
        return self.d_phi * self.d_sigma

    def rank(self, tol: float = RANK_TOL) -> int:
        return int(np.sum(self.singular_values > tol))

    def partial_trace(self) -> np.ndarray:
        """Trace over the irrep factor, a ``d_phi x d_phi`` matrix."""
        return partial_trace_check(self)

    def to_dict(self) -> dict:
        def cplx(a):
            a = np.asarray(a)
            return {"re": a.real.tolist(), "im": a.imag.tolist()}
        return {
            "irrep": self.irrep,
            "d_sigma": self.d_sigma,
            "block": cplx(self.block),
            "eigenvalues": cplx(self.eigenvalues),
            "singular_values": self.singular_values.tolist(),
        }


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    blocks: dict[str, FourierBlock]
    gate_set_dim: int
    registry: IrrepRegistry

    def __getitem__(self, name: str) -> FourierBlock:
        return self.blocks[name]

    def __iter__(self):
        return iter(self.blocks.values())

    def all_eigenvalues(self) -> np.ndarray:
        return np.concatenate([b.eigenvalues for b in self])

    def power(self, m: int) -> "FourierSpectrum":
        blocks = {k: FourierBlock(k, b.d_phi, b.d_sigma, np.linalg.matrix_power(b.block, m))
                  for k, b in self.blocks.items()}
        return FourierSpectrum(blocks, self.gate_set_dim, self.registry)

    def to_dict(self) -> dict:
        return {"gate_set_dim": self.gate_set_dim,
                "blocks": [b.to_dict() for b in self]}


def _block(phi: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    n, d, _ = phi.shape
    ds = sigma.shape[1]
    out = np.einsum("gij,gab->iajb", phi, sigma.conj()) / n
    return out.reshape(d * ds, d * ds)


def fourier_transform(phi: MatrixFunction, registry: IrrepRegistry) -> FourierSpectrum:
    if phi.table is not registry.table:
        raise TableMismatch("gate-set and irreps are defined on different group tables")
    blocks = {}
    for name, rep in zip(registry.names, registry.irreps):
        blocks[name] = FourierBlock(name, phi.dim, rep.dim, _block(phi.values, rep.values))
    return FourierSpectrum(blocks, phi.dim, registry)


def inverse_transform(spectrum: FourierSpectrum, registry: IrrepRegistry, g: int) -> np.ndarray:
    """``phi(g) = sum_sigma d_sigma Tr_sigma((I (x) conj(sigma(g^-1))) F(sigma))``."""
    missing = set(registry.names) - set(spectrum.blocks)
    if missing:
        raise IncompleteSpectrum(f"spectrum lacks irreps {sorted(missing)}")
    d = spectrum.gate_set_dim
    ginv = registry.table.inv[g]
    out = np.zeros((d, d), dtype=complex)
    for name, rep in zip(registry.names, registry.irreps):
        ds = rep.dim
        F = spectrum[name].block.reshape(d, ds, d, ds)
        B = rep.values[ginv].conj()
        out += ds * np.einsum("ac,icja->ij", B, F)
    return out


def inverse_transform_all(spectrum: FourierSpectrum, registry: IrrepRegistry) -> np.ndarray:
    return np.array([inverse_transform(spectrum, registry, g) for g in range(registry.table.order)])


def convolve(phi: MatrixFunction, eta: MatrixFunction) -> MatrixFunction:
    """``(phi * eta)(g) = E_h phi(g h^-1) eta(h)``."""
    if phi.table is not eta.table:
        raise TableMismatch("convolution needs a common table")
    if phi.dim != eta.dim:
        raise DimensionMismatch(f"dims differ: {phi.dim} vs {eta.dim}")
    t = phi.table
    # idx[g, h] = g h^-1
    idx = t.mult[:, t.inv]
    vals = np.einsum("ghij,hjk->gik", phi.values[idx], eta.values) / t.order
    return MatrixFunction(t, vals)


def convolve_check(phi: MatrixFunction, eta: MatrixFunction, registry: IrrepRegistry) -> float:
    """Largest deviation of ``F[phi*eta](sigma)`` from ``F[phi](sigma) F[eta](sigma)``."""
    conv = fourier_transform(convolve(phi, eta), registry)
    fp = fourier_transform(phi, registry)
    fe = fourier_transform(eta, registry)
    return max(float(np.max(np.abs(conv[k].block - fp[k].block @ fe[k].block)))
               for k in registry.names)


def parseval_check(phi: MatrixFunction, eta: MatrixFunction, registry: IrrepRegistry) -> tuple[complex, complex]:
    """Both sides of ``E_g Tr(phi eta^+) = sum_sigma d_sigma Tr(F_phi F_eta^+)``."""
    lhs = np.einsum("gij,gij->", phi.values, eta.values.conj()) / phi.table.order
    fp = fourier_transform(phi, registry)
    fe = fourier_transform(eta, registry)
    rhs = sum(fp[k].d_sigma * np.trace(fp[k].block @ fe[k].block.conj().T) for k in registry.names)
    return complex(lhs), complex(rhs)


def parseval_contributions(phi: MatrixFunction, eta: MatrixFunction, registry: IrrepRegistry) -> dict[str, float]:
    """Per-irrep terms ``(d_sigma / d_phi) Tr(F_phi F_eta^+)`` (they sum to the mean fidelity)."""
    fp = fourier_transform(phi, registry)
    fe = fourier_transform(eta, registry)
    return {k: float((fp[k].d_sigma / phi.dim * np.trace(fp[k].block @ fe[k].block.conj().T)).real)
            for k in registry.names}


def parseval_norm_check(phi: MatrixFunction, registry: IrrepRegistry) -> tuple[float, float]:
    """Both sides of ``E_g |phi(g)|_HS^2 = sum_sigma d_sigma |F(sigma)|_HS^2``."""
    lhs = float(np.sum(np.abs(phi.values) ** 2) / phi.table.order)
    fp = fourier_transform(phi, registry)
    rhs = float(sum(b.d_sigma * np.sum(np.abs(b.block) ** 2) for b in fp))
    return lhs, rhs


def partial_trace_check(block: FourierBlock, d_phi: int | None = None) -> np.ndarray:
    d = block.d_phi if d_phi is None else d_phi
    ds = block.block.shape[0] // d
    return np.einsum("iaja->ij", block.block.reshape(d, ds, d, ds))
