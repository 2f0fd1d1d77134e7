"""Spectral summary, fidelity bounds and gauge constructions.

The gauge constructions assume the ideal gate-set is literally the direct
sum ``sigma_I (+) sigma_P`` of the trivial irrep and a ``d_phi - 1``
dimensional irrep, as the Pauli transfer matrices of Cliffords are.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import (ComplexDominantEigenvalue, DegenerateDominantEigenvalue, DimensionMismatch,
                     IdealNotRankOne, SingularGauge)
from .fourier import RANK_TOL, FourierSpectrum, eig_sorted, fourier_transform, inverse_transform_all
from .reps import MatrixFunction, _basis_for, mean_entanglement_fidelity

GAP_TOL = 1e-8
IMAG_TOL = 1e-10
SINGULAR_TOL = 1e-8


@dataclass
class SpectralSummary:
    t: float
    p: float
    t_bar: complex
    p_bar: complex
    q: float
    q_irrep: str
    q_d_sigma: int
    next_eigenvalue: float
    delta: float
    d_phi: int
    q_by_irrep: dict[str, tuple[float, int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("t_bar", "p_bar"):
            z = complex(d[k])
            d[k] = z.real if abs(z.imag) <= IMAG_TOL else {"re": z.real, "im": z.imag}
        d["q_by_irrep"] = {k: {"value": v, "d_sigma": s} for k, (v, s) in self.q_by_irrep.items()}
        return d


def _top_vector(block: np.ndarray, name: str) -> np.ndarray:
    sv = np.linalg.svd(block, compute_uv=False)
    if sv[0] < 1 - 1e-8 or (len(sv) > 1 and sv[1] > RANK_TOL):
        raise IdealNotRankOne(f"ideal Fourier block on {name!r} is not a rank-1 projector (sv={sv[:2]})")
    w, v = np.linalg.eigh((block + block.conj().T) / 2)
    return v[:, -1]


def ideal_vectors(ideal_spectrum: FourierSpectrum, trivial: str = "I", adjoint: str = "P"):
    """The unit vectors psi_I, psi_P spanning the ideal rank-1 blocks."""
    return (_top_vector(ideal_spectrum[trivial].block, trivial),
            _top_vector(ideal_spectrum[adjoint].block, adjoint))


def spectral_summary(spectrum: FourierSpectrum, ideal_spectrum: FourierSpectrum,
                     trivial: str = "I", adjoint: str = "P") -> SpectralSummary:
    psi_i, psi_p = ideal_vectors(ideal_spectrum, trivial, adjoint)
    F_i, F_p = spectrum[trivial], spectrum[adjoint]
    t = float((psi_i.conj() @ F_i.block @ psi_i).real)
    p = float((psi_p.conj() @ F_p.block @ psi_p).real)

    q_by = {}
    next_eig = 0.0
    for b in spectrum:
        skip = 1 if b.irrep in (trivial, adjoint) else 0
        q_by[b.irrep] = (float(b.singular_values[skip]) if len(b.singular_values) > skip else 0.0, b.d_sigma)
        if len(b.eigenvalues) > skip:
            next_eig = max(next_eig, float(np.abs(b.eigenvalues[skip])))
    q_irrep = max(q_by, key=lambda k: q_by[k][0])

    d_phi = spectrum.gate_set_dim
    overlap = sum(b.d_sigma / d_phi * np.trace(b.block @ ideal_spectrum[b.irrep].block.conj().T)
                  for b in spectrum)
    return SpectralSummary(
        t=t, p=p,
        t_bar=complex(F_i.eigenvalues[0]), p_bar=complex(F_p.eigenvalues[0]),
        q=q_by[q_irrep][0], q_irrep=q_irrep, q_d_sigma=q_by[q_irrep][1],
        next_eigenvalue=next_eig,
        delta=float(1 - overlap.real),
        d_phi=d_phi,
        q_by_irrep=q_by,
    )


@dataclass
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    slack: float
    ok: bool


def check_bounds(summary: SpectralSummary, n_qubits: int = 1, tol: float = 1e-12) -> list[BoundCheck]:
    """Evaluate the inequalities that hold for CP, trace non-increasing gate-sets.

    Violations are returned, not raised.  The q bound is checked separately
    for every block, each against its own irrep dimension.
    """
    D = 4 ** n_qubits
    delta, t, p = summary.delta, summary.t, summary.p
    out = []

    def add(name, lhs, rhs):
        # every check reads lhs <= rhs
        slack = rhs - lhs
        out.append(BoundCheck(name, float(lhs), float(rhs), float(slack), bool(slack >= -tol)))

    add("t >= 1 - delta", 1 - delta, t)
    add("p >= 1 - delta*D/(D-1)", 1 - delta * D / (D - 1), p)
    arg = max(2 * delta - delta ** 2, 0.0)
    for irrep, (qv, ds) in summary.q_by_irrep.items():
        add(f"q[{irrep}] <= sqrt(D(2delta-delta^2)/d_sigma)", qv, np.sqrt(D * arg / ds))
    add("p <= t", p, t)
    add("t <= 1", t, 1.0)
    return out


def bounds_hold(checks: list[BoundCheck]) -> bool:
    return all(c.ok for c in checks)


def process_to_choi(process: np.ndarray, basis: np.ndarray | None = None) -> np.ndarray:
    """Choi matrix ``sum_jk R_jk A_j (x) A_k^T / d^2`` (unit trace for trace-preserving maps)."""
    process = np.asarray(process)
    d = int(round(np.sqrt(process.shape[0])))
    basis = _basis_for(d) if basis is None else basis
    J = np.einsum("jk,jab,kdc->acbd", process, basis, basis).reshape(d * d, d * d)
    return J / d ** 2


def choi_cp_check(process: np.ndarray, basis: np.ndarray | None = None, tol: float = 1e-12) -> tuple[float, bool]:
    """(minimum Choi eigenvalue, trace non-increasing?)."""
    process = np.asarray(process)
    d = int(round(np.sqrt(process.shape[0])))
    basis = _basis_for(d) if basis is None else basis
    J = process_to_choi(process, basis)
    min_eig = float(np.linalg.eigvalsh((J + J.conj().T) / 2)[0])
    # Tr(Lambda(rho)) = Tr(E rho) with E = sum_k R_0k A_k
    E = np.einsum("k,kab->ab", process[0], basis)
    tni = bool(np.linalg.eigvalsh((E + E.conj().T) / 2)[-1] <= 1 + tol)
    return min_eig, tni


@dataclass
class GaugeTransform:
    S: np.ndarray
    kind: str
    fidelity: float
    t_bar: complex
    p_bar: complex
    average_error: np.ndarray
    D_residual: float
    min_choi: list[float] = field(default_factory=list)

    @property
    def error(self) -> float:
        return 1 - self.fidelity

    def apply(self, phi: MatrixFunction) -> MatrixFunction:
        return phi.gauge(self.S)

    def to_dict(self) -> dict:
        S = np.real_if_close(self.S)
        return {
            "kind": self.kind,
            "S": S.real.tolist() if not np.iscomplexobj(S) else {"re": S.real.tolist(), "im": S.imag.tolist()},
            "fidelity": self.fidelity,
            "error": self.error,
            "D_residual": self.D_residual,
            "min_choi_eigenvalues": self.min_choi,
        }


def _phase_fix(v: np.ndarray, ref: np.ndarray) -> np.ndarray:
    c = ref.conj() @ v
    if abs(c) > 1e-8:
        return v * (np.conj(c) / abs(c))
    k = int(np.argmax(np.abs(v)))
    return v * (np.conj(v[k]) / abs(v[k]))


def _dominant(block: np.ndarray, name: str, symmetrize: bool) -> tuple[complex, np.ndarray]:
    if symmetrize:
        w, v = np.linalg.eigh((block + block.conj().T) / 2)
        w, v = w[::-1], v[:, ::-1]
        gap = w[0] - w[1] if len(w) > 1 else np.inf
        lam = complex(w[0])
    else:
        w, v = eig_sorted(block)
        lam = complex(w[0])
        gap = abs(w[0]) - abs(w[1]) if len(w) > 1 else np.inf
        if abs(lam.imag) > IMAG_TOL:
            raise ComplexDominantEigenvalue(f"dominant eigenvalue on {name!r} is complex: {lam}")
    if gap <= GAP_TOL:
        raise DegenerateDominantEigenvalue(f"dominant eigenvalue on {name!r} is not separated (gap {gap:.2e})")
    return lam, v[:, 0]


def _assemble(spectrum: FourierSpectrum, ideal: MatrixFunction, kind: str,
              trivial: str, adjoint: str, phi: MatrixFunction | None) -> GaugeTransform:
    registry = spectrum.registry
    d = spectrum.gate_set_dim
    ideal_spec = fourier_transform(ideal, registry)
    psi_i, psi_p = ideal_vectors(ideal_spec, trivial, adjoint)
    cols, lams = [], []
    for name, ref in ((trivial, psi_i), (adjoint, psi_p)):
        lam, v = _dominant(spectrum[name].block, name, symmetrize=(kind == "optimal"))
        v = _phase_fix(v, ref)
        ds = spectrum[name].d_sigma
        v = v * np.sqrt(ds) / np.linalg.norm(v)
        cols.append(v.reshape(d, ds))
        lams.append(lam)
    S = np.hstack(cols)
    if S.shape != (d, d):
        raise DimensionMismatch(f"irreps {trivial!r}+{adjoint!r} span {S.shape[1]} columns, gate-set has {d}")
    if np.max(np.abs(S.imag)) <= 1e-10:
        S = S.real
    sv = np.linalg.svd(S, compute_uv=False)
    if sv[-1] <= SINGULAR_TOL:
        raise SingularGauge(f"gauge matrix is singular (smallest singular value {sv[-1]:.2e})")

    if phi is None:
        vals = inverse_transform_all(spectrum, registry)
        phi = MatrixFunction(registry.table, np.real_if_close(vals, tol=1e6))
    gauged = phi.gauge(S)
    avg = np.mean(gauged.values @ ideal.values.conj().transpose(0, 2, 1), axis=0)
    fidelity = mean_entanglement_fidelity(gauged, ideal)

    # the eigenvalues of the unsymmetrized blocks are the RB decay rates either way
    t_bar = complex(spectrum[trivial].eigenvalues[0])
    p_bar = complex(spectrum[adjoint].eigenvalues[0])
    D = np.diag([t_bar] + [p_bar] * (d - 1))
    residual = float(np.max(np.abs(avg - D)))

    min_choi = []
    if d in (4, 9, 16):
        min_choi = [choi_cp_check(np.real_if_close(m))[0] for m in gauged.values]
    return GaugeTransform(S=S, kind=kind, fidelity=fidelity, t_bar=t_bar, p_bar=p_bar,
                          average_error=avg, D_residual=residual, min_choi=min_choi)


def depolarizing_gauge(spectrum: FourierSpectrum, ideal: MatrixFunction, phi: MatrixFunction | None = None,
                       trivial: str = "I", adjoint: str = "P") -> GaugeTransform:
    """Gauge in which the average error channel is ``diag(t_bar, p_bar, ..., p_bar)``.

    Columns of ``S`` are the dominant eigenvectors of the trivial and adjoint
    Fourier blocks, unvectorized to ``d_phi x d_sigma`` matrices, scaled to
    squared norm ``d_sigma`` and phased to overlap positively with the ideal
    eigenvectors.  ``phi`` is recovered from the spectrum if not given.
    """
    return _assemble(spectrum, ideal, "depolarizing", trivial, adjoint, phi)


def optimal_gauge(spectrum: FourierSpectrum, ideal: MatrixFunction, phi: MatrixFunction | None = None,
                  trivial: str = "I", adjoint: str = "P") -> GaugeTransform:
    """Same assembly from the Hermitian parts ``(F + F^+)/2`` of the two blocks."""
    return _assemble(spectrum, ideal, "optimal", trivial, adjoint, phi)
