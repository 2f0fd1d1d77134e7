"""Randomized benchmarking: exact Fourier-space averages, sampling, decay fits.

Length ``m`` counts every gate in a sequence including the final
inversion, so a length-``m`` sequence draws ``m - 1`` uniform elements.
With that convention the exact sequence average is the inverse transform of
the ``m``-th power of each Fourier block, evaluated at the identity.
"""
from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares, minimize, minimize_scalar

from .errors import FitDiverged, InsufficientData, TableMismatch, ValidationError
from .fourier import FourierSpectrum, fourier_transform, inverse_transform
from .reps import IrrepRegistry, MatrixFunction, effect_to_covector, operator_to_vector

P_MAX = 1.05
GRID_STEP = 1e-4


def ground_state(d: int = 2) -> np.ndarray:
    rho = np.zeros((d, d), dtype=complex)
    rho[0, 0] = 1
    return rho


@dataclass
class RbConfig:
    """Gate-set plus state, measurement and sampling settings.

    ``rho`` is the column ``Tr(A_j rho)`` and ``meas`` the row
    ``Tr(M A_j) / d`` in the gate-set's operator basis; both default to the
    ground-state projector.
    """

    gate_set: MatrixFunction
    ideal: MatrixFunction
    registry: IrrepRegistry
    rho: np.ndarray | None = None
    meas: np.ndarray | None = None
    lengths: Sequence[int] = (1, 2, 4, 8, 16, 32)
    sequences_per_length: int = 100
    seed: int = 0
    _spectrum: FourierSpectrum | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.gate_set.table is not self.registry.table or self.ideal.table is not self.registry.table:
            raise TableMismatch("gate-set, ideal and irreps must share one group table")
        d = int(round(np.sqrt(self.gate_set.dim)))
        if self.rho is None:
            self.rho = operator_to_vector(ground_state(d))
        if self.meas is None:
            self.meas = effect_to_covector(ground_state(d))
        self.rho = np.asarray(self.rho)
        self.meas = np.asarray(self.meas)
        if self.sequences_per_length < 1:
            raise ValidationError("sequences_per_length must be >= 1")
        if any(int(m) < 1 for m in self.lengths):
            raise ValidationError("sequence lengths must be >= 1")

    @property
    def spectrum(self) -> FourierSpectrum:
        if self._spectrum is None:
            self._spectrum = fourier_transform(self.gate_set, self.registry)
        return self._spectrum


def sequence_average(config: RbConfig, m: int) -> np.ndarray:
    """The averaged length-``m`` channel ``Phi_m(e)``."""
    spec = config.spectrum.power(m)
    return inverse_transform(spec, config.registry, config.registry.table.identity_index)


def rb_exact(config: RbConfig, m: int) -> float:
    if m < 1:
        raise ValidationError("m must be >= 1")
    val = config.meas @ sequence_average(config, m) @ config.rho
    return float(np.real(val))


def rb_exact_curve(config: RbConfig, lengths: Sequence[int]) -> np.ndarray:
    return np.array([rb_exact(config, int(m)) for m in lengths])


def rb_enumerate(config: RbConfig, m: int, max_sequences: int = 10 ** 6) -> float:
    """Survival averaged over every length-``m`` sequence by direct multiplication.

    Independent of the Fourier machinery; cost ``|G|^(m-1)``.
    """
    table = config.registry.table
    count = table.order ** (m - 1)
    if m < 1 or count > max_sequences:
        raise ValidationError(f"cannot enumerate {count} sequences")
    phi = config.gate_set.values
    total = 0.0
    for seq in itertools.product(range(table.order), repeat=m - 1):
        state = config.rho
        composed = table.identity_index
        for g in seq:
            state = phi[g] @ state
            composed = table.mult[g, composed]
        total += config.meas @ phi[table.inv[composed]] @ state
    return float(np.real(total)) / count


@dataclass
class RbData:
    lengths: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    exact: np.ndarray | None = None

    def rows(self):
        exact = self.exact if self.exact is not None else [np.nan] * len(self.lengths)
        for m, a, s, e in zip(self.lengths, self.mean, self.stderr, exact):
            yield int(m), float(a), float(s), float(e)


def _length_rng(seed: int, m: int) -> np.random.Generator:
    # Philox is counter-based; one substream per length, sequences are
    # consecutive blocks of m-1 draws so sequence i never depends on how
    # many sequences follow it.
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(int(m),))))


def sample_sequences(table, m: int, n: int, seed: int) -> np.ndarray:
    """``(n, m-1)`` element indices, row ``i`` being sequence ``i`` in application order."""
    rng = _length_rng(seed, m)
    return rng.integers(0, table.order, size=(n, m - 1)) if m > 1 else np.zeros((n, 0), dtype=int)


def rb_monte_carlo(config: RbConfig) -> RbData:
    """Sampled survival probabilities, one mean and standard error per length."""
    table = config.registry.table
    phi = config.gate_set.values
    n = config.sequences_per_length
    means, errs = [], []
    for m in config.lengths:
        seqs = sample_sequences(table, int(m), n, config.seed)
        states = np.broadcast_to(config.rho, (n, len(config.rho))).astype(np.result_type(phi, config.rho))
        composed = np.full(n, table.identity_index)
        for k in range(seqs.shape[1]):
            g = seqs[:, k]
            states = np.einsum("nij,nj->ni", phi[g], states)
            composed = table.mult[g, composed]
        states = np.einsum("nij,nj->ni", phi[table.inv[composed]], states)
        surv = np.real(states @ config.meas)
        means.append(surv.mean())
        errs.append(surv.std(ddof=1) / np.sqrt(n) if n > 1 else 0.0)
    return RbData(np.asarray(config.lengths, dtype=int), np.array(means), np.array(errs))


# -- decay fits --------------------------------------------------------------

@dataclass
class DecayModel:
    A: float
    B: float
    C: float
    p_bar: float
    t_bar: float
    residual: float
    mode: str
    identifiable: bool = True
    p_stderr: float = float("nan")

    def __call__(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        out = self.A + self.B * self.p_bar ** m
        if self.mode == "double":
            out = out + self.C * self.t_bar ** m
        return out

    def to_dict(self) -> dict:
        return {k: (None if isinstance(v, float) and not np.isfinite(v) else v)
                for k, v in self.__dict__.items()}


def _linear_fit(X: np.ndarray, y: np.ndarray, w: np.ndarray):
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(X * sw[:, None], y * sw, rcond=None)
    r = (y - X @ coef) * sw
    return coef, float(r @ r)


def _single_sse(p, m, y, w):
    X = np.column_stack([np.ones_like(m), p ** m])
    return _linear_fit(X, y, w)


def fit_decay(lengths: Sequence[float], data: Sequence[float], mode: str = "single",
              max_rms: float = 0.05, sigma: Sequence[float] | None = None) -> DecayModel:
    """Separable least squares for ``A + B p^m`` (single) or ``A + B p^m + C t^m`` (double).

    The nonlinear rates are scanned on a grid over (0, 1.05] and refined with
    a bounded scalar/simplex search; the linear coefficients are solved
    exactly at every trial rate.  With ``sigma`` (per-point standard errors)
    the fit is weighted by ``1/sigma^2`` and ``p_stderr`` comes from the
    weighted Jacobian; otherwise it is scaled by the residual variance.
    """
    m = np.asarray(lengths, dtype=float)
    y = np.asarray(data, dtype=float)
    if m.shape != y.shape:
        raise ValidationError("lengths and data must have the same length")
    if mode not in ("single", "double"):
        raise ValidationError(f"unknown fit mode {mode!r}")
    need = 3 if mode == "single" else 5
    if len(np.unique(m)) < need:
        raise InsufficientData(f"{mode} fit needs >= {need} distinct lengths, got {len(np.unique(m))}")
    if sigma is None:
        w = np.ones_like(y)
    else:
        sigma = np.asarray(sigma, dtype=float)
        if sigma.shape != y.shape or np.any(sigma <= 0):
            raise ValidationError("sigma must be positive, one per data point")
        w = 1.0 / sigma ** 2
        w = w / w.mean()

    if np.ptp(y) <= 1e-14 * max(1.0, abs(y).max()):
        return DecayModel(A=float(y.mean()), B=0.0, C=0.0, p_bar=float("nan"), t_bar=float("nan"),
                          residual=0.0, mode=mode, identifiable=False)

    if mode == "single":
        grid = np.arange(GRID_STEP, P_MAX + GRID_STEP / 2, GRID_STEP)
        # closed-form weighted two-column least squares over the whole grid
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            powers = grid[:, None] ** m[None, :]
            n, sy = w.sum(), w @ y
            sx, sxx, sxy = powers @ w, (powers ** 2) @ w, powers @ (w * y)
            det = n * sxx - sx ** 2
            B = (n * sxy - sx * sy) / det
            A = (sy - B * sx) / n
            sse = (w * (A[:, None] + B[:, None] * powers - y) ** 2).sum(1)
        sse = np.where(np.isfinite(sse), sse, np.inf)
        k = int(np.argmin(sse))
        lo, hi = max(grid[k] - GRID_STEP, 1e-12), min(grid[k] + GRID_STEP, P_MAX)
        res = minimize_scalar(lambda p: _single_sse(p, m, y, w)[1], bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-14, "maxiter": 500})
        p = float(res.x)
        (A, B), sse_p = _single_sse(p, m, y, w)
        # the SSE surface is flat near p = 1; polish all three parameters jointly
        sw = np.sqrt(w)
        pol = least_squares(lambda x: (x[0] + x[1] * x[2] ** m - y) * sw, x0=[A, B, p],
                            bounds=([-np.inf, -np.inf, 1e-12], [np.inf, np.inf, P_MAX]),
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, x_scale="jac")
        if pol.success and 2 * pol.cost <= sse_p:
            p = float(pol.x[2])
        (A, B), sse = _single_sse(p, m, y, w)
        model = DecayModel(A=float(A), B=float(B), C=0.0, p_bar=p, t_bar=1.0,
                           residual=float(np.sqrt(np.mean((A + B * p ** m - y) ** 2))), mode="single")
    else:
        def sse2(rates):
            p, t = rates
            X = np.column_stack([np.ones_like(m), p ** m, t ** m])
            return _linear_fit(X, y, w)

        coarse = np.arange(0.01, P_MAX + 1e-9, 0.01)
        best = (np.inf, None)
        with np.errstate(over="ignore", invalid="ignore"):
            for p in coarse:
                for t in coarse[coarse > p]:
                    try:
                        s = sse2((p, t))[1]
                    except np.linalg.LinAlgError:
                        continue
                    if s < best[0]:
                        best = (s, (p, t))
        res = minimize(lambda r: sse2(np.clip(r, 1e-9, P_MAX))[1] if r[0] < r[1] else np.inf,
                       x0=np.array(best[1]), method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-30, "maxiter": 20000, "maxfev": 40000})
        p, t = np.clip(res.x, 1e-9, P_MAX)
        (A, B, C), _ = sse2((p, t))
        fitted = A + B * p ** m + C * t ** m
        model = DecayModel(A=float(A), B=float(B), C=float(C), p_bar=float(p), t_bar=float(t),
                           residual=float(np.sqrt(np.mean((fitted - y) ** 2))), mode="double")
    if not np.isfinite(model.residual) or model.residual > max_rms:
        raise FitDiverged(f"fit residual {model.residual:.3e} above threshold")
    model.p_stderr = _rate_stderr(model, m, y, sigma)
    return model


def _rate_stderr(model: DecayModel, m: np.ndarray, y: np.ndarray, sigma) -> float:
    p = model.p_bar
    cols = [np.ones_like(m), p ** m, model.B * m * p ** (m - 1)]
    if model.mode == "double":
        t = model.t_bar
        cols += [t ** m, model.C * m * t ** (m - 1)]
    J = np.column_stack(cols)
    if sigma is not None:
        w = 1.0 / np.maximum(np.asarray(sigma, dtype=float), 1e-15)
        J = J * w[:, None]
        scale = 1.0
    else:
        dof = max(len(m) - J.shape[1], 1)
        scale = (model(m) - y) @ (model(m) - y) / dof
    try:
        cov = np.linalg.pinv(J.T @ J) * scale
    except np.linalg.LinAlgError:
        return float("nan")
    return float(np.sqrt(max(cov[2, 2], 0.0)))


def write_decay_csv(path: str | Path, data: RbData) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "mean", "stderr", "exact"])
        for row in data.rows():
            w.writerow([row[0], repr(row[1]), repr(row[2]), repr(row[3])])
