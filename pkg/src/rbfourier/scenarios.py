"""The worked examples and the custom-config pipeline.

Every ``run_*`` function returns a plain JSON-serialisable report dict and,
where relevant, an :class:`RbData` decay table.  Nothing here writes files;
see :func:`write_bundle`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from . import __version__
from .errors import NumericalError, ParseError, ValidationError
from .fourier import fourier_transform
from .gauge import (check_bounds, choi_cp_check, depolarizing_gauge, optimal_gauge, spectral_summary)
from .groups import close_group, format_word
from .reps import (IrrepRegistry, MatrixFunction, builtin_irreps, clifford_generator_unitaries, clifford_words,
                   embed_unitary, ideal_qubit_gateset, ideal_qutrit_gateset, mean_entanglement_fidelity,
                   operator_to_vector, effect_to_covector, rz, unitary_to_process)
from .rb import RbConfig, RbData, fit_decay, rb_exact_curve, rb_monte_carlo, write_decay_csv

DEFAULT_LENGTHS = (1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024)
# the near-unitary example decays by ~20% only past m ~ 8000
PROCTOR_LENGTHS = tuple(2 ** k for k in range(14))
# shorter sequences still carry the subdominant eigenvalues
FIT_MIN_LENGTH = 8
UNIT_TOL = 1e-9


@dataclass
class Scenario:
    name: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    samples: int = 1000
    lengths: tuple[int, ...] = DEFAULT_LENGTHS
    out_dir: Path | None = None

    def validate(self) -> None:
        if self.name not in ("proctor", "wallman", "leakage", "custom"):
            raise ValidationError(f"unknown scenario {self.name!r}")
        if self.samples < 1:
            raise ValidationError("samples must be >= 1")
        if any(int(m) < 1 for m in self.lengths):
            raise ValidationError("lengths must be >= 1")
        theta = self.params.get("theta")
        if theta is not None and not math.isfinite(theta):
            raise ValidationError("theta must be finite")
        nu = self.params.get("nu")
        if nu is not None and not (0 < nu <= 1):
            raise ValidationError("nu must lie in (0, 1]")


# -- gate-set builders -------------------------------------------------------

def proctor_gateset(theta: float, decomposition: str = "published", group: str = "S4") -> tuple[MatrixFunction, MatrixFunction, IrrepRegistry]:
    """Cliffords composed from x/y pulses that each carry a trailing z-rotation by ``theta``.

    ``decomposition="published"`` uses the class listings shipped with the
    golden data (one word per Clifford); ``"bfs"`` uses the table's
    shortest words.
    """
    reg = builtin_irreps(group)
    table = reg.table
    gens = {k: unitary_to_process(rz(theta) @ u) for k, u in clifford_generator_unitaries().items()}
    if decomposition == "published":
        words = clifford_words(group)
    elif decomposition == "bfs":
        words = list(table.words)
    else:
        raise ValidationError(f"unknown decomposition {decomposition!r}")
    phi = MatrixFunction.from_words(table, words, gens, name=f"proctor(theta={theta})")
    return phi, ideal_qubit_gateset(table), reg


def depolarizing_process(nu: float, d: int = 4) -> np.ndarray:
    return np.diag([1.0] + [nu] * (d - 1))


def wallman_gateset(nu: float, theta: float, z_subset, reg: IrrepRegistry | None = None) -> tuple[MatrixFunction, MatrixFunction]:
    """Every Clifford followed by depolarizing(nu); those in ``z_subset`` also by Z(theta) first."""
    reg = builtin_irreps("S4") if reg is None else reg
    ideal = ideal_qubit_gateset(reg.table)
    dep = depolarizing_process(nu)
    zerr = unitary_to_process(rz(theta))
    errs = np.repeat(dep[None], reg.table.order, axis=0)
    idx = np.asarray(list(z_subset), dtype=int)
    errs[idx] = dep @ zerr
    return MatrixFunction(reg.table, errs @ ideal.values, name="wallman"), ideal


# -- shared pipeline ---------------------------------------------------------

def _cplx_list(a) -> list:
    a = np.asarray(a)
    return [[float(z.real), float(z.imag)] for z in a.ravel()]


def analyse(phi: MatrixFunction, ideal: MatrixFunction, reg: IrrepRegistry) -> dict:
    """Spectral summary, bounds, both gauges and per-gate Choi data for a qubit gate-set."""
    spec = fourier_transform(phi, reg)
    ideal_spec = fourier_transform(ideal, reg)
    summary = spectral_summary(spec, ideal_spec)
    n_qubits = int(round(math.log(phi.dim, 4)))
    bounds = check_bounds(summary, n_qubits)
    choi = [choi_cp_check(m) for m in phi.values]
    out = {
        "summary": summary.to_dict(),
        "bounds": [b.__dict__ for b in bounds],
        "fidelities": {"computational": mean_entanglement_fidelity(phi, ideal)},
        "errors": {},
        "gauges": {},
        "spectrum": {b.irrep: {"d_sigma": b.d_sigma,
                               "eigenvalues": _cplx_list(b.eigenvalues),
                               "singular_values": b.singular_values.tolist()} for b in spec},
        "choi": {"min_eigenvalues": [c[0] for c in choi], "trace_nonincreasing": all(c[1] for c in choi)},
    }
    out["errors"]["computational"] = 1 - out["fidelities"]["computational"]
    # gauge failures (degenerate or singular) propagate to the caller
    for kind, build in (("depolarizing", depolarizing_gauge), ("optimal", optimal_gauge)):
        g = build(spec, ideal, phi)
        out["gauges"][kind] = g.to_dict()
        out["fidelities"][kind] = g.fidelity
        out["errors"][kind] = g.error
    d = phi.dim
    tb, pb = complex(spec["I"].eigenvalues[0]), complex(spec["P"].eigenvalues[0])
    out["fidelities"]["depolarizing_formula"] = float(((tb + (d - 1) * pb) / d).real)
    return out


def _decay(phi, ideal, reg, lengths, samples, seed, rho=None, meas=None,
           fit_min_length: int = FIT_MIN_LENGTH) -> tuple[RbData, dict]:
    cfg = RbConfig(phi, ideal, reg, rho=rho, meas=meas, lengths=tuple(lengths),
                   sequences_per_length=samples, seed=seed)
    data = rb_monte_carlo(cfg)
    data.exact = rb_exact_curve(cfg, lengths)
    fits = {}
    m = np.asarray(lengths)
    keep = m >= fit_min_length
    if len(set(m[keep])) < 3:
        keep = np.ones_like(keep)
    if len(set(m[keep])) >= 3:
        for label, y, sig in (("exact", data.exact, None), ("monte_carlo", data.mean, data.stderr)):
            try:
                sig_eff = None
                if sig is not None and np.all(sig[keep] > 0):
                    sig_eff = sig[keep]
                fit = fit_decay(m[keep], np.asarray(y)[keep], sigma=sig_eff).to_dict()
                fit["fit_min_length"] = int(m[keep].min())
                fits[label] = fit
            except (NumericalError, ValidationError) as exc:
                fits[label] = {"failed": type(exc).__name__, "message": str(exc)}
    return data, fits


def _envelope(name: str, params: dict) -> dict:
    return {"scenario": name, "version": __version__, "params": params}


# -- scenarios ---------------------------------------------------------------

def run_proctor(theta: float = 0.1, seed: int = 0, samples: int = 1000,
                lengths=PROCTOR_LENGTHS, decomposition: str = "published",
                monte_carlo: bool = True) -> tuple[dict, RbData | None]:
    Scenario("proctor", {"theta": theta}, seed, samples, tuple(lengths)).validate()
    phi, ideal, reg = proctor_gateset(theta, decomposition)
    report = _envelope("proctor", {"theta": theta, "decomposition": decomposition, "seed": seed,
                                   "samples": samples, "lengths": list(map(int, lengths))})
    report.update(analyse(phi, ideal, reg))
    data = None
    if monte_carlo:
        data, fits = _decay(phi, ideal, reg, lengths, samples, seed)
        report["decay"] = {"csv": "decay.csv", "fits": fits}
    return report, data


def run_wallman(nu: float = 0.99, theta: float = 0.09, n_samples: int = 500, seed: int = 0,
                keep_samples: bool = False) -> dict:
    """Ensemble over uniformly random half-subsets of Cliffords that carry the z-error."""
    Scenario("wallman", {"nu": nu, "theta": theta}, seed, n_samples).validate()
    reg = builtin_irreps("S4")
    order = reg.table.order
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    errors = {"computational": [], "depolarizing": [], "optimal": []}
    failures = []
    subsets = []
    for i in range(n_samples):
        subset = np.sort(rng.choice(order, size=order // 2, replace=False))
        phi, ideal = wallman_gateset(nu, theta, subset, reg)
        spec = fourier_transform(phi, reg)
        comp = 1 - mean_entanglement_fidelity(phi, ideal)
        try:
            dep = depolarizing_gauge(spec, ideal, phi).error
            opt = optimal_gauge(spec, ideal, phi).error
        except NumericalError as exc:
            failures.append({"sample": i, "error": type(exc).__name__, "message": str(exc)})
            continue
        errors["computational"].append(comp)
        errors["depolarizing"].append(dep)
        errors["optimal"].append(opt)
        subsets.append(subset.tolist())

    def stats(v):
        v = np.asarray(v)
        return {"mean": float(v.mean()), "std": float(v.std(ddof=1)) if len(v) > 1 else 0.0,
                "var": float(v.var(ddof=1)) if len(v) > 1 else 0.0,
                "min": float(v.min()), "max": float(v.max())}

    comp, dep, opt = (np.asarray(errors[k]) for k in ("computational", "depolarizing", "optimal"))
    report = _envelope("wallman", {"nu": nu, "theta": theta, "n_samples": n_samples, "seed": seed})
    report["ensemble"] = {
        "n_ok": int(len(comp)),
        "failures": failures,
        "errors": {k: stats(v) for k, v in errors.items()} if len(comp) else {},
        "optimal_le_computational": int(np.sum(opt <= comp + 1e-12)),
        "optimal_le_depolarizing": int(np.sum(opt <= dep + 1e-12)),
        "depolarizing_relative_spread": float(np.max(np.abs(dep - comp) / comp)) if len(comp) else None,
    }
    if keep_samples:
        report["samples"] = {"subsets": subsets, **{k: list(map(float, v)) for k, v in errors.items()}}
    return report


def run_leakage() -> dict:
    """Ideal Cliffords embedded in a qutrit, analysed over CSU(2,3)."""
    reg = builtin_irreps("CSU23")
    table = reg.table
    gens = clifford_generator_unitaries()
    embedded = close_group([embed_unitary(gens["x"]), embed_unitary(gens["y"])], labels=("x", "y"))
    ideal9 = ideal_qutrit_gateset(table)
    spec = fourier_transform(ideal9, reg)

    ptm_group = close_group([unitary_to_process(gens["x"]), unitary_to_process(gens["y"])], labels=("x", "y"))
    s4 = builtin_irreps("S4")
    qubit_spec = fourier_transform(ideal_qubit_gateset(s4.table), s4)

    def unit_counts(spectrum):
        per = {b.irrep: int(np.sum(np.abs(b.eigenvalues - 1) < UNIT_TOL)) for b in spectrum}
        rest = [abs(z) for b in spectrum for z in b.eigenvalues if abs(z - 1) >= UNIT_TOL]
        return per, sum(per.values()), max(rest, default=0.0)

    per, total, rest = unit_counts(spec)
    qper, qtotal, qrest = unit_counts(qubit_spec)
    report = _envelope("leakage", {})
    report.update({
        "embedded_group_order": embedded.order,
        "embedded_tables_match": bool(embedded.order == table.order and np.array_equal(embedded.mult, table.mult)),
        "qubit_ptm_group_order": ptm_group.order,
        "gate_set_dim": ideal9.dim,
        "is_representation": bool(ideal9.homomorphism_defect() < 1e-10),
        "irrep_decomposition": {k: round(v, 10) for k, v in reg.decompose(ideal9).items()},
        "unit_eigenvalues": total,
        "unit_multiplicities": per,
        "max_other_eigenvalue": rest,
        "qubit_unit_eigenvalues": qtotal,
        "qubit_unit_multiplicities": qper,
        "qubit_max_other_eigenvalue": qrest,
        "spectrum": {b.irrep: {"d_sigma": b.d_sigma, "eigenvalues": _cplx_list(b.eigenvalues)} for b in spec},
    })
    return report


# -- custom configs ----------------------------------------------------------

def _yaml_load(text: str, source: str) -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        raise ParseError(f"{source}: {where}: {getattr(exc, 'problem', exc)}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be a mapping")
    return doc


def _as_matrix(value, what: str, square: bool = True) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        try:
            arr = np.array(value, dtype=complex)
        except (TypeError, ValueError):
            raise ValidationError(f"{what}: not a numeric matrix") from None
    if arr.ndim != 2:
        raise ValidationError(f"{what}: expected a 2-d matrix, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{what}: matrix must be square, got {arr.shape[0]}x{arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what}: non-finite entries")
    return arr


def load_custom(path: str | Path) -> dict:
    """Parse and validate a custom gate-set config (YAML).

    Keys: ``group`` (S4 or CSU23), ``gates`` (word -> matrix, one entry per
    element), optional ``rho``/``measure`` (density matrix / effect),
    ``lengths``, ``samples``, ``seed``.
    """
    path = Path(path)
    doc = _yaml_load(path.read_text(), str(path))
    group = doc.get("group", "S4")
    if group not in ("S4", "CSU23"):
        raise ValidationError(f"group: must be S4 or CSU23, got {group!r}")
    gates = doc.get("gates")
    if not isinstance(gates, dict) or not gates:
        raise ValidationError("gates: expected a non-empty mapping from word to matrix")
    mats = {}
    for word, m in gates.items():
        mats[str(word)] = _as_matrix(m, f"gate {word!r}")
    dims = {m.shape[0] for m in mats.values()}
    if len(dims) != 1:
        raise ValidationError(f"gates: all matrices must share one dimension, got {sorted(dims)}")
    d = dims.pop()
    if d not in (4, 9) or (d == 9 and group != "CSU23"):
        raise ValidationError(f"gates: dimension {d} unsupported for group {group} (4 for qubits, 9 for qutrits on CSU23)")
    cfg = {
        "group": group,
        "gates": mats,
        "lengths": tuple(int(m) for m in doc.get("lengths", DEFAULT_LENGTHS)),
        "samples": int(doc.get("samples", 1000)),
        "seed": int(doc.get("seed", 0)),
        "name": str(doc.get("name", path.stem)),
    }
    for key in ("rho", "measure"):
        if key in doc:
            cfg[key] = _as_matrix(doc[key], key)
    Scenario("custom", {}, cfg["seed"], cfg["samples"], cfg["lengths"]).validate()
    return cfg


def custom_gateset(cfg: dict) -> tuple[MatrixFunction, MatrixFunction, IrrepRegistry]:
    reg = builtin_irreps(cfg["group"])
    table = reg.table
    words = list(cfg["gates"])
    values = np.zeros((table.order, *next(iter(cfg["gates"].values())).shape))
    seen = {}
    for w in words:
        try:
            g = table.element_of_word(w)
        except ValidationError as exc:
            raise ValidationError(f"gate {w!r}: {exc}") from None
        if g in seen:
            raise ValidationError(f"gate {w!r}: names the same element as {seen[g]!r}")
        seen[g] = w
        values[g] = cfg["gates"][w]
    missing = [format_word(table.words[g]) for g in range(table.order) if g not in seen]
    if missing:
        raise ValidationError(f"gates: no matrix for elements {missing}")
    phi = MatrixFunction(table, values, name=cfg["name"])
    ideal = ideal_qubit_gateset(table) if phi.dim == 4 else ideal_qutrit_gateset(table)
    return phi, ideal, reg


def run_custom(path: str | Path, monte_carlo: bool = True, seed: int | None = None, samples: int | None = None,
               lengths=None) -> tuple[dict, RbData | None]:
    """Full pipeline on a config file; non-None keyword arguments override the file."""
    cfg = load_custom(path)
    for key, val in (("seed", seed), ("samples", samples), ("lengths", lengths)):
        if val is not None:
            cfg[key] = tuple(int(m) for m in val) if key == "lengths" else int(val)
    Scenario("custom", {}, cfg["seed"], cfg["samples"], cfg["lengths"]).validate()
    phi, ideal, reg = custom_gateset(cfg)
    report = _envelope("custom", {"config": str(path), "name": cfg["name"], "group": cfg["group"],
                                  "seed": cfg["seed"], "samples": cfg["samples"],
                                  "lengths": list(cfg["lengths"])})
    if phi.dim == 4:
        report.update(analyse(phi, ideal, reg))
    else:
        spec = fourier_transform(phi, reg)
        report["spectrum"] = {b.irrep: {"d_sigma": b.d_sigma, "eigenvalues": _cplx_list(b.eigenvalues)} for b in spec}
        report["fidelities"] = {"computational": mean_entanglement_fidelity(phi, ideal)}
    data = None
    if monte_carlo:
        rho = operator_to_vector(cfg["rho"]) if "rho" in cfg else None
        meas = effect_to_covector(cfg["measure"]) if "measure" in cfg else None
        data, fits = _decay(phi, ideal, reg, cfg["lengths"], cfg["samples"], cfg["seed"], rho, meas)
        report["decay"] = {"csv": "decay.csv", "fits": fits}
    return report, data


def gateset_to_config(phi: MatrixFunction, group: str, **extra) -> str:
    """Serialise a gate-set as a custom config, one line per element keyed by its table word."""
    header = yaml.safe_dump({"group": group, **extra}, sort_keys=False, default_flow_style=False)
    lines = ["gates:"]
    for g in range(phi.table.order):
        m = np.real_if_close(phi.values[g])
        if np.iscomplexobj(m):
            raise ValidationError("complex gate matrices cannot be written to a config")
        lines.append(f"  {format_word(phi.table.words[g])}: {json.dumps(m.tolist())}")
    return header + "\n".join(lines) + "\n"


# -- output ------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def to_json(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=False)


def write_bundle(report: dict, data: RbData | None, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "report.json"]
    (out / "report.json").write_text(to_json(report) + "\n")
    if data is not None:
        write_decay_csv(out / "decay.csv", data)
        written.append(out / "decay.csv")
    return written


def report_schema() -> dict:
    """The JSON schema every report validates against."""
    from importlib import resources
    return json.loads(resources.files("rbfourier.data").joinpath("report.schema.json").read_text())
