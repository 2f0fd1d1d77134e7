"""Matrix-valued functions on groups: irreps, transfer matrices, embeddings.

Operator bases are normalized so that ``Tr(A_i A_j) = d * delta_ij`` with the
identity first.  With that choice the transfer matrix of a unitary channel,
``R[j, k] = Tr(A_j U A_k U^+) / d``, is a real orthogonal matrix.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import expm

from .errors import BadBasis, DimensionMismatch, NonUnitaryInput, TableMismatch, ValidationError
from .groups import GroupTable, close_group, element_of_word, parse_word

HOMOMORPHISM_TOL = 1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def x90() -> np.ndarray:
    return expm(-1j * (np.pi / 2) * PAULI_X / 2)


def y90() -> np.ndarray:
    return expm(-1j * (np.pi / 2) * PAULI_Y / 2)


def rz(theta: float) -> np.ndarray:
    return expm(-1j * theta * PAULI_Z / 2)


@dataclass(frozen=True, eq=False)
class MatrixFunction:
    """A matrix for every element of ``table`` (``values[g]`` is d x d)."""

    table: GroupTable
    values: np.ndarray
    is_representation: bool = False
    name: str = ""

    def __post_init__(self):
        values = np.array(self.values)
        if values.ndim != 3 or values.shape[0] != self.table.order or values.shape[1] != values.shape[2]:
            raise DimensionMismatch(
                f"values must have shape (order={self.table.order}, d, d); got {values.shape}")
        if np.iscomplexobj(values) and np.max(np.abs(values.imag), initial=0.0) == 0.0:
            values = values.real
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def __getitem__(self, g: int) -> np.ndarray:
        return self.values[g]

    def homomorphism_defect(self) -> float:
        """max_{i,j} |phi(g_i g_j) - phi(g_i) phi(g_j)|."""
        v = self.values
        prod = np.einsum("iab,jbc->ijac", v, v)
        return float(np.max(np.abs(v[self.table.mult] - prod)))

    def characters(self) -> np.ndarray:
        """Trace averaged over each conjugacy class."""
        tr = np.trace(self.values, axis1=1, axis2=2)
        return np.array([np.mean(tr[list(c)]) for c in self.table.classes])

    def gauge(self, S: np.ndarray) -> "MatrixFunction":
        """The gate-set ``S^-1 phi(g) S``."""
        Sinv = np.linalg.inv(S)
        return MatrixFunction(self.table, Sinv @ self.values @ S,
                              self.is_representation, self.name)

    def compose(self, other: "MatrixFunction") -> "MatrixFunction":
        """Elementwise ``self(g) @ other(g)``."""
        if other.table is not self.table:
            raise TableMismatch("matrix functions live on different tables")
        return MatrixFunction(self.table, self.values @ other.values, name=self.name)

    @classmethod
    def from_generators(cls, table: GroupTable, generators: Mapping[str, np.ndarray],
                        is_representation: bool = True, name: str = "") -> "MatrixFunction":
        """Extend generator images to the whole group along the stored words."""
        return cls.from_words(table, {w: None for w in table.words}, generators,
                              is_representation=is_representation, name=name)

    @classmethod
    def from_words(cls, table: GroupTable, words: Mapping | Sequence, generators: Mapping[str, np.ndarray],
                   is_representation: bool = False, name: str = "") -> "MatrixFunction":
        """Each element gets the product of ``generators`` along a chosen word.

        ``words`` lists one word per element (any order).  For a faulty
        gate-set the result depends on which word represents each element,
        so this is not in general a representation.
        """
        gens = {k: np.asarray(v) for k, v in generators.items()}
        d = next(iter(gens.values())).shape[0]
        dtype = np.result_type(*gens.values(), float)
        values = np.zeros((table.order, d, d), dtype=dtype)
        filled = np.zeros(table.order, dtype=bool)
        for w in words:
            word = parse_word(w, table.labels)
            g = element_of_word(table, word)
            if filled[g]:
                raise ValidationError(f"two words name the same element {g} (second: {w!r})")
            m = np.eye(d, dtype=dtype)
            for lab in word:
                m = m @ gens[lab]
            values[g] = m
            filled[g] = True
        if not filled.all():
            missing = [table.words[i] for i in np.nonzero(~filled)[0]]
            raise ValidationError(f"no word given for elements {missing}")
        return cls(table, values, is_representation, name)


@dataclass(frozen=True, eq=False)
class IrrepRegistry:
    """All inequivalent irreps of a group, with their character table.

    ``characters[a, k]`` is the character of irrep ``a`` on class ``k`` in
    ``table.classes`` order.  ``class_words`` gives, when known, the listed
    class memberships as words (used to map a published table's columns).
    """

    table: GroupTable
    names: tuple[str, ...]
    irreps: tuple[MatrixFunction, ...]
    characters: np.ndarray
    class_words: tuple[tuple[str, ...], ...] = field(default=())

    @property
    def dims(self) -> list[int]:
        return [r.dim for r in self.irreps]

    def __len__(self):
        return len(self.irreps)

    def __getitem__(self, name: str) -> MatrixFunction:
        return self.irreps[self.names.index(name)]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def identify(self, rep: MatrixFunction, tol: float = 1e-8) -> str | None:
        """Name of the irrep with the same characters as ``rep``, if any."""
        chi = rep.characters()
        for name, row in zip(self.names, self.characters):
            if np.max(np.abs(row - chi)) < tol:
                return name
        return None

    def decompose(self, rep: MatrixFunction) -> dict[str, float]:
        """Irrep multiplicities of ``rep`` from class-weighted character inner products."""
        sizes = np.array(self.table.class_sizes)
        chi = rep.characters()
        mult = (self.characters.conj() * chi * sizes).sum(axis=1) / self.table.order
        return {n: float(m.real) for n, m in zip(self.names, mult)}


# -- operator bases ----------------------------------------------------------

def pauli_basis(n_qubits: int = 1) -> np.ndarray:
    """All ``4**n`` Pauli strings, identity first, lexicographic in I,X,Y,Z."""
    single = [PAULI_I, PAULI_X, PAULI_Y, PAULI_Z]
    basis = [np.eye(1, dtype=complex)]
    for _ in range(n_qubits):
        basis = [np.kron(b, p) for b in basis for p in single]
    return np.array(basis)


def gellmann_basis() -> np.ndarray:
    """Identity then the eight Gell-Mann matrices, scaled to ``Tr(A A) = 3``."""
    lam = np.zeros((8, 3, 3), dtype=complex)
    lam[0][0, 1] = lam[0][1, 0] = 1
    lam[1][0, 1], lam[1][1, 0] = -1j, 1j
    lam[2][0, 0], lam[2][1, 1] = 1, -1
    lam[3][0, 2] = lam[3][2, 0] = 1
    lam[4][0, 2], lam[4][2, 0] = -1j, 1j
    lam[5][1, 2] = lam[5][2, 1] = 1
    lam[6][1, 2], lam[6][2, 1] = -1j, 1j
    lam[7] = np.diag([1, 1, -2]) / np.sqrt(3)
    return np.concatenate([np.eye(3, dtype=complex)[None], lam * np.sqrt(1.5)])


def check_basis(basis: np.ndarray, tol: float = 1e-12) -> None:
    basis = np.asarray(basis)
    n, d, _ = basis.shape
    if n != d * d:
        raise BadBasis(f"need d^2 = {d * d} basis operators, got {n}")
    gram = np.einsum("iab,jba->ij", basis, basis) / d
    if np.max(np.abs(gram - np.eye(n))) > tol:
        raise BadBasis("basis is not orthonormal under Tr(A_i A_j)/d")
    if np.max(np.abs(basis - basis.conj().transpose(0, 2, 1))) > tol:
        raise BadBasis("basis operators must be Hermitian")
    if np.max(np.abs(basis[0] - np.eye(d))) > tol:
        raise BadBasis("first basis element must be the identity")


def _basis_for(d: int) -> np.ndarray:
    if d == 2:
        return pauli_basis(1)
    if d == 3:
        return gellmann_basis()
    n = int(round(np.log2(d)))
    if 2 ** n == d:
        return pauli_basis(n)
    raise BadBasis(f"no default operator basis for dimension {d}")


def operator_to_vector(op: np.ndarray, basis: np.ndarray | None = None) -> np.ndarray:
    """Coefficients ``Tr(A_j op)``: the column a state ``|rho>`` is written in."""
    op = np.asarray(op)
    basis = _basis_for(op.shape[0]) if basis is None else basis
    v = np.einsum("jab,ba->j", basis, op)
    return v.real if np.allclose(v.imag, 0, atol=1e-14) else v


def effect_to_covector(op: np.ndarray, basis: np.ndarray | None = None) -> np.ndarray:
    """Row ``<M|`` with ``<M| R |rho> = Tr(M Lambda(rho))``."""
    op = np.asarray(op)
    d = op.shape[0]
    return operator_to_vector(op, basis) / d


def process_from_kraus(kraus: Sequence[np.ndarray], basis: np.ndarray | None = None) -> np.ndarray:
    """Transfer matrix ``R[j,k] = sum_K Tr(A_j K A_k K^+) / d``."""
    kraus = np.asarray(kraus, dtype=complex)
    d = kraus.shape[1]
    basis = _basis_for(d) if basis is None else basis
    out = np.zeros((d * d, d * d), dtype=complex)
    for K in kraus:
        img = K[None] @ basis @ K.conj().T[None]
        out += np.einsum("jab,kba->jk", basis, img)
    out /= d
    if np.max(np.abs(out.imag)) < 1e-12:
        out = out.real
    return out


def unitary_to_process(U: np.ndarray, basis: np.ndarray | None = None) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise NonUnitaryInput(f"not a square matrix: shape {U.shape}")
    if np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) > 1e-9:
        raise NonUnitaryInput("input is not unitary")
    basis = _basis_for(U.shape[0]) if basis is None else np.asarray(basis)
    check_basis(basis)
    if basis.shape[1] != U.shape[0]:
        raise DimensionMismatch(f"basis acts on dimension {basis.shape[1]}, unitary on {U.shape[0]}")
    return process_from_kraus([U], basis)


def entanglement_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """``Tr(a b^T) / d_phi`` for real transfer matrices (``b^+`` in general)."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    val = np.trace(a @ b.conj().T) / a.shape[0]
    return float(val.real)


def mean_entanglement_fidelity(phi: MatrixFunction, ideal: MatrixFunction) -> float:
    if phi.table is not ideal.table:
        raise TableMismatch("gate-sets live on different tables")
    if phi.dim != ideal.dim:
        raise DimensionMismatch(f"gate-set dims differ: {phi.dim} vs {ideal.dim}")
    val = np.einsum("gij,gij->", phi.values, ideal.values.conj()) / (phi.table.order * phi.dim)
    return float(val.real)


def embed_qutrit(gate: np.ndarray) -> np.ndarray:
    """Transfer matrix (Gell-Mann basis) of ``gate`` acting on levels 0,1 of a qutrit."""
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2, 2):
        raise NonUnitaryInput(f"expected a 2x2 unitary, got shape {gate.shape}")
    U = np.eye(3, dtype=complex)
    U[:2, :2] = gate
    return unitary_to_process(U, gellmann_basis())


def embed_unitary(gate: np.ndarray) -> np.ndarray:
    U = np.eye(3, dtype=complex)
    U[:2, :2] = gate
    return U


# -- built-in groups ---------------------------------------------------------

BUILTIN = {"S4": "s4.json", "CSU23": "csu23.json"}


def _load(name: str) -> dict:
    if name not in BUILTIN:
        raise ValidationError(f"unknown built-in group {name!r}; choose from {sorted(BUILTIN)}")
    text = resources.files("rbfourier.data").joinpath(BUILTIN[name]).read_text()
    return json.loads(text)


def _matrix(entries) -> np.ndarray:
    return np.array([[complex(z["re"], z["im"]) for z in row] for row in entries])


def golden_data(name: str) -> dict:
    """Raw golden data for a built-in group, matrices decoded to arrays."""
    data = _load(name)
    for irr in data["irreps"]:
        irr["generators"] = {k: _matrix(v) for k, v in irr["generators"].items()}
        irr["characters"] = np.array([complex(z["re"], z["im"]) for z in irr["characters"]])
    return data


@lru_cache(maxsize=None)
def builtin_group(name: str) -> GroupTable:
    """``S4`` is closed from the 3x3 Pauli-permutation irrep, ``CSU23`` from the 2x2 unitaries."""
    data = golden_data(name)
    irr = next(i for i in data["irreps"] if i["name"] == data["closure_irrep"])
    gens = irr["generators"]
    return close_group([gens["x"], gens["y"]], max_order=data["order"], labels=("x", "y"), name=name)


@lru_cache(maxsize=None)
def builtin_irreps(name: str) -> IrrepRegistry:
    data = golden_data(name)
    table = builtin_group(name)
    irreps = []
    for irr in data["irreps"]:
        irreps.append(MatrixFunction.from_generators(table, irr["generators"], name=irr["name"]))
    chars = np.array([r.characters() for r in irreps])
    return IrrepRegistry(
        table=table,
        names=tuple(i["name"] for i in data["irreps"]),
        irreps=tuple(irreps),
        characters=chars,
        class_words=tuple(tuple(c) for c in data["classes"]),
    )


def published_character_table(name: str) -> tuple[np.ndarray, list[int]]:
    """Published characters, and for each published column the computed class index.

    The column mapping is found by locating the first listed word of each
    published class in the computed table.
    """
    data = golden_data(name)
    table = builtin_group(name)
    class_of = table.class_of
    cols = [int(class_of[element_of_word(table, words[0])]) for words in data["classes"]]
    chars = np.array([irr["characters"] for irr in data["irreps"]])
    return chars, cols


# -- ideal gate-sets ---------------------------------------------------------

def clifford_generator_unitaries() -> dict[str, np.ndarray]:
    return {"x": x90(), "y": y90()}


def ideal_qubit_gateset(table: GroupTable) -> MatrixFunction:
    """4x4 Pauli transfer matrices of the ideal single-qubit Cliffords."""
    gens = {k: unitary_to_process(u) for k, u in clifford_generator_unitaries().items()}
    return MatrixFunction.from_generators(table, gens, name="ideal")


def ideal_qutrit_gateset(table: GroupTable) -> MatrixFunction:
    """9x9 Gell-Mann transfer matrices of the Cliffords embedded as ``C + 1``."""
    gens = {k: embed_qutrit(u) for k, u in clifford_generator_unitaries().items()}
    return MatrixFunction.from_generators(table, gens, name="ideal-qutrit")


def clifford_words(name: str = "S4") -> list[str]:
    """The published decomposition of each Clifford into x, y pulses (one word per element)."""
    return [w for cls in _load(name)["classes"] for w in cls]
