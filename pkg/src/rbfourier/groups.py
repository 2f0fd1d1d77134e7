"""Finite matrix groups as index tables.

A group is closed numerically from a list of generator matrices and then
represented purely by integer tables: ``mult[i, j]`` is the index of
``g_i @ g_j`` and ``inv[i]`` the index of ``g_i^{-1}``.

Words are written as matrix products: the word ``"xy"`` is the element
``x @ y``, so the rightmost letter acts first on a state.  This is the
notation used for the Clifford decompositions in the literature
(``"y^3x^2y"`` means ``y y y x x y``).
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ClosureOverflow, NonUnitaryGenerator, UnknownLabel

CLOSURE_TOL = 1e-9
KEY_GRID = 1e-6
UNITARY_TOL = 1e-9

Word = tuple[str, ...]


def canonical_key(m: np.ndarray, grid: float = KEY_GRID) -> bytes:
    """Hashable fingerprint of ``m`` rounded to ``grid``."""
    m = np.asarray(m, dtype=complex)
    re_part = np.rint(m.real / grid).astype(np.int64)
    im_part = np.rint(m.imag / grid).astype(np.int64)
    return re_part.tobytes() + im_part.tobytes()


@dataclass(frozen=True)
class CanonicalMatrix:
    entries: np.ndarray
    canonical_key: bytes = field(init=False, repr=False)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "canonical_key", canonical_key(entries))


_LETTER = re.compile(r"([A-Za-z])(?:\^(\d+))?")


def parse_word(word: str | Sequence[str], labels: Sequence[str] | None = None) -> Word:
    """Turn ``"y^3x^2y"``, ``"x y y"`` or ``["x", "y"]`` into a label tuple.

    ``"e"`` and ``""`` are the empty word.  Space-separated tokens are
    needed only for multi-character labels.
    """
    if not isinstance(word, str):
        return tuple(word)
    word = word.strip()
    if word in ("", "e"):
        return ()
    if " " in word or (labels is not None and word in labels):
        out: list[str] = []
        for tok in word.split():
            base, _, exp = tok.partition("^")
            if labels is not None and base in labels:
                out.extend([base] * int(exp or 1))
            else:
                out.extend(parse_word(tok))
        return tuple(out)
    out = []
    pos = 0
    for m in _LETTER.finditer(word):
        if m.start() != pos:
            break
        out.extend([m.group(1)] * int(m.group(2) or 1))
        pos = m.end()
    if pos != len(word):
        raise UnknownLabel(f"cannot parse word {word!r}")
    return tuple(out)


def format_word(word: Word) -> str:
    """Compact exponent notation, ``("y","y","x")`` -> ``"y^2x"``."""
    if not word:
        return "e"
    out = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        n = j - i
        out.append(word[i] if n == 1 else f"{word[i]}^{n}")
        i = j
    return "".join(out)


@dataclass(frozen=True, eq=False)
class GroupTable:
    """Immutable multiplication/inverse tables of a finite group."""

    order: int
    mult: np.ndarray
    inv: np.ndarray
    identity_index: int
    words: tuple[Word, ...]
    classes: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    generator_indices: tuple[int, ...]
    matrices: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        for arr in (self.mult, self.inv, self.matrices):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def class_of(self) -> np.ndarray:
        out = np.empty(self.order, dtype=int)
        for k, cls in enumerate(self.classes):
            out[list(cls)] = k
        return out

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def element_of_word(self, word: str | Sequence[str]) -> int:
        return element_of_word(self, word)

    def check_axioms(self) -> bool:
        """Exhaustive associativity / identity / inverse check."""
        m = self.mult
        n = self.order
        e = self.identity_index
        idx = np.arange(n)
        if not (np.all(m[e, :] == idx) and np.all(m[:, e] == idx)):
            return False
        if not (np.all(m[idx, self.inv] == e) and np.all(m[self.inv, idx] == e)):
            return False
        # (ab)c == a(bc) for all triples
        lhs = m[m[:, :, None], idx[None, None, :]]
        rhs = m[idx[:, None, None], m[None, :, :]]
        return bool(np.all(lhs == rhs))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "labels": list(self.labels),
            "identity_index": self.identity_index,
            "generator_indices": list(self.generator_indices),
            "mult": self.mult.tolist(),
            "inv": self.inv.tolist(),
            "words": [format_word(w) for w in self.words],
            "classes": [list(c) for c in self.classes],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "GroupTable":
        labels = tuple(d["labels"])
        words = tuple(parse_word(w, labels) for w in d["words"])
        table = cls(
            order=int(d["order"]),
            mult=np.asarray(d["mult"], dtype=int),
            inv=np.asarray(d["inv"], dtype=int),
            identity_index=int(d["identity_index"]),
            words=words,
            classes=tuple(tuple(c) for c in d["classes"]),
            labels=labels,
            generator_indices=tuple(d["generator_indices"]),
            name=d.get("name", ""),
        )
        return table


def _check_unitary(g: np.ndarray, label: str):
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise NonUnitaryGenerator(f"generator {label!r} is not square: shape {g.shape}")
    dev = np.linalg.norm(g.conj().T @ g - np.eye(g.shape[0]))
    if dev > UNITARY_TOL:
        raise NonUnitaryGenerator(f"generator {label!r} is not unitary (|G^+G - I| = {dev:.2e})")


def close_group(
    generators: Sequence[np.ndarray | CanonicalMatrix],
    max_order: int = 1000,
    labels: Sequence[str] | None = None,
    name: str = "",
) -> GroupTable:
    """Close a set of unitary matrices under multiplication.

    Elements are discovered breadth-first from the identity by appending a
    generator on the right, labels tried in sorted order, so each stored
    word is the shortest one and lexicographically smallest among those.
    No global-phase quotient is taken.
    """
    gens = [np.asarray(g.entries if isinstance(g, CanonicalMatrix) else g, dtype=complex)
            for g in generators]
    if not gens:
        raise NonUnitaryGenerator("need at least one generator")
    if labels is None:
        labels = [chr(ord("x") + i) if i < 3 else f"g{i}" for i in range(len(gens))]
    labels = tuple(labels)
    if len(labels) != len(gens) or len(set(labels)) != len(labels):
        raise UnknownLabel("labels must be unique, one per generator")
    dim = gens[0].shape[0]
    for lab, g in zip(labels, gens):
        _check_unitary(g, lab)
        if g.shape != (dim, dim):
            raise NonUnitaryGenerator(f"generator {lab!r} has shape {g.shape}, expected {(dim, dim)}")

    order_labels = sorted(range(len(gens)), key=lambda k: labels[k])
    mats = [np.eye(dim, dtype=complex)]
    words: list[Word] = [()]
    index = {canonical_key(mats[0]): 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for k in order_labels:
            m = mats[i] @ gens[k]
            key = canonical_key(m)
            j = index.get(key)
            if j is None:
                if len(mats) >= max_order:
                    raise ClosureOverflow(f"closure exceeds max_order={max_order}")
                j = len(mats)
                index[key] = j
                mats.append(m)
                words.append(words[i] + (labels[k],))
                queue.append(j)
            elif np.max(np.abs(mats[j] - m)) > CLOSURE_TOL * 1e3:
                raise ClosureOverflow("canonical key collision; generators are not a finite group at this tolerance")

    n = len(mats)
    stack = np.array(mats)
    mult = np.empty((n, n), dtype=int)
    for i in range(n):
        prods = np.einsum("ab,jbc->jac", stack[i], stack)
        for j in range(n):
            mult[i, j] = index[canonical_key(prods[j])]
    inv = np.array([int(np.nonzero(mult[i] == 0)[0][0]) for i in range(n)])
    table = GroupTable(
        order=n,
        mult=mult,
        inv=inv,
        identity_index=0,
        words=tuple(words),
        classes=(),
        labels=labels,
        generator_indices=tuple(index[canonical_key(g)] for g in gens),
        matrices=stack,
        name=name,
    )
    object.__setattr__(table, "classes", tuple(conjugacy_classes(table)))
    return table


def _shortlex(word: Word):
    return (len(word), word)


def conjugacy_classes(table: GroupTable) -> list[tuple[int, ...]]:
    """Partition of element indices, sorted by (size, shortlex-minimal word)."""
    seen = np.zeros(table.order, dtype=bool)
    classes = []
    for g in range(table.order):
        if seen[g]:
            continue
        members = sorted({int(table.mult[table.mult[h, g], table.inv[h]]) for h in range(table.order)})
        seen[members] = True
        classes.append(tuple(members))
    classes.sort(key=lambda c: (len(c), min(_shortlex(table.words[i]) for i in c)))
    return classes


def element_of_word(table: GroupTable, word: str | Sequence[str]) -> int:
    """Index of the product of generators along ``word`` (written order)."""
    labels = parse_word(word, table.labels)
    gen = dict(zip(table.labels, table.generator_indices))
    idx = table.identity_index
    for lab in labels:
        try:
            idx = int(table.mult[idx, gen[lab]])
        except KeyError:
            raise UnknownLabel(f"unknown generator label {lab!r}; have {table.labels}") from None
    return idx
