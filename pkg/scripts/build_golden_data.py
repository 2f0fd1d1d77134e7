"""Regenerate src/rbfourier/data/{s4,csu23}.json from exact symbolic values.

The generator matrices, conjugacy-class word listings and character tables
of the single-qubit Clifford group without (S4) and with (CSU(2,3)) global
phase.  Run from the repository root.
"""
import json
from pathlib import Path

import sympy as sp

r2, r3, i = sp.sqrt(2), sp.sqrt(3), sp.I
h = sp.Rational(1, 2)

S4_GENS = {
    "I": ([[1]], [[1]]),
    "p": ([[-1]], [[-1]]),
    "2": ([[-h, r3 / 2], [r3 / 2, h]], [[-h, -r3 / 2], [-r3 / 2, h]]),
    "3": ([[-1, 0, 0], [0, 0, 1], [0, -1, 0]], [[0, 0, -1], [0, -1, 0], [1, 0, 0]]),
    "P": ([[1, 0, 0], [0, 0, -1], [0, 1, 0]], [[0, 0, 1], [0, 1, 0], [-1, 0, 0]]),
}

CSU_EXTRA = {
    "u": ([[1 / r2, -i / r2], [-i / r2, 1 / r2]], [[1 / r2, -1 / r2], [1 / r2, 1 / r2]]),
    "n": ([[-1 / r2, i / r2], [i / r2, -1 / r2]], [[-1 / r2, 1 / r2], [-1 / r2, -1 / r2]]),
    "4": (
        sp.Matrix([[-1, r3, i, -i * r3], [r3, 1, -i * r3, -i], [i, -i * r3, -1, r3], [-i * r3, -i, r3, 1]]) / (2 * r2),
        sp.Matrix([[-1, -r3, 1, r3], [-r3, 1, r3, -1], [-1, -r3, -1, -r3], [-r3, 1, -r3, 1]]) / (2 * r2),
    ),
}

S4_CLASSES = [
    ["e"],
    ["x^2", "y^2", "y^3x^2y"],
    ["x", "y", "x^3", "y^3", "y^3xy", "y^3x^3y"],
    ["x^2y", "yx^2", "xy^2", "y^2x", "yxy", "y^3xy^3"],
    ["xy", "yx", "x^3y^3", "y^3x^3", "xy^3", "y^3x", "x^3y", "yx^3"],
]
S4_CHARS = {
    "I": [1, 1, 1, 1, 1],
    "p": [1, 1, -1, -1, 1],
    "2": [2, 2, 0, 0, -1],
    "3": [3, -1, -1, 1, 0],
    "P": [3, -1, 1, -1, 0],
}

CSU_CLASSES = [
    ["e"],
    ["x^4"],
    ["x^2", "y^2", "y^3x^2y", "x^6", "y^6", "y^7x^2y"],
    ["x", "y", "y^3x^3y", "x^7", "y^7", "y^7xy"],
    ["x^3", "y^3", "y^3xy", "x^5", "y^5", "y^7x^3y"],
    ["x^3y", "yx^3", "xy^3", "y^3x", "x^5y", "y^7x^3", "y^5x", "x^7y^3"],
    ["xy", "yx", "x^3y^3", "y^3x^3", "x^7y", "y^7x", "x^5y^3", "y^5x^3"],
    ["x^2y", "yx^2", "yxy", "y^3xy^3", "xy^2", "y^2x", "x^6y", "y^5x^2", "x^5y^2", "y^6x", "y^5xy", "y^7xy^3"],
]
CSU_CHARS = {
    "I": [1, 1, 1, 1, 1, 1, 1, 1],
    "p": [1, 1, 1, -1, -1, 1, 1, -1],
    "2": [2, 2, 2, 0, 0, -1, -1, 0],
    "u": [2, -2, 0, r2, -r2, -1, 1, 0],
    "n": [2, -2, 0, -r2, r2, -1, 1, 0],
    "3": [3, 3, -1, -1, -1, 0, 0, 1],
    "P": [3, 3, -1, 1, -1, 0, 0, -1],
    "4": [4, -4, 0, 0, 0, 1, -1, 0],
}


def scalar(z):
    z = sp.nsimplify(sp.simplify(z))
    re, im = sp.re(z), sp.im(z)
    return {"exact": str(z), "re": float(sp.N(re, 20)), "im": float(sp.N(im, 20))}


def matrix(m):
    return [[scalar(z) for z in row] for row in sp.Matrix(m).tolist()]


def irrep_entry(name, gens, chars):
    return {
        "name": name,
        "dim": sp.Matrix(gens[0]).shape[0],
        "generators": {"x": matrix(gens[0]), "y": matrix(gens[1])},
        "characters": [scalar(c) for c in chars],
    }


def main():
    out = Path(__file__).resolve().parents[1] / "src" / "rbfourier" / "data"
    s4 = {
        "name": "S4",
        "version": 1,
        "order": 24,
        "closure_irrep": "P",
        "classes": S4_CLASSES,
        "irreps": [irrep_entry(k, S4_GENS[k], S4_CHARS[k]) for k in S4_CHARS],
    }
    gens = {**S4_GENS, **CSU_EXTRA}
    csu = {
        "name": "CSU23",
        "version": 1,
        "order": 48,
        "closure_irrep": "u",
        "classes": CSU_CLASSES,
        # Entry as printed; it contradicts the generators and row orthogonality.
        "errata": [{"irrep": "P", "class": 4, "published": -1, "consistent": 1}],
        "irreps": [irrep_entry(k, gens[k], CSU_CHARS[k]) for k in CSU_CHARS],
    }
    for fname, data in (("s4.json", s4), ("csu23.json", csu)):
        (out / fname).write_text(json.dumps(data, indent=1) + "\n")
        print("wrote", out / fname)


if __name__ == "__main__":
    main()
