"""Print the Fourier spectrum of the qutrit-embedded Clifford gate-set block by block."""
import numpy as np

from rbfourier.fourier import fourier_transform
from rbfourier.reps import builtin_irreps, ideal_qutrit_gateset


def main():
    reg = builtin_irreps("CSU23")
    spec = fourier_transform(ideal_qutrit_gateset(reg.table), reg)
    total = 0
    for block in spec:
        ev = np.sort(np.abs(block.eigenvalues))[::-1]
        units = int(np.sum(np.abs(ev - 1) <= 1e-9))
        total += units
        rest = ev[units:].max() if len(ev) > units else 0.0
        print(f"{block.irrep:>2} (d_sigma={block.d_sigma}): "
              f"{units} unit eigenvalues, largest other {rest:.1e}")
    print(f"total unit eigenvalues: {total}")


if __name__ == "__main__":
    main()
