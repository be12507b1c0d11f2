"""Pure-Python versions of the modular kernels in ``_ckernels.pyx``."""

from __future__ import annotations

import numpy as np


def rank_mod(matrix, prime: int) -> int:
    a = [[int(x) % prime for x in row] for row in matrix]
    if not a or not a[0]:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], prime - 2, prime)
        a[r] = [x * inv % prime for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % prime for x, y in zip(a[i], a[r])]
        r += 1
    return r


def matmul_mod(A, B, prime: int) -> np.ndarray:
    a = np.array(A, dtype=object) % prime
    b = np.array(B, dtype=object) % prime
    return (a.dot(b) % prime).astype(np.int64)
