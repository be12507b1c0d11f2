import random

import numpy as np
import pytest

from qsuper import _kernels, _pykernels

PRIME = 2**31 - 1


def backends():
    out = [_pykernels]
    try:
        from qsuper import _ckernels

        out.append(_ckernels)
    except ImportError:
        pass
    return out


@pytest.mark.parametrize("mod", backends(), ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_rank_mod(mod):
    assert mod.rank_mod([[1, 2], [2, 4]], PRIME) == 1
    assert mod.rank_mod([[0, 0], [0, 0]], PRIME) == 0
    assert mod.rank_mod([[1, 2], [3, 4]], 2) == 1
    assert mod.rank_mod(np.eye(5, dtype=np.int64), PRIME) == 5


@pytest.mark.parametrize("mod", backends(), ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_matmul_mod(mod):
    A = [[1, 2], [3, 4]]
    B = [[PRIME - 1, 0], [1, 1]]
    assert np.array_equal(mod.matmul_mod(A, B, PRIME), np.array([[1, 2], [1, 4]]))


def test_backends_agree():
    rng = random.Random(1)
    M = [[rng.randrange(PRIME) for _ in range(12)] for _ in range(9)]
    M.append([(a + b) % PRIME for a, b in zip(M[0], M[1])])
    ranks = {m.__name__: m.rank_mod(M, PRIME) for m in backends()}
    assert set(ranks.values()) == {9}


def test_selected_backend():
    assert _kernels.BACKEND in ("cython", "python")
