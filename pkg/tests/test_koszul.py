import functools
import json

import pytest

from conftest import symmetry
from qsuper.koszul import KoszulComplex, WindowTooSmall, build_dual, complex_report
from qsuper.ncalg import classical_exterior


@functools.lru_cache(maxsize=None)
def complex_(m, n):
    return KoszulComplex(symmetry(m, n))


def test_first_differential_is_injective():
    kc = complex_(1, 1)
    assert kc.dim(0, 0) == 1 and kc.dim(1, 1) == 4
    assert kc.rank(0, 0) == 1


def test_d_squared_from_bottom():
    kc = complex_(1, 1)
    col = kc.differential(0, 0)[0]
    assert col and not kc.apply(col)


def test_zero_pieces():
    kc = complex_(1, 1)
    assert kc.dim(-1, 0) == 0 and kc.basis(0, -1) == []
    assert kc.rank(-1, -1) == 0


def test_piece_dimensions_are_classical():
    kc = complex_(2, 1)
    assert [kc.piece("Lambda", k).dim for k in range(4)] == [classical_exterior(2, 1, k) for k in range(4)]
    assert [kc.piece("SymDual", k).dim for k in range(4)] == [classical_exterior(1, 2, k) for k in range(4)]


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1)])
def test_distinguished_diagonal(m, n):
    kc = complex_(m, n)
    rep = kc.cohomology()
    assert rep.distinguished and rep.shift == n - m
    dims = rep.dims()
    assert dims[(m, n)] == 1
    assert all(v == 0 for cell, v in dims.items() if cell != (m, n))
    assert rep.d_squared_zero and rep.euler_consistent
    assert rep.representative_is_cocycle and rep.representative_outside_image


@pytest.mark.parametrize("shift", [-2, -1, 1, 2])
def test_other_diagonals_are_exact(shift):
    rep = complex_(1, 1).cohomology(shift)
    assert not rep.distinguished
    assert all(v == 0 for v in rep.dims().values())


def test_all_composable_pairs():
    kc = complex_(2, 1)
    for k in range(kc.window + 1):
        for l in range(kc.window + 1 - k):
            if k + l + 4 <= kc.window:
                assert kc.d_squared(k, l)


def test_window_too_small():
    kc = KoszulComplex(symmetry(1, 1), window=3)
    with pytest.raises(WindowTooSmall):
        kc.cohomology()


def test_modular_rank_matches_exact():
    kc = complex_(2, 1)
    for k, l in [(0, 1), (1, 2), (2, 3)]:
        assert kc.modular_rank(k, l) == kc.rank(k, l)


def test_dual_data():
    for m, n in [(2, 0), (1, 1), (2, 1)]:
        dd = build_dual(symmetry(m, n), 3)
        assert dd.hecke_residual_zero and dd.ybe_residual_zero
        assert dd.double_dual_is_identity()


def test_report_json():
    (rep,) = complex_report(symmetry(1, 1))
    data = json.loads(json.dumps(rep.to_json()))
    assert data["concentrated"] and data["distinguished"]
    assert [e["cohomology"] for e in data["entries"]] == [0, 1, 0]
