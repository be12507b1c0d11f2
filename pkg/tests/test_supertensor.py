import pytest

from qsuper.linalg import SingularError
from qsuper.rmatrix import build_multiparameter
from qsuper.scalars import ONE, q
from qsuper.supertensor import ArityError, LegOperator, SuperSpace, permutation_operator


def test_space_parities():
    V = SuperSpace.standard(2, 1)
    assert V.dim == 3 and (V.m, V.n) == (2, 1)
    assert [V.par(i) for i in (1, 2, 3)] == [0, 0, 1]
    assert V.total_parity((1, 3)) == 1
    assert V.unflat(V.flat((3, 1, 2)), 3) == (3, 1, 2)


def test_embed_identity():
    V = SuperSpace.standard(1, 1)
    assert LegOperator.identity(V, 2).embed(3, 1).is_identity()
    assert LegOperator.identity(V, 1).embed(3, 2).is_identity()


def test_permutation_has_d_squared_units():
    V = SuperSpace.standard(1, 2)
    T = permutation_operator(V)
    assert T.nonzero_count() == 9
    assert (T @ T).is_identity()


def test_inverse_from_hecke_equation():
    h = build_multiparameter(1, 1)
    R, Q = h.R, q()
    assert R.invert() == (R - (Q - 1)).scale(Q ** -1)
    assert (R @ R.invert()).is_identity()
    assert LegOperator.identity(h.space, 2).invert().is_identity()


def test_singular_and_arity_errors():
    V = SuperSpace.standard(1, 1)
    with pytest.raises(SingularError):
        LegOperator.zero(V, 2).invert()
    with pytest.raises(ArityError):
        LegOperator.identity(V, 2) @ LegOperator.identity(V, 3)


def test_json_round_trip():
    R = build_multiparameter(2, 1).R
    assert LegOperator.from_json(R.to_json()) == R


def test_parity_preserving_and_trace():
    h = build_multiparameter(1, 1)
    assert h.R.is_parity_preserving()
    assert LegOperator.identity(h.space, 2).trace() == 4 * ONE
