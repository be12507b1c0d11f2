import pytest

from qsuper.ncalg import classical_exterior
from qsuper.rmatrix import (
    HeckeSumError,
    HeckeSymmetry,
    NotClosedError,
    ParameterSet,
    build_multiparameter,
    check_hecke,
    check_ybe,
    compute_closure,
    eqforp_residuals,
    extreme_projectors,
    f_contraction,
    hecke_sum,
    lambda_dimension,
    multiparameter_crossing,
    odd_to_even,
    one_parameter_even,
    rank,
    reflection_diagonal_formula,
    restrict_symmetry,
)
from qsuper.scalars import ONE, p, q
from qsuper.supertensor import LegOperator, SuperSpace, permutation_operator

SHAPES = [(1, 0), (2, 0), (0, 2), (1, 1), (2, 1), (1, 2)]


def test_diagonal_and_swap_entries():
    Q = q()
    R11 = build_multiparameter(1, 1).R
    assert R11.action((1, 1)) == {(1, 1): Q}
    assert R11.action((2, 2)) == {(2, 2): -ONE}
    R = build_multiparameter(2, 0).R
    assert R.action((1, 2)) == {(2, 1): p(1, 2)}
    assert R.action((2, 1)) == {(2, 1): Q - 1, (1, 2): Q * p(1, 2) ** -1}


@pytest.mark.parametrize("m,n", SHAPES)
def test_hecke_and_braid(m, n):
    h = build_multiparameter(m, n)
    assert check_hecke(h).is_zero()
    assert check_ybe(h).is_zero()


def test_hecke_checker_on_scalar_operators():
    V = SuperSpace.standard(1, 1)
    I = LegOperator.identity(V, 2)
    assert check_hecke(HeckeSymmetry(V, I, ONE)).is_zero()
    assert not check_hecke(HeckeSymmetry(V, I.scale(2), ONE)).is_zero()


def test_classical_super_flip():
    V = SuperSpace.standard(1, 1)
    flip = HeckeSymmetry(V, permutation_operator(V, signed=True), ONE)
    assert check_ybe(flip).is_zero()
    assert check_hecke(flip).is_zero()


def test_invalid_epsilon_breaks_braid_only():
    params = ParameterSet.from_upper(3, {(1, 3): -1})
    assert params.violations() == [(1, 2, 3)]
    h = build_multiparameter(3, 0, params)
    assert check_hecke(h).is_zero()
    assert not check_ybe(h).is_zero()


def test_epsilon_must_be_antisymmetric():
    with pytest.raises(ValueError):
        ParameterSet(((0, 1), (1, 0)))


def test_bound_parameters():
    h = build_multiparameter(2, 0, ParameterSet.all_plus(2, {(1, 2): q()}))
    assert h.R.action((1, 2)) == {(2, 1): q()}
    assert check_ybe(h).is_zero()


def test_closure_diagonal_values():
    # computed from R, not from the closed formula
    Q = q()
    G11 = compute_closure(build_multiparameter(1, 1)).G
    assert [G11.entry((k,), (k,)) for k in (1, 2)] == [Q ** -1, -(Q ** -1)]
    G21 = compute_closure(build_multiparameter(2, 1)).G
    assert [G21.entry((k,), (k,)) for k in (1, 2, 3)] == [Q ** -1, Q ** -2, -(Q ** -2)]
    assert reflection_diagonal_formula(SuperSpace.standard(1, 1)) == [-Q, ONE]


def test_closure_inverts_partial_transpose():
    h = build_multiparameter(2, 1)
    c = compute_closure(h)
    assert f_contraction(h, c).is_identity()


@pytest.mark.parametrize("r", [1, 2, 3])
def test_trace_of_F(r):
    Q = q()
    c = compute_closure(one_parameter_even(r))
    assert c.F.trace() == (1 - Q ** -r) / (Q - 1)


def test_not_closed():
    V = SuperSpace.standard(1, 1)
    with pytest.raises(NotClosedError):
        compute_closure(HeckeSymmetry(V, LegOperator.zero(V, 2), ONE))


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (1, 2)])
def test_hecke_sum_reassembles(m, n):
    h = build_multiparameter(m, n)
    even, odd = list(range(1, m + 1)), list(range(m + 1, m + n + 1))
    P = multiparameter_crossing(m, n)
    assert all(r.is_zero() for r in eqforp_residuals(restrict_symmetry(h, even), restrict_symmetry(h, odd), P).values())
    assert hecke_sum(restrict_symmetry(h, even), restrict_symmetry(h, odd), P).R == h.R


def test_hecke_sum_classical():
    V = SuperSpace.standard(1, 1)
    Re = HeckeSymmetry(V.restrict([1]), LegOperator.identity(V.restrict([1]), 2), ONE)
    Ro = HeckeSymmetry(V.restrict([2]), LegOperator.identity(V.restrict([2]), 2).scale(-1), ONE)
    P = LegOperator.from_action(V, 2, lambda i: {(i[1], i[0]): ONE} if V.par(i[0]) == 0 and V.par(i[1]) == 1 else {})
    assert hecke_sum(Re, Ro, P).R == permutation_operator(V, signed=True)


def test_hecke_sum_rejects_bad_crossing():
    h = build_multiparameter(2, 1)
    P = multiparameter_crossing(2, 1)
    P.rows[P.space.flat((3, 1))][P.space.flat((2, 3))] = ONE
    with pytest.raises(HeckeSumError):
        hecke_sum(restrict_symmetry(h, [1, 2]), restrict_symmetry(h, [3]), P)


def test_extreme_projectors():
    h = one_parameter_even(2)
    minus, plus = extreme_projectors(h, 1)
    assert minus.is_identity() and plus.is_identity()
    minus, plus = extreme_projectors(h, 2)
    assert minus.rank() == 1
    assert (minus @ plus).is_zero()
    assert minus @ minus == minus


def test_rank():
    assert rank(one_parameter_even(1)) == 1
    assert rank(one_parameter_even(2)) == 2
    assert rank(one_parameter_even(3)) == 3
    assert rank(odd_to_even(one_parameter_even(2)), odd=True) == 2


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1)])
def test_lambda_dimension_is_classical(m, n):
    h = build_multiparameter(m, n)
    assert [lambda_dimension(h, k) for k in range(1, 4)] == [classical_exterior(m, n, k) for k in range(1, 4)]
