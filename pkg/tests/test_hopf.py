import pytest

from conftest import envelope
from qsuper.hopf import (
    UBAR,
    FormalTensor,
    UnregisteredGenerator,
    antipode,
    coassociativity,
    coproduct,
    counit,
    counit_axiom,
    hopf_axioms,
    is_group_like,
)
from qsuper.ncalg import NCPolynomial, e_relations
from qsuper.scalars import ONE, ZERO


def test_coproduct_single_generator():
    env = envelope(1, 0)
    z = NCPolynomial.gen(env.z(1, 1))
    assert coproduct(env, z) == FormalTensor.pure([z, z])
    assert coproduct(env, NCPolynomial.unit()) == FormalTensor.pure([NCPolynomial.unit()] * 2)


def test_coproduct_matrix_form(env11):
    # Δ(z^j_i) = Σ_k z^j_k ⊗ z^k_i, written z[i,j] for z^j_i
    z = env11.parse
    want = FormalTensor.pure([z("z[1,2]"), z("z[1,1]")]) + FormalTensor.pure([z("z[2,2]"), z("z[1,2]")])
    assert coproduct(env11, z("z[1,2]")) == want


def test_coproduct_of_ubar_is_not_registered(env11):
    with pytest.raises(UnregisteredGenerator):
        coproduct(env11, NCPolynomial.gen(UBAR))


def test_counit(env11):
    assert counit(env11, env11.parse("z[1,2]")) == ZERO
    assert counit(env11, env11.parse("z[2,2]*t[1,1]")) == ONE
    assert counit(env11, env11.calc.det_A) == ONE


def test_axioms_per_generator(env11):
    for g in env11.generators():
        assert coassociativity(env11, g)
        assert counit_axiom(env11, g) == (True, True)


def test_hopf_axioms_records(env11):
    recs = hopf_axioms(env11)
    assert len(recs) == 3 * len(env11.generators())
    assert all(r.ok for r in recs)


def test_antipode_kills_relations(env11):
    assert (antipode(env11, NCPolynomial.unit()) - env11.L.one()).is_zero()
    for rel in e_relations(env11.h):
        assert antipode(env11, rel).is_zero()


def test_inverse_relations(env11):
    # Σ_k (-1)^{î(k̂+1)} z^j_k t^k_i = δ
    assert env11.reduce("z[1,1]*t[1,1] + z[2,1]*t[1,2]") == "1"
    assert env11.reduce("z[1,1]*t[1,2] + z[1,2]*t[2,2]") == "0"
    assert env11.reduce("t[1,1]*z[1,1] - t[1,2]*z[2,1]") == "1"
    for group in ("z", "s", "zt", "tt"):
        assert not env11.relation_residuals(group)["nonzero"]


def test_group_like(env11):
    assert is_group_like(env11, env11.parse("z[1,2]"))[0] is False
    ok, detail = is_group_like(env11, env11.parse("z[1,1]*t[2,2]"))
    assert ok and detail["counit"] == "1"
    assert env11.ber_formal() == env11.parse("z[1,1]*t[2,2]")


def test_even_determinant_group_like():
    env = envelope(2, 0)
    ok, _ = is_group_like(env, env.calc.det_A)
    assert ok


def test_sign_reading(env11):
    assert env11.sign_reading in ("(k+i)j", "j(i+1)")


def test_formal_tensor_sign():
    env = envelope(1, 1)
    b = env.parse("z[1,2]")
    one = NCPolynomial.unit()
    left = FormalTensor.pure([one, b]) * FormalTensor.pure([b, one])
    right = FormalTensor.pure([b, b])
    assert left == right.scale(-ONE)


def test_ber_group_like_2_1():
    env = envelope(2, 1)
    ok, _ = is_group_like(env, env.ber_formal())
    assert ok
