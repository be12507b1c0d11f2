from fractions import Fraction

import pytest

from qsuper._expr import ParseError
from qsuper.scalars import ONE, VARIABLES, ZERO, Scalar, format_scalar, p, parse_scalar, q


def test_cancellation():
    Q = q()
    assert ((Q - 1) * (Q + 1)) / (Q - 1) == Q + 1


def test_reversed_parameter_is_inverse():
    assert p(1, 2) * p(2, 1) == ONE
    assert parse_scalar("p[2,1]") == p(1, 2).inverse()
    assert format_scalar(parse_scalar("p[2,1]")) == "p[1,2]^-1"


def test_additive_identity():
    Q = q()
    assert (Q - Q ** -1) + ZERO == Q - Q ** -1


def test_canonical_equality_and_hash():
    a = parse_scalar("(q^2 - 1)/(q + 1)")
    b = parse_scalar("q - 1")
    assert a == b and hash(a) == hash(b)
    assert parse_scalar("2*q/(4*p[1,2])") == q() / (2 * p(1, 2))


def test_specialize():
    assert p(1, 2).specialize({"p[1,2]": q()}) == q()
    assert (q() ** -1).specialize({"q": 2}) == Scalar.from_fraction(Fraction(1, 2))


def test_diagonal_coefficient_vanishes():
    # q_12 = q p_12^-1 when eps_12 = 1
    Q = q()
    q12 = Q * p(1, 2) ** -1
    assert ((Q - p(1, 2) * q12) / (1 + p(1, 2) * q12)).is_zero()


def test_laurent_monomials():
    assert (q() ** -3 * p(1, 3) ** 2).is_laurent_monomial()
    assert not (q() + 1).is_laurent_monomial()


def test_evaluate_mod_matches_specialize():
    s = parse_scalar("(q^2 + p[1,2])/(q - p[1,2]^-1)")
    prime = 101
    point = [5, 7] + [1] * (len(VARIABLES) - 2)
    num = (25 + 7) % prime
    den = (5 - pow(7, -1, prime)) % prime
    assert s.evaluate_mod(point, prime) == num * pow(den, -1, prime) % prime


def test_zero_division():
    with pytest.raises(ZeroDivisionError):
        q() / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as info:
        parse_scalar("q^")
    assert "position 2" in str(info.value)
    with pytest.raises(ParseError):
        parse_scalar("r + 1")


def test_coercion():
    assert Scalar.coerce(2) == Scalar.from_int(2)
    assert Scalar.coerce("q") == q()
    assert Scalar.coerce(Fraction(3, 4)) == Scalar.from_fraction(Fraction(3, 4))
