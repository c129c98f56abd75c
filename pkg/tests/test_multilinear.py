import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from spincoh.multilinear import (I, ONE, ZERO, DimensionError, GaussianRational, MultiVector, conjugate, contract,
                                 format_word, hodge_star_sign, i_power, inner, parse_word, wedge)
from strategies import multivectors, nonzero_scalars, scalars

E = MultiVector.basis


# -- scalars

def test_scalar_text_forms():
    assert str(GaussianRational(Fraction(1, 2), Fraction(-3, 4))) == "1/2-3/4*i"
    assert str(GaussianRational(0, -1)) == "-1*i"
    assert str(GaussianRational(-2)) == "-2"
    assert GaussianRational.parse("i") == I
    assert GaussianRational.parse("-i") == -I
    assert GaussianRational.parse("3/2+i") == GaussianRational(Fraction(3, 2), 1)


@pytest.mark.parametrize("bad", ["", "1//2", "x", "1+2", "i*i", "1/0"])
def test_scalar_parse_rejects(bad):
    with pytest.raises(ValueError):
        GaussianRational.parse(bad)


@given(scalars)
def test_scalar_round_trip(x):
    assert GaussianRational.parse(str(x)) == x


@given(scalars, scalars, scalars)
def test_scalar_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(nonzero_scalars)
def test_scalar_inverse(a):
    assert a * a.inverse() == ONE
    assert a.conjugate().conjugate() == a
    assert (a * a.conjugate()).is_real()


def test_i_powers():
    assert [i_power(k) for k in range(5)] == [ONE, I, -ONE, -I, ONE]
    assert i_power(-1) == -I


# -- words and the exterior product

def test_word_text():
    assert format_word(0b101) == "1,3"
    assert format_word(0) == ""
    assert parse_word("1,3") == 0b101
    assert parse_word("") == 0


def test_wedge_basics():
    assert wedge(E(2, 1), E(2, 2)) == E(2, 1, 2)
    assert wedge(E(2, 1), E(2, 1)).is_zero()
    assert wedge(E(2, 2), E(2, 1)) == E(2, 1, 2, coeff=-1)


def test_contraction_basics():
    assert contract(1, E(3, 1, 2)) == E(3, 2)
    assert contract(2, E(3, 1, 2)) == E(3, 1, coeff=-1)
    assert contract(3, E(3, 1, 2)).is_zero()


def test_contraction_sign_from_adjointness():
    # <e2 ^ x, y> = <x, e2 _| y> over all basis pairs at N=2
    e2 = E(2, 2)
    for a in range(4):
        for b in range(4):
            x, y = MultiVector(2, {a: 1}), MultiVector(2, {b: 1})
            assert inner(wedge(e2, x), y) == inner(x, contract(2, y))


def test_conjugation():
    assert conjugate(E(2, 1, coeff=I)) == E(2, 1, coeff=-I)
    x = MultiVector(2, {0: 1, 0b11: I})
    assert conjugate(x) == MultiVector(2, {0: 1, 0b11: -I})


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        wedge(E(2, 1), E(3, 1))


@given(multivectors(4), multivectors(4), multivectors(4))
def test_wedge_associative(x, y, z):
    assert wedge(wedge(x, y), z) == wedge(x, wedge(y, z))


@given(st.integers(0, 15), st.integers(0, 15))
def test_graded_commutativity(a, b):
    x, y = MultiVector(4, {a: 1}), MultiVector(4, {b: 1})
    sign = -1 if (bin(a).count("1") * bin(b).count("1")) % 2 else 1
    assert wedge(x, y) == wedge(y, x).scale(sign)


@given(st.integers(1, 4), multivectors(4), multivectors(4))
def test_contraction_is_antiderivation(i, x, y):
    # i_v(x ^ y) = i_v x ^ y + (-1)^|x| x ^ i_v y on homogeneous x
    for k in range(5):
        xk = x.grade(k)
        lhs = contract(i, wedge(xk, y))
        rhs = wedge(contract(i, xk), y) + wedge(xk, contract(i, y)).scale(-1 if k % 2 else 1)
        assert lhs == rhs


@given(multivectors(4))
def test_conjugate_involution(x):
    assert conjugate(conjugate(x)) == x


@given(multivectors(5, max_terms=8))
def test_json_round_trip(x):
    text = x.to_json()
    assert MultiVector.from_json(5, text) == x
    assert json.loads(text) == x.to_json_obj()


@given(st.integers(0, 63))
def test_hodge_sign_squares(word):
    # star(star(w)) = (-1)^{k(n-k)} w in Euclidean signature
    n = 6
    k = bin(word).count("1")
    comp = ((1 << n) - 1) ^ word
    assert hodge_star_sign(word, n) * hodge_star_sign(comp, n) == (-1) ** (k * (n - k))


def test_zero_multivector():
    assert MultiVector.zero(3).is_zero()
    assert MultiVector(3, {1: ZERO}).is_zero()
