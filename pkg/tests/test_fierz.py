from itertools import combinations

import pytest
from hypothesis import given, strategies as st

import oracle
from spincoh.clifford import bilinear, build_even_rep, closed_form_signs
from spincoh.fierz import (cgamma_form, decomposition_ranks, fierz_contributions, fierz_verify, middle_degree_split,
                           middle_image_eigenvalue, signpg, symmetry_table, table_ok)
from spincoh.multilinear import I, ONE, GaussianRational, MultiVector


@given(st.integers(0, 14), st.integers(0, 1), st.integers(0, 1))
def test_signpg_matches_exponent(p, s_c, s_g):
    e = p * (p - 1) // 2 + (p + 1) * s_c + p * s_g
    assert signpg(p, s_c, s_g) == (-1) ** e


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12, 14])
def test_symmetry_table_agrees_with_closed_form(n):
    table = symmetry_table(n)
    assert table_ok(table)
    assert len(table) == 2 * (n + 1)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("kind", ["A", "B"])
def test_symmetry_table_matches_reference(m, kind):
    rows = {r["p"]: r["measured"] for r in symmetry_table(2 * m) if r["kind"] == kind}
    label = {1: "symmetric", -1: "skew"}
    for p in range(2 * m + 1):
        assert rows[p] == label[oracle.cgamma_symmetry(m, kind, p)]


# frozen from the sympy reference in tests/oracle.py
SKEW_DEGREES = {
    (1, "A"): [2], (1, "B"): [0],
    (2, "A"): [0, 3, 4], (2, "B"): [0, 1, 4],
    (3, "A"): [0, 1, 4, 5], (3, "B"): [1, 2, 5, 6],
}


@pytest.mark.parametrize("key", sorted(SKEW_DEGREES))
def test_skew_degrees_frozen(key):
    m, kind = key
    rows = symmetry_table(2 * m)
    assert [r["p"] for r in rows if r["kind"] == kind and r["measured"] == "skew"] == SKEW_DEGREES[key]


def test_n6_B_vector_bilinear_is_skew():
    row = [r for r in symmetry_table(6) if r["kind"] == "B" and r["p"] == 1][0]
    assert row["measured"] == "skew"


@pytest.mark.parametrize("m", [3, 5, 7])
def test_degree_m_symmetric_and_m_minus_2_skew(m):
    for row in symmetry_table(2 * m):
        if row["p"] == m:
            assert row["measured"] == "symmetric"
        if row["p"] == m - 2:
            assert row["measured"] == "skew"


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("kind", ["A", "B"])
def test_argument_swap_sign(m, kind):
    c = bilinear(build_even_rep(m), kind)
    s_c, s_g = closed_form_signs(m, kind)
    for p in range(2 * m + 1):
        for a in range(c.rep.dim):
            for b in range(c.rep.dim):
                f1 = cgamma_form(c, p, {a: ONE}, {b: ONE})
                f2 = cgamma_form(c, p, {b: ONE}, {a: ONE})
                assert f1 == f2.scale(signpg(p, s_c, s_g))


def test_degree_zero_is_the_pairing():
    c = bilinear(build_even_rep(3), "B")
    assert cgamma_form(c, 0, {0: ONE}, {7: ONE}) == MultiVector.scalar(6, c({0: ONE}, {7: ONE}))


def test_kahler_type_two_form_n6():
    # frozen from tests/oracle.py: C Gamma^(2)(1, e123)
    b = bilinear(build_even_rep(3), "B")
    assert cgamma_form(b, 2, {0: ONE}, {7: ONE}).to_json_obj() == {"1,4": "1", "2,5": "1", "3,6": "1"}
    a = bilinear(build_even_rep(3), "A")
    assert cgamma_form(a, 2, {0: ONE}, {7: ONE}).to_json_obj() == {"1,4": "1*i", "2,5": "1*i", "3,6": "1*i"}
    # same-chirality arguments pair to zero at m = 3
    assert cgamma_form(b, 2, {0: ONE}, {0: ONE}).is_zero()


def test_kahler_type_two_form_against_reference():
    g = oracle.gammas(3)
    form = oracle.form_matrix(3, "B")
    eta, theta = oracle.spinor(3, {0: 1}), oracle.spinor(3, {7: 1})
    ref = {f"{a},{b}": oracle.pair(form, eta, g[a - 1] * g[b - 1] * theta) for a, b in combinations(range(1, 7), 2)}
    got = cgamma_form(bilinear(build_even_rep(3), "B"), 2, {0: ONE}, {7: ONE})
    for key, val in ref.items():
        assert str(got.coeff(sum(1 << (int(x) - 1) for x in key.split(",")))) == str(val).replace("I", "1*i")


@pytest.mark.parametrize("n", [2, 4, 6, 8])
@pytest.mark.parametrize("kind", ["A", "B"])
def test_fierz_exhaustive(n, kind):
    assert fierz_verify(bilinear(build_even_rep(n // 2), kind)) == 0


@pytest.mark.parametrize("n", [10, 12])
def test_fierz_sampled(n):
    c = bilinear(build_even_rep(n // 2), "A")
    assert fierz_verify(c, mode="sampled", samples=200, seed=5) == 0


@pytest.mark.parametrize("kind", ["A", "B"])
def test_n6_chiral_fierz_uses_odd_degrees(kind):
    c = bilinear(build_even_rep(3), kind)
    for chir in (1, -1):
        contrib = fierz_contributions(c, chir)
        assert [p for p, on in contrib.items() if on] == [1, 3, 5]
    ranks = decomposition_ranks(c, 1, 1)
    assert ranks == {0: 0, 1: 6, 2: 0, 3: 10, 4: 0, 5: 6, 6: 0}
    # the degree-3 image is one half of the middle forms (self-dual or anti-self-dual)
    assert middle_degree_split(6) == (10, 10)
    assert middle_image_eigenvalue(c, 1, 1) == -middle_image_eigenvalue(c, -1, -1)


def test_opposite_chiralities_use_even_degrees():
    c = bilinear(build_even_rep(3), "B")
    ranks = decomposition_ranks(c, 1, -1)
    assert all(ranks[p] == 0 for p in (1, 3, 5))
    assert sum(ranks.values()) == 16 * 2


def test_bad_degree():
    with pytest.raises(ValueError):
        cgamma_form(bilinear(build_even_rep(1), "A"), 3, {0: ONE}, {0: ONE})
