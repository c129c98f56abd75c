import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from spincoh.clifford import bilinear, build_even_rep
from spincoh.cohomology import (DoubleComplex, FiniteComplex, HodgeDiamond, NotAComplexError, PreconditionError,
                                complex_cohomology, complex_from_operator, cy3_spin_cohomology, d2_dims_from_diamond,
                                dolbeault_sum, euler_characteristic, identify_classical, koszul_complex,
                                operator_spinor, random_double_complex, spectral_sequence, spencer_cohomology,
                                spencer_dims, t6_double_complex, torus_cohomology)
from spincoh.holonomy import invariant_spinors
from spincoh.linalg import SparseMatrix
from spincoh.multilinear import ONE, GaussianRational


def test_two_term_complex():
    d = SparseMatrix(1, 2, {0: {0: ONE, 1: ONE}})
    res = complex_cohomology(FiniteComplex([2, 1], [d]), representatives=True)
    assert res.dims == [1, 0]
    assert len(res.representatives[0]) == 1


def test_not_a_complex():
    d0 = SparseMatrix(1, 1, {0: {0: ONE}})
    with pytest.raises(NotAComplexError) as info:
        FiniteComplex([1, 1, 1], [d0, d0])
    assert info.value.degree == 0


def test_shape_mismatch():
    with pytest.raises(ValueError):
        FiniteComplex([2, 2], [SparseMatrix.zeros(3, 2)])


def test_operator_must_raise_degree():
    with pytest.raises(ValueError):
        complex_from_operator(SparseMatrix(2, 2, {0: {1: ONE}}), lambda j: j)


@given(st.integers(1, 6), st.data())
def test_koszul_nonzero_vector_is_acyclic(k, data):
    entries = data.draw(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=k, max_size=k))
    nu = {j: GaussianRational(a, b) for j, (a, b) in enumerate(entries) if a or b}
    cx = koszul_complex(nu, k)
    dims = complex_cohomology(cx).dims
    if nu:
        assert dims == [0] * (k + 1)
    else:
        assert dims == [comb(k, j) for j in range(k + 1)]
    assert euler_characteristic(cx) == (1 if k == 0 else 0)


@settings(max_examples=20)
@given(st.integers(0, 10_000))
def test_random_double_complex_spectral_agrees(seed):
    ss = spectral_sequence(random_double_complex(random.Random(seed)))
    assert ss.oracle_agrees
    assert ss.degenerates_at() >= 1


def test_zigzag_has_late_differential():
    # some seed among the first hundred produces a nonzero d_r with r >= 2
    found = any(spectral_sequence(random_double_complex(random.Random(s))).max_nonzero_differential() >= 2
                for s in range(100))
    assert found


def test_double_complex_validation():
    z = SparseMatrix.zeros(2, 2)
    with pytest.raises(ValueError):
        DoubleComplex([(0, 0), (0, 1)], SparseMatrix(2, 2, {1: {0: ONE}}), z)


@pytest.mark.parametrize("kind", ["A", "B"])
def test_torus_d2_n4(kind):
    res = torus_cohomology(bilinear(build_even_rep(2), kind), operator_spinor("d2", 4), kmax=1)
    # Dolbeault cohomology of the flat T^4 with trivial twist
    assert res.dims == [1, 2, 1] == dolbeault_sum(2, 0)
    assert res.nonzero_exact and res.euler == 0


@pytest.mark.parametrize("kind", ["A", "B"])
def test_torus_d2_n6(kind):
    res = torus_cohomology(bilinear(build_even_rep(3), kind), operator_spinor("d2", 6), kmax=1)
    assert res.dims == dolbeault_sum(3, 1) == [1, 4, 6, 4, 1]
    assert res.nonzero_exact


def test_torus_offset_kills_everything():
    res = torus_cohomology(bilinear(build_even_rep(2), "A"), operator_spinor("d2", 4), kmax=1,
                           a=["1/3", 0, 0, 0])
    assert res.dims == [0, 0, 0]


def test_operator_spinor_errors():
    with pytest.raises(PreconditionError):
        operator_spinor("d0", 6)
    with pytest.raises(ValueError):
        operator_spinor("d9", 4)


@pytest.mark.parametrize("kind", ["A", "B"])
def test_dolbeault_identification_n4(kind):
    r = identify_classical(bilinear(build_even_rep(2), kind), "dolbeault")
    assert r.residual_zero and r.constant is not None


@given(st.integers(1, 8), st.integers(1, 5), st.integers(1, 5))
def test_spencer_dims_split_the_product(n, p, q):
    if q > n:
        return
    d1, d2 = spencer_dims(n, p, q)
    assert d1 + d2 == comb(n + p - 1, p) * comb(n, q)
    assert d1.denominator == 1 and d2.denominator == 1


@pytest.mark.parametrize("kind", ["A", "B"])
def test_spencer_n2(kind):
    r = spencer_cohomology(bilinear(build_even_rep(1), kind), {0: ONE, 1: ONE}, qmax=4)
    assert r.tau_rank == 2
    assert all(d == 0 for (p, q), d in r.dims.items() if p >= 1)
    assert all(r.kernels[key] == v for key, v in r.delta2.items())
    assert r.dims[(0, 0)] == 1


def test_spencer_needs_invertible_c_zeta():
    with pytest.raises(PreconditionError):
        spencer_cohomology(bilinear(build_even_rep(2), "A"), {0: ONE}, qmax=1)


@given(st.integers(1, 6), st.integers(0, 6))
def test_cy3_dimensions(h11, h21):
    r = cy3_spin_cohomology(HodgeDiamond.cy3(h11, h21))
    assert r.dims == [1, 0, h11 - 1, 2 * h21, h11 - 1, 0, 1]
    assert r.d_on_h30_injective and r.d_on_h11_surjective
    assert r.primitive_kernel == h11 - 1
    assert r.d2_dims == [1, 1, 0, 1, 1]
    assert r.sequence.oracle_agrees


@pytest.mark.parametrize("h,msg", [
    ({(0, 0): 1, (3, 3): 1, (3, 0): 1, (0, 3): 1, (1, 1): -1, (2, 2): -1}, "negative"),
    ({(0, 0): 1, (3, 3): 1, (3, 0): 1, (0, 3): 1, (1, 1): 2, (2, 2): 3}, "h^{1,1}"),
    ({(0, 0): 1, (3, 3): 1, (3, 0): 0, (0, 3): 0}, "h^{3,0}"),
    ({(0, 0): 1, (3, 3): 1, (3, 0): 1, (0, 3): 1, (2, 1): 2, (1, 2): 1, (1, 1): 1, (2, 2): 1}, "h^{2,1}"),
])
def test_hodge_diamond_violations(h, msg):
    with pytest.raises(ValueError, match="invalid Calabi-Yau diamond") as info:
        HodgeDiamond(dict(h))
    assert msg in str(info.value)


def test_reducible_diamond_rejected():
    h = {(0, 0): 1, (3, 3): 1, (3, 0): 1, (0, 3): 1, (0, 1): 1, (1, 0): 1, (3, 2): 1, (2, 3): 1,
         (1, 1): 1, (2, 2): 1}
    with pytest.raises(ValueError):
        cy3_spin_cohomology(HodgeDiamond(h))


def test_d2_dims_from_diamond_formula():
    assert d2_dims_from_diamond(HodgeDiamond.cy3(3, 4)) == [1, 1, 0, 1, 1]


def test_t6_zero_mode():
    ss = spectral_sequence(t6_double_complex())
    assert ss.oracle_agrees
    assert ss.total_dims == {0: 1, 1: 4, 2: 11, 3: 20, 4: 20, 5: 11, 6: 4, 7: 1}


def test_t6_nonzero_mode_is_acyclic():
    ss = spectral_sequence(t6_double_complex((1, 0, -1, 0, 2, 0)))
    assert ss.oracle_agrees and not any(ss.total_dims.values())
