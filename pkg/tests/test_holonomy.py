import random
from itertools import combinations

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

import oracle
from spincoh.clifford import RepresentationError, bilinear, build_even_rep
from spincoh.fiber import FiberAlgebra
from spincoh.holonomy import (EXPECTED_STABILIZER, CURVATURE_TYPES, DegeneratePairingError, annihilator_space,
                              associated_form, check_riemann, complex_structure_from_form, curvature_from_matrices,
                              curvature_from_riemann, curvature_project, curvature_sweep, dsquared_fiber,
                              dsquared_on_generators, hermitian_complement, invariant_spinors, is_complex_structure,
                              is_monomial, nilpotency_check, power_relation, random_curvature, random_riemann,
                              real_map, real_structure, spin7_basis, stabilizer_algebra, standard_complex_structure,
                              tau_map, zero_curvature)
from spincoh.linalg import rank
from spincoh.multilinear import I, ONE, GaussianRational


@pytest.mark.parametrize("key", sorted(EXPECTED_STABILIZER))
def test_stabilizer_dimensions(key):
    group, n = key
    s = invariant_spinors(group, n)
    assert len(stabilizer_algebra(s.rep, s.spinors)) == EXPECTED_STABILIZER[key]


@pytest.mark.parametrize("m", [2, 3])
def test_su_stabilizer_against_reference(m):
    s = invariant_spinors("su", 2 * m)
    ref = oracle.stabilizer_dim(m, [oracle.spinor(m, {w: int(v.re) for w, v in z.items()}) for z in s.spinors])
    assert len(stabilizer_algebra(s.rep, s.spinors)) == ref == m * m - 1


def test_single_spinor_stabilizer_n6():
    # a single spinor has a larger stabilizer than the pair
    s = invariant_spinors("su", 6)
    ref = oracle.stabilizer_dim(3, [oracle.spinor(3, {0: 1})])
    assert len(stabilizer_algebra(s.rep, s.spinors[:1])) == ref


@pytest.mark.parametrize("m", range(1, 6))
def test_su_spinors_are_pure(m):
    s = invariant_spinors("su", 2 * m)
    for z in s.spinors:
        ann = annihilator_space(s.rep, z)
        assert ann.pure and ann.dim == m


def test_non_pure_spinors_n8():
    rep = build_even_rep(4)
    assert annihilator_space(rep, {0: ONE, 15: ONE}).dim == 0
    cay = invariant_spinors("spin7", 8).spinors[0]
    assert not annihilator_space(rep, cay).pure


def test_zero_spinor_rejected():
    with pytest.raises(ValueError):
        annihilator_space(build_even_rep(2), {})


def test_hermitian_complement_dimension():
    rep = build_even_rep(3)
    ann = annihilator_space(rep, {0: ONE})
    comp = hermitian_complement(ann.basis, 6)
    assert len(comp) == 3
    for u in ann.basis:
        for v in comp:
            assert sum((u.get(k, GaussianRational(0)) * v[k].conjugate() for k in v), GaussianRational(0)).is_zero()


@pytest.mark.parametrize("group,n", [("su", 3), ("sp", 4), ("spin7", 6), ("g2", 8), ("bogus", 8)])
def test_invariant_spinors_bad_dimension(group, n):
    with pytest.raises(RepresentationError):
        invariant_spinors(group, n)


def test_sp_spinors_are_positive():
    s = invariant_spinors("sp", 8)
    assert s.labels == ["1", "e1..e2k", "omega"]
    assert s.chiralities == [1, 1, 1]


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("kind", ["A", "B"])
def test_kahler_form_gives_complex_structure(m, kind):
    s = invariant_spinors("su", 2 * m)
    c = bilinear(s.rep, kind)
    omega = associated_form(c, s.spinors[0], s.spinors[1], 2, kahler=True)
    j = complex_structure_from_form(omega)
    assert is_complex_structure(j)
    std = standard_complex_structure(2 * m)
    assert j == std or j == [[-x for x in row] for row in std]


def test_kahler_normalisation_degenerate():
    c = bilinear(build_even_rep(3), "B")
    with pytest.raises(DegeneratePairingError):
        associated_form(c, {0: ONE}, {0: ONE}, 2, kahler=True)


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("kind", ["A", "B"])
def test_power_relation_constant(m, kind):
    # measured constant is i^p for every m and kind
    s = invariant_spinors("su", 2 * m)
    c = bilinear(s.rep, kind)
    for p in range(1, m + 1):
        assert power_relation(c, s.spinors[0], s.spinors[1], p) == I ** p


def test_power_relation_reference_m2():
    g = oracle.gammas(2)
    form = oracle.form_matrix(2, "A")
    eta, theta = oracle.spinor(2, {0: 1}), oracle.spinor(2, {3: 1})
    c0 = oracle.pair(form, eta, theta)
    om = {(a, b): -sp.I / c0 * oracle.pair(form, eta, g[a - 1] * g[b - 1] * theta)
          for a, b in combinations(range(1, 5), 2)}
    top = oracle.pair(form, eta, g[0] * g[1] * g[2] * g[3] * theta)
    sq = 2 * (om[1, 2] * om[3, 4] - om[1, 3] * om[2, 4] + om[1, 4] * om[2, 3])
    k = sp.simplify(top / (c0 / 2 * sq))
    assert k == -1
    c = bilinear(build_even_rep(2), "A")
    assert power_relation(c, {0: ONE}, {3: ONE}, 2) == GaussianRational(-1)


@pytest.mark.parametrize("m", [1, 3, 4, 5, 7])
def test_real_structures(m):
    rs = real_structure(build_even_rep(m))
    assert rs.squares_to_identity and rs.tau_fixed
    assert rs.kind == ("B" if m % 4 == 3 else "A")
    # half the real dimension of the spinor space is fixed
    assert rs.fixed_real_dim == 1 << m


@pytest.mark.parametrize("m", [2, 6])
def test_no_real_structure(m):
    with pytest.raises(RepresentationError):
        real_structure(build_even_rep(m))


@given(st.integers(0, 7), st.integers(-3, 3), st.integers(-3, 3))
def test_real_map_is_antilinear_involution(w, a, b):
    rep = build_even_rep(3)
    eta = {w: GaussianRational(a, b)} if (a or b) else {}
    once = real_map(rep, "B", eta)
    assert real_map(rep, "B", once) == eta


def test_spin7_tau_is_monomial_bijection():
    c = bilinear(build_even_rep(4), "A")
    tau = tau_map(c, invariant_spinors("spin7", 8).spinors[0], spin7_basis())
    assert rank(tau) == 8 and is_monomial(tau)


def test_riemann_checks():
    rng = random.Random(3)
    riem = random_riemann(4, rng)
    assert check_riemann(riem, 4, bianchi=True) == []
    bad = dict(riem)
    bad[(1, 2, 1, 2)] = bad.get((1, 2, 1, 2), GaussianRational(0)) + ONE
    assert "antisymmetry in the first pair" in check_riemann(bad, 4)


def test_riemann_matrices_round_trip():
    rep = build_even_rep(2)
    r = curvature_from_riemann(rep, random_riemann(4, random.Random(8)))
    comps = {key: r.component(*key) for key in r.coeffs}
    assert curvature_from_matrices(rep, comps) == r


def test_matrices_outside_spin_rejected():
    from spincoh.linalg import SparseMatrix
    rep = build_even_rep(2)
    with pytest.raises(ValueError):
        curvature_from_matrices(rep, {(1, 2): SparseMatrix.identity(4)})


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_projections_sum_and_idempotent(seed):
    rep = build_even_rep(2)
    r = random_curvature(rep, random.Random(seed))
    r20, r11, r02 = curvature_project(r)
    assert r20.combine(r11).combine(r02) == r
    assert curvature_project(r20)[0] == r20
    assert curvature_project(r11)[1] == r11
    assert curvature_project(r02)[2] == r02


def test_projection_rejects_bad_j():
    r = zero_curvature(build_even_rep(2))
    with pytest.raises(ValueError):
        curvature_project(r, [[ONE if a == b else GaussianRational(0) for b in range(4)] for a in range(4)])


@settings(max_examples=10)
@given(st.integers(0, 10_000), st.sampled_from(["A", "B"]), st.integers(0, 3))
def test_generator_test_equals_full_fibre(seed, kind, part):
    s = invariant_spinors("su", 4)
    c = bilinear(s.rep, kind)
    base = random_curvature(s.rep, random.Random(seed), 0.3)
    curv = (base,) + curvature_project(base)
    for zeta in s.spinors:
        full = dsquared_fiber(c, zeta, curv[part]).is_zero()
        assert full == (not dsquared_on_generators(c, zeta, curv[part]))


def test_flat_curvature_squares_to_zero():
    s = invariant_spinors("su", 6)
    c = bilinear(s.rep, "B")
    r = zero_curvature(s.rep)
    assert dsquared_on_generators(c, s.spinors[0], r) == {}
    assert nilpotency_check(c, s.spinors[0], r)["pass"]


def test_curvature_sweep_conditions_are_sufficient():
    recs = curvature_sweep(4, 3, seed=11)
    assert len(recs) == 3 * 2 * 2 * len(CURVATURE_TYPES)
    for r in recs:
        if r["conditions_pass"]:
            assert r["dsquared_zero"]
    assert any(r["dsquared_zero"] for r in recs) and not all(r["dsquared_zero"] for r in recs)
