"""Invariant spinors, stabilizers, pure-spinor data, real structures and curvature checks."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .clifford import (Bilinear, RepresentationError, SpinRep, bilinear, build_even_rep,
                       build_odd_rep)
from .fiber import FiberAlgebra
from .fierz import cgamma_form, signpg
from .linalg import SparseMatrix, Vector, nullspace, rank, solve
from .multilinear import (I, ONE, ZERO, GaussianRational, MultiVector, i_power, word_from_indices,
                          wedge)

HALF = GaussianRational(Fraction(1, 2))

GroupKey = Tuple[int, int]


class DegeneratePairingError(ValueError):
    """A normalisation needs a nonzero pairing of two spinors."""


# ----------------------------------------------------------------------
# invariant spinors

@dataclass
class InvariantSpinorSet:
    group: str
    n: int
    rep: SpinRep = field(repr=False)
    spinors: List[Vector]
    labels: List[str]

    @property
    def chiralities(self) -> List[Optional[int]]:
        out = []
        for s in self.spinors:
            signs = {self.rep.chirality(w) for w in s}
            out.append(signs.pop() if len(signs) == 1 else None)
        return out


def _vec(mv: MultiVector) -> Vector:
    return dict(mv.terms)


def invariant_spinors(group: str, n: int) -> InvariantSpinorSet:
    """The standard parallel spinors (unnormalised) for su, sp, spin7 and g2."""
    if group == "su":
        if n % 2 or n < 2:
            raise RepresentationError("su(m) needs n = 2m")
        m = n // 2
        rep = build_even_rep(m)
        top = MultiVector.basis(m, *range(1, m + 1))
        return InvariantSpinorSet(group, n, rep, [{0: ONE}, _vec(top)], ["1", "e1..em"])
    if group == "sp":
        if n % 4 or n < 8:
            raise RepresentationError("sp(k) needs n = 4k with k >= 2")
        m = n // 2
        k = n // 4
        rep = build_even_rep(m)
        omega = MultiVector.zero(m)
        for j in range(1, m, 2):
            omega = omega + MultiVector.basis(m, j, j + 1)
        spinors = [{0: ONE}, _vec(MultiVector.basis(m, *range(1, m + 1)))]
        labels = ["1", "e1..e2k"]
        power = omega
        for p in range(1, k):
            spinors.append(_vec(power))
            labels.append("omega" if p == 1 else f"omega^{p}")
            power = wedge(power, omega)
        return InvariantSpinorSet(group, n, rep, spinors, labels)
    if group == "spin7":
        if n != 8:
            raise RepresentationError("spin7 needs n = 8")
        rep = build_even_rep(4)
        return InvariantSpinorSet(group, n, rep, [_cayley_spinor()], ["e1-e234"])
    if group == "g2":
        if n != 7:
            raise RepresentationError("g2 needs n = 7")
        rep = build_odd_rep(4, "odd-reduced")
        return InvariantSpinorSet(group, n, rep, [_cayley_spinor()], ["e1-e234"])
    raise RepresentationError(f"unknown group {group!r}")


def _cayley_spinor() -> Vector:
    return {word_from_indices([1]): ONE, word_from_indices([2, 3, 4]): -ONE}


EXPECTED_STABILIZER = {("su", 4): 3, ("su", 6): 8, ("su", 8): 15, ("sp", 8): 10, ("spin7", 8): 21, ("g2", 7): 14}


# ----------------------------------------------------------------------
# stabilizers and annihilators

def spin_pairs(n: int) -> List[Tuple[int, int]]:
    return list(combinations(range(1, n + 1), 2))


def stabilizer_algebra(rep: SpinRep, spinors: Sequence[Mapping[int, GaussianRational]]) -> List[Vector]:
    """Kernel basis of ``x -> (sum x_{mu nu} Gamma_{mu nu} zeta)_zeta``, over ``spin_pairs``."""
    if not spinors:
        raise ValueError("no spinors given")
    pairs = spin_pairs(rep.n)
    rows: Dict[int, Vector] = {}
    for s, zeta in enumerate(spinors):
        if not any(not v.is_zero() for v in zeta.values()):
            raise ValueError("zero spinor")
        for col, (a, b) in enumerate(pairs):
            img = rep.product((a, b)).apply(zeta)
            for w, v in img.items():
                rows.setdefault(s * rep.dim + w, {})[col] = v
    mat = SparseMatrix(len(spinors) * rep.dim, len(pairs), rows)
    return nullspace(mat)


def two_form_endomorphism(rep: SpinRep, coeffs: Mapping[Tuple[int, int], GaussianRational]) -> SparseMatrix:
    """``sum_{a<b} c_ab Gamma_ab`` as a matrix."""
    out = SparseMatrix.zeros(rep.dim, rep.dim)
    for (a, b), v in coeffs.items():
        if not v.is_zero():
            out = out + rep.product((a, b)).matrix().scale(v)
    return out


@dataclass
class AnnihilatorSpace:
    basis: List[Vector]   # vectors in V_C keyed by 1-based index
    n: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pure(self) -> bool:
        return 2 * self.dim == self.n


def annihilator_space(rep: SpinRep, zeta: Mapping[int, GaussianRational]) -> AnnihilatorSpace:
    """``W(zeta) = {v : v_mu Gamma^mu zeta = 0}``."""
    if not any(not v.is_zero() for v in zeta.values()):
        raise ValueError("zero spinor")
    rows: Dict[int, Vector] = {}
    for mu in range(1, rep.n + 1):
        for w, v in rep.gamma(mu).apply(zeta).items():
            rows.setdefault(w, {})[mu - 1] = v
    ker = nullspace(SparseMatrix(rep.dim, rep.n, rows))
    return AnnihilatorSpace([{k + 1: v for k, v in vec.items()} for vec in ker], rep.n)


def hermitian_complement(space: Sequence[Mapping[int, GaussianRational]], n: int) -> List[Vector]:
    """Basis of the orthogonal complement for the standard hermitian product on ``C^n``."""
    rows = {}
    for r, vec in enumerate(space):
        rows[r] = {k - 1: v.conjugate() for k, v in vec.items()}
    ker = nullspace(SparseMatrix(len(space), n, rows))
    return [{k + 1: v for k, v in vec.items()} for vec in ker]


# ----------------------------------------------------------------------
# associated forms

def associated_form(c: Bilinear, zeta1: Vector, zeta2: Vector, p: int, kahler: bool = False) -> MultiVector:
    """``C Gamma^(p)(zeta1, zeta2)``; ``kahler`` applies the ``-i / (2 C(zeta1, zeta2))`` scaling.

    With ``kahler=True`` and ``p = 2`` the result is the form
    ``-i/(2 C(zeta1, zeta2)) C(zeta1, Gamma_{mu nu} zeta2) e^mu ^ e^nu`` (sum over all
    ordered pairs), which is ``-i/C(zeta1, zeta2)`` times the ascending form.
    """
    form = cgamma_form(c, p, zeta1, zeta2)
    if not kahler:
        return form
    pair = c(zeta1, zeta2)
    if pair.is_zero():
        raise DegeneratePairingError("C(zeta1, zeta2) = 0; the Kahler normalisation is undefined")
    return form.scale(GaussianRational(0, -1) / pair)


def form_to_matrix(form: MultiVector) -> List[List[GaussianRational]]:
    """Antisymmetric component matrix ``Omega[mu][nu]`` (0-based) of a two-form."""
    n = form.ground_dim
    mat = [[ZERO] * n for _ in range(n)]
    for w, v in form.terms.items():
        a, b = [j for j in range(n) if w >> j & 1]
        mat[a][b] = v
        mat[b][a] = -v
    return mat


def complex_structure_from_form(form: MultiVector) -> List[List[GaussianRational]]:
    """``J`` with ``J e_nu = sum_mu Omega_{mu nu} e_mu`` (indices moved by the flat metric)."""
    return form_to_matrix(form)


def matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(k)), ZERO) for j in range(m)] for i in range(n)]


def standard_complex_structure(n: int) -> List[List[GaussianRational]]:
    """``J e_j = e_{j+m}``, ``J e_{j+m} = -e_j`` as a 0-based matrix ``J[row][col]``."""
    m = n // 2
    mat = [[ZERO] * n for _ in range(n)]
    for j in range(m):
        mat[j + m][j] = ONE
        mat[j][j + m] = -ONE
    return mat


def is_complex_structure(j: List[List[GaussianRational]]) -> bool:
    n = len(j)
    sq = matmul(j, j)
    jt = [[j[c][r] for c in range(n)] for r in range(n)]
    ortho = matmul(jt, j)
    for r in range(n):
        for c in range(n):
            want = ONE if r == c else ZERO
            if sq[r][c] != -want or ortho[r][c] != want:
                return False
    return True


def form_power(form: MultiVector, p: int) -> MultiVector:
    out = MultiVector.scalar(form.ground_dim, 1)
    for _ in range(p):
        out = wedge(out, form)
    return out


def power_relation(c: Bilinear, zeta1: Vector, zeta2: Vector, p: int) -> Optional[GaussianRational]:
    """Constant ``k`` with ``C Gamma^(2p)(zeta1, zeta2) = k * C(zeta1, zeta2)/p! * Omega^p``, if any."""
    omega = associated_form(c, zeta1, zeta2, 2, kahler=True)
    lhs = cgamma_form(c, 2 * p, zeta1, zeta2)
    rhs = form_power(omega, p)
    fact = 1
    for t in range(2, p + 1):
        fact *= t
    rhs = rhs.scale(c(zeta1, zeta2) / fact)
    if rhs.is_zero():
        return None if not lhs.is_zero() else ONE
    w, v = next(iter(rhs.terms.items()))
    k = lhs.coeff(w) / v
    return k if lhs == rhs.scale(k) else None


# ----------------------------------------------------------------------
# real structures

@dataclass
class RealStructure:
    m: int
    kind: str
    subspaces: List[Tuple[int, List[int]]]   # (sign, basis words) on which rho = sign-twisted involution
    squares_to_identity: bool
    fixed_real_dim: int
    tau: List[Vector]
    tau_fixed: bool

    def apply(self, rep: SpinRep, eta: Vector) -> Vector:
        return real_map(rep, self.kind, eta)


def real_map(rep: SpinRep, kind: str, eta: Mapping[int, GaussianRational]) -> Vector:
    """``rho(eta) = C(conj(eta))`` with ``C`` the operator A or B."""
    m = rep.m
    op = rep.product(range(1, m + 1)) if kind == "A" else rep.product(range(m + 1, 2 * m + 1))
    return op.apply({w: v.conjugate() for w, v in eta.items()})


def real_structure(rep: SpinRep, sign: int = 1) -> RealStructure:
    """Reality condition for ``m = 4k, 4k+1, 4k+3``; raises for ``m = 4k+2``.

    For ``m = 4k`` the condition is ``eta = +-A(conj eta)`` on each chirality;
    for ``m = 4k+1`` it is ``eta = A(conj eta)``; for ``m = 4k+3``, ``eta = B(conj eta)``.
    """
    m = rep.m
    r = m % 4
    if r == 2:
        raise RepresentationError(f"no real structure for m = {m}")
    kind = "B" if r == 3 else "A"
    full = list(range(rep.dim))
    if r == 0:
        subspaces = [(1, rep.chiral_basis(1)), (-1, rep.chiral_basis(-1))]
    else:
        subspaces = [(1, full)]
    ok = True
    fixed = 0
    for s, basis in subspaces:
        for w in basis:
            twice = real_map(rep, kind, real_map(rep, kind, {w: ONE}))
            if twice != {w: ONE}:
                ok = False
        fixed += _real_fixed_dim(rep, kind, s, basis)
    top = word_from_indices(range(1, m + 1))
    if r == 3:
        tau = [{0: ONE, top: I}, {0: I, top: ONE}]
    else:
        tau = [{0: ONE, top: ONE}, {0: I, top: -I}]
    tau_fixed = all(real_map(rep, kind, t) == t for t in tau)
    return RealStructure(m, kind, subspaces, ok, fixed, tau, tau_fixed)


def _real_fixed_dim(rep: SpinRep, kind: str, sign: int, basis: Sequence[int]) -> int:
    """Real dimension of ``{eta in span(basis) : sign * rho(eta) = eta}``."""
    pos = {w: j for j, w in enumerate(basis)}
    d = len(basis)
    rows: Dict[int, Vector] = {}
    # unknowns (x, y) real with eta = x + i y; equation sign*rho(eta) - eta = 0
    for j, w in enumerate(basis):
        for part, unit in ((0, ONE), (1, I)):
            img = real_map(rep, kind, {w: unit})
            col = j + part * d
            out: Dict[int, GaussianRational] = {}
            for t, v in img.items():
                if t not in pos:
                    raise RepresentationError("real structure does not preserve the subspace")
                out[pos[t]] = out.get(pos[t], ZERO) + (v if sign > 0 else -v)
            out[j] = out.get(j, ZERO) - unit
            for t, v in out.items():
                if v.re != 0:
                    rows.setdefault(t, {})[col] = GaussianRational(v.re)
                if v.im != 0:
                    rows.setdefault(t + d, {})[col] = GaussianRational(v.im)
    mat = SparseMatrix(2 * d, 2 * d, rows)
    return 2 * d - rank(mat)


# ----------------------------------------------------------------------
# curvature

Coeffs = Dict[Tuple[int, int], GaussianRational]


@dataclass
class CurvatureData:
    """Spin curvature ``R_{mu nu} = sum_{rho<sigma} coeffs[(mu,nu)][(rho,sigma)] Gamma_{rho sigma}``.

    Only ``mu < nu`` is stored; ``R_{nu mu} = -R_{mu nu}``.  ``scalar`` holds a
    line-bundle curvature ``F_{mu nu}`` when the data is scalar valued.
    """

    rep: SpinRep = field(repr=False)
    coeffs: Dict[Tuple[int, int], Coeffs]
    provenance: str = "components"

    @property
    def n(self) -> int:
        return self.rep.n

    def coefficient(self, mu: int, nu: int) -> Coeffs:
        if mu == nu:
            return {}
        if mu < nu:
            return self.coeffs.get((mu, nu), {})
        return {k: -v for k, v in self.coeffs.get((nu, mu), {}).items()}

    def component(self, mu: int, nu: int) -> SparseMatrix:
        return two_form_endomorphism(self.rep, self.coefficient(mu, nu))

    def is_zero(self) -> bool:
        return all(v.is_zero() for c in self.coeffs.values() for v in c.values())

    def evaluate(self, u: Mapping[int, GaussianRational], v: Mapping[int, GaussianRational]) -> Coeffs:
        """Coefficients of ``R(u, v) = sum u^mu v^nu R_{mu nu}``."""
        out: Coeffs = {}
        for mu, a in u.items():
            for nu, b in v.items():
                for k, x in self.coefficient(mu, nu).items():
                    out[k] = out.get(k, ZERO) + a * b * x
        return {k: x for k, x in out.items() if not x.is_zero()}

    def combine(self, other: "CurvatureData", s: int = 1) -> "CurvatureData":
        out: Dict[Tuple[int, int], Coeffs] = {}
        for key in set(self.coeffs) | set(other.coeffs):
            acc = dict(self.coeffs.get(key, {}))
            for k, v in other.coeffs.get(key, {}).items():
                acc[k] = acc.get(k, ZERO) + (v if s > 0 else -v)
            acc = {k: v for k, v in acc.items() if not v.is_zero()}
            if acc:
                out[key] = acc
        return CurvatureData(self.rep, out, "combined")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CurvatureData):
            return NotImplemented
        return self.combine(other, -1).is_zero()


def zero_curvature(rep: SpinRep) -> CurvatureData:
    return CurvatureData(rep, {}, "zero")


def curvature_from_riemann(rep: SpinRep, riemann: Mapping[Tuple[int, int, int, int], GaussianRational]) -> CurvatureData:
    """``R_{mu nu} = 1/4 R_{mu nu rho sigma} Gamma^{rho sigma}`` from a rank-4 array (1-based keys)."""
    n = rep.n
    coeffs: Dict[Tuple[int, int], Coeffs] = {}
    for mu, nu in spin_pairs(n):
        row: Coeffs = {}
        for rho, sigma in spin_pairs(n):
            x = riemann.get((mu, nu, rho, sigma), ZERO)
            if not x.is_zero():
                row[(rho, sigma)] = x * HALF
        if row:
            coeffs[(mu, nu)] = row
    return CurvatureData(rep, coeffs, "riemann")


def check_riemann(riemann: Mapping[Tuple[int, int, int, int], GaussianRational], n: int,
                  bianchi: bool = False) -> List[str]:
    """Names of violated symmetries of a rank-4 array."""
    bad = []
    get = lambda k: riemann.get(k, ZERO)
    idx = range(1, n + 1)
    for a in idx:
        for b in idx:
            for c in idx:
                for d in idx:
                    x = get((a, b, c, d))
                    if x != -get((b, a, c, d)) and "antisymmetry in the first pair" not in bad:
                        bad.append("antisymmetry in the first pair")
                    if x != -get((a, b, d, c)) and "antisymmetry in the second pair" not in bad:
                        bad.append("antisymmetry in the second pair")
                    if bianchi and not (x + get((b, c, a, d)) + get((c, a, b, d))).is_zero():
                        if "first Bianchi identity" not in bad:
                            bad.append("first Bianchi identity")
    return bad


def curvature_from_matrices(rep: SpinRep, comps: Mapping[Tuple[int, int], SparseMatrix]) -> CurvatureData:
    """Expand spinor endomorphisms in the ``Gamma_{rho sigma}`` basis; raises when not in spin(n)."""
    pairs = spin_pairs(rep.n)
    cols = {}
    for j, (a, b) in enumerate(pairs):
        g = rep.product((a, b))
        for w in range(rep.dim):
            t = g.target[w]
            if t is not None:
                cols.setdefault(t * rep.dim + w, {})[j] = i_power(g.phase[w])
    basis_mat = SparseMatrix(rep.dim * rep.dim, len(pairs), cols)
    coeffs: Dict[Tuple[int, int], Coeffs] = {}
    for key, mat in comps.items():
        mu, nu = key
        if mu == nu:
            raise ValueError("diagonal curvature component")
        rhs = {r * rep.dim + c: v for r, row in mat.rows.items() for c, v in row.items()}
        sol = solve(basis_mat, rhs)
        if sol is None:
            raise ValueError(f"R_{{{mu}{nu}}} is not in the span of the Gamma_(2)")
        sol = {pairs[j]: v for j, v in sol.items() if not v.is_zero()}
        if mu > nu:
            mu, nu = nu, mu
            sol = {k: -v for k, v in sol.items()}
        if (mu, nu) in coeffs and coeffs[(mu, nu)] != sol:
            raise ValueError("components are not antisymmetric")
        coeffs[(mu, nu)] = sol
    return CurvatureData(rep, coeffs, "matrices")


def random_coeffs(rng: random.Random, pairs: Sequence[Tuple[int, int]], density: float = 0.5, bound: int = 3) -> Coeffs:
    out: Coeffs = {}
    for p in pairs:
        if rng.random() < density:
            v = rng.randint(-bound, bound)
            if v:
                out[p] = GaussianRational(v)
    return out


def random_curvature(rep: SpinRep, rng: random.Random, density: float = 0.4) -> CurvatureData:
    """Real spin(n)-valued antisymmetric curvature with small integer coefficients."""
    pairs = spin_pairs(rep.n)
    coeffs = {}
    for key in pairs:
        row = random_coeffs(rng, pairs, density)
        if row:
            coeffs[key] = row
    return CurvatureData(rep, coeffs, "random")


def random_riemann(n: int, rng: random.Random, terms: int = 2, bound: int = 2) -> Dict[Tuple[int, int, int, int], GaussianRational]:
    """Algebraic curvature tensor (with first Bianchi identity) from Kulkarni-Nomizu products."""
    out: Dict[Tuple[int, int, int, int], GaussianRational] = {}
    for _ in range(terms):
        h = _random_symmetric(n, rng, bound)
        k = _random_symmetric(n, rng, bound)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for d in range(n):
                        x = h[a][c] * k[b][d] + h[b][d] * k[a][c] - h[a][d] * k[b][c] - h[b][c] * k[a][d]
                        if x:
                            key = (a + 1, b + 1, c + 1, d + 1)
                            out[key] = out.get(key, ZERO) + GaussianRational(x)
    return {k: v for k, v in out.items() if not v.is_zero()}


def _random_symmetric(n: int, rng: random.Random, bound: int) -> List[List[int]]:
    s = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            s[a][b] = s[b][a] = rng.randint(-bound, bound)
    return s


def holonomy_curvature_basis(rep: SpinRep, algebra: Sequence[Vector]) -> List[Dict[Tuple[int, int, int, int], GaussianRational]]:
    """Basis of algebraic curvature tensors (Bianchi identity included) with values in ``algebra``.

    ``algebra`` is given in ``spin_pairs`` coordinates; tensors are
    ``R_{abcd} = sum S_ij X^i_{ab} X^j_{cd}`` with ``S`` symmetric.
    """
    n = rep.n
    pairs = spin_pairs(n)
    xs = []
    for vec in algebra:
        x = {}
        for j, v in vec.items():
            a, b = pairs[j]
            x[(a, b)] = v
            x[(b, a)] = -v
        xs.append(x)
    k = len(xs)
    sym_idx = [(i, j) for i in range(k) for j in range(i, k)]

    def tensor_entry(col: int, key) -> GaussianRational:
        i, j = sym_idx[col]
        a, b, c, d = key
        val = xs[i].get((a, b), ZERO) * xs[j].get((c, d), ZERO)
        if i != j:
            val = val + xs[j].get((a, b), ZERO) * xs[i].get((c, d), ZERO)
        return val

    # Bianchi: R_abcd + R_bcad + R_cabd = 0 for a<b<c, all d
    rows: Dict[int, Vector] = {}
    r = 0
    for a, b, c in combinations(range(1, n + 1), 3):
        for d in range(1, n + 1):
            row = {}
            for col in range(len(sym_idx)):
                v = tensor_entry(col, (a, b, c, d)) + tensor_entry(col, (b, c, a, d)) + tensor_entry(col, (c, a, b, d))
                if not v.is_zero():
                    row[col] = v
            if row:
                rows[r] = row
            r += 1
    ker = nullspace(SparseMatrix(r, len(sym_idx), rows))
    out = []
    for vec in ker:
        t: Dict[Tuple[int, int, int, int], GaussianRational] = {}
        for col, s in vec.items():
            i, j = sym_idx[col]
            for (a, b), u in xs[i].items():
                for (c, d), w in xs[j].items():
                    t[(a, b, c, d)] = t.get((a, b, c, d), ZERO) + s * u * w
            if i != j:
                for (a, b), u in xs[j].items():
                    for (c, d), w in xs[i].items():
                        t[(a, b, c, d)] = t.get((a, b, c, d), ZERO) + s * u * w
        out.append({key: v for key, v in t.items() if not v.is_zero()})
    return out


def curvature_project(r: CurvatureData, j: Optional[List[List[GaussianRational]]] = None
                      ) -> Tuple[CurvatureData, CurvatureData, CurvatureData]:
    """Split ``R`` into its (2,0), (1,1) and (0,2) parts for the complex structure ``J``.

    Type (1,0) covectors are those with ``alpha(J v) = i alpha(v)`` (for the
    standard ``J`` these are ``dz^j = e^j + i e^{j+m}``).  The (2,0) part is
    ``R(P u, P v)`` with ``P = (1 - iJ)/2``; the (0,2) part uses the conjugate.
    """
    n = r.n
    if j is None:
        j = standard_complex_structure(n)
    if not is_complex_structure(j):
        raise ValueError("J must satisfy J^2 = -1 and be orthogonal")
    p = [[(ONE if a == b else ZERO) * HALF - I * j[a][b] * HALF for b in range(n)] for a in range(n)]
    pbar = [[(ONE if a == b else ZERO) * HALF + I * j[a][b] * HALF for b in range(n)] for a in range(n)]

    def pulled(proj) -> CurvatureData:
        coeffs: Dict[Tuple[int, int], Coeffs] = {}
        cols = [{mu + 1: proj[mu][a] for mu in range(n) if not proj[mu][a].is_zero()} for a in range(n)]
        for a, b in spin_pairs(n):
            val = r.evaluate(cols[a - 1], cols[b - 1])
            if val:
                coeffs[(a, b)] = val
        return CurvatureData(r.rep, coeffs, "projected")

    r20 = pulled(p)
    r02 = pulled(pbar)
    r11 = r.combine(r20, -1).combine(r02, -1)
    r11.provenance = "projected"
    return r20, r11, r02


# ----------------------------------------------------------------------
# d squared and the curvature conditions

def c_zeta(c: Bilinear, zeta: Mapping[int, GaussianRational], mu: int, rep: Optional[SpinRep] = None) -> Vector:
    """Cospinor ``C_zeta^mu(eta) = C(zeta, Gamma_mu eta)`` (Euclidean, so upper = lower)."""
    g = (rep or c.rep).gamma(mu)
    # C(zeta, G eta) = zeta^T M G eta
    mg = c.form @ g
    return mg.transpose().apply(zeta)


def dsquared_fiber(c: Bilinear, zeta: Vector, r: CurvatureData, carrier: str = "full") -> SparseMatrix:
    """``1/2 C^mu ^ C^nu ^ R_{mu nu}`` acting on the fibre."""
    fib = FiberAlgebra(c, carrier)
    n = r.n
    wedges = [fib.wedge_matrix(c_zeta(c, zeta, mu, r.rep)) for mu in range(1, n + 1)]
    total = SparseMatrix.zeros(fib.dim, fib.dim)
    for (mu, nu), coeffs in r.coeffs.items():
        if not coeffs:
            continue
        der = fib.derivation_matrix(two_form_endomorphism(r.rep, coeffs))
        total = total + wedges[mu - 1] @ wedges[nu - 1] @ der
    return total


def curvature_condition_terms(c: Bilinear, zeta: Vector, r: CurvatureData, p: int) -> Dict[Tuple[int, ...], Coeffs]:
    """``X_rho = sum_{mu nu} C(zeta, Gamma^mu Gamma_rho Gamma^nu zeta) R_{mu nu}`` for each ascending rho."""
    rep = r.rep
    n = rep.n
    out = {}
    gam = [rep.gamma(mu) for mu in range(1, n + 1)]
    for rho in combinations(range(1, n + 1), p):
        g_rho = rep.product(rho)
        acc: Coeffs = {}
        for mu, nu in spin_pairs(n):
            coeffs = r.coeffs.get((mu, nu))
            if not coeffs:
                continue
            a = c(zeta, (gam[mu - 1] @ g_rho @ gam[nu - 1]).apply(zeta))
            b = c(zeta, (gam[nu - 1] @ g_rho @ gam[mu - 1]).apply(zeta))
            w = a - b
            if w.is_zero():
                continue
            for k, x in coeffs.items():
                acc[k] = acc.get(k, ZERO) + w * x
        acc = {k: v for k, v in acc.items() if not v.is_zero()}
        if acc:
            out[rho] = acc
    return out


def skew_degrees(c: Bilinear) -> List[int]:
    return [p for p in range(c.rep.n + 1) if signpg(p, c.s_C, c.s_Gamma) == -1]


def nilpotency_check(c: Bilinear, zeta: Vector, r: CurvatureData) -> dict:
    """Sufficient curvature conditions for ``d^2 = 0``.

    ``pure``: when ``zeta`` is pure, ``R`` must vanish on pairs from ``Z``,
    with ``Z`` (the hermitian complement of ``W(zeta)``) read as covectors
    through the hermitian product, i.e. on pairs of conjugates ``conj(z)``.
    ``contractions``: for every degree ``p`` with skew ``C Gamma^(p)`` and
    every ``rho``, ``sum C(zeta, Gamma^mu Gamma_rho Gamma^nu zeta) R_{mu nu} = 0``.
    """
    ann = annihilator_space(r.rep, zeta)
    result: dict = {"pure": ann.pure, "annihilator_dim": ann.dim}
    if ann.pure:
        zs = hermitian_complement(ann.basis, r.n)
        zbar = [{k: v.conjugate() for k, v in z.items()} for z in zs]
        ok = all(not r.evaluate(u, v) for a, u in enumerate(zbar) for v in zbar[a + 1:])
        result["pure_condition"] = ok
    else:
        result["pure_condition"] = None
    per_p = {}
    for p in skew_degrees(c):
        per_p[p] = not curvature_condition_terms(c, zeta, r, p)
    result["contractions"] = per_p
    result["contractions_pass"] = all(per_p.values())
    result["pass"] = result["contractions_pass"] or bool(result["pure_condition"])
    return result


# ----------------------------------------------------------------------
# tau map

def tau_map(c: Bilinear, zeta: Vector, domain: Sequence[Mapping[int, GaussianRational]],
            rep: Optional[SpinRep] = None) -> SparseMatrix:
    """Matrix of ``tau(eta) = C(zeta, Gamma_mu eta) e^mu`` on the given domain vectors."""
    rep = rep or c.rep
    rows: Dict[int, Vector] = {}
    for k, eta in enumerate(domain):
        for mu in range(1, rep.n + 1):
            v = c(zeta, rep.gamma(mu).apply(eta))
            if not v.is_zero():
                rows.setdefault(mu - 1, {})[k] = v
    return SparseMatrix(rep.n, len(domain), rows)


def spin7_basis() -> List[Vector]:
    """The eight positive-chirality spinors that make the Spin(7) tau-map monomial."""
    w = word_from_indices
    top = w([1, 2, 3, 4])
    return [
        {0: ONE, top: ONE},
        {0: I, top: -I},
        {w([1, 2]): I, w([3, 4]): I},
        {w([1, 2]): ONE, w([3, 4]): -ONE},
        {w([1, 3]): ONE, w([2, 4]): ONE},
        {w([1, 3]): I, w([2, 4]): -I},
        {w([2, 3]): I, w([1, 4]): I},
        {w([2, 3]): ONE, w([1, 4]): -ONE},
    ]


def is_monomial(mat: SparseMatrix) -> bool:
    """Each column has exactly one nonzero entry, in distinct rows."""
    cols = mat.columns()
    if len(cols) != mat.ncols:
        return False
    seen = set()
    for col in cols.values():
        if len(col) != 1:
            return False
        r = next(iter(col))
        if r in seen:
            return False
        seen.add(r)
    return True


def dsquared_on_generators(c: Bilinear, zeta: Vector, r: CurvatureData, carrier: str = "full") -> Dict[int, Vector]:
    """``d^2`` on the degree-one generators ``eps^A``.

    ``d^2`` is a derivation (its coefficients are even forms), so it vanishes
    on the whole fibre exactly when every value returned here is zero.
    """
    fib = FiberAlgebra(c, carrier)
    n = r.n
    gens = [fib.generator(c_zeta(c, zeta, mu, r.rep)) for mu in range(1, n + 1)]
    out: Dict[int, Vector] = {}
    for (mu, nu), coeffs in r.coeffs.items():
        if not coeffs:
            continue
        two = fib.wedge(gens[mu - 1], gens[nu - 1])
        if not two:
            continue
        der = fib.derivation_matrix(two_form_endomorphism(r.rep, coeffs))
        for j in range(fib.k):
            img = der.apply({1 << j: ONE})
            if not img:
                continue
            val = fib.wedge(two, img)
            acc = out.setdefault(j, {})
            for w, x in val.items():
                s = acc.get(w, ZERO) + x
                if s.is_zero():
                    acc.pop(w, None)
                else:
                    acc[w] = s
    return {j: v for j, v in out.items() if v}


CURVATURE_TYPES = ("generic", "11", "20", "02", "11+02", "11+20")


def curvature_sweep(n: int, samples: int, seed: int, kinds: Sequence[str] = ("A", "B"),
                    density: float = 0.3) -> List[dict]:
    """Compare ``d^2 = 0`` with the sufficient conditions on seeded synthetic curvatures.

    Each base curvature is split by type (for the standard ``J``) and every
    type combination is tested against both SU(m) spinors.
    """
    rng = random.Random(seed)
    spinors = invariant_spinors("su", n)
    rep = spinors.rep
    records = []
    for trial in range(samples):
        base = random_curvature(rep, rng, density)
        r20, r11, r02 = curvature_project(base)
        variants = dict(zip(CURVATURE_TYPES, (base, r11, r20, r02, r11.combine(r02), r11.combine(r20))))
        for kind in kinds:
            c = bilinear(rep, kind)
            for label, zeta in zip(spinors.labels, spinors.spinors):
                for name, curv in variants.items():
                    zero = not dsquared_on_generators(c, zeta, curv)
                    chk = nilpotency_check(c, zeta, curv)
                    records.append({
                        "n": n, "sample": trial, "kind": kind, "spinor": label, "type": name,
                        "dsquared_zero": zero, "pure_condition": chk["pure_condition"],
                        "contractions_pass": chk["contractions_pass"], "conditions_pass": chk["pass"],
                    })
    return records
