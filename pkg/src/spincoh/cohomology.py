"""Exact cohomology of finite complexes, torus spin complexes, double complexes and spectral sequences."""
from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .clifford import Bilinear, SpinRep, bilinear, build_even_rep, build_odd_rep
from .fiber import FiberAlgebra, _perm_sign
from .holonomy import c_zeta, invariant_spinors
from .linalg import SparseMatrix, Vector, echelon, inverse, nullspace, rank, span_dim
from .multilinear import I, ONE, ZERO, GaussianRational
from .spincomplex import (FormFactor, SymFactor, TwistedSpace, build_d_mode, build_Dhat, build_Dp,
                          carrier_for, one_form_cospinor)


class NotAComplexError(ValueError):
    """Consecutive differentials do not compose to zero."""

    def __init__(self, degree: int, block: SparseMatrix):
        super().__init__(f"d o d is nonzero from degree {degree} ({block.nnz()} nonzero entries)")
        self.degree = degree
        self.block = block


class PreconditionError(ValueError):
    pass


# ----------------------------------------------------------------------
# finite complexes

@dataclass
class FiniteComplex:
    """Spaces ``C^offset .. C^top`` with ``maps[j]: C^(offset+j) -> C^(offset+j+1)``."""

    dims: List[int]
    maps: List[SparseMatrix]
    offset: int = 0
    indices: Optional[List[List[int]]] = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.maps) != max(len(self.dims) - 1, 0):
            raise ValueError("need one map between each pair of consecutive degrees")
        for j, d in enumerate(self.maps):
            if d.shape != (self.dims[j + 1], self.dims[j]):
                raise ValueError(f"map {j} has shape {d.shape}, expected {(self.dims[j + 1], self.dims[j])}")
        for j in range(len(self.maps) - 1):
            sq = self.maps[j + 1] @ self.maps[j]
            if not sq.is_zero():
                raise NotAComplexError(self.offset + j, sq)

    @property
    def degrees(self) -> range:
        return range(self.offset, self.offset + len(self.dims))


@dataclass
class CohomologyResult:
    offset: int
    dims: List[int]
    representatives: Optional[List[List[Vector]]] = field(default=None, repr=False)

    def as_dict(self) -> Dict[int, int]:
        return {self.offset + j: d for j, d in enumerate(self.dims)}


def complex_cohomology(cx: FiniteComplex, representatives: bool = False) -> CohomologyResult:
    """``dim H^l = dim ker d_l - rank d_(l-1)``; optional representatives in echelon form."""
    ranks = [rank(d) for d in cx.maps]
    dims = []
    reps: List[List[Vector]] = []
    for j, dim in enumerate(cx.dims):
        r_out = ranks[j] if j < len(ranks) else 0
        r_in = ranks[j - 1] if j > 0 else 0
        dims.append(dim - r_out - r_in)
        if representatives:
            kernel = nullspace(cx.maps[j]) if j < len(cx.maps) else [{c: ONE} for c in range(dim)]
            image = list(cx.maps[j - 1].columns().values()) if j > 0 else []
            base = span_dim(image)
            chosen: List[Vector] = []
            for v in kernel:
                if span_dim(image + chosen + [v]) > base + len(chosen):
                    chosen.append(v)
            reps.append(echelon(chosen)[0] if chosen else [])
    return CohomologyResult(cx.offset, dims, reps if representatives else None)


def complex_from_operator(matrix: SparseMatrix, degree: Callable[[int], int]) -> FiniteComplex:
    """Split a square operator raising ``degree`` by one into a :class:`FiniteComplex`."""
    groups: Dict[int, List[int]] = {}
    for j in range(matrix.ncols):
        groups.setdefault(degree(j), []).append(j)
    lo, hi = min(groups), max(groups)
    idx = [groups.get(t, []) for t in range(lo, hi + 1)]
    maps = [matrix.submatrix(idx[j + 1], idx[j]) for j in range(len(idx) - 1)]
    for r, row in matrix.rows.items():
        for col in row:
            if degree(r) != degree(col) + 1:
                raise ValueError("operator does not raise the degree by one")
    return FiniteComplex([len(x) for x in idx], maps, lo, idx)


def euler_characteristic(cx: FiniteComplex, result: Optional[CohomologyResult] = None) -> int:
    """Alternating sum of cohomology dimensions, cross-checked against the chain dimensions."""
    result = result or complex_cohomology(cx)
    chi_h = sum((-1) ** (cx.offset + j) * d for j, d in enumerate(result.dims))
    chi_c = sum((-1) ** (cx.offset + j) * d for j, d in enumerate(cx.dims))
    if chi_h != chi_c:
        raise AssertionError(f"Euler characteristics disagree: {chi_h} vs {chi_c}")
    return chi_h


def fiber_complex(mat: SparseMatrix, fib: FiberAlgebra) -> FiniteComplex:
    return complex_from_operator(mat, lambda w: w.bit_count())


def koszul_complex(nu: Mapping[int, GaussianRational], k: int) -> FiniteComplex:
    """``(Lambda*(C^k), nu ^)`` for a vector ``nu`` in ``C^k``."""
    rows: Dict[int, Vector] = {}
    for w in range(1 << k):
        for j, v in nu.items():
            if w >> j & 1 or v.is_zero():
                continue
            s = (w & ((1 << j) - 1)).bit_count() % 2
            rows.setdefault(w | (1 << j), {})[w] = -v if s else v
    return complex_from_operator(SparseMatrix(1 << k, 1 << k, rows), lambda w: w.bit_count())


# ----------------------------------------------------------------------
# torus spin cohomology

OPERATOR_SPINORS = ("d1", "d2", "d0")


def operator_spinor(name: str, n: int) -> Vector:
    """Parallel spinor defining ``d1`` (``1``), ``d2`` (``e_1..e_m``) or ``d0`` (``omega^(k-1)``)."""
    m = n // 2
    if name == "d1":
        return {0: ONE}
    if name == "d2":
        return {(1 << m) - 1: ONE}
    if name == "d0":
        if n % 4 or n < 8:
            raise PreconditionError("d0 needs n = 4k with k >= 2")
        spinors = invariant_spinors("sp", n)
        k = n // 4
        return spinors.spinors[1 + k - 1]
    raise ValueError(f"unknown operator {name!r}")


def default_carrier(c: Bilinear, zeta: Mapping[int, GaussianRational], rep: Optional[SpinRep] = None) -> str:
    ok = carrier_for(c, zeta, rep)
    for name in ("minus", "plus"):
        if name in ok:
            return name
    return "full"


def mode_set(n: int, kmax: int) -> Iterable[Tuple[int, ...]]:
    return product(range(-kmax, kmax + 1), repeat=n)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("SPINCOH_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class TorusCohomology:
    n: int
    carrier: str
    kmax: int
    dims: List[int]
    zero_mode_dims: List[int]
    modes: int
    nonzero_exact: bool
    failures: List[Tuple[int, ...]]
    euler: int


def _mode_dims(args) -> Tuple[Tuple[int, ...], List[int]]:
    c, zeta, rep, carrier, k, a = args
    fib = FiberAlgebra(c, carrier)
    kappa = [I * (GaussianRational(ki) + GaussianRational(ai)) for ki, ai in zip(k, a)]
    nu = one_form_cospinor(c, zeta, kappa, rep)
    mat = fib.wedge_matrix(nu) if nu else SparseMatrix.zeros(fib.dim, fib.dim)
    return k, complex_cohomology(fiber_complex(mat, fib)).dims


def torus_cohomology(c: Bilinear, zeta: Mapping[int, GaussianRational], carrier: Optional[str] = None,
                     kmax: int = 1, a: Optional[Sequence] = None, rep: Optional[SpinRep] = None) -> TorusCohomology:
    """Spin cohomology of the flat torus, summed over the modes ``|k|_inf <= kmax``.

    Every mode with ``k + a != 0`` is checked to contribute nothing.
    """
    rep = rep or c.rep
    n = rep.n
    a = [Fraction(x) for x in (a if a is not None else [0] * n)]
    carrier = carrier or default_carrier(c, zeta, rep)
    jobs = [(c, zeta, rep, carrier, k, a) for k in mode_set(n, kmax)]
    if _workers() > 1:
        with ProcessPoolExecutor(_workers()) as pool:
            results = list(pool.map(_mode_dims, jobs, chunksize=64))
    else:
        results = [_mode_dims(j) for j in jobs]
    fib = FiberAlgebra(c, carrier)
    total = [0] * (fib.k + 1)
    zero = [0] * (fib.k + 1)
    failures = []
    for k, dims in results:
        is_zero = all(Fraction(ki) + ai == 0 for ki, ai in zip(k, a))
        if is_zero:
            zero = list(dims)
        elif any(dims):
            failures.append(k)
        total = [x + y for x, y in zip(total, dims)]
    euler = sum((-1) ** j * d for j, d in enumerate(total))
    return TorusCohomology(n, carrier, kmax, total, zero, len(jobs), not failures, failures, euler)


def dolbeault_sum(m: int, twist_rank: int) -> List[int]:
    """``dim (+)_{p+q=l} Lambda^{0,p} (x) Lambda^q(Z)`` for ``dim Z = twist_rank``."""
    out = [0] * (m + twist_rank + 1)
    for p in range(m + 1):
        for q in range(twist_rank + 1):
            out[p + q] += comb(m, p) * comb(twist_rank, q)
    return out


# ----------------------------------------------------------------------
# classical identifications

@dataclass
class Identification:
    flavor: str
    n: int
    constant: Optional[GaussianRational]
    expected_constant: Optional[GaussianRational]
    residual_zero: bool
    modes: int
    details: dict = field(default_factory=dict)


def _split_map(fib: FiberAlgebra, first: Sequence[int]) -> Tuple[SparseMatrix, List[int], List[int]]:
    """Algebra isomorphism ``Lambda(L (+) Z) -> Lambda(L) (x) Lambda(Z)``.

    ``first`` lists the spinor positions spanning ``L`` in the wanted order;
    product index is ``lw * 2^|Z| + zw``.
    """
    lpos = list(first)
    zpos = [a for a in fib.positions if a not in lpos]
    lidx = {a: j for j, a in enumerate(lpos)}
    zidx = {a: j for j, a in enumerate(zpos)}
    rows: Dict[int, Vector] = {}
    for w in range(fib.dim):
        elems = [fib.positions[j] for j in range(fib.k) if w >> j & 1]
        ls = sorted((a for a in elems if a in lidx), key=lidx.get)
        zs = sorted((a for a in elems if a in zidx), key=zidx.get)
        # sign of moving from fibre order to (L in given order, then Z)
        sign = _perm_sign([lidx[a] if a in lidx else len(lpos) + zidx[a] for a in elems])
        lw = sum(1 << lidx[a] for a in ls)
        zw = sum(1 << zidx[a] for a in zs)
        rows[lw * (1 << len(zpos)) + zw] = {w: ONE if sign > 0 else -ONE}
    return SparseMatrix(fib.dim, fib.dim, rows), lpos, zpos


def _left_form(coeffs: Sequence[GaussianRational], nl: int, nz: int) -> SparseMatrix:
    """``(sum_j c_j e^j ^) (x) 1`` on ``Lambda(C^nl) (x) Lambda(C^nz)``."""
    rows: Dict[int, Vector] = {}
    zd = 1 << nz
    for lw in range(1 << nl):
        for j, v in enumerate(coeffs):
            if v.is_zero() or lw >> j & 1:
                continue
            s = (lw & ((1 << j) - 1)).bit_count() % 2
            for zw in range(zd):
                rows.setdefault((lw | 1 << j) * zd + zw, {})[lw * zd + zw] = -v if s else v
    return SparseMatrix((1 << nl) * zd, (1 << nl) * zd, rows)


def _same_block(mat: SparseMatrix, nz: int) -> SparseMatrix:
    """Entries of an operator on ``Lambda(L) (x) Lambda(Z)`` that keep the ``Z`` degree."""
    zd = 1 << nz
    rows = {}
    for r, row in mat.rows.items():
        kept = {col: v for col, v in row.items() if (r % zd).bit_count() == (col % zd).bit_count()}
        if kept:
            rows[r] = kept
    return SparseMatrix(mat.nrows, mat.ncols, rows)


def _ratio(x: Vector, y: Vector) -> Optional[GaussianRational]:
    """``lam`` with ``x = lam * y`` if one exists."""
    if set(x) != set(y):
        return None
    lam = None
    for key, v in y.items():
        r = x[key] / v
        if lam is None:
            lam = r
        elif r != lam:
            return None
    return lam


def _identification_modes(n: int) -> List[Tuple[int, ...]]:
    rng = random.Random(n)
    modes = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    modes += [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(4)]
    return modes


def _holomorphic_compare(c: Bilinear, zeta: Vector, classical: Callable[[Sequence[int]], List[GaussianRational]],
                         flavor: str, expected=None) -> Identification:
    """Compare ``d`` on ``C_-`` with ``lam * (classical one-form) ^`` on the ``Lambda^{0,p}`` blocks."""
    rep = c.rep
    m, n = rep.m, rep.n
    fib = FiberAlgebra(c, "minus")
    first = [1 << j for j in range(m)]
    phi, lpos, zpos = _split_map(fib, first)
    phi_inv = inverse(phi)
    lam = None
    ok = True
    modes = _identification_modes(n)
    for k in modes:
        kappa = [I * GaussianRational(x) for x in k]
        nu = one_form_cospinor(c, zeta, kappa, rep)
        nu_l = [nu.get(a, ZERO) for a in lpos]
        cl = classical(k)
        r = _ratio({j: v for j, v in enumerate(nu_l) if not v.is_zero()},
                   {j: v for j, v in enumerate(cl) if not v.is_zero()})
        if r is None:
            ok = False
            continue
        lam = lam or r
        if r != lam:
            ok = False
        d = fib.wedge_matrix(nu) if nu else SparseMatrix.zeros(fib.dim, fib.dim)
        transported = _same_block(phi @ d @ phi_inv, len(zpos))
        target = _left_form(cl, m, len(zpos)).scale(lam)
        if not (transported - target).is_zero():
            ok = False
    return Identification(flavor, n, lam, expected, ok, len(modes), {"twist_rank": len(zpos)})


def identify_classical(c: Bilinear, flavor: str) -> Identification:
    """Transport the spin differential to a classical operator and return the residual verdict.

    ``dolbeault``: ``d2`` on ``C_-`` against ``dbar`` (``z^j = x^j + i x^{j+m}``).
    ``hyperkahler``: ``d0`` against ``K _| partial`` with ``<v, K w> = omega(v, w)``.
    ``derham``: Spin(7) (``c`` at n=8) or G2 (``c`` built on the n=8 parent, run at n=7)
    against the exterior derivative.
    """
    rep = c.rep
    m, n = rep.m, rep.n
    if flavor == "dolbeault":
        zeta = operator_spinor("d2", n)

        def dbar(k):
            return [I * (GaussianRational(k[j]) + I * k[j + m]) for j in range(m)]

        lam = ONE if c.kind == "A" else I ** m
        expected = lam if (m * (m - 1) // 2) % 2 == 0 else -lam
        return _holomorphic_compare(c, zeta, dbar, flavor, expected)
    if flavor == "hyperkahler":
        zeta = operator_spinor("d0", n)
        # omega = e_1^e_2 + e_3^e_4 + ... on U; K_{ik} = omega(e_i, e_k)
        omega = [[ZERO] * m for _ in range(m)]
        for j in range(0, m, 2):
            omega[j][j + 1] = ONE
            omega[j + 1][j] = -ONE

        def k_partial(k):
            dz = [I * (GaussianRational(k[i]) - I * k[i + m]) for i in range(m)]
            return [sum((omega[i][kk] * dz[i] for i in range(m)), ZERO) for kk in range(m)]

        return _holomorphic_compare(c, zeta, k_partial, flavor)
    if flavor == "derham":
        return _derham(c)
    raise ValueError(f"unknown flavor {flavor!r}")


def _derham(c: Bilinear, rep: Optional[SpinRep] = None) -> Identification:
    """Spin(7) on ``C_+`` (n=8) or G2 on ``C`` over ``Delta^-`` (n=7, odd-reduced)."""
    zeta = invariant_spinors("spin7", 8).spinors[0]
    if rep is None:
        rep = c.rep
    n = rep.n
    fib = FiberAlgebra(c, "plus" if n == 8 else "minus")
    gens = [c_zeta(c, zeta, mu, rep) for mu in range(1, n + 1)]
    extra: List[Vector] = []
    if n == 7:
        # complement to span(C^mu): the cospinor C(zeta, .), nonzero on zeta itself
        theta = c.form.transpose().apply(zeta)
        if c(zeta, zeta).is_zero():
            raise PreconditionError("C(zeta, zeta) = 0, no complement cospinor")
        extra = [theta]
    cols = gens + extra
    if span_dim([fib.generator(g) for g in cols]) != fib.k:
        raise PreconditionError("tau is not onto")
    # Phi: Lambda*(R^n) (x) Lambda*(R^extra) -> fibre, e^{mu...} ^ theta^{...} -> C^{mu} ^ ... ^ theta
    nb = len(cols)
    columns = []
    for w in range(1 << nb):
        acc: Vector = {0: ONE}
        for j in range(nb):
            if w >> j & 1:
                acc = fib.wedge(acc, fib.generator(cols[j]))
        columns.append(acc)
    phi = SparseMatrix.from_columns(fib.dim, columns)
    phi_inv = inverse(phi)
    ok = True
    modes = _identification_modes(n)
    for k in modes:
        kappa = [I * GaussianRational(x) for x in k]
        nu = one_form_cospinor(c, zeta, kappa, rep)
        d = fib.wedge_matrix(nu) if nu else SparseMatrix.zeros(fib.dim, fib.dim)
        # on the form side: (sum i k_mu e^mu) ^ acting on the first n generators
        target = _left_form(list(kappa) + [ZERO] * (nb - n), nb, 0)
        if not (phi_inv @ d @ phi - target).is_zero():
            ok = False
    return Identification("derham", n, ONE, ONE, ok, len(modes), {"extra_generators": nb - n})


def g2_setup() -> Tuple[Bilinear, SpinRep]:
    parent = build_even_rep(4)
    return bilinear(parent, "A"), build_odd_rep(4, "odd-reduced")


def identify_g2() -> Identification:
    c, rep = g2_setup()
    return _derham(c, rep)


# ----------------------------------------------------------------------
# Spencer cohomology of D-hat

def spencer_dims(n: int, p: int, q: int) -> Tuple[Fraction, Fraction]:
    """The two irreducible dimensions ``(delta_1, delta_2)`` of ``Sym^p (x) Lambda^q``, ``p, q >= 1``."""
    up = 1
    for j in range(p):
        up *= n + j
    down = 1
    for j in range(1, q + 1):
        down *= n - j
    d1 = Fraction(up * down, (p + q) * factorial(p - 1) * factorial(q))
    up2 = up * (n + p)
    down2 = 1
    for j in range(1, q):
        down2 *= n - j
    d2 = Fraction(up2 * down2, (p + q) * factorial(p) * factorial(q - 1))
    return d1, d2


@dataclass
class SpencerResult:
    n: int
    qmax: int
    dims: Dict[Tuple[int, int], int]
    kernels: Dict[Tuple[int, int], int]
    delta2: Dict[Tuple[int, int], Fraction]
    tau_rank: int


def spencer_cohomology(c: Bilinear, zeta: Mapping[int, GaussianRational], qmax: int = 3,
                       rep: Optional[SpinRep] = None, carrier: str = "full") -> SpencerResult:
    """``H^{p,q}`` of ``D-hat`` on ``Sym^p (x) C^q`` for ``p < qmax`` (``p = qmax`` lacks its incoming map)."""
    rep = rep or c.rep
    n = rep.n
    fib = FiberAlgebra(c, carrier)
    tau = [fib.generator(c_zeta(c, zeta, mu, rep)) for mu in range(1, n + 1)]
    r = span_dim(tau)
    if r != n or fib.k != n:
        raise PreconditionError(f"C_zeta is not an isomorphism: rank {r}, dim V = {n}, dim Delta = {fib.k}")
    space = TwistedSpace(SymFactor(n, qmax), fib)
    dh = build_Dhat(c, zeta, space, rep).matrix
    groups: Dict[Tuple[int, int], List[int]] = {}
    for j in range(space.dim):
        groups.setdefault(space.bidegree(j), []).append(j)
    dims, kernels, deltas = {}, {}, {}
    for (p, q), cols in groups.items():
        out_rows = groups.get((p - 1, q + 1), [])
        ker = len(cols) - (rank(dh.submatrix(out_rows, cols)) if out_rows else 0)
        kernels[(p, q)] = ker
        if p >= 1 and q >= 1:
            deltas[(p, q)] = spencer_dims(n, p, q)[1]
        if p < qmax:
            src = groups.get((p + 1, q - 1), [])
            im = rank(dh.submatrix(cols, src)) if src else 0
            dims[(p, q)] = ker - im
    return SpencerResult(n, qmax, dims, kernels, deltas, r)


# ----------------------------------------------------------------------
# double complexes and spectral sequences

@dataclass
class DoubleComplex:
    """Bigraded basis with ``dh: (a, b) -> (a+1, b)`` and ``dv: (a, b) -> (a, b+1)``."""

    bidegrees: List[Tuple[int, int]]
    dh: SparseMatrix
    dv: SparseMatrix

    def __post_init__(self):
        size = len(self.bidegrees)
        if self.dh.shape != (size, size) or self.dv.shape != (size, size):
            raise ValueError("differentials must be square on the whole space")
        for mat, shift, name in ((self.dh, (1, 0), "horizontal"), (self.dv, (0, 1), "vertical")):
            for r, row in mat.rows.items():
                for col in row:
                    a, b = self.bidegrees[col]
                    if self.bidegrees[r] != (a + shift[0], b + shift[1]):
                        raise ValueError(f"{name} map has the wrong bidegree")
        if not (self.dh @ self.dh).is_zero() or not (self.dv @ self.dv).is_zero():
            raise NotAComplexError(0, self.dh @ self.dh + self.dv @ self.dv)
        anti = self.dh @ self.dv + self.dv @ self.dh
        if not anti.is_zero():
            raise ValueError("horizontal and vertical differentials do not anticommute")

    @property
    def dim(self) -> int:
        return len(self.bidegrees)

    def total(self) -> SparseMatrix:
        return self.dh + self.dv

    def total_complex(self) -> FiniteComplex:
        return complex_from_operator(self.total(), lambda j: sum(self.bidegrees[j]))


@dataclass
class SpectralPage:
    r: int
    dims: Dict[Tuple[int, int], int]
    ranks: Dict[Tuple[int, int], int]

    def total(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for (p, q), d in self.dims.items():
            out[p + q] = out.get(p + q, 0) + d
        return out


@dataclass
class SpectralSequence:
    pages: List[SpectralPage]
    infinity: SpectralPage
    total_dims: Dict[int, int]
    oracle_dims: Dict[int, int]

    @property
    def oracle_agrees(self) -> bool:
        keys = set(self.total_dims) | set(self.oracle_dims)
        return all(self.total_dims.get(t, 0) == self.oracle_dims.get(t, 0) for t in keys)

    def degenerates_at(self) -> int:
        """Smallest ``r`` with ``d_s = 0`` for every ``s >= r``, i.e. ``E_r = E_inf``."""
        r = self.infinity.r
        for page in reversed(self.pages):
            if any(page.ranks.values()):
                break
            r = page.r
        return r

    def max_nonzero_differential(self) -> int:
        return max((p.r for p in self.pages if any(p.ranks.values())), default=0)


class _Filtration:
    """Column filtration ``F^p = (+)_{a >= p}`` on the total complex."""

    def __init__(self, dc: DoubleComplex):
        self.dc = dc
        self.d = dc.total()
        self.by_total: Dict[int, List[int]] = {}
        for j, (a, b) in enumerate(dc.bidegrees):
            self.by_total.setdefault(a + b, []).append(j)
        cols = [a for a, _ in dc.bidegrees] or [0]
        self.lo, self.hi = min(cols), max(cols)
        self._z: Dict[Tuple[int, int, int], List[Vector]] = {}

    def col(self, j: int) -> int:
        return self.dc.bidegrees[j][0]

    def z(self, r: int, p: int, t: int) -> List[Vector]:
        """``{x in F^p C^t : D x in F^(p+r)}`` (full-space coordinates)."""
        key = (r, p, t)
        if key in self._z:
            return self._z[key]
        src = [j for j in self.by_total.get(t, []) if self.col(j) >= p]
        bad = [j for j in self.by_total.get(t + 1, []) if self.col(j) < p + r]
        if not src:
            out: List[Vector] = []
        elif not bad:
            out = [{j: ONE} for j in src]
        else:
            sub = self.d.submatrix(bad, src)
            out = [{src[c]: v for c, v in vec.items()} for vec in nullspace(sub)]
        self._z[key] = out
        return out

    def image(self, vecs: List[Vector]) -> List[Vector]:
        out = []
        for v in vecs:
            w = self.d.apply(v)
            if w:
                out.append(w)
        return out

    def page_dim(self, r: int, p: int, t: int) -> int:
        zr = self.z(r, p, t)
        if not zr:
            return 0
        low = self.z(r - 1, p + 1, t) + self.image(self.z(r - 1, p - r + 1, t - 1))
        return span_dim(zr + low) - span_dim(low)

    def diff_rank(self, r: int, p: int, t: int) -> int:
        """Rank of ``d_r: E_r^{p, t-p} -> E_r^{p+r, t+1-p-r}``."""
        base = self.z(r - 1, p + r + 1, t + 1)
        hit = self.image(self.z(r, p, t))
        low = self.image(self.z(r - 1, p + 1, t)) + base
        return span_dim(hit + low) - span_dim(low)


def spectral_sequence(dc: DoubleComplex, max_pages: Optional[int] = None) -> SpectralSequence:
    """Pages ``E_1, E_2, ...`` of the column filtration, computed exactly from the total complex.

    ``E_r^{p,q} = Z_r / (Z_(r-1)^(p+1) + D Z_(r-1)^(p-r+1))``; the sequence is
    run until ``r`` exceeds the column width, after which every ``d_r`` is zero.
    """
    filt = _Filtration(dc)
    width = filt.hi - filt.lo + 1
    last = max_pages or width + 1
    totals = sorted(filt.by_total)
    pages = []
    for r in range(1, last + 1):
        dims, ranks = {}, {}
        for t in totals:
            for p in range(filt.lo, filt.hi + 1):
                dim = filt.page_dim(r, p, t)
                if dim:
                    dims[(p, t - p)] = dim
                    rk = filt.diff_rank(r, p, t)
                    if rk:
                        ranks[(p, t - p)] = rk
        pages.append(SpectralPage(r, dims, ranks))
    for prev, nxt in zip(pages, pages[1:]):
        for p, q in set(prev.dims) | set(nxt.dims):
            out_rank = prev.ranks.get((p, q), 0)
            in_rank = prev.ranks.get((p - prev.r, q + prev.r - 1), 0)
            if nxt.dims.get((p, q), 0) != prev.dims.get((p, q), 0) - out_rank - in_rank:
                raise AssertionError(f"page bookkeeping failed at E_{nxt.r}{(p, q)}")
    infinity = pages[-1]
    oracle = complex_cohomology(dc.total_complex()).as_dict()
    return SpectralSequence(pages, infinity, infinity.total(), {t: d for t, d in oracle.items() if d})


def random_double_complex(rng: random.Random, max_dim: int = 40, pieces: int = 6, span: int = 3) -> DoubleComplex:
    """Direct sum of dots, squares and zigzags, conjugated by a random bidegree-preserving change of basis."""
    bideg: List[Tuple[int, int]] = []
    h: Dict[int, Vector] = {}
    v: Dict[int, Vector] = {}

    def add(pos):
        bideg.append(pos)
        return len(bideg) - 1

    while len(bideg) < max_dim and pieces > 0:
        pieces -= 1
        room = max_dim - len(bideg)
        a, b = rng.randint(0, span), rng.randint(0, span)
        kind = rng.choice(["dot", "square", "zigzag"])
        if kind == "dot" or room < 4:
            add((a, b))
        elif kind == "square":
            x, y, z, w = add((a, b)), add((a + 1, b)), add((a, b + 1)), add((a + 1, b + 1))
            h.setdefault(y, {})[x] = ONE
            v.setdefault(z, {})[x] = ONE
            v.setdefault(w, {})[y] = ONE
            h.setdefault(w, {})[z] = -ONE
        else:
            # sources s_i at (a+i, b-i); dh s_i = t_i = dv s_(i+1)
            length = rng.randint(1, min(4, (room - 1) // 2))
            srcs = [add((a + i, b + length - i)) for i in range(length + 1)]
            for i in range(length):
                t = add((a + i + 1, b + length - i))
                h.setdefault(t, {})[srcs[i]] = ONE
                v.setdefault(t, {})[srcs[i + 1]] = ONE
            # optional end targets; a horizontal tail gives a nonzero d_r with r = length + 1
            if rng.random() < 0.5 and len(bideg) < max_dim:
                t = add((a + length + 1, b))
                h.setdefault(t, {})[srcs[length]] = ONE
            if rng.random() < 0.3 and len(bideg) < max_dim:
                t = add((a, b + length + 1))
                v.setdefault(t, {})[srcs[0]] = ONE
    size = len(bideg)
    dh = SparseMatrix(size, size, h)
    dv = SparseMatrix(size, size, v)
    # random change of basis inside each bidegree
    groups: Dict[Tuple[int, int], List[int]] = {}
    for j, pos in enumerate(bideg):
        groups.setdefault(pos, []).append(j)
    prow: Dict[int, Vector] = {}
    for idx in groups.values():
        while True:
            block = {i: {j: GaussianRational(rng.randint(-2, 2), rng.randint(-1, 1)) for j in idx} for i in idx}
            sub = SparseMatrix(size, size, block).submatrix(idx, idx)
            if rank(sub) == len(idx):
                break
        for i in idx:
            prow[i] = {j: x for j, x in block[i].items() if not x.is_zero()}
    pmat = SparseMatrix(size, size, prow)
    pinv = inverse(pmat)
    return DoubleComplex(bideg, pmat @ dh @ pinv, pmat @ dv @ pinv)


# ----------------------------------------------------------------------
# Calabi-Yau threefolds

@dataclass
class HodgeDiamond:
    """Hodge numbers ``h[(p, q)]`` of a compact complex threefold."""

    h: Dict[Tuple[int, int], int]

    def __post_init__(self):
        for p in range(4):
            for q in range(4):
                self.h.setdefault((p, q), 0)
        errors = self.violations()
        if errors:
            raise ValueError("invalid Calabi-Yau diamond: " + "; ".join(errors))

    @classmethod
    def cy3(cls, h11: int, h21: int) -> "HodgeDiamond":
        h = {(0, 0): 1, (3, 3): 1, (3, 0): 1, (0, 3): 1, (1, 1): h11, (2, 2): h11,
             (2, 1): h21, (1, 2): h21}
        return cls(h)

    def violations(self) -> List[str]:
        h = self.h
        out = []
        if any(v < 0 for v in h.values()):
            out.append("negative Hodge number")
        if h[(0, 0)] != 1 or h[(3, 3)] != 1:
            out.append("h^{0,0} = h^{3,3} = 1 required")
        if h[(3, 0)] != 1 or h[(0, 3)] != 1:
            out.append("h^{3,0} = h^{0,3} = 1 required")
        for (p, q), v in h.items():
            if h[(q, p)] != v:
                out.append(f"h^{{{p},{q}}} != h^{{{q},{p}}}")
                break
        for (p, q), v in h.items():
            if h[(3 - p, 3 - q)] != v:
                out.append(f"h^{{{p},{q}}} != h^{{{3 - p},{3 - q}}}")
                break
        return out

    @property
    def irreducible(self) -> bool:
        return self.h[(0, 1)] == 0 and self.h[(0, 2)] == 0

    def __getitem__(self, key):
        return self.h[key]


@dataclass
class CY3Result:
    dims: List[int]
    d2_dims: List[int]
    sequence: SpectralSequence
    d_on_h30_injective: bool
    d_on_h11_surjective: bool
    primitive_kernel: int


def cy3_double_complex(hd: HodgeDiamond) -> Tuple[DoubleComplex, Dict[Tuple[int, int], List[int]]]:
    """Abstract model: ``E_1 = H^{p,q}`` (zero vertical map), ``D: H^{p,q} -> H^{p-1,q+2}``.

    ``D(Omega) = omega^2`` in ``H^{2,2}`` and ``D(omega) = Omega-bar`` spans ``H^{0,3}``
    while primitive ``(1,1)`` classes are killed; regraded by ``(p, q) -> [-p, q + 2p]``.
    """
    bideg: List[Tuple[int, int]] = []
    index: Dict[Tuple[int, int], List[int]] = {}
    for p in range(4):
        for q in range(4):
            for _ in range(hd[(p, q)]):
                index.setdefault((p, q), []).append(len(bideg))
                bideg.append((-p, q + 2 * p))
    size = len(bideg)
    rows: Dict[int, Vector] = {}
    # first (1,1) class is the Kahler class; the first (2,2) class is its square
    if hd[(1, 1)] and hd[(2, 2)]:
        rows.setdefault(index[(2, 2)][0], {})[index[(3, 0)][0]] = ONE
        rows.setdefault(index[(0, 3)][0], {})[index[(1, 1)][0]] = ONE
    return DoubleComplex(bideg, SparseMatrix(size, size, rows), SparseMatrix.zeros(size, size)), index


def cy3_spin_cohomology(hd: HodgeDiamond) -> CY3Result:
    if not hd.irreducible:
        raise ValueError("the abstract Calabi-Yau model needs h^{0,1} = h^{0,2} = 0")
    dc, index = cy3_double_complex(hd)
    ss = spectral_sequence(dc)
    dims = [ss.total_dims.get(t, 0) for t in range(7)]
    d2 = d2_dims_from_diamond(hd)
    d = dc.dh
    inj = rank(d.submatrix(list(range(dc.dim)), index[(3, 0)])) == hd[(3, 0)]
    surj = rank(d.submatrix(index[(0, 3)], index.get((1, 1), []))) == hd[(0, 3)] if hd[(1, 1)] else False
    prim = hd[(1, 1)] - (rank(d.submatrix(index[(0, 3)], index[(1, 1)])) if hd[(1, 1)] else 0)
    return CY3Result(dims, d2, ss, inj, surj, prim)


def d2_dims_from_diamond(hd: HodgeDiamond) -> List[int]:
    """``H^l_{d2} = h^{0,l} + h^{0,l-1}`` (the twisting line ``Z = Lambda^{0,3}`` is trivial)."""
    return [(hd[(0, l)] if l <= 3 else 0) + (hd[(0, l - 1)] if 1 <= l <= 4 else 0) for l in range(5)]


# ----------------------------------------------------------------------
# the six-torus model (Lambda^{*,0} (x) C_-, dbar + D)

def t6_double_complex(k: Sequence[int] = (0, 0, 0, 0, 0, 0), kind: str = "B") -> DoubleComplex:
    """``d2`` (vertical) and ``D_(1)`` (horizontal) on ``Lambda^{*,0} (x) C_-`` at n=6, regraded.

    ``(p, l) -> [-p, l + 2p]`` makes ``D`` raise the column and ``d2`` the row.
    """
    rep = build_even_rep(3)
    c = bilinear(rep, kind)
    space = TwistedSpace(FormFactor(6, "holomorphic"), FiberAlgebra(c, "minus"))
    dv = build_d_mode(c, operator_spinor("d2", 6), k, space=space).matrix
    dh = build_Dp(c, 1, space).matrix
    bideg = []
    for j in range(space.dim):
        p, l = space.bidegree(j)
        bideg.append((-p, l + 2 * p))
    return DoubleComplex(bideg, dh, dv)
