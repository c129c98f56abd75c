"""Spin complexes on flat tori: the differential d per Fourier mode and the algebraic D_(p), D-hat.

Sections of the fibre bundles over ``T^n`` are finite Fourier sums; on the
mode ``k`` (with a flat line-bundle offset ``a``) every covariant derivative
becomes ``nabla_mu = i (k_mu + a_mu)``, so each operator is a finite matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .clifford import Bilinear, RepresentationError, SpinRep
from .fiber import FiberAlgebra
from .fierz import signpg
from .holonomy import c_zeta
from .linalg import SparseMatrix, Vector
from .multilinear import I, ONE, ZERO, GaussianRational, i_power


class ChiralityError(RepresentationError):
    """An operator does not preserve the requested chiral carrier."""


class SignError(ValueError):
    """The bilinear ``C Gamma^(p)`` has the wrong symmetry for the construction."""


# ----------------------------------------------------------------------
# fibre products

def cowedge(fiber: FiberAlgebra, phi: Mapping[int, GaussianRational], psi: Mapping[int, GaussianRational]) -> Vector:
    """``phi ^ psi`` in the fibre."""
    return fiber.wedge(phi, psi)


def cointerior(fiber: FiberAlgebra, eta: Mapping[int, GaussianRational], phi: Mapping[int, GaussianRational]) -> Vector:
    """Inner derivation of ``phi`` by the cospinor ``eta``."""
    return fiber.cointerior_matrix(eta).apply(phi)


def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    rows: Dict[int, Vector] = {}
    for ra, rowa in a.rows.items():
        for rb, rowb in b.rows.items():
            out = {}
            for ca, va in rowa.items():
                for cb, vb in rowb.items():
                    out[ca * b.ncols + cb] = va * vb
            rows[ra * b.nrows + rb] = out
    return SparseMatrix(a.nrows * b.nrows, a.ncols * b.ncols, rows)


def diagonal(values: Sequence[GaussianRational]) -> SparseMatrix:
    return SparseMatrix(len(values), len(values), {j: {j: v} for j, v in enumerate(values) if not v.is_zero()})


# ----------------------------------------------------------------------
# twist factors

class FormFactor:
    """Exterior algebra on covectors ``gens`` (each a map ``mu -> coefficient``).

    ``all`` uses ``e^1..e^n``; ``holomorphic`` uses ``dz^j = e^j + i e^{j+m}``.
    """

    def __init__(self, n: int, kind: str = "all"):
        self.n = n
        self.kind = kind
        if kind == "all":
            self.gens = [{mu: ONE} for mu in range(1, n + 1)]
        elif kind == "holomorphic":
            m = n // 2
            self.gens = [{j: ONE, j + m: I} for j in range(1, m + 1)]
        elif kind == "none":
            self.gens = []
        else:
            raise ValueError(f"unknown form factor {kind!r}")
        self.dim = 1 << len(self.gens)

    def degree(self, idx: int) -> int:
        return idx.bit_count()

    def contraction(self, mu: int) -> SparseMatrix:
        """``iota_{e_mu}`` on the factor."""
        rows: Dict[int, Vector] = {}
        for w in range(self.dim):
            for j, g in enumerate(self.gens):
                if not w >> j & 1:
                    continue
                v = g.get(mu)
                if v is None:
                    continue
                sign = (w & ((1 << j) - 1)).bit_count() % 2
                r = rows.setdefault(w ^ (1 << j), {})
                r[w] = r.get(w, ZERO) + (-v if sign else v)
        return SparseMatrix(self.dim, self.dim, rows)


class SymFactor:
    """Polynomials of degree at most ``qmax`` in ``n`` variables (symmetric powers)."""

    def __init__(self, n: int, qmax: int):
        self.n = n
        self.qmax = qmax
        self.monomials: List[Tuple[int, ...]] = []
        for q in range(qmax + 1):
            self.monomials.extend(_exponents(n, q))
        self.index = {e: j for j, e in enumerate(self.monomials)}
        self.dim = len(self.monomials)

    def degree(self, idx: int) -> int:
        return sum(self.monomials[idx])

    def derivative(self, mu: int) -> SparseMatrix:
        rows: Dict[int, Vector] = {}
        for j, e in enumerate(self.monomials):
            if e[mu - 1] == 0:
                continue
            t = list(e)
            t[mu - 1] -= 1
            rows.setdefault(self.index[tuple(t)], {})[j] = GaussianRational(e[mu - 1])
        return SparseMatrix(self.dim, self.dim, rows)


def _exponents(n: int, q: int) -> List[Tuple[int, ...]]:
    if n == 1:
        return [(q,)]
    out = []
    for a in range(q, -1, -1):
        for rest in _exponents(n - 1, q - a):
            out.append((a,) + rest)
    return out


@dataclass
class TwistedSpace:
    """``factor (x) fibre`` with basis index ``i * fiber.dim + w``."""

    factor: object
    fiber: FiberAlgebra

    @property
    def dim(self) -> int:
        return self.factor.dim * self.fiber.dim

    def bidegree(self, idx: int) -> Tuple[int, int]:
        i, w = divmod(idx, self.fiber.dim)
        return self.factor.degree(i), w.bit_count()

    def fiber_sign(self) -> SparseMatrix:
        """``(-1)**l`` on fibre degree."""
        return diagonal([ONE if w.bit_count() % 2 == 0 else -ONE for w in range(self.fiber.dim)])

    def factor_sign(self) -> SparseMatrix:
        return diagonal([ONE if self.factor.degree(i) % 2 == 0 else -ONE for i in range(self.factor.dim)])

    def identity_factor(self) -> SparseMatrix:
        return SparseMatrix.identity(self.factor.dim)


# ----------------------------------------------------------------------
# mode operators

@dataclass
class ModeOperator:
    """One operator on one Fourier mode.

    ``shift`` is the change of (factor degree, fibre degree); ``space`` is
    either a :class:`FiberAlgebra` or a :class:`TwistedSpace`.
    """

    name: str
    matrix: SparseMatrix
    space: object = field(repr=False)
    shift: Tuple[int, int]
    k: Tuple[int, ...] = ()
    a: Tuple[Fraction, ...] = ()

    def bidegree(self, idx: int) -> Tuple[int, int]:
        if isinstance(self.space, FiberAlgebra):
            return 0, idx.bit_count()
        return self.space.bidegree(idx)

    def check_shift(self) -> bool:
        for r, row in self.matrix.rows.items():
            br = self.bidegree(r)
            for col in row:
                bc = self.bidegree(col)
                if (br[0] - bc[0], br[1] - bc[1]) != self.shift:
                    return False
        return True

    def square(self) -> SparseMatrix:
        return self.matrix @ self.matrix

    def blocks(self) -> Dict[Tuple[int, int], SparseMatrix]:
        """Nonzero blocks keyed by source bidegree."""
        idx_by: Dict[Tuple[int, int], List[int]] = {}
        size = self.matrix.ncols
        for j in range(size):
            idx_by.setdefault(self.bidegree(j), []).append(j)
        out = {}
        for src, cols in idx_by.items():
            dst = (src[0] + self.shift[0], src[1] + self.shift[1])
            rows = idx_by.get(dst)
            if not rows:
                continue
            sub = self.matrix.submatrix(rows, cols)
            if not sub.is_zero():
                out[src] = sub
        return out


def carrier_for(c: Bilinear, zeta: Mapping[int, GaussianRational], rep: Optional[SpinRep] = None) -> List[str]:
    """Carriers on which ``d`` built from ``zeta`` is defined."""
    rep = rep or c.rep
    vecs = [c_zeta(c, zeta, mu, rep) for mu in range(1, rep.n + 1)]
    out = ["full"]
    for name, sign in (("plus", 1), ("minus", -1)):
        basis = set(rep.chiral_basis(sign)) if rep.variant == "even" else set(c.rep.chiral_basis(sign))
        if all(a in basis for v in vecs for a in v):
            out.append(name)
    return out


def one_form_cospinor(c: Bilinear, zeta: Mapping[int, GaussianRational], kappa: Sequence, rep: Optional[SpinRep] = None) -> Vector:
    """``sum_mu kappa_mu C_zeta^mu``."""
    rep = rep or c.rep
    out: Vector = {}
    for mu in range(1, rep.n + 1):
        x = GaussianRational.coerce(kappa[mu - 1])
        if x.is_zero():
            continue
        for a, v in c_zeta(c, zeta, mu, rep).items():
            s = out.get(a, ZERO) + x * v
            if s.is_zero():
                out.pop(a, None)
            else:
                out[a] = s
    return out


def _mode_vectors(n: int, k: Optional[Sequence[int]], a: Optional[Sequence]) -> Tuple[Tuple[int, ...], Tuple[Fraction, ...]]:
    k = tuple(int(x) for x in (k if k is not None else [0] * n))
    a = tuple(Fraction(x) for x in (a if a is not None else [0] * n))
    if len(k) != n or len(a) != n:
        raise ValueError(f"mode and offset vectors must have length {n}")
    return k, a


def build_d_mode(c: Bilinear, zeta: Mapping[int, GaussianRational], k: Optional[Sequence[int]] = None,
                 a: Optional[Sequence] = None, carrier: str = "full", space: Optional[TwistedSpace] = None,
                 rep: Optional[SpinRep] = None) -> ModeOperator:
    """``d phi = sum_mu i (k_mu + a_mu) C_zeta^mu ^ phi`` on one mode.

    On a twisted space with a form factor this is ``1 (x) nu^``; with a
    symmetric-power factor it is ``(-1)**q (x) nu^`` (see :func:`build_Dhat`).
    """
    rep = rep or c.rep
    k, a = _mode_vectors(rep.n, k, a)
    if space is not None:
        carrier = space.fiber.carrier
    if carrier not in carrier_for(c, zeta, rep):
        raise ChiralityError(f"d built from this spinor does not act on the {carrier!r} carrier")
    fib = space.fiber if space is not None else FiberAlgebra(c, carrier)
    kappa = [I * (ki + ai) for ki, ai in zip(k, a)]
    nu = one_form_cospinor(c, zeta, kappa, rep)
    mat = fib.wedge_matrix(nu) if nu else SparseMatrix.zeros(fib.dim, fib.dim)
    if space is None:
        return ModeOperator("d", mat, fib, (0, 1), k, a)
    left = space.factor_sign() if isinstance(space.factor, SymFactor) else space.identity_factor()
    return ModeOperator("d", kron(left, mat), space, (0, 1), k, a)


def two_cospinor(c: Bilinear, indices: Sequence[int], fib: FiberAlgebra) -> SparseMatrix:
    """Left multiplication by ``omega_K = sum_{A<B} (C Gamma_K)_{AB} eps^A ^ eps^B`` on the carrier."""
    f = c.form @ c.rep.product(indices)
    omega = {}
    for b in range(c.rep.dim):
        t = f.target[b]
        if t is None or t >= b:
            continue
        if t in fib.index and b in fib.index:
            omega[(t, b)] = i_power(f.phase[b])
    return fib.two_form_matrix(omega)


def dp_available(c: Bilinear, p: int, carrier: str) -> Tuple[bool, str]:
    """Whether ``D_(p)`` is defined; the reason string names the failing sign or chirality."""
    if signpg(p, c.s_C, c.s_Gamma) != -1:
        return False, f"C Gamma^({p}) is symmetric for {c.kind} at m={c.m}"
    if carrier == "full":
        return True, "skew"
    # on one chirality the pairing must connect that chirality with itself
    rep = c.rep
    sign = 1 if carrier == "plus" else -1
    basis = set(rep.chiral_basis(sign))
    f = c.form @ rep.product(range(1, p + 1))
    if any(f.target[b] not in basis for b in basis):
        return False, f"C Gamma^({p}) pairs opposite chiralities for {c.kind} at m={c.m}"
    return True, "skew and chirality preserving"


def build_Dp(c: Bilinear, p: int, space: TwistedSpace) -> ModeOperator:
    """Algebraic ``D_(p)``: ``Lambda^q (x) C^l -> Lambda^{q-p} (x) C^{l+2}``.

    ``D_(p)(alpha (x) beta) = (-1)^{p(p-1)/2 + l} sum_{K asc, |K|=p}
    (iota_{mu_p}...iota_{mu_1} alpha) (x) (omega_K ^ beta)``.
    """
    if not isinstance(space.factor, FormFactor):
        raise ValueError("D_(p) needs a form factor")
    ok, why = dp_available(c, p, space.fiber.carrier)
    if not ok:
        raise SignError(why)
    fib = space.fiber
    n = c.rep.n
    contractions = [space.factor.contraction(mu) for mu in range(1, n + 1)]
    total = SparseMatrix.zeros(space.dim, space.dim)
    for K in combinations(range(1, n + 1), p):
        cont = SparseMatrix.identity(space.factor.dim)
        for mu in K:
            cont = contractions[mu - 1] @ cont
        if cont.is_zero():
            continue
        om = two_cospinor(c, K, fib)
        if om.is_zero():
            continue
        total = total + kron(cont, om)
    sign = -1 if (p * (p - 1) // 2) % 2 else 1
    signed = total @ kron(space.identity_factor(), space.fiber_sign())
    if sign < 0:
        signed = -signed
    return ModeOperator(f"D({p})", signed, space, (-p, 2))


def build_Dhat(c: Bilinear, zeta: Mapping[int, GaussianRational], space: TwistedSpace,
               rep: Optional[SpinRep] = None) -> ModeOperator:
    """``D-hat(s (x) beta) = (-1)^l sum_mu d s/dx^mu (x) C_zeta^mu ^ beta`` on ``Sym (x) C``."""
    if not isinstance(space.factor, SymFactor):
        raise ValueError("D-hat needs a symmetric-power factor")
    rep = rep or c.rep
    fib = space.fiber
    total = SparseMatrix.zeros(space.dim, space.dim)
    for mu in range(1, rep.n + 1):
        cz = c_zeta(c, zeta, mu, rep)
        if not cz:
            continue
        if not fib.supports(cz):
            raise ChiralityError("C_zeta does not act on this carrier")
        total = total + kron(space.factor.derivative(mu), fib.wedge_matrix(cz))
    total = total @ kron(space.identity_factor(), space.fiber_sign())
    return ModeOperator("Dhat", total, space, (-1, 1))


def anticommutator_residual(x: ModeOperator, y: ModeOperator) -> SparseMatrix:
    """``XY + YX`` (exactly zero when the operators anticommute)."""
    return x.matrix @ y.matrix + y.matrix @ x.matrix


# ----------------------------------------------------------------------
# adjoints and Laplacians

def adjoint_d(c: Bilinear, zeta, k, a=None, rep: Optional[SpinRep] = None, carrier: str = "full") -> SparseMatrix:
    """Formal adjoint ``delta = -sum_mu (C^mu ^)^* nabla_mu`` on one mode."""
    rep = rep or c.rep
    k, a = _mode_vectors(rep.n, k, a)
    fib = FiberAlgebra(c, carrier)
    kappa = [I * (ki + ai) for ki, ai in zip(k, a)]
    nu = one_form_cospinor(c, zeta, kappa, rep)
    if not nu:
        return SparseMatrix.zeros(fib.dim, fib.dim)
    return -fib.cointerior_matrix(nu)


@dataclass
class LaplacianReport:
    k: Tuple[int, ...]
    delta1: SparseMatrix = field(repr=False)
    delta2: SparseMatrix = field(repr=False)
    hat1: SparseMatrix = field(repr=False)
    hat2: SparseMatrix = field(repr=False)
    closed1: GaussianRational
    closed2: GaussianRational
    agree1: bool
    agree2: bool
    hats_vanish: bool


def closed_form_laplacian(c: Bilinear, zeta1, zeta2, kappa: Sequence) -> GaussianRational:
    """``-(-1)^(s_C+s_Gamma) C(zeta1, Gamma^nu Gamma^mu zeta2) nabla_mu nabla_nu`` with ``nabla = i kappa``."""
    rep = c.rep
    n = rep.n
    total = ZERO
    for mu in range(1, n + 1):
        for nu in range(1, n + 1):
            km = GaussianRational.coerce(kappa[mu - 1])
            kn = GaussianRational.coerce(kappa[nu - 1])
            if km.is_zero() or kn.is_zero():
                continue
            val = c(zeta1, (rep.gamma(nu) @ rep.gamma(mu)).apply(zeta2))
            total = total + val * (I * km) * (I * kn)
    sign = -1 if (c.s_C + c.s_Gamma) % 2 else 1
    return -total if sign > 0 else total


def laplacian(c: Bilinear, zeta1, zeta2, k, a=None, carrier: str = "full") -> LaplacianReport:
    """``Delta_1 = delta_2 d_1 + d_1 delta_2``, ``Delta_2 = delta_1 d_2 + d_2 delta_1`` and the hatted pair.

    Computed on the fibre from the definitions and compared with the
    closed form, which on a flat mode is a multiple of the identity.  A chiral
    ``carrier`` needs both spinors to act on it.
    """
    rep = c.rep
    if c(zeta1, zeta2).is_zero():
        raise ValueError("degenerate pairing C(zeta1, zeta2) = 0")
    k, a = _mode_vectors(rep.n, k, a)
    d1 = build_d_mode(c, zeta1, k, a, carrier=carrier).matrix
    d2 = build_d_mode(c, zeta2, k, a, carrier=carrier).matrix
    t1 = adjoint_d(c, zeta1, k, a, carrier=carrier)
    t2 = adjoint_d(c, zeta2, k, a, carrier=carrier)
    lap1 = t2 @ d1 + d1 @ t2
    lap2 = t1 @ d2 + d2 @ t1
    hat1 = d1 @ t1 + t1 @ d1
    hat2 = d2 @ t2 + t2 @ d2
    kappa = [ki + ai for ki, ai in zip(k, a)]
    c1 = closed_form_laplacian(c, zeta1, zeta2, kappa)
    c2 = closed_form_laplacian(c, zeta2, zeta1, kappa)
    ident = SparseMatrix.identity(lap1.nrows)
    return LaplacianReport(k, lap1, lap2, hat1, hat2, c1, c2,
                           lap1 == ident.scale(c1), lap2 == ident.scale(c2),
                           hat1.is_zero() and hat2.is_zero())


def real_laplacian(c: Bilinear, tau, k) -> GaussianRational:
    """Scalar of ``delta d + d delta`` for a real parallel spinor ``tau``, normalised so ``C(tau, tau) = 1``.

    On the real fibre the pairing is definite, so ``d`` is paired with its
    own adjoint.  The result is the eigenvalue of ``g^{mu nu} nabla_mu nabla_nu``,
    i.e. ``-|k|^2`` on the mode ``k``.
    """
    norm = c(tau, tau)
    if norm.is_zero():
        raise ValueError("real spinor has zero length")
    carrier = carrier_for(c, tau)[-1]
    rpt = laplacian(c, tau, tau, k, carrier=carrier)
    if not rpt.agree1:
        raise AssertionError("Laplacian is not scalar on this mode")
    return rpt.closed1 / norm
