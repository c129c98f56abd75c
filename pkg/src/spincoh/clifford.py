"""Spin representations on Lambda*(U_C), gamma matrices and the A/B bilinears.

The spinor basis is indexed by words over ``m`` generators: the integer
``w`` labels the basis spinor ``e_w`` of ``Lambda*(U_C)``.  Every gamma
matrix, and every product of them, sends a basis spinor to a power of ``i``
times another basis spinor, so these are stored as :class:`MonomialMap`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import SparseMatrix, Vector, inverse as mat_inverse
from .multilinear import (ONE, ZERO, GaussianRational, MultiVector, contract, i_power, wedge)

MAX_M = 7


class RepresentationError(ValueError):
    """Invalid request on a spin representation."""


class MonomialMap:
    """Linear map sending basis vector ``b`` to ``i**phase[b] * e_{target[b]}``.

    A ``None`` target marks a column that is mapped to zero.
    """

    __slots__ = ("target", "phase")

    def __init__(self, target: Sequence[Optional[int]], phase: Sequence[int]):
        self.target = list(target)
        self.phase = [p % 4 for p in phase]

    @classmethod
    def identity(cls, dim: int) -> "MonomialMap":
        return cls(range(dim), [0] * dim)

    @property
    def dim(self) -> int:
        return len(self.target)

    def __matmul__(self, other: "MonomialMap") -> "MonomialMap":
        tgt: List[Optional[int]] = []
        ph: List[int] = []
        for t, p in zip(other.target, other.phase):
            if t is None or self.target[t] is None:
                tgt.append(None)
                ph.append(0)
            else:
                tgt.append(self.target[t])
                ph.append(p + self.phase[t])
        return MonomialMap(tgt, ph)

    def scale_phase(self, k: int) -> "MonomialMap":
        return MonomialMap(self.target, [p + k for p in self.phase])

    def transpose(self) -> "MonomialMap":
        tgt: List[Optional[int]] = [None] * self.dim
        ph = [0] * self.dim
        for b, (t, p) in enumerate(zip(self.target, self.phase)):
            if t is not None:
                tgt[t] = b
                ph[t] = p
        return MonomialMap(tgt, ph)

    def conjugate(self) -> "MonomialMap":
        return MonomialMap(self.target, [-p for p in self.phase])

    def adjoint(self) -> "MonomialMap":
        return self.transpose().conjugate()

    def symmetry(self) -> Optional[int]:
        """Return +1/-1 if the matrix is symmetric/skew, else ``None``."""
        t = self.transpose()
        if t.target != self.target:
            return None
        diff = {(a - b) % 4 for a, b, tg in zip(t.phase, self.phase, self.target) if tg is not None}
        if diff == {0} or not diff:
            return 1
        if diff == {2}:
            return -1
        return None

    def matrix(self) -> SparseMatrix:
        rows: Dict[int, Dict[int, GaussianRational]] = {}
        for b, (t, p) in enumerate(zip(self.target, self.phase)):
            if t is not None:
                rows.setdefault(t, {})[b] = i_power(p)
        return SparseMatrix._wrap(self.dim, self.dim, rows)

    def entry(self, row: int, col: int) -> GaussianRational:
        return i_power(self.phase[col]) if self.target[col] == row else ZERO

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for b, c in vec.items():
            t = self.target[b]
            if t is None:
                continue
            v = c * i_power(self.phase[b])
            cur = out.get(t)
            v = v if cur is None else cur + v
            if v.is_zero():
                out.pop(t, None)
            else:
                out[t] = v
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonomialMap):
            return NotImplemented
        return self.target == other.target and all(
            p == q for p, q, t in zip(self.phase, other.phase, self.target) if t is not None)


def _gamma_even(m: int, mu: int) -> MonomialMap:
    """Gamma matrix ``Gamma_mu`` (1-based) of Spin(2m) on Lambda*(U_C)."""
    i = mu if mu <= m else mu - m
    bit = 1 << (i - 1)
    tgt, ph = [], []
    for w in range(1 << m):
        sgn = 2 if (w & (bit - 1)).bit_count() & 1 else 0
        tgt.append(w ^ bit)
        if mu <= m:
            ph.append(sgn)
        elif w & bit:
            ph.append(sgn + 1)   # +i e_i contraction
        else:
            ph.append(sgn + 3)   # -i e_i wedge
    return MonomialMap(tgt, ph)


@dataclass
class SpinRep:
    """Gamma matrices of Spin(n) on the spinor module.

    ``parent_m`` is the number of generators of ``U``; the carrier is
    ``Lambda*(U_C)`` of dimension ``2**parent_m``.  For the ``odd-reduced``
    variant the gammas preserve each chirality summand, which is the actual
    Clifford module.
    """

    n: int
    variant: str
    parent_m: int
    gammas: List[MonomialMap] = field(repr=False)

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def dim(self) -> int:
        return 1 << self.parent_m

    def gamma(self, mu: int) -> MonomialMap:
        if not 1 <= mu <= self.n:
            raise IndexError(f"gamma index {mu} out of range 1..{self.n}")
        return self.gammas[mu - 1]

    def gamma_matrix(self, mu: int) -> SparseMatrix:
        return self.gamma(mu).matrix()

    def chirality(self, word: int) -> int:
        return 1 if word.bit_count() % 2 == 0 else -1

    def chiral_basis(self, sign: int) -> List[int]:
        return [w for w in range(self.dim) if self.chirality(w) == sign]

    def product(self, indices: Sequence[int]) -> MonomialMap:
        out = MonomialMap.identity(self.dim)
        for mu in indices:
            out = out @ self.gamma(mu)
        return out


def _check_m(m: int) -> None:
    if not isinstance(m, int) or not 1 <= m <= MAX_M:
        raise RepresentationError(f"m={m} outside the guarded range 1..{MAX_M}")


def build_even_rep(m: int) -> SpinRep:
    """Spin(2m) acting on Lambda*(U_C) by ``e_i ^ + e_i _|`` and its twisted partner."""
    _check_m(m)
    return SpinRep(2 * m, "even", m, [_gamma_even(m, mu) for mu in range(1, 2 * m + 1)])


def build_odd_rep(m: int, variant: str) -> SpinRep:
    """Odd-dimensional gammas built from the Spin(2m) ones.

    ``odd-top`` appends ``i**m Gamma_1 ... Gamma_2m`` (n = 2m+1);
    ``odd-reduced`` uses ``i Gamma_mu Gamma_2m`` for mu < 2m (n = 2m-1).
    """
    _check_m(m)
    even = build_even_rep(m)
    if variant == "odd-top":
        top = even.product(range(1, 2 * m + 1)).scale_phase(m)
        return SpinRep(2 * m + 1, variant, m, list(even.gammas) + [top])
    if variant == "odd-reduced":
        last = even.gamma(2 * m)
        gams = [(even.gamma(mu) @ last).scale_phase(1) for mu in range(1, 2 * m)]
        return SpinRep(2 * m - 1, variant, m, gams)
    raise RepresentationError(f"unknown odd variant {variant!r}")


def build_rep(n: int, variant: str = "auto") -> SpinRep:
    """Representation for dimension ``n`` (even, or odd with a chosen variant)."""
    if variant in ("auto", "even") and n % 2 == 0:
        return build_even_rep(n // 2)
    if n % 2 == 1:
        if variant in ("auto", "odd-top"):
            return build_odd_rep(n // 2, "odd-top")
        if variant == "odd-reduced":
            return build_odd_rep((n + 1) // 2, "odd-reduced")
    raise RepresentationError(f"no {variant!r} representation in dimension {n}")


def apply_gamma_direct(rep: SpinRep, mu: int, eta: MultiVector) -> MultiVector:
    """Evaluate ``Gamma_mu eta`` with wedge and contraction only (even variant)."""
    if rep.variant != "even":
        raise RepresentationError("direct evaluation is defined for the even variant")
    m = rep.m
    i = mu if mu <= m else mu - m
    e_i = MultiVector.basis(m, i)
    w = wedge(e_i, eta)
    c = contract(i, eta)
    if mu <= m:
        return w + c
    return w.scale(GaussianRational(0, -1)) + c.scale(GaussianRational(0, 1))


def gamma_antisym(rep: SpinRep, indices: Sequence[int]) -> SparseMatrix:
    """Antisymmetrized product ``Gamma_{mu1...mup}`` as a matrix."""
    for mu in indices:
        if not 1 <= mu <= rep.n:
            raise IndexError(f"gamma index {mu} out of range 1..{rep.n}")
    if len(set(indices)) != len(indices):
        return SparseMatrix.zeros(rep.dim, rep.dim)
    # distinct indices anticommute, so every permutation term equals the ordered product
    return rep.product(indices).matrix()


def gamma_antisym_monomial(rep: SpinRep, indices: Sequence[int]) -> Optional[MonomialMap]:
    if len(set(indices)) != len(indices):
        return None
    return rep.product(indices)


# ----------------------------------------------------------------------
# bilinears

def closed_form_signs(m: int, kind: str) -> Tuple[int, int]:
    """``(s_C, s_Gamma)`` from the closed-form symmetry exponents."""
    if kind == "A":
        return ((m * (m - 1) // 2) % 2, ((m - 1) * (m + 2) // 2) % 2)
    if kind == "B":
        return ((m * (m + 1) // 2) % 2, (m * (m + 3) // 2) % 2)
    raise RepresentationError(f"unknown bilinear kind {kind!r}")


@dataclass
class Bilinear:
    """One of the charge-conjugation forms ``C(eta, theta) = <C(conj eta), theta>``.

    ``form`` is the matrix ``C_AB = C(e_A, e_B)`` as a monomial map
    (column ``B`` holds the single entry of that column).
    """

    kind: str
    rep: SpinRep = field(repr=False)
    operator: MonomialMap = field(repr=False)
    form: MonomialMap = field(repr=False)
    s_C: int
    s_Gamma: int
    chirality_behavior: str

    @property
    def matrix(self) -> SparseMatrix:
        return self.form.matrix()

    @property
    def m(self) -> int:
        return self.rep.m

    def __call__(self, eta: Vector, theta: Vector) -> GaussianRational:
        mt = self.form.apply(theta)
        total = ZERO
        for a, c in eta.items():
            x = mt.get(a)
            if x is not None:
                total = total + c * x
        return total

    def cgamma(self, indices: Sequence[int]) -> Optional[MonomialMap]:
        """Bilinear matrix of ``C Gamma_{mu1..mup}`` (``None`` on repeated indices)."""
        g = gamma_antisym_monomial(self.rep, indices)
        return None if g is None else self.form @ g

    def inverse_form(self) -> SparseMatrix:
        """Matrix ``K`` of ``C^{-1}`` on cospinors: ``sum_E K[E,A] C[E,B] = delta``."""
        return mat_inverse(self.matrix).transpose()


def bilinear(rep: SpinRep, kind: str) -> Bilinear:
    """Build A or B and measure its symmetry signs from the matrix."""
    if rep.variant != "even":
        raise RepresentationError("bilinears are built on the even representation")
    m = rep.m
    if kind == "A":
        op = rep.product(range(1, m + 1))
    elif kind == "B":
        op = rep.product(range(m + 1, 2 * m + 1))
    else:
        raise RepresentationError(f"unknown bilinear kind {kind!r}")
    form = op.adjoint()  # C(eta, theta) = sum conj(C_{BA}) eta_A theta_B
    sym = form.symmetry()
    if sym is None:
        raise AssertionError("bilinear is neither symmetric nor skew")
    s_c = 0 if sym == 1 else 1
    gsyms = {(form @ rep.gamma(mu)).symmetry() for mu in range(1, rep.n + 1)}
    if len(gsyms) != 1 or None in gsyms:
        raise AssertionError("gamma symmetry is not uniform")
    s_g = 0 if gsyms.pop() == 1 else 1
    preserves = all((op.target[w].bit_count() - w.bit_count()) % 2 == 0 for w in range(rep.dim))
    return Bilinear(kind, rep, op, form, s_c, s_g, "preserves" if preserves else "swaps")


def dualize(c: Bilinear, eta: Vector) -> Vector:
    """Cospinor ``C(eta)`` with ``C(eta)(theta) = C(theta, eta)``; components ``C_AB eta^B``."""
    return c.form.apply(eta)


def undualize(c: Bilinear, psi: Vector) -> Vector:
    """Inverse of :func:`dualize`: ``psi^A = psi_B (C^{-1})^{BA}``."""
    k = c.inverse_form()
    out: Vector = {}
    for b, x in psi.items():
        for a, v in k.rows.get(b, {}).items():
            s = out.get(a, ZERO) + x * v
            if s.is_zero():
                out.pop(a, None)
            else:
                out[a] = s
    return out


def chirality_split(rep: SpinRep) -> Tuple[List[MultiVector], List[MultiVector]]:
    """Bases of the even-degree and odd-degree spinors."""
    if rep.variant != "even":
        raise RepresentationError("chirality split is defined for the even variant")
    plus = [MultiVector(rep.m, {w: ONE}) for w in rep.chiral_basis(1)]
    minus = [MultiVector(rep.m, {w: ONE}) for w in rep.chiral_basis(-1)]
    return plus, minus


def restrict(mat: SparseMatrix, basis: Sequence[int]) -> SparseMatrix:
    return mat.submatrix(basis, basis)


def spinor_vector(eta: MultiVector) -> Vector:
    return dict(eta.terms)


def vector_spinor(m: int, vec: Vector) -> MultiVector:
    return MultiVector(m, vec)


def clifford_residual(rep: SpinRep) -> int:
    """Number of index pairs violating ``G_mu G_nu + G_nu G_mu = 2 delta``."""
    bad = 0
    ident = SparseMatrix.identity(rep.dim, 2)
    zero = SparseMatrix.zeros(rep.dim, rep.dim)
    mats = [rep.gamma_matrix(mu) for mu in range(1, rep.n + 1)]
    for a in range(rep.n):
        for b in range(a, rep.n):
            s = mats[a] @ mats[b] + mats[b] @ mats[a]
            if s != (ident if a == b else zero):
                bad += 1
    return bad
