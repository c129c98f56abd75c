"""Exterior algebra over cospinors: the fibres of the spin complexes.

A fibre is ``Lambda*(D)`` where ``D`` is spanned by the dual basis
cospinors ``eps^A`` for ``A`` in a carrier set (all of Delta, or one
chirality).  Elements are sparse vectors keyed by bit words; bit ``j`` of a
word stands for ``eps^{positions[j]}`` and words are read in ascending order.
"""
from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence

from .clifford import Bilinear, RepresentationError
from .linalg import SparseMatrix, Vector, inverse
from .multilinear import ONE, ZERO, GaussianRational

CARRIERS = ("full", "plus", "minus")
# 2**16 basis words is the largest fibre handled in memory
MAX_GENERATORS = 16


class ResourceGuardError(RuntimeError):
    """The requested fibre exceeds ``MAX_GENERATORS``."""


def _below(word: int, bit: int) -> int:
    return (word & ((1 << bit) - 1)).bit_count()


def _perm_sign(seq: Sequence[int]) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv % 2 else 1


class FiberAlgebra:
    """``Lambda*`` of the cospinors supported on a carrier set of spinor indices."""

    def __init__(self, c: Bilinear, carrier: str = "full"):
        if carrier not in CARRIERS:
            raise RepresentationError(f"unknown carrier {carrier!r}")
        self.c = c
        self.carrier = carrier
        rep = c.rep
        if carrier == "full":
            self.positions = list(range(rep.dim))
        else:
            self.positions = rep.chiral_basis(1 if carrier == "plus" else -1)
        self.index = {a: j for j, a in enumerate(self.positions)}
        self.k = len(self.positions)
        if self.k > MAX_GENERATORS:
            raise ResourceGuardError(
                f"fibre has {self.k} generators (limit {MAX_GENERATORS}); use a chiral carrier or smaller n")
        self.dim = 1 << self.k
        self._gram: Optional[SparseMatrix] = None

    # -- bookkeeping
    def degree_words(self, ell: int) -> List[int]:
        return [w for w in range(self.dim) if w.bit_count() == ell]

    def degrees(self) -> range:
        return range(self.k + 1)

    def supports(self, psi: Mapping[int, GaussianRational]) -> bool:
        return all(a in self.index for a, v in psi.items() if not v.is_zero())

    def generator(self, psi: Mapping[int, GaussianRational]) -> Vector:
        """Degree-one element for a cospinor given by components ``psi_A``."""
        if not self.supports(psi):
            raise RepresentationError("cospinor is not supported on the carrier")
        return {1 << self.index[a]: v for a, v in psi.items() if not v.is_zero()}

    # -- products
    def wedge(self, x: Mapping[int, GaussianRational], y: Mapping[int, GaussianRational]) -> Vector:
        out: Vector = {}
        for a, u in x.items():
            for b, v in y.items():
                if a & b:
                    continue
                s = _pair_sign(a, b)
                val = u * v if s > 0 else -(u * v)
                key = a | b
                acc = out.get(key, ZERO) + val
                if acc.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = acc
        return out

    def wedge_matrix(self, psi: Mapping[int, GaussianRational]) -> SparseMatrix:
        """Left multiplication by the cospinor ``psi``."""
        gen = self.generator(psi)
        rows: Dict[int, Vector] = {}
        for w in range(self.dim):
            for b, v in gen.items():
                if w & b:
                    continue
                bit = b.bit_length() - 1
                val = v if _below(w, bit) % 2 == 0 else -v
                rows.setdefault(w | b, {})[w] = val
        return SparseMatrix(self.dim, self.dim, rows)

    def interior_matrix(self, x: Mapping[int, GaussianRational]) -> SparseMatrix:
        """Evaluation contraction by the spinor ``x`` on the leading slot."""
        rows: Dict[int, Vector] = {}
        for w in range(self.dim):
            for j in range(self.k):
                if not w >> j & 1:
                    continue
                v = x.get(self.positions[j])
                if v is None or v.is_zero():
                    continue
                val = v if _below(w, j) % 2 == 0 else -v
                r = rows.setdefault(w ^ (1 << j), {})
                acc = r.get(w, ZERO) + val
                if acc.is_zero():
                    r.pop(w, None)
                else:
                    r[w] = acc
        return SparseMatrix(self.dim, self.dim, {r: row for r, row in rows.items() if row})

    def raise_index(self, psi: Mapping[int, GaussianRational]) -> Vector:
        """Spinor ``psi^A = psi_B (C^-1)^{BA}``."""
        k = self.c.inverse_form()
        out: Vector = {}
        for b, x in psi.items():
            for a, v in k.rows.get(b, {}).items():
                acc = out.get(a, ZERO) + x * v
                if acc.is_zero():
                    out.pop(a, None)
                else:
                    out[a] = acc
        return out

    def cointerior_matrix(self, psi: Mapping[int, GaussianRational]) -> SparseMatrix:
        """Inner derivation by a cospinor, including the ``(-1)**s_C`` factor.

        With this normalisation ``C^-1(phi, psi ^ chi) = C^-1(psi _| phi, chi)``.
        """
        m = self.interior_matrix(self.raise_index(psi))
        return m if self.c.s_C == 0 else -m

    def derivation_matrix(self, endo: SparseMatrix) -> SparseMatrix:
        """Action of a spinor endomorphism, extended to the fibre as a derivation.

        Cospinors transform by the dual action ``(E psi)(eta) = -psi(E eta)``.
        """
        gen_images: List[Vector] = []
        for a in self.positions:
            img: Vector = {}
            for b, v in endo.rows.get(a, {}).items():
                # (E eps^a)_b = -E[a, b]
                if b not in self.index:
                    raise RepresentationError("endomorphism does not preserve the carrier")
                img[1 << self.index[b]] = -v
            gen_images.append(img)
        rows: Dict[int, Vector] = {}
        for w in range(self.dim):
            for j in range(self.k):
                if not w >> j & 1:
                    continue
                rest = w ^ (1 << j)
                sign = 1 if _below(w, j) % 2 == 0 else -1
                # eps^j moved to the front, replaced by its image, wedge with the rest
                for g, v in gen_images[j].items():
                    if g & rest:
                        continue
                    gbit = g.bit_length() - 1
                    s = sign * (1 if _below(rest, gbit) % 2 == 0 else -1)
                    r = rows.setdefault(rest | g, {})
                    acc = r.get(w, ZERO) + (v if s > 0 else -v)
                    if acc.is_zero():
                        r.pop(w, None)
                    else:
                        r[w] = acc
        return SparseMatrix(self.dim, self.dim, {r: row for r, row in rows.items() if row})

    def two_form_matrix(self, omega: Mapping[tuple, GaussianRational]) -> SparseMatrix:
        """Left multiplication by ``sum_{A<B} omega[A,B] eps^A ^ eps^B``."""
        total = SparseMatrix.zeros(self.dim, self.dim)
        for (a, b), v in omega.items():
            if v.is_zero():
                continue
            if a not in self.index or b not in self.index:
                raise RepresentationError("two-form is not supported on the carrier")
            total = total + (self.wedge_matrix({a: ONE}) @ self.wedge_matrix({b: ONE})).scale(v)
        return total

    # -- pairing
    def gram(self) -> SparseMatrix:
        """``C^-1`` extended to the fibre by determinants, as a matrix ``G[w, w']``."""
        if self._gram is not None:
            return self._gram
        k = self.c.inverse_form()
        target: Dict[int, tuple] = {}
        for j, a in enumerate(self.positions):
            row = k.rows.get(a, {})
            if len(row) != 1:
                raise RepresentationError("pairing is not monomial")
            (b, v), = row.items()
            target[j] = (self.index.get(b), v)
        rows: Dict[int, Vector] = {}
        for w in range(self.dim):
            bits = [j for j in range(self.k) if w >> j & 1]
            imgs = [target[j][0] for j in bits]
            if any(t is None for t in imgs):
                continue
            val = ONE
            for j in bits:
                val = val * target[j][1]
            w2 = 0
            for t in imgs:
                w2 |= 1 << t
            if w2.bit_count() != len(bits):
                continue
            val = val if _perm_sign(imgs) > 0 else -val
            rows[w] = {w2: val}
        self._gram = SparseMatrix(self.dim, self.dim, rows)
        return self._gram

    def pairing(self, x: Mapping[int, GaussianRational], y: Mapping[int, GaussianRational]) -> GaussianRational:
        gy = self.gram().apply(y)
        total = ZERO
        for w, v in x.items():
            u = gy.get(w)
            if u is not None:
                total = total + v * u
        return total

    def adjoint(self, x: SparseMatrix) -> SparseMatrix:
        """Operator ``X*`` with ``C^-1(phi, X chi) = C^-1(X* phi, chi)``."""
        g = self.gram()
        ginv = inverse(g)
        return ginv.transpose() @ x.transpose() @ g.transpose()



def _pair_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation of ascending words ``a`` then ``b``."""
    count = 0
    bb = b
    while bb:
        low = bb & -bb
        count += (a & ~((low << 1) - 1)).bit_count()
        bb ^= low
    return -1 if count % 2 else 1


def block(mat: SparseMatrix, fiber: FiberAlgebra, src: int, dst: int) -> SparseMatrix:
    """The piece of ``mat`` from fibre degree ``src`` to degree ``dst``."""
    return mat.submatrix(fiber.degree_words(dst), fiber.degree_words(src))


def combos(n: int, p: int):
    return combinations(range(1, n + 1), p)
