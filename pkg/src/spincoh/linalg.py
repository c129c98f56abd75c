"""Sparse exact linear algebra over Q(i).

Matrices are stored row-wise as ``{row: {col: GaussianRational}}`` with no
zero entries.  Vectors are plain ``{index: GaussianRational}`` dicts.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .multilinear import ONE, ZERO, GaussianRational, Number

Vector = Dict[int, GaussianRational]


def _addto(row: Vector, col: int, value: GaussianRational) -> None:
    cur = row.get(col)
    if cur is None:
        if not value.is_zero():
            row[col] = value
    else:
        s = cur + value
        if s.is_zero():
            del row[col]
        else:
            row[col] = s


class SparseMatrix:
    """Exact sparse matrix with ``nrows x ncols`` shape."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Optional[Mapping[int, Mapping[int, Number]]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: Dict[int, Vector] = {}
        for r, row in (rows or {}).items():
            clean = {c: GaussianRational.coerce(v) for c, v in row.items()}
            clean = {c: v for c, v in clean.items() if not v.is_zero()}
            if clean:
                if not 0 <= r < nrows or any(not 0 <= c < ncols for c in clean):
                    raise IndexError("entry outside matrix shape")
                self.rows[r] = clean

    @classmethod
    def _wrap(cls, nrows: int, ncols: int, rows: Dict[int, Vector]) -> "SparseMatrix":
        obj = cls.__new__(cls)
        obj.nrows, obj.ncols, obj.rows = nrows, ncols, rows
        return obj

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "SparseMatrix":
        return cls._wrap(nrows, ncols, {})

    @classmethod
    def identity(cls, n: int, scale: Number = 1) -> "SparseMatrix":
        c = GaussianRational.coerce(scale)
        if c.is_zero():
            return cls.zeros(n, n)
        return cls._wrap(n, n, {i: {i: c} for i in range(n)})

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[Number]]) -> "SparseMatrix":
        nrows = len(dense)
        ncols = len(dense[0]) if nrows else 0
        return cls(nrows, ncols, {r: dict(enumerate(row)) for r, row in enumerate(dense)})

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, Number]]) -> "SparseMatrix":
        rows: Dict[int, Vector] = {}
        for c, col in enumerate(columns):
            for r, v in col.items():
                v = GaussianRational.coerce(v)
                if not v.is_zero():
                    rows.setdefault(r, {})[c] = v
        return cls._wrap(nrows, len(columns), rows)

    # access --------------------------------------------------------------
    def __getitem__(self, key: Tuple[int, int]) -> GaussianRational:
        r, c = key
        return self.rows.get(r, {}).get(c, ZERO)

    def to_dense(self) -> List[List[GaussianRational]]:
        out = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for r, row in self.rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def columns(self) -> Dict[int, Vector]:
        cols: Dict[int, Vector] = {}
        for r, row in self.rows.items():
            for c, v in row.items():
                cols.setdefault(c, {})[r] = v
        return cols

    def column(self, c: int) -> Vector:
        return {r: row[c] for r, row in self.rows.items() if c in row}

    # algebra -------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.rows == other.rows

    def __hash__(self):  # pragma: no cover - matrices are not used as keys
        raise TypeError("SparseMatrix is unhashable")

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        self._same_shape(other)
        rows = {r: dict(row) for r, row in self.rows.items()}
        for r, row in other.rows.items():
            target = rows.setdefault(r, {})
            for c, v in row.items():
                _addto(target, c, v)
            if not target:
                del rows[r]
        return SparseMatrix._wrap(self.nrows, self.ncols, rows)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix._wrap(self.nrows, self.ncols,
                                  {r: {c: -v for c, v in row.items()} for r, row in self.rows.items()})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, s: Number) -> "SparseMatrix":
        s = GaussianRational.coerce(s)
        if s.is_zero():
            return SparseMatrix.zeros(self.nrows, self.ncols)
        return SparseMatrix._wrap(self.nrows, self.ncols,
                                  {r: {c: s * v for c, v in row.items()} for r, row in self.rows.items()})

    def __rmul__(self, s: Number) -> "SparseMatrix":
        return self.scale(s)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        rows: Dict[int, Vector] = {}
        orows = other.rows
        for r, row in self.rows.items():
            acc: Vector = {}
            for k, v in row.items():
                orow = orows.get(k)
                if orow is None:
                    continue
                for c, w in orow.items():
                    _addto(acc, c, v * w)
            if acc:
                rows[r] = acc
        return SparseMatrix._wrap(self.nrows, other.ncols, rows)

    def apply(self, vec: Mapping[int, GaussianRational]) -> Vector:
        out: Vector = {}
        for r, row in self.rows.items():
            acc = ZERO
            for c, v in row.items():
                x = vec.get(c)
                if x is not None:
                    acc = acc + v * x
            if not acc.is_zero():
                out[r] = acc
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix._wrap(self.ncols, self.nrows, self.columns())

    def conjugate(self) -> "SparseMatrix":
        return SparseMatrix._wrap(self.nrows, self.ncols,
                                  {r: {c: v.conjugate() for c, v in row.items()} for r, row in self.rows.items()})

    def adjoint(self) -> "SparseMatrix":
        return self.transpose().conjugate()

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseMatrix":
        rpos = {r: i for i, r in enumerate(rows)}
        cpos = {c: j for j, c in enumerate(cols)}
        out: Dict[int, Vector] = {}
        for r, row in self.rows.items():
            i = rpos.get(r)
            if i is None:
                continue
            new = {cpos[c]: v for c, v in row.items() if c in cpos}
            if new:
                out[i] = new
        return SparseMatrix._wrap(len(rows), len(cols), out)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def _same_shape(self, other: "SparseMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def max_abs2(self) -> GaussianRational:
        """Largest squared modulus of an entry (the exact max-norm residual, squared)."""
        best = 0
        for row in self.rows.values():
            for v in row.values():
                n = v.norm2()
                if n > best:
                    best = n
        return GaussianRational.coerce(best)

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def block_diagonal(blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    rows: Dict[int, Vector] = {}
    r0 = c0 = 0
    for b in blocks:
        for r, row in b.rows.items():
            rows[r0 + r] = {c0 + c: v for c, v in row.items()}
        r0 += b.nrows
        c0 += b.ncols
    return SparseMatrix._wrap(r0, c0, rows)


# ----------------------------------------------------------------------
# elimination

def echelon(vectors: Iterable[Mapping[int, GaussianRational]]) -> Tuple[List[Vector], List[int]]:
    """Reduced row echelon form of the span of ``vectors``.

    Returns ``(rows, pivots)`` where ``rows[k]`` has a 1 at column ``pivots[k]``
    and zeros at every other pivot column.  Rows are sorted by pivot.
    """
    basis: Dict[int, Vector] = {}
    for vec in vectors:
        v = {c: x for c, x in vec.items() if not x.is_zero()}
        # reduce against existing pivots
        for p in [p for p in v if p in basis]:
            coef = v.get(p)
            if coef is None:
                continue
            for c, x in basis[p].items():
                _addto(v, c, -coef * x)
        if not v:
            continue
        p = min(v)
        inv = v[p].inverse()
        v = {c: x * inv for c, x in v.items()}
        # back-substitute into existing rows
        for q, row in basis.items():
            coef = row.get(p)
            if coef is not None:
                for c, x in v.items():
                    _addto(row, c, -coef * x)
        basis[p] = v
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def _reduce_against(v: Vector, basis: Dict[int, Vector]) -> Vector:
    v = dict(v)
    for p in sorted(p for p in list(v) if p in basis):
        coef = v.get(p)
        if coef is None:
            continue
        for c, x in basis[p].items():
            _addto(v, c, -coef * x)
    return v


def rank(m: SparseMatrix) -> int:
    # eliminate over the shorter side
    if m.nrows <= m.ncols:
        return len(echelon(m.rows.values())[0])
    return len(echelon(m.columns().values())[0])


def nullspace(m: SparseMatrix) -> List[Vector]:
    """Basis of ``{x : m x = 0}`` in canonical (reduced) form."""
    rows, pivots = echelon(m.rows.values())
    pivset = set(pivots)
    out: List[Vector] = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        vec: Vector = {free: ONE}
        for row, p in zip(rows, pivots):
            x = row.get(free)
            if x is not None:
                vec[p] = -x
        out.append(vec)
    return out


def span_basis(vectors: Iterable[Mapping[int, GaussianRational]]) -> List[Vector]:
    return echelon(vectors)[0]


def span_dim(vectors: Iterable[Mapping[int, GaussianRational]]) -> int:
    return len(echelon(vectors)[0])


def image_basis(m: SparseMatrix) -> List[Vector]:
    return span_basis(m.columns().values())


def in_span(vec: Mapping[int, GaussianRational], vectors: Sequence[Mapping[int, GaussianRational]]) -> bool:
    rows, pivots = echelon(vectors)
    basis = dict(zip(pivots, rows))
    return not _reduce_against(dict(vec), basis)


def solve(m: SparseMatrix, rhs: Mapping[int, GaussianRational]) -> Optional[Vector]:
    """One solution of ``m x = rhs`` or ``None`` when inconsistent."""
    aug = []
    extra = m.ncols
    for r in range(m.nrows):
        row = dict(m.rows.get(r, {}))
        b = rhs.get(r)
        if b is not None and not b.is_zero():
            row[extra] = b
        if row:
            aug.append(row)
    rows, pivots = echelon(aug)
    if extra in pivots:
        return None
    x: Vector = {}
    for row, p in zip(rows, pivots):
        b = row.get(extra)
        if b is not None:
            x[p] = b
    return x


def inverse(m: SparseMatrix) -> SparseMatrix:
    if m.nrows != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    aug = []
    for r in range(n):
        row = dict(m.rows.get(r, {}))
        row[n + r] = ONE
        aug.append(row)
    rows, pivots = echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    inv_rows = {}
    for row, p in zip(rows, pivots):
        new = {c - n: v for c, v in row.items() if c >= n}
        if new:
            inv_rows[p] = new
    return SparseMatrix._wrap(n, n, inv_rows)


def intersection_dim(a: Sequence[Vector], b: Sequence[Vector]) -> int:
    return span_dim(a) + span_dim(b) - span_dim(list(a) + list(b))
