"""Exact Gaussian-rational scalars and an exterior-algebra engine.

Basis words of an exterior algebra on ``N`` generators are encoded as bit
patterns: generator ``e_i`` (1-based) is bit ``i - 1``.  A ``MultiVector``
maps words to nonzero ``GaussianRational`` coefficients.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union


class DimensionError(ValueError):
    """Raised when operands live on exterior algebras of different size."""


Number = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """An element ``(a + b i) / d`` of Q(i) with ``d > 0`` and ``gcd(a, b, d) = 1``.

    Instances are immutable and hashable.  The components ``re`` and ``im`` are
    exposed as reduced ``Fraction`` objects.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction] = 0):
        if isinstance(re, str):
            parsed = GaussianRational.parse(re)
            self._a, self._b, self._d = parsed._a, parsed._b, parsed._d
            return
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self._set(a, b, d)

    def _set(self, a: int, b: int, d: int) -> None:
        g = gcd(a, b, d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        if a == 0 and b == 0:
            d = 1
        self._a, self._b, self._d = a, b, d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussianRational":
        obj = cls.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        obj._set(a, b, d)
        return obj

    # components -------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def re_num(self) -> int:
        return self.re.numerator

    @property
    def re_den(self) -> int:
        return self.re.denominator

    @property
    def im_num(self) -> int:
        return self.im.numerator

    @property
    def im_den(self) -> int:
        return self.im.denominator

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    # arithmetic --------------------------------------------------------
    @staticmethod
    def coerce(x: Number) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, int):
            return GaussianRational._raw(x, 0, 1)
        if isinstance(x, Fraction):
            return GaussianRational._raw(x.numerator, 0, x.denominator)
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact")
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    def __add__(self, other: Number) -> "GaussianRational":
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if self._d == o._d:
            return GaussianRational._raw(self._a + o._a, self._b + o._b, self._d)
        return GaussianRational._raw(self._a * o._d + o._a * self._d,
                                     self._b * o._d + o._b * self._d,
                                     self._d * o._d)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        obj = GaussianRational.__new__(GaussianRational)
        obj._a, obj._b, obj._d = -self._a, -self._b, self._d
        return obj

    def __pos__(self) -> "GaussianRational":
        return self

    def __sub__(self, other: Number) -> "GaussianRational":
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Number) -> "GaussianRational":
        return GaussianRational.coerce(other) - self

    def __mul__(self, other: Number) -> "GaussianRational":
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, e = self._a, self._b, o._a, o._b
        return GaussianRational._raw(a * c - b * e, a * e + b * c, self._d * o._d)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        if self.is_zero():
            raise ZeroDivisionError("GaussianRational division by zero")
        n = self._a * self._a + self._b * self._b
        # 1/((a+bi)/d) = d (a - bi) / (a^2 + b^2)
        return GaussianRational._raw(self._d * self._a, -self._d * self._b, n)

    def __truediv__(self, other: Number) -> "GaussianRational":
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Number) -> "GaussianRational":
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "GaussianRational":
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(k)):
            out = out * base
        return out

    def conjugate(self) -> "GaussianRational":
        obj = GaussianRational.__new__(GaussianRational)
        obj._a, obj._b, obj._d = self._a, -self._b, self._d
        return obj

    def norm2(self) -> Fraction:
        """Squared modulus, an exact rational."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    # comparison and hashing ------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self == GaussianRational.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self) -> bool:
        return not self.is_zero()

    # text form -----------------------------------------------------------
    def __str__(self) -> str:
        re, im = self.re, self.im
        if im == 0:
            return _frac_str(re)
        imag = _frac_str(abs(im)) + "*i"
        if re == 0:
            return ("-" if im < 0 else "") + imag
        return _frac_str(re) + ("-" if im < 0 else "+") + imag

    def __repr__(self) -> str:
        return f"GaussianRational('{self}')"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Inverse of ``str``: accepts ``a/b+c/d*i`` with either part omitted."""
        s = text.strip().replace(" ", "")
        try:
            if not s:
                raise ValueError
            if not s.endswith("i"):
                return cls(Fraction(_check_rational(s)))
            body = s[:-1]
            if body.endswith("*"):
                body = body[:-1]
            k = max(body.rfind("+"), body.rfind("-"))
            if k > 0:
                re_txt, im_txt = body[:k], body[k:]
            else:
                re_txt, im_txt = "0", body
            if im_txt in ("", "+"):
                im = Fraction(1)
            elif im_txt == "-":
                im = Fraction(-1)
            else:
                im = Fraction(_check_rational(im_txt))
            return cls(Fraction(_check_rational(re_txt)), im)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a Gaussian rational: {text!r}") from None


_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def _check_rational(s: str) -> str:
    if not _RATIONAL.match(s):
        raise ValueError(s)
    return s


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
_I_POWERS = (ONE, I, -ONE, -I)


def i_power(k: int) -> GaussianRational:
    """Return ``i**k`` for any integer ``k``."""
    return _I_POWERS[k % 4]


def gr(x: Union[Number, str]) -> GaussianRational:
    """Convenience constructor accepting ints, fractions, strings and scalars."""
    if isinstance(x, str):
        return GaussianRational.parse(x)
    return GaussianRational.coerce(x)


# ----------------------------------------------------------------------
# words and signs

def word_from_indices(indices: Iterable[int]) -> int:
    """Bit pattern of the word ``e_{i1} ^ ... ^ e_{ik}`` (indices 1-based, distinct)."""
    w = 0
    for i in indices:
        if i < 1:
            raise IndexError(f"basis index {i} out of range")
        bit = 1 << (i - 1)
        if w & bit:
            raise ValueError(f"repeated index {i}")
        w |= bit
    return w


def word_indices(word: int) -> Tuple[int, ...]:
    """Ascending 1-based indices of a word."""
    out = []
    i = 1
    while word:
        if word & 1:
            out.append(i)
        word >>= 1
        i += 1
    return tuple(out)


def word_degree(word: int) -> int:
    return word.bit_count()


def wedge_sign(a: int, b: int) -> int:
    """Sign of ``e_a ^ e_b`` relative to the ascending word ``a | b``.

    Counts transpositions: pairs ``x in a``, ``y in b`` with ``x > y``.
    Returns 0 when the words overlap.
    """
    if a & b:
        return 0
    count = 0
    while b:
        low = b & -b
        count += (a & ~((low << 1) - 1)).bit_count()
        b ^= low
    return -1 if count & 1 else 1


def ordered_sign(indices: Iterable[int]) -> Tuple[int, int]:
    """Return ``(sign, word)`` that sorts the product ``e_{i1} ... e_{ik}``.

    Repeated indices give sign 0.
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, 0
    inversions = sum(1 for x in range(len(idx)) for y in range(x + 1, len(idx)) if idx[x] > idx[y])
    return (-1 if inversions & 1 else 1), word_from_indices(idx)


def format_word(word: int) -> str:
    return ",".join(str(i) for i in word_indices(word))


def parse_word(text: str) -> int:
    text = text.strip()
    if not text:
        return 0
    return word_from_indices(int(t) for t in text.split(","))


# ----------------------------------------------------------------------

class MultiVector:
    """Element of the exterior algebra on ``ground_dim`` generators."""

    __slots__ = ("ground_dim", "terms")

    def __init__(self, ground_dim: int, terms: Mapping[int, Number] | None = None):
        if ground_dim < 0:
            raise ValueError("ground_dim must be non-negative")
        self.ground_dim = ground_dim
        clean: Dict[int, GaussianRational] = {}
        top = 1 << ground_dim
        for w, c in (terms or {}).items():
            if not 0 <= w < top:
                raise DimensionError(f"word {w:b} exceeds ground dimension {ground_dim}")
            c = GaussianRational.coerce(c)
            if not c.is_zero():
                clean[w] = c
        self.terms = clean

    @classmethod
    def _from_clean(cls, ground_dim: int, terms: Dict[int, GaussianRational]) -> "MultiVector":
        obj = cls.__new__(cls)
        obj.ground_dim = ground_dim
        obj.terms = terms
        return obj

    # constructors ------------------------------------------------------
    @classmethod
    def zero(cls, ground_dim: int) -> "MultiVector":
        return cls._from_clean(ground_dim, {})

    @classmethod
    def scalar(cls, ground_dim: int, c: Number = 1) -> "MultiVector":
        return cls(ground_dim, {0: c})

    @classmethod
    def basis(cls, ground_dim: int, *indices: int, coeff: Number = 1) -> "MultiVector":
        """``coeff * e_{i1} ^ ... ^ e_{ik}`` with the indices in the given order."""
        for i in indices:
            if not 1 <= i <= ground_dim:
                raise IndexError(f"basis index {i} out of range 1..{ground_dim}")
        sign, w = ordered_sign(indices)
        return cls(ground_dim, {w: GaussianRational.coerce(coeff) * sign} if sign else {})

    # inspection ----------------------------------------------------------
    def __iter__(self) -> Iterator[Tuple[int, GaussianRational]]:
        return iter(sorted(self.terms.items()))

    def coeff(self, word: int) -> GaussianRational:
        return self.terms.get(word, ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {w.bit_count() for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a homogeneous nonzero element."""
        d = self.degrees()
        if len(d) != 1:
            raise ValueError("degree of an inhomogeneous or zero multivector")
        return d.pop()

    def grade(self, k: int) -> "MultiVector":
        return MultiVector._from_clean(
            self.ground_dim, {w: c for w, c in self.terms.items() if w.bit_count() == k})

    def _check(self, other: "MultiVector") -> None:
        if self.ground_dim != other.ground_dim:
            raise DimensionError(
                f"ground dimensions differ: {self.ground_dim} vs {other.ground_dim}")

    # linear structure ----------------------------------------------------
    def __add__(self, other: "MultiVector") -> "MultiVector":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return MultiVector._from_clean(self.ground_dim, out)

    def __neg__(self) -> "MultiVector":
        return MultiVector._from_clean(self.ground_dim, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        return self + (-other)

    def scale(self, c: Number) -> "MultiVector":
        c = GaussianRational.coerce(c)
        if c.is_zero():
            return MultiVector.zero(self.ground_dim)
        return MultiVector._from_clean(self.ground_dim, {w: c * v for w, v in self.terms.items()})

    def __rmul__(self, c: Number) -> "MultiVector":
        return self.scale(c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiVector):
            return NotImplemented
        return self.ground_dim == other.ground_dim and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ground_dim, frozenset(self.terms.items())))

    def __xor__(self, other: "MultiVector") -> "MultiVector":
        return wedge(self, other)

    def __repr__(self) -> str:
        if not self.terms:
            return f"MultiVector({self.ground_dim}, 0)"
        parts = []
        for w, c in self:
            label = "1" if w == 0 else "e" + "".join(str(i) for i in word_indices(w))
            parts.append(f"({c}){label}")
        return f"MultiVector({self.ground_dim}, " + " + ".join(parts) + ")"

    # serialization ---------------------------------------------------------
    def to_json_obj(self) -> Dict[str, str]:
        return {format_word(w): str(c) for w, c in self}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, ground_dim: int, obj: Mapping[str, str]) -> "MultiVector":
        terms: Dict[int, GaussianRational] = {}
        for key, val in obj.items():
            w = parse_word(key)
            terms[w] = terms.get(w, ZERO) + GaussianRational.parse(str(val))
        return cls(ground_dim, terms)

    @classmethod
    def from_json(cls, ground_dim: int, text: str) -> "MultiVector":
        return cls.from_json_obj(ground_dim, json.loads(text))


def wedge(x: MultiVector, y: MultiVector) -> MultiVector:
    """Exterior product with signs from transposition parity."""
    x._check(y)
    out: Dict[int, GaussianRational] = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            if a & b:
                continue
            s = wedge_sign(a, b)
            c = ca * cb
            if s < 0:
                c = -c
            w = a | b
            t = out.get(w)
            t = c if t is None else t + c
            if t.is_zero():
                out.pop(w, None)
            else:
                out[w] = t
    return MultiVector._from_clean(x.ground_dim, out)


def contract_sign(i: int, word: int) -> int:
    """Sign of ``e_i`` contracted into ``word`` (0 if the index is absent)."""
    bit = 1 << (i - 1)
    if not word & bit:
        return 0
    return -1 if (word & (bit - 1)).bit_count() & 1 else 1


def contract(i: int, x: MultiVector) -> MultiVector:
    """Interior product ``e_i`` applied to ``x``: the adjoint of ``e_i ^``."""
    if not 1 <= i <= x.ground_dim:
        raise IndexError(f"contraction index {i} out of range 1..{x.ground_dim}")
    bit = 1 << (i - 1)
    out = {}
    for w, c in x.terms.items():
        if w & bit:
            s = contract_sign(i, w)
            out[w ^ bit] = c if s > 0 else -c
    return MultiVector._from_clean(x.ground_dim, out)


def conjugate(x: MultiVector) -> MultiVector:
    """Complex conjugate of the coefficients; real basis words are fixed."""
    return MultiVector._from_clean(x.ground_dim, {w: c.conjugate() for w, c in x.terms.items()})


def inner(x: MultiVector, y: MultiVector) -> GaussianRational:
    """Hermitian product, antilinear in the first slot; basis words orthonormal."""
    x._check(y)
    total = ZERO
    for w, c in x.terms.items():
        d = y.terms.get(w)
        if d is not None:
            total = total + c.conjugate() * d
    return total


def hodge_star_sign(word: int, n: int) -> int:
    """Sign with ``e_w ^ e_{complement} = sign * e_1 ^ ... ^ e_n``."""
    full = (1 << n) - 1
    return wedge_sign(word, full ^ word)
