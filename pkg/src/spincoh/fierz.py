"""Form-valued spinor bilinears, their symmetry table and the Fierz expansion."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .clifford import Bilinear, MonomialMap, SpinRep, bilinear, build_even_rep, closed_form_signs
from .linalg import SparseMatrix, Vector, rank
from .multilinear import ONE, ZERO, GaussianRational, MultiVector, hodge_star_sign, i_power, word_from_indices

# published default for every seeded sweep
DEFAULT_SEED = 20240917


def signpg(p: int, s_c: int, s_g: int) -> int:
    """Closed-form symmetry sign of ``C Gamma_{(p)}``."""
    e = p * (p - 1) // 2 + (p + 1) * s_c + p * s_g
    return -1 if e % 2 else 1


def iter_gamma_products(rep: SpinRep, p: Optional[int] = None) -> Iterator[Tuple[Tuple[int, ...], MonomialMap]]:
    """Yield ``(indices, Gamma_indices)`` over ascending index sets by depth-first extension."""
    n = rep.n
    stack: List[Tuple[Tuple[int, ...], MonomialMap]] = [((), MonomialMap.identity(rep.dim))]
    while stack:
        idx, g = stack.pop()
        if p is None or len(idx) == p:
            yield idx, g
        if p is not None and len(idx) >= p:
            continue
        start = idx[-1] + 1 if idx else 1
        for mu in range(n, start - 1, -1):
            stack.append((idx + (mu,), g @ rep.gamma(mu)))


def cgamma_form(c: Bilinear, p: int, eta: Vector, theta: Vector) -> MultiVector:
    """The p-form ``1/p! C Gamma_{mu1..mup}(eta, theta) e^{mu1..mup}``."""
    n = c.rep.n
    if not 0 <= p <= n:
        raise ValueError(f"degree {p} outside 0..{n}")
    terms = {}
    for idx in combinations(range(1, n + 1), p):
        g = c.rep.product(idx)
        val = c(eta, g.apply(theta))
        if not val.is_zero():
            terms[word_from_indices(idx)] = val
    return MultiVector(n, terms)


def pairing_chirality(rep: SpinRep, form: MonomialMap) -> str:
    """``same`` if the bilinear pairs each chirality with itself, ``opposite`` otherwise."""
    same = all(form.target[b] is None or (form.target[b].bit_count() - b.bit_count()) % 2 == 0
               for b in range(rep.dim))
    return "same" if same else "opposite"


def symmetry_table(n: int) -> List[dict]:
    """Measured vs closed-form symmetry of ``C Gamma_{(p)}`` for C in {A, B}, all p."""
    if n % 2 or n < 2:
        raise ValueError("symmetry tables are defined for even n >= 2")
    rep = build_even_rep(n // 2)
    table = []
    for kind in ("A", "B"):
        c = bilinear(rep, kind)
        sc_closed, sg_closed = closed_form_signs(rep.m, kind)
        measured: Dict[int, set] = {p: set() for p in range(n + 1)}
        pairing: Dict[int, set] = {p: set() for p in range(n + 1)}
        for idx, g in iter_gamma_products(rep):
            f = c.form @ g
            measured[len(idx)].add(f.symmetry())
            pairing[len(idx)].add(pairing_chirality(rep, f))
        for p in range(n + 1):
            ms = measured[p]
            sym = ms.pop() if len(ms) == 1 else None
            closed = signpg(p, sc_closed, sg_closed)
            pair = pairing[p].pop() if len(pairing[p]) == 1 else "mixed"
            table.append({
                "kind": kind,
                "p": p,
                "measured": _label(sym),
                "closed_form": _label(closed),
                "agree": sym == closed,
                "s_C": c.s_C,
                "s_Gamma": c.s_Gamma,
                "signs_agree": (c.s_C, c.s_Gamma) == (sc_closed, sg_closed),
                "pairing": pair,
                # restricts to each chiral dual when it pairs a chirality with itself
                "restricts_to_chiral": pair == "same",
            })
    return table


def _label(sign: Optional[int]) -> str:
    return {1: "symmetric", -1: "skew", None: "mixed"}[sign]


def table_ok(table: Sequence[dict]) -> bool:
    return all(row["agree"] and row["signs_agree"] for row in table)


# ----------------------------------------------------------------------
# Fierz identity

def _fierz_terms(c: Bilinear):
    """Per index set: sign, matrix of ``(Gamma_I C^{-1})`` and of ``C Gamma_I``.

    Gammas act on cospinors by transposition, ``(Gamma psi)(eta) = psi(Gamma eta)``.
    """
    rep = c.rep
    # C^{-1} on cospinors has matrix K = (C^{-1})^T; for a monomial C this is monomial
    kmat = _monomial_inverse_transpose(c.form)
    for idx, g in iter_gamma_products(rep):
        p = len(idx)
        sign = -1 if (p * (c.s_C + c.s_Gamma)) % 2 else 1
        yield idx, sign, g @ kmat, c.form @ g


def _monomial_inverse_transpose(form: MonomialMap) -> MonomialMap:
    # inverse of a monomial map: send target back with negated phase
    inv_t: List[Optional[int]] = [None] * form.dim
    inv_p = [0] * form.dim
    for b, (t, p) in enumerate(zip(form.target, form.phase)):
        inv_t[t] = b
        inv_p[t] = -p
    return MonomialMap(inv_t, inv_p).transpose()


def fierz_verify(c: Bilinear, mode: str = "exhaustive", samples: int = 1000,
                 seed: int = DEFAULT_SEED) -> Fraction:
    """Largest squared modulus of (right side - left side) over basis quadruples.

    The left side is ``psi(eta) chi(theta)``; the right side is the normalized sum
    over all index sets.  ``mode`` is ``exhaustive`` (every quadruple) or
    ``sampled`` (seeded random quadruples, half of them on the diagonal).
    """
    rep = c.rep
    N = rep.dim
    terms = list(_fierz_terms(c))
    inv_n = GaussianRational(Fraction(1, N))
    worst = Fraction(0)
    if mode == "exhaustive":
        acc: Dict[Tuple[int, int, int, int], int] = {}
        # accumulate numerators as Gaussian integers encoded by phases
        for _, sign, x, y in terms:
            sph = 0 if sign > 0 else 2
            for s in range(N):
                r = x.target[s]
                px = x.phase[s] + sph
                for t in range(N):
                    e = y.target[t]
                    ph = (px + y.phase[t]) % 4
                    key = (r, s, e, t)
                    re, im = acc.get(key, (0, 0))
                    if ph == 0:
                        re += 1
                    elif ph == 1:
                        im += 1
                    elif ph == 2:
                        re -= 1
                    else:
                        im -= 1
                    acc[key] = (re, im)
        for r in range(N):
            for s in range(N):
                for e in range(N):
                    for t in range(N):
                        re, im = acc.get((r, s, e, t), (0, 0))
                        val = GaussianRational(re, im) * inv_n
                        want = ONE if (r == e and s == t) else ZERO
                        worst = max(worst, (val - want).norm2())
        return worst
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    xs = [(sign, x, y) for _, sign, x, y in terms]
    for k in range(samples):
        psi, chi = rng.randrange(N), rng.randrange(N)
        if k % 2 == 0:
            eta, theta = psi, chi
        else:
            eta, theta = rng.randrange(N), rng.randrange(N)
        total = ZERO
        for sign, x, y in xs:
            if x.target[chi] != psi or y.target[theta] != eta:
                continue
            total = total + i_power(x.phase[chi] + y.phase[theta] + (0 if sign > 0 else 2))
        val = total * inv_n
        want = ONE if (psi == eta and chi == theta) else ZERO
        worst = max(worst, (val - want).norm2())
    return worst


def fierz_contributions(c: Bilinear, chirality: int) -> Dict[int, bool]:
    """Which degrees p give a nonzero term when all four arguments are chiral.

    Cospinors are taken in the dual of the chirality-``chirality`` spinors and
    spinors in that chirality; a degree contributes when some term is nonzero.
    """
    rep = c.rep
    basis = set(rep.chiral_basis(chirality))
    out: Dict[int, bool] = {p: False for p in range(rep.n + 1)}
    for idx, _, x, y in _fierz_terms(c):
        p = len(idx)
        if out[p]:
            continue
        hit_x = any(x.target[s] in basis for s in basis)
        hit_y = any(y.target[t] in basis for t in basis)
        out[p] = hit_x and hit_y
    return out


def decomposition_ranks(c: Bilinear, left: int, right: int) -> Dict[int, int]:
    """Rank of ``eta (x) theta -> C Gamma_(p)(eta, theta)`` on chiral pieces, per p.

    ``left``/``right`` are chiralities (+1/-1) of the two spinor arguments.
    """
    rep = c.rep
    lb = rep.chiral_basis(left)
    rb = rep.chiral_basis(right)
    col = {(a, b): k for k, (a, b) in enumerate((a, b) for a in lb for b in rb)}
    out = {}
    for p in range(rep.n + 1):
        rows: Dict[int, Dict[int, GaussianRational]] = {}
        for r, idx in enumerate(combinations(range(1, rep.n + 1), p)):
            f = c.form @ rep.product(idx)
            row = {}
            for b in rb:
                a = f.target[b]
                if a is not None and (a, b) in col:
                    row[col[(a, b)]] = i_power(f.phase[b])
            if row:
                rows[r] = row
        out[p] = rank(SparseMatrix(comb(rep.n, p), len(col), rows))
    return out


def middle_involution(n: int) -> SparseMatrix:
    """``i**m`` times the Hodge star on middle-degree forms, orientation e_1..e_n."""
    m = n // 2
    words = [word_from_indices(idx) for idx in combinations(range(1, n + 1), m)]
    pos = {w: k for k, w in enumerate(words)}
    full = (1 << n) - 1
    rows: Dict[int, Dict[int, GaussianRational]] = {}
    for w in words:
        comp = full ^ w
        rows.setdefault(pos[comp], {})[pos[w]] = i_power(m) * hodge_star_sign(w, n)
    return SparseMatrix(len(words), len(words), rows)


def middle_degree_split(n: int) -> Tuple[int, int]:
    """Dimensions of the +1 and -1 eigenspaces of :func:`middle_involution`."""
    h = middle_involution(n)
    ident = SparseMatrix.identity(h.nrows)
    plus = h.nrows - rank(h - ident)
    minus = h.nrows - rank(h + ident)
    return plus, minus


def middle_image_eigenvalue(c: Bilinear, left: int, right: int) -> Optional[int]:
    """Eigenvalue of the middle involution on the image of the chiral pairing, if pure."""
    rep = c.rep
    n, m = rep.n, rep.m
    h = middle_involution(n)
    forms = [c.form @ rep.product(idx) for idx in combinations(range(1, n + 1), m)]
    signs = set()
    for a in rep.chiral_basis(left):
        for b in rep.chiral_basis(right):
            vec = {}
            for k, f in enumerate(forms):
                if f.target[b] == a:
                    vec[k] = i_power(f.phase[b])
            if not vec:
                continue
            hv = h.apply(vec)
            if hv == vec:
                signs.add(1)
            elif hv == {k: -v for k, v in vec.items()}:
                signs.add(-1)
            else:
                signs.add(None)
    return signs.pop() if len(signs) == 1 else None
