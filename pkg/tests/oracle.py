"""Independent dense reference built with sympy.

Spinors are indexed by subsets of {1..m} in the order of ``words(m)``;
gammas come straight from the wedge/contraction formulas, so nothing here
shares code with the package under test.
"""
from itertools import combinations

import sympy as sp


def words(m):
    """Subsets of 1..m, encoded as bit words 0 .. 2**m - 1."""
    return list(range(1 << m))


def _indices(w):
    return [j + 1 for j in range(w.bit_length()) if w >> j & 1]


def _wedge_sign(i, w):
    # e_i ^ e_{a1..ak}: sign of moving e_i past the indices below i
    return -1 if sum(1 for a in _indices(w) if a < i) % 2 else 1


def wedge_op(m, i):
    mat = sp.zeros(1 << m, 1 << m)
    for w in words(m):
        if not w >> (i - 1) & 1:
            mat[w | 1 << (i - 1), w] = _wedge_sign(i, w)
    return mat


def contract_op(m, i):
    return wedge_op(m, i).T   # adjoint for the real inner product on words


def gammas(m):
    out = [wedge_op(m, i) + contract_op(m, i) for i in range(1, m + 1)]
    out += [-sp.I * wedge_op(m, i) + sp.I * contract_op(m, i) for i in range(1, m + 1)]
    return out


def product(mats, idx):
    out = sp.eye(mats[0].shape[0])
    for mu in idx:
        out = out * mats[mu - 1]
    return out


def form_matrix(m, kind):
    """``C_ab = C(e_a, e_b)`` where ``C(eta, theta) = <C conj(eta), theta>``.

    With the hermitian ``<x, y> = x^H y`` this is ``eta^T C^H theta``.
    """
    g = gammas(m)
    op = product(g, range(1, m + 1)) if kind == "A" else product(g, range(m + 1, 2 * m + 1))
    return op.H


def pair(form, eta, theta):
    """``C(eta, theta)`` for column vectors (bilinear in both)."""
    return sp.expand((eta.T * form * theta)[0, 0])


def symmetry(mat):
    if mat == mat.T:
        return 1
    if mat == -mat.T:
        return -1
    return None


def cgamma_symmetry(m, kind, p):
    g = gammas(m)
    form = form_matrix(m, kind)
    signs = {symmetry(form * product(g, idx)) for idx in combinations(range(1, 2 * m + 1), p)}
    return signs.pop() if len(signs) == 1 else None


def stabilizer_dim(m, spinors):
    """Dimension of ``{x : sum x_{mu nu} Gamma_mu Gamma_nu zeta = 0 for all zeta}``."""
    g = gammas(m)
    n = 2 * m
    pairs = list(combinations(range(1, n + 1), 2))
    rows = []
    for z in spinors:
        cols = [g[a - 1] * g[b - 1] * z for a, b in pairs]
        for r in range(1 << m):
            rows.append([c[r] for c in cols])
    return len(pairs) - sp.Matrix(rows).rank()


def spinor(m, terms):
    v = sp.zeros(1 << m, 1)
    for w, c in terms.items():
        v[w] = c
    return v
