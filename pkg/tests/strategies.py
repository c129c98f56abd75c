"""Shared hypothesis strategies for exact scalars and multivectors."""
from fractions import Fraction

from hypothesis import strategies as st

from spincoh.multilinear import GaussianRational, MultiVector

fractions = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 12))
scalars = st.builds(GaussianRational, fractions, fractions)
nonzero_scalars = scalars.filter(lambda x: not x.is_zero())


def multivectors(ground_dim, max_terms=5):
    words = st.integers(0, (1 << ground_dim) - 1)
    return st.dictionaries(words, scalars, max_size=max_terms).map(lambda t: MultiVector(ground_dim, t))


def dense_matrices(max_rows=5, max_cols=5, entries=None):
    entries = entries or st.sampled_from([GaussianRational(x) for x in (-2, -1, 0, 0, 0, 1, 2)]
                                         + [GaussianRational(0, 1), GaussianRational(Fraction(1, 2), -1)])
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)))
