import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hmmreduce.algebra import algebra_from_blocks
from hmmreduce.errors import DegenerateWeight, DimensionMismatch
from hmmreduce.projection import conditional_expectation, stochastic_factors


def random_partition(rng, n, keep_all=True):
    labels = rng.integers(0, max(1, n // 2 + 1), size=n)
    blocks = [np.flatnonzero(labels == l).tolist() for l in np.unique(labels)]
    if not keep_all and len(blocks) > 1:
        blocks = blocks[1:]
    return blocks


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(1, 8), unital=st.booleans())
def test_projection_properties(seed, n, unital):
    rng = np.random.default_rng(seed)
    A = algebra_from_blocks(random_partition(rng, n, unital), n)
    p = rng.dirichlet(np.ones(n))
    E = conditional_expectation(A, p)
    F = stochastic_factors(A, p)
    np.testing.assert_allclose(E @ E, E, atol=1e-12)
    np.testing.assert_allclose(F.R @ F.J, np.eye(A.dim), atol=1e-12)
    np.testing.assert_allclose(F.dual_expectation(), E.T, atol=1e-12)
    assert np.all(F.J >= 0) and np.all(F.R >= 0)
    np.testing.assert_allclose(F.J.sum(axis=0), 1.0)
    # R is stochastic on the support of A
    np.testing.assert_allclose(F.R.sum(axis=0), A.support.astype(float))
    # elements of A are fixed, p is preserved by the dual
    for a in A.atoms:
        np.testing.assert_allclose(E @ a, a, atol=1e-12)
    np.testing.assert_allclose(E.T @ (p * A.support), p * A.support, atol=1e-12)


def test_two_atom_example():
    A = algebra_from_blocks([[0, 1], [2]], 3)
    p = np.array([0.1, 0.3, 0.6])
    F = stochastic_factors(A, p)
    np.testing.assert_allclose(F.J, [[0.25, 0.0], [0.75, 0.0], [0.0, 1.0]])
    np.testing.assert_array_equal(F.R, [[1, 1, 0], [0, 0, 1]])
    E = conditional_expectation(A, p)
    np.testing.assert_allclose(E @ np.array([4.0, 0.0, 1.0]), [1.0, 1.0, 1.0])


def test_degenerate_weight():
    A = algebra_from_blocks([[0], [1, 2]], 3)
    with pytest.raises(DegenerateWeight):
        stochastic_factors(A, np.array([1.0, 0.0, 0.0]))
    with pytest.raises(DimensionMismatch):
        stochastic_factors(A, np.ones(2))
