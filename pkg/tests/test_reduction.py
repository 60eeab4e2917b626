import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hmmreduce import reduce, reduce_multi_time, reduce_single_time, reduced_propagation_check
from hmmreduce.corpus import (
    example_equilibrium_3state,
    example_uniform_5state,
    example_nonobservable_4state,
    example_shifted_effective,
    random_hmm,
)
from hmmreduce.errors import NegativeReducedEntry, UnsupportedCustomVector
from hmmreduce.model import validate_initials
from hmmreduce.oracle import verify_equivalence
from hmmreduce.reduction import _clean_stochastic

ATOL = 1e-10


def test_equilibrium_example_collapses_to_one_state():
    h, S = example_equilibrium_3state()
    res = reduce_single_time(h, S)
    assert res.d == 1
    np.testing.assert_allclose(res.reduced.P, [[1.0]], atol=ATOL)
    np.testing.assert_allclose(res.reduced.C, [[0.4], [0.6]], atol=ATOL)
    np.testing.assert_allclose(res.reduced_initials[0], [1.0], atol=ATOL)


def test_uniform_5state_single_time():
    h, S = example_uniform_5state()
    res = reduce_single_time(h, S)
    assert res.d == 1
    np.testing.assert_allclose(res.reduced.C, [[0.6], [0.2], [0.2]], atol=ATOL)


def test_uniform_5state_multi_time():
    h, S = example_uniform_5state()
    res = reduce_multi_time(h, S)
    assert res.d == 3
    P_hat = np.array([[2 / 3, 3 / 4, 1 / 4], [1 / 6, 0, 1 / 2], [1 / 6, 1 / 4, 1 / 4]])
    np.testing.assert_allclose(res.reduced.P, P_hat, atol=ATOL)
    np.testing.assert_allclose(res.reduced.C, np.eye(3), atol=ATOL)
    np.testing.assert_allclose(res.reduced_initials[0], [0.6, 0.2, 0.2], atol=ATOL)
    assert [b.tolist() for b in res.atoms.astype(bool)] == [
        [True, True, True, False, False], [False, False, False, True, False], [False, False, False, False, True]]


@pytest.mark.parametrize("strategy, custom", [("custom", np.full(4, 0.25)), ("corollary-mean", None)])
def test_nonobservable_example_single_time(strategy, custom):
    h, S = example_nonobservable_4state()
    res = reduce_single_time(h, S, strategy, custom)
    assert res.d == 3
    P_hat = np.array([[5 / 12, 2 / 3, 1 / 2], [1 / 4, 1 / 3, 0], [1 / 3, 0, 1 / 2]])
    C_hat = np.array([[1 / 4, 1 / 2, 7 / 16], [3 / 4, 1 / 2, 9 / 16]])
    np.testing.assert_allclose(res.reduced.P, P_hat, atol=ATOL)
    np.testing.assert_allclose(res.reduced.C, C_hat, atol=ATOL)
    for q in res.reduced_initials:
        np.testing.assert_allclose(q, [1.0, 0.0, 0.0], atol=ATOL)


def test_nonobservable_example_algebra_exceeds_effective_space():
    h, S = example_nonobservable_4state()
    dg = reduce_single_time(h, S).diagnostics
    assert (dg.dim_N, dg.dim_R, dg.dim_E, dg.dim_A) == (2, 4, 2, 3)


def test_shifted_example_reduces_to_two_states():
    h, S = example_shifted_effective()
    res = reduce_single_time(h, S)
    assert res.d == 2
    assert verify_equivalence(h, res, S, horizon=10).passed


def test_uniform_strategy_on_ito_multi():
    h, S = example_uniform_5state()
    res = reduce_multi_time(h, S, "uniform")
    assert res.d == 3 and verify_equivalence(h, res, S, horizon=5).passed


def test_bad_custom_vector():
    h, S = example_nonobservable_4state()
    with pytest.raises(UnsupportedCustomVector):
        reduce(h, S, strategy="custom", custom_p=np.array([0.5, 0.5, 0.0, 0.0]))


def test_unknown_mode():
    h, S = example_uniform_5state()
    with pytest.raises(ValueError):
        reduce(h, S, mode="both")


def test_clean_stochastic():
    M = np.array([[1.0 + 1e-13, 0.5], [-1e-13, 0.5]])
    out = _clean_stochastic(M, "M")
    assert np.all(out >= 0)
    np.testing.assert_allclose(out.sum(axis=0), 1.0, atol=1e-15)
    with pytest.raises(NegativeReducedEntry):
        _clean_stochastic(np.array([[1.1], [-0.1]]), "M")


# -- properties -----------------------------------------------------------------

def check_result(h, S, res):
    d = res.d
    np.testing.assert_allclose(res.R @ res.J, np.eye(d), atol=ATOL)
    for M in (res.reduced.P, res.reduced.C):
        assert np.all(M >= 0)
        np.testing.assert_allclose(M.sum(axis=0), 1.0, atol=ATOL)
    for q in res.reduced_initials:
        assert np.all(q >= 0) and q.sum() == pytest.approx(1.0, abs=ATOL)
    assert d <= h.n


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 6), m=st.integers(2, 3), s=st.integers(1, 2))
def test_random_models_reduce_exactly(seed, n, m, s):
    h, S = random_hmm(np.random.default_rng(seed), n, m, s)
    single = reduce_single_time(h, S)
    multi = reduce_multi_time(h, S)
    check_result(h, S, single)
    check_result(h, S, multi)
    assert single.d <= multi.d
    assert verify_equivalence(h, single, S, horizon=8).passed
    assert verify_equivalence(h, multi, S, horizon=4).passed


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 6), k=st.integers(0, 5))
def test_vertex_initials(seed, n, k):
    # vertex starts are where projected generators can go negative
    h, _ = random_hmm(np.random.default_rng(seed), n, 2, 1)
    S = validate_initials([np.eye(n)[k % n]], n)
    for mode in ("single", "multi"):
        res = reduce(h, S, mode)
        check_result(h, S, res)
        assert verify_equivalence(h, res, S, horizon=5).passed


def test_observable_chain_is_not_reduced():
    h, S = random_hmm(np.random.default_rng(0), 4, 4, 1, family="dense")
    res = reduce_multi_time(h, validate_initials([np.full(4, 0.25)], 4))
    assert res.diagnostics.dim_N == 0


def test_reduction_is_deterministic():
    h, S = example_nonobservable_4state()
    a, b = reduce(h, S, "multi"), reduce(h, S, "multi")
    np.testing.assert_array_equal(a.reduced.P, b.reduced.P)
    np.testing.assert_array_equal(a.J, b.J)


def test_propagation_residuals_vanish_for_multi_time(reduced_corpus):
    for _, _, h, S, _, multi in reduced_corpus:
        rep = reduced_propagation_check(multi, h)
        assert rep.expected_zero()
        assert rep.max_residual < 1e-9


def test_single_time_need_not_commute_with_outputs():
    # lumping all five states mixes states with different emissions
    h, S = example_uniform_5state()
    rep = reduced_propagation_check(reduce_single_time(h, S), h)
    assert not rep.expected_zero()
    assert rep.commutation_residual > 1e-3
