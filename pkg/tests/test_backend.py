"""The numba and numpy kernel editions compute identical results."""

import math

import numpy as np
import pytest

import oracles
from snfourier import _backend
from snfourier.perms import all_one_lines
from snfourier.yor import _generator_data

RNG = np.random.default_rng(41)


def test_backend_flag_is_reported():
    assert _backend.ACTIVE_BACKEND in ("numba", "numpy")
    assert _backend.USE_NUMBA == (_backend.ACTIVE_BACKEND == "numba")


def test_swap_sequence_visits_every_rank_once():
    for n in range(2, 7):
        seq = _backend.swap_sequence(n)
        assert seq.shape == (math.factorial(n) - 1,)
        digits = np.zeros((1, n), dtype=np.int64)
        seen = {0}
        weights = _backend.factorial_weights(n)
        for k in seq:
            digits = _backend.apply_swaps(digits, np.array([k]))
            seen.add(int(digits[0] @ weights))
        assert seen == set(range(math.factorial(n)))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_both_editions_agree_on_integer_kernels(n):
    lines = np.asarray(all_one_lines(n))
    digits = np.asarray(_backend.all_digits(n))
    seq = np.asarray(_backend.swap_sequence(n))

    for name in ("encode_batch", "decode_batch", "apply_swaps"):
        nb = _backend.IMPL_NUMBA[name]
        np_ = _backend.IMPL_NUMPY[name]
        if name == "encode_batch":
            assert np.array_equal(nb(lines), np_(lines))
        elif name == "decode_batch":
            assert np.array_equal(nb(digits), np_(digits))
        else:
            assert np.array_equal(nb(digits, seq), np_(digits, seq))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_both_editions_agree_on_irrep_stacks(n):
    from snfourier.partitions import enumerate_partitions

    weights = np.asarray(_backend.factorial_weights(n))
    seq = np.asarray(_backend.swap_sequence(n))
    for lam in enumerate_partitions(n):
        diag, offd, partner = _generator_data(lam)
        nb = _backend.IMPL_NUMBA["irrep_stack"](
            seq, np.asarray(diag), np.asarray(offd), np.asarray(partner), weights
        )
        np_ = _backend.IMPL_NUMPY["irrep_stack"](
            seq, np.asarray(diag), np.asarray(offd), np.asarray(partner), weights
        )
        assert np.allclose(nb, np_, atol=1e-14)


@pytest.mark.parametrize("n", [3, 4])
def test_both_editions_agree_on_convolution(n):
    fact = math.factorial(n)
    q = oracles.random_probability(RNG, fact)
    h = RNG.standard_normal(fact)
    perms0 = np.asarray(_backend.all_perms0(n))
    inv0 = np.asarray(_backend.all_inverses0(n))
    weights = np.asarray(_backend.factorial_weights(n))
    nb = _backend.IMPL_NUMBA["convolve"](q, h, perms0, inv0, weights)
    np_ = _backend.IMPL_NUMPY["convolve"](q, h, perms0, inv0, weights)
    assert np.allclose(nb, np_, atol=1e-12)
    assert np.allclose(np_, oracles.convolve_oracle(q, h, n), atol=1e-12)


def test_all_perms0_matches_lex_order():
    for n in range(2, 6):
        expected = np.asarray(oracles.all_perms_lex(n)) - 1
        assert np.array_equal(np.asarray(_backend.all_perms0(n)), expected)


def test_all_inverses0_are_inverses():
    for n in range(2, 6):
        perms0 = np.asarray(_backend.all_perms0(n))
        inv0 = np.asarray(_backend.all_inverses0(n))
        rows = np.arange(perms0.shape[0])[:, None]
        assert np.array_equal(perms0[rows, inv0], np.tile(np.arange(n), (perms0.shape[0], 1)))
