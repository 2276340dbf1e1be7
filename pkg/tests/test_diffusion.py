"""Lazy transposition walk: kernel, spectral application, success bounds."""

import math
from fractions import Fraction

import numpy as np
import pytest

import oracles
from snfourier.diffusion import DiffusionKernel, apply_diffusion_born, \
    apply_diffusion_spectral, kernel_as_function, success_probability_lower_bound, \
    success_probability_t0
from snfourier.errors import AnnihilatedStateError
from snfourier.partitions import Partition, diffusion_eigenvalue, \
    enumerate_partitions, irrep_dimension
from snfourier.transform import FourierSpectrum, convolve, delta_spectrum, \
    gft_forward, gft_inverse

RNG = np.random.default_rng(23)


def random_unit_state(n):
    return oracles.random_unit(RNG, math.factorial(n))


def test_kernel_frozen_n3():
    q = kernel_as_function(DiffusionKernel(p=0.4, n=3))
    assert np.allclose(q, [0.4, 0.2, 0.2, 0.0, 0.0, 0.2], atol=1e-15)


def test_kernel_p1_is_delta():
    q = kernel_as_function(DiffusionKernel(p=1.0, n=4))
    expected = np.zeros(24)
    expected[0] = 1.0
    assert np.array_equal(q, expected)


def test_kernel_normalization_and_support():
    for n in range(2, 7):
        for p in (0.1, 0.5, 0.9):
            q = kernel_as_function(DiffusionKernel(p=p, n=n))
            assert q.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.count_nonzero(q) == 1 + math.comb(n, 2)


def test_kernel_is_class_function():
    n = 5
    q = kernel_as_function(DiffusionKernel(p=0.3, n=n))
    seen = {}
    for r, ol in enumerate(oracles.all_perms_lex(n)):
        ctype = oracles.cycle_type(ol)
        seen.setdefault(ctype, q[r])
        assert q[r] == seen[ctype]


def test_kernel_validation():
    for bad in (dict(p=-0.1, n=3), dict(p=1.5, n=3), dict(p=0.5, n=1),
                dict(p=0.5, n=3, d=0)):
        with pytest.raises(ValueError):
            DiffusionKernel(**bad)


def test_claim1_worked_example():
    out, ps = apply_diffusion_spectral(delta_spectrum(3), DiffusionKernel(p=0.5, n=3))
    assert ps == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert ps == pytest.approx(success_probability_t0(3, 0.5), abs=1e-12)
    assert out.total_energy() == pytest.approx(1.0, abs=1e-12)


def test_p1_leaves_spectrum_alone():
    n = 4
    spec = gft_forward(random_unit_state(n), "unitary")
    out, ps = apply_diffusion_spectral(spec, DiffusionKernel(p=1.0, n=n))
    assert ps == pytest.approx(1.0, abs=1e-12)
    for lam in enumerate_partitions(n):
        assert np.allclose(out.blocks[lam], spec.blocks[lam], atol=1e-12)


def test_spectral_route_equals_direct_convolution():
    n = 4
    q = kernel_as_function(DiffusionKernel(p=0.6, n=n))
    for d in (1, 2):
        h = random_unit_state(n)
        out, ps = apply_diffusion_spectral(
            gft_forward(h, "unitary"), DiffusionKernel(p=0.6, n=n, d=d)
        )
        direct = h
        for _ in range(d):
            direct = convolve(q, direct)
        norm = np.linalg.norm(direct)
        assert ps == pytest.approx(norm**2, abs=1e-10)
        target = gft_forward(direct / norm, "unitary")
        for lam in enumerate_partitions(n):
            assert np.allclose(out.blocks[lam], target.blocks[lam], atol=1e-10)


def test_t0_formula_three_routes():
    for n in range(2, 8):
        fact = math.factorial(n)
        for p in (0.1, 0.25, 0.5, 0.75, 0.9):
            closed = success_probability_t0(n, p)
            assert closed == pytest.approx(
                p * p + 2.0 * (1.0 - p) ** 2 / (n * (n - 1)), abs=1e-15
            )
            by_blocks = sum(
                float(diffusion_eigenvalue(lam, p)) ** 2
                * irrep_dimension(lam) ** 2 / fact
                for lam in enumerate_partitions(n)
            )
            assert closed == pytest.approx(by_blocks, abs=1e-10)
            _, measured = apply_diffusion_spectral(
                delta_spectrum(n), DiffusionKernel(p=p, n=n)
            )
            assert closed == pytest.approx(measured, abs=1e-10)


def test_lower_bound_lazy_regime():
    b = success_probability_lower_bound(4, 0.75, 1)
    assert b.value == pytest.approx(0.25, abs=1e-15)
    assert b.regime == "lazy"
    assert success_probability_lower_bound(5, 1.0, 3).value == 1.0
    assert success_probability_lower_bound(6, 0.9, 2).value == pytest.approx(
        0.8**4, abs=1e-12
    )


def test_lower_bound_rational_regime():
    b = success_probability_lower_bound(4, Fraction(1, 3), 2)
    assert b.regime == "rational"
    assert not b.from_float
    assert b.value == pytest.approx(float(Fraction(4, 9 * 256) ** 2), abs=1e-20)
    f = success_probability_lower_bound(4, 0.3, 1)
    assert f.from_float
    assert f.value is not None and 0.0 < f.value < 1e-10


def test_lower_bound_inapplicable_when_eigenvalue_vanishes():
    # p = 1/2 kills the sign block
    b = success_probability_lower_bound(4, Fraction(1, 2), 1)
    assert b.value is None
    assert "inapplicable" in b.note


def test_lower_bound_rejects_p_zero():
    with pytest.raises(ValueError):
        success_probability_lower_bound(4, 0.0, 1)


def test_bound_dominated_by_measured():
    for _ in range(20):
        n = int(RNG.integers(2, 6))
        p = float(RNG.uniform(0.51, 0.99))
        d = int(RNG.integers(1, 4))
        spec = gft_forward(random_unit_state(n), "unitary")
        _, measured = apply_diffusion_spectral(spec, DiffusionKernel(p=p, n=n, d=d))
        bound = success_probability_lower_bound(n, p, d)
        assert measured >= bound.value - 1e-12


def test_spectral_input_contract():
    n = 3
    plain = gft_forward(random_unit_state(n), "plain")
    with pytest.raises(ValueError):
        apply_diffusion_spectral(plain, DiffusionKernel(p=0.5, n=n))
    unnormalized = gft_forward(2.0 * random_unit_state(n), "unitary")
    with pytest.raises(ValueError):
        apply_diffusion_spectral(unnormalized, DiffusionKernel(p=0.5, n=n))


def test_annihilation_on_sign_state():
    # alternating state lives in the sign block alone; p = 1/2 zeroes it
    n = 3
    signs = np.array([(-1.0) ** sum(oracles.inversion_digits(ol))
                      for ol in oracles.all_perms_lex(n)])
    spec = gft_forward(signs / np.linalg.norm(signs), "unitary")
    with pytest.raises(AnnihilatedStateError):
        apply_diffusion_spectral(spec, DiffusionKernel(p=0.5, n=n))


def test_born_uniform_fixed_point():
    n = 4
    psi = np.full(24, 1.0 / math.sqrt(24.0))
    out, renorm = apply_diffusion_born(
        gft_forward(psi, "unitary"), DiffusionKernel(p=0.35, n=n)
    )
    assert renorm == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(gft_inverse(out), psi, atol=1e-12)


def test_born_renorm_matches_direct_space():
    n = 4
    h = oracles.random_probability(RNG, 24)
    psi = np.sqrt(h)
    kern = DiffusionKernel(p=0.5, n=n)
    out, renorm = apply_diffusion_born(gft_forward(psi, "unitary"), kern)
    direct = convolve(kernel_as_function(kern), psi)
    assert renorm == pytest.approx(np.linalg.norm(direct), abs=1e-10)
    assert np.allclose(gft_inverse(out), direct / np.linalg.norm(direct), atol=1e-10)


def test_born_keeps_nonnegative_support():
    n = 4
    for _ in range(5):
        psi = np.sqrt(oracles.random_probability(RNG, 24, floor=0.0))
        out, _ = apply_diffusion_born(
            gft_forward(psi, "unitary"), DiffusionKernel(p=0.7, n=n)
        )
        assert np.min(gft_inverse(out)) > -1e-12


def test_born_mixes_toward_uniform():
    n = 5
    fact = math.factorial(n)
    psi = np.sqrt(oracles.random_probability(RNG, fact))
    spec = gft_forward(psi, "unitary")
    kern = DiffusionKernel(p=0.5, n=n)
    uniform = np.full(fact, 1.0 / fact)
    tv = None
    for _ in range(25):
        spec, _ = apply_diffusion_born(spec, kern)
        tv = oracles.tv_distance(gft_inverse(spec) ** 2, uniform)
        if tv < 0.01:
            break
    assert tv is not None and tv < 0.01


def test_markov_matrix_route():
    n = 3
    q = kernel_as_function(DiffusionKernel(p=0.4, n=n))
    h = oracles.random_probability(RNG, 6)
    big_q = oracles.markov_matrix_oracle(n, q)
    assert np.allclose(big_q @ h, convolve(q, h), atol=1e-12)
    assert np.allclose(big_q.sum(axis=0), np.ones(6), atol=1e-12)
