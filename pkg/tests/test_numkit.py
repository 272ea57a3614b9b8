import numpy as np
import pytest
from hypothesis import given, strategies as st

from deutschnoise import numkit
from deutschnoise.channels import PAPER_G0, PAPER_G0_SIGN_CORRECTED
from deutschnoise.numkit import (
    ConditioningError,
    DimensionError,
    NotPSDError,
    ValidationError,
    herm_eig,
    herm_eig_2x2,
    kron,
    mat_sqrt_psd,
    polar_unitary,
)
from deutschnoise.qstate import GATES

from conftest import random_density, random_hermitian, random_unitary

seeds = st.integers(0, 2**32 - 1)
dims = st.sampled_from([2, 4, 8])


def test_kron_basics():
    assert np.allclose(kron(np.eye(2), np.eye(2)), np.eye(4))
    out = kron(np.array([[1], [0]]), np.array([[0], [1]]))
    assert np.array_equal(out.ravel(), [0, 1, 0, 0])


def test_kron_overflow():
    with pytest.raises(DimensionError):
        kron(np.eye(4), np.eye(4))


@given(seeds)
def test_kron_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_hermitian(rng, 2) for _ in range(3))
    assert np.allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)


def test_herm_eig_trivial():
    assert np.allclose(herm_eig(np.eye(2))[0], [1, 1])
    assert np.allclose(herm_eig(GATES["Z"])[0], [-1, 1])


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        herm_eig(np.array([[0, 1], [0, 0]]))


def test_herm_eig_published_f0(published):
    from deutschnoise.deutsch import Oracle

    rho = published[Oracle.F0]
    # closed form: 1/2 - sqrt(delta^2 + |rho01|^2)
    delta = 0.5 * (rho[0, 0] - rho[1, 1]).real
    expected = 0.5 - np.sqrt(delta**2 + abs(rho[0, 1]) ** 2)
    w, _ = herm_eig(rho)
    assert w[0] == pytest.approx(expected, abs=1e-12)
    assert w[0] == pytest.approx(0.04367, abs=1e-5)


@given(seeds, dims)
def test_herm_eig_reconstruction(seed, d):
    h = random_hermitian(np.random.default_rng(seed), d)
    w, v = herm_eig(h)
    assert np.all(np.diff(w) >= -1e-12)
    assert np.allclose((v * w) @ v.conj().T, h, atol=1e-10)
    assert np.allclose(v.conj().T @ v, np.eye(d), atol=1e-10)


def test_herm_eig_reconstruction_bulk():
    rng = np.random.default_rng(20260101)
    for d in (2, 4, 8):
        for _ in range(1000):
            h = random_hermitian(rng, d)
            w, v = herm_eig(h)
            assert np.max(np.abs((v * w) @ v.conj().T - h)) < 1e-10


@given(seeds, dims)
def test_herm_eig_matches_numpy(seed, d):
    h = random_hermitian(np.random.default_rng(seed), d)
    assert np.allclose(herm_eig(h)[0], np.linalg.eigvalsh(h), atol=1e-10)


@given(seeds)
def test_closed_form_2x2_agrees_with_jacobi(seed):
    h = random_hermitian(np.random.default_rng(seed), 2)
    assert np.allclose(herm_eig_2x2(h), herm_eig(h)[0], atol=1e-12)


def test_herm_eig_degenerate_and_diagonal():
    w, v = herm_eig(np.diag([3.0, 1.0, 1.0, 2.0]))
    assert np.allclose(w, [1, 1, 2, 3])
    assert np.allclose(np.abs(v.conj().T @ v), np.eye(4))


def test_sqrt_trivial():
    assert np.allclose(mat_sqrt_psd(np.eye(2)), np.eye(2))
    assert np.allclose(mat_sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    p0 = np.diag([1.0, 0.0])
    assert np.allclose(mat_sqrt_psd(p0), p0)


def test_sqrt_rejects_negative():
    with pytest.raises(NotPSDError):
        mat_sqrt_psd(np.diag([1.0, -0.1]))


@given(seeds, dims)
def test_sqrt_squares_back(seed, d):
    a = random_density(np.random.default_rng(seed), d)
    s = mat_sqrt_psd(a)
    assert np.allclose(s @ s, a, atol=1e-9)


def test_polar_trivial():
    u = random_unitary(np.random.default_rng(3), 2)
    assert np.allclose(polar_unitary(u), u, atol=1e-10)
    assert np.allclose(polar_unitary(2 * np.eye(2)), np.eye(2))


def test_polar_rejects_singular():
    with pytest.raises(ConditioningError):
        polar_unitary(np.array([[1.0, 0.0], [0.0, 1e-12]]))


@given(seeds, dims)
def test_polar_is_unitary(seed, d):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    u = polar_unitary(a)
    assert np.allclose(u.conj().T @ u, np.eye(d), atol=1e-10)


def test_polar_on_published_g0():
    # the sign-corrected gate is nearly unitary, so the polar factor barely moves it
    shift = np.max(np.abs(polar_unitary(PAPER_G0_SIGN_CORRECTED) - PAPER_G0_SIGN_CORRECTED))
    assert shift < 2e-3
    # the gate as printed has overlapping columns and moves by ~0.07
    shift_printed = np.max(np.abs(polar_unitary(PAPER_G0) - PAPER_G0))
    assert 0.05 < shift_printed < 0.08


def test_as_matrix_validation():
    with pytest.raises(DimensionError):
        numkit.as_matrix(np.eye(3))
    with pytest.raises(DimensionError):
        numkit.as_matrix(np.ones((2, 3)))
    with pytest.raises(ValidationError):
        numkit.as_matrix(np.array([[np.nan, 0], [0, 1]]))


@given(seeds, dims)
def test_singular_values_match_numpy(seed, d):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    assert np.allclose(numkit.singular_values(a), np.linalg.svd(a, compute_uv=False), atol=1e-10)


def test_singular_values_of_rank_deficient():
    a = np.outer([1, 2j], [3, -1])
    s = numkit.singular_values(a)
    assert s[1] == pytest.approx(0.0, abs=1e-15)
    assert s[0] == pytest.approx(np.sqrt(5) * np.sqrt(10))
