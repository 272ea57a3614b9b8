import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from deutschnoise.deutsch import ORACLES, Oracle
from deutschnoise.metrics import (
    alignment,
    fidelity,
    fidelity_2x2,
    isotropic_decompose,
    isotropic_index,
    trace_distance,
)
from deutschnoise.numkit import DimensionError, herm_eig
from deutschnoise.qstate import density, ket
from deutschnoise.reference import published_index

from conftest import random_density, random_unitary

seeds = st.integers(0, 2**32 - 1)
dims = st.sampled_from([2, 4, 8])


def test_fidelity_pure_vs_mixed(published):
    rho = published[Oracle.F0]
    # F(|psi>, sigma) = sqrt(<psi|sigma|psi>)
    assert fidelity(ket("0"), rho) == pytest.approx(math.sqrt(rho[0, 0].real), abs=1e-10)
    assert fidelity(ket("0"), rho) == pytest.approx(0.97422, abs=1e-5)


@given(seeds, dims)
def test_fidelity_symmetric_and_bounded(seed, d):
    rng = np.random.default_rng(seed)
    a, b = random_density(rng, d), random_density(rng, d)
    f = fidelity(a, b)
    assert 0.0 <= f <= 1.0
    assert f == pytest.approx(fidelity(b, a), abs=1e-8)
    assert fidelity(a, a) == pytest.approx(1.0, abs=1e-8)


def test_fidelity_closed_form_bulk():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        a, b = random_density(rng, 2), random_density(rng, 2)
        assert abs(fidelity(a, b) - fidelity_2x2(a, b)) < 1e-10


def test_fidelity_shape_mismatch():
    with pytest.raises(DimensionError):
        fidelity(np.eye(2) / 2, np.eye(4) / 4)


def test_trace_distance():
    assert trace_distance(ket("0"), ket("1")) == pytest.approx(1.0)
    assert trace_distance(np.eye(2) / 2, np.eye(2) / 2) == pytest.approx(0.0)


def test_decompose_examples(published):
    w, hat = isotropic_decompose(ket("0"))
    assert w == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(hat, density(ket("0")))
    w, hat = isotropic_decompose(np.eye(2) / 2)
    assert w == pytest.approx(1.0)
    assert np.allclose(hat, np.eye(2) / 2)


@given(seeds, dims)
def test_decompose_recomposes(seed, d):
    rho = random_density(np.random.default_rng(seed), d)
    w, hat = isotropic_decompose(rho)
    assert np.allclose(w * np.eye(d) / d + (1 - w) * hat, rho, atol=1e-10)
    assert herm_eig(hat)[0][0] == pytest.approx(0.0, abs=1e-10)


def test_alignment_examples():
    assert alignment(ket("0"), ket("0")) == pytest.approx(1.0)
    assert alignment(ket("1"), ket("0")) == pytest.approx(-1.0)
    assert isotropic_index(np.eye(2) / 2, ket("0")).alignment == 0.0


@pytest.mark.parametrize("kind", ORACLES)
def test_published_index(published, kind):
    ref = published_index()[kind.value]
    idx = isotropic_index(published[kind], ket(str(kind.ideal_bit)))
    assert idx.weight == pytest.approx(ref["weight"], abs=5e-4)
    assert idx.alignment == pytest.approx(ref["alignment"], abs=5e-4)


def test_squared_fidelity_fails_published_alignment(published):
    rho = published[Oracle.F0]
    _, hat = isotropic_decompose(rho)
    ref = density(ket("0"))
    squared = fidelity(hat, ref) ** 2 - fidelity(hat, np.eye(2) - ref) ** 2
    assert abs(squared - published_index()["f0"]["alignment"]) > 0.05


@given(seeds, dims)
def test_alignment_unitary_covariance(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, d)
    u = random_unitary(rng, d)
    phi = np.zeros(d)
    phi[0] = 1.0
    a = alignment(rho, phi)
    b = alignment(u @ rho @ u.conj().T, u @ phi)
    assert a == pytest.approx(b, abs=1e-10)
