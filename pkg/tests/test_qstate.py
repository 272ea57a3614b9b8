import numpy as np
import pytest
from hypothesis import given, strategies as st

from deutschnoise.deutsch import Oracle
from deutschnoise.numkit import DimensionError, ValidationError, herm_eig
from deutschnoise.qstate import (
    GATES,
    Circuit,
    apply_unitary,
    density,
    embed,
    ket,
    measure_probs,
    partial_trace,
    post_measure_state,
    run_circuit,
    standard_gate,
    validate_density,
)

from conftest import random_density, random_unitary

seeds = st.integers(0, 2**32 - 1)
dims = st.sampled_from([2, 4, 8])

PLUS = np.array([1, 1]) / np.sqrt(2)


def test_gate_table():
    assert np.allclose(standard_gate("H"), np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    cnot = standard_gate("Cnot")
    assert np.allclose(cnot[:2, :2], np.eye(2))
    assert np.allclose(cnot[2:, 2:], GATES["X"])
    assert np.allclose(GATES["S_dagger"] @ GATES["S_dagger"], GATES["Z"], atol=1e-12)
    with pytest.raises(KeyError):
        standard_gate("T")


def test_gates_are_read_only():
    with pytest.raises(ValueError):
        GATES["X"][0, 0] = 5


def test_bell_state():
    rho = density(np.kron(PLUS, [1, 0]))
    out = apply_unitary(rho, GATES["Cnot"])
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(out, np.outer(bell, bell), atol=1e-12)


def test_apply_unitary_examples():
    one = density(ket("1"))
    assert np.allclose(apply_unitary(one, GATES["Z"]), one)
    assert np.allclose(apply_unitary(density(ket("0")), GATES["H"]), 0.5 * np.ones((2, 2)))
    with pytest.raises(ValidationError):
        apply_unitary(one, np.array([[1, 1], [0, 1]]))
    with pytest.raises(DimensionError):
        apply_unitary(one, np.eye(4))


@given(seeds, dims)
def test_apply_unitary_preserves_spectrum(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, d)
    out = apply_unitary(rho, random_unitary(rng, d))
    assert abs(np.trace(out) - 1) < 1e-10
    assert np.allclose(out, out.conj().T, atol=1e-10)
    assert np.allclose(herm_eig(out)[0], herm_eig(rho)[0], atol=1e-10)


def test_circuit_examples():
    rho = density(ket("00"))
    assert np.allclose(run_circuit(Circuit(2), rho), rho)
    assert np.allclose(run_circuit(Circuit(2).then("X", 1), rho), density(ket("01")))


def test_f0_circuit_by_hand():
    # H (x) HX, then identity oracle, then H (x) I, multiplied out explicitly
    u = np.kron(GATES["H"], np.eye(2)) @ np.kron(GATES["H"], GATES["H"] @ GATES["X"])
    expected = u @ density(ket("00")) @ u.conj().T
    c = Circuit(2).then("X", 1).then("H", 0).then("H", 1).then("H", 0)
    out = run_circuit(c, ket("00"))
    assert np.allclose(out, expected, atol=1e-12)
    assert np.allclose(partial_trace(out, [0]), density(ket("0")), atol=1e-12)


def test_circuit_unitary_matches_run():
    c = Circuit(3).then("H", 0).then("Cnot", 0, 2).then("S", 1).then("Cnot", 2, 1)
    u = c.unitary()
    rho = density(ket("000"))
    assert np.allclose(run_circuit(c, rho), u @ rho @ u.conj().T)


def test_embed_control_is_first_target():
    # control on qubit 1, target qubit 0: |01> -> |11>
    u = embed(GATES["Cnot"], (1, 0), 2)
    assert np.allclose(u @ ket("01"), ket("11"))
    assert np.allclose(u @ ket("10"), ket("10"))
    with pytest.raises(ValueError):
        embed(GATES["Cnot"], (0, 0), 2)


def test_circuit_validation():
    with pytest.raises(ValidationError):
        Circuit(1).then(np.array([[1, 1], [0, 1]]), 0)
    with pytest.raises(ValueError):
        Circuit(4)


@given(seeds)
def test_partial_trace_product(seed):
    rng = np.random.default_rng(seed)
    a, b = random_density(rng, 2), random_density(rng, 4)
    rho = np.kron(a, b)
    assert np.allclose(partial_trace(rho, [0]), a, atol=1e-12)
    assert np.allclose(partial_trace(rho, [1, 2]), b, atol=1e-12)
    assert np.allclose(partial_trace(rho, [0, 1, 2]), rho)


def test_partial_trace_bell():
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(partial_trace(bell, [0]), np.eye(2) / 2, atol=1e-12)


def test_measure_examples(published):
    assert np.allclose(measure_probs(density(PLUS)), [0.5, 0.5])
    assert np.allclose(measure_probs(density(ket("0"))), [1, 0])
    rho = published[Oracle.F0]
    assert np.allclose(measure_probs(rho), [rho[0, 0].real, rho[1, 1].real])
    assert np.allclose(post_measure_state(rho), np.diag(np.diag(rho)))
    assert np.allclose(post_measure_state(density(PLUS)), np.eye(2) / 2)
    diag = np.diag([0.3, 0.7])
    assert np.allclose(post_measure_state(diag), diag)


def test_measure_rejects_bad_projectors():
    with pytest.raises(ValidationError):
        measure_probs(np.eye(2) / 2, [np.diag([1.0, 0.0])])
    with pytest.raises(ValidationError):
        measure_probs(np.diag([0.5, 0.6]))


@given(seeds, dims)
def test_measure_probs_normalized(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, d)
    u = random_unitary(rng, d)
    projectors = [np.outer(u[:, i], u[:, i].conj()) for i in range(d)]
    probs = measure_probs(rho, projectors)
    assert abs(probs.sum() - 1) < 1e-10
    assert np.all(probs >= 0)


@given(seeds, dims)
def test_post_measure_idempotent(seed, d):
    rho = random_density(np.random.default_rng(seed), d)
    once = post_measure_state(rho)
    assert np.allclose(post_measure_state(once), once, atol=1e-12)


def test_validate_density():
    validate_density(np.eye(2) / 2)
    with pytest.raises(ValidationError):
        validate_density(np.diag([1.2, -0.2]))
    with pytest.raises(ValidationError):
        validate_density(np.eye(2))
