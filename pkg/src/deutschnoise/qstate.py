"""States, gates, circuits, partial trace and projective measurement.

Conventions:

* qubit 0 is the leftmost (first) Kronecker factor, so ``|q0 q1>`` indexes
  row ``2*q0 + q1`` of a two-qubit vector;
* Cnot has its control on the first of its two target indices;
* every public routine works on density matrices. Pure states (1-D
  amplitude vectors) are promoted with :func:`density` on entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .numkit import (
    DimensionError,
    ValidationError,
    as_matrix,
    dagger,
    herm_eig,
    is_hermitian,
    is_unitary,
)

__all__ = [
    "GATES",
    "standard_gate",
    "ket",
    "pure_state",
    "density",
    "validate_density",
    "apply_unitary",
    "Circuit",
    "embed",
    "run_circuit",
    "partial_trace",
    "computational_projectors",
    "measure_probs",
    "post_measure_state",
]

NORM_TOL = 1e-10
DENSITY_TOL = 1e-10
PROJECTOR_TOL = 1e-10
RENORM_DEFICIT = 1e-9

_SQ2 = np.sqrt(0.5)

GATES: dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "H": _SQ2 * np.array([[1, 1], [1, -1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "S_dagger": np.array([[1, 0], [0, -1j]], dtype=complex),
    "Cnot": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
}
for _g in GATES.values():
    _g.setflags(write=False)


def standard_gate(name: str) -> np.ndarray:
    """Return a copy of one of the named gates (H, X, Y, Z, S, S_dagger, Cnot, I)."""
    try:
        return GATES[name].copy()
    except KeyError:
        raise KeyError(f"unknown gate {name!r}; known: {sorted(GATES)}") from None


def ket(bits: Union[str, Sequence[int]]) -> np.ndarray:
    """Computational basis vector, e.g. ``ket("01")`` is |0>|1>."""
    bits = [int(b) for b in bits]
    if not 1 <= len(bits) <= 3 or any(b not in (0, 1) for b in bits):
        raise ValueError(f"invalid basis label {bits}")
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(map(str, bits)), 2)] = 1.0
    return v


def pure_state(amplitudes) -> np.ndarray:
    """Validate an amplitude vector of 1-3 qubits with unit norm."""
    v = np.asarray(amplitudes, dtype=complex)
    if v.ndim != 1 or v.size not in (2, 4, 8):
        raise DimensionError(f"state vector must have length 2, 4 or 8, got {v.shape}")
    if abs(np.vdot(v, v).real - 1.0) > NORM_TOL:
        raise ValidationError("state vector is not normalized")
    return v


def density(state) -> np.ndarray:
    """Density matrix of a pure state vector, or a validated copy of a matrix."""
    s = np.asarray(state, dtype=complex)
    if s.ndim == 1:
        v = pure_state(s)
        return np.outer(v, np.conj(v))
    return validate_density(s)


def validate_density(rho, tol: float = DENSITY_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the matrix."""
    rho = as_matrix(rho)
    if not is_hermitian(rho, tol):
        raise ValidationError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValidationError(f"density matrix trace {np.trace(rho).real:.12g} != 1")
    w, _ = herm_eig(rho)
    if w[0] < -tol:
        raise ValidationError(f"density matrix has negative eigenvalue {w[0]:.3e}")
    return rho


def _as_density(state) -> np.ndarray:
    s = np.asarray(state, dtype=complex)
    if s.ndim == 1:
        return density(s)
    return as_matrix(s)


def apply_unitary(rho, u) -> np.ndarray:
    """Closed-system evolution ``U rho U^dagger``."""
    rho = _as_density(rho)
    u = as_matrix(u)
    if u.shape != rho.shape:
        raise DimensionError(f"unitary {u.shape} does not match state {rho.shape}")
    if not is_unitary(u):
        raise ValidationError("operator is not unitary")
    return u @ rho @ dagger(u)


def _n_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if 2**n != dim or not 1 <= n <= 3:
        raise DimensionError(f"dimension {dim} is not 2, 4 or 8")
    return n


def embed(op, targets: Sequence[int], n_qubits: int) -> np.ndarray:
    """Lift a k-qubit operator acting on ``targets`` to the full register.

    ``targets[0]`` is the operator's own first tensor factor, so for Cnot it
    is the control.
    """
    op = as_matrix(op)
    k = _n_qubits(op.shape[0])
    targets = tuple(int(t) for t in targets)
    if len(targets) != k:
        raise DimensionError(f"{k}-qubit operator given {len(targets)} targets")
    if len(set(targets)) != k or any(not 0 <= t < n_qubits for t in targets):
        raise ValueError(f"invalid target indices {targets} for {n_qubits} qubits")
    rest = [q for q in range(n_qubits) if q not in targets]
    order = list(targets) + rest
    full = np.kron(op, np.eye(2 ** len(rest)))
    # reorder tensor axes from (targets..., rest...) to (0, 1, ..., n-1)
    t = full.reshape((2,) * (2 * n_qubits))
    inv = np.argsort(order)
    t = t.transpose(list(inv) + [n_qubits + i for i in inv])
    return t.reshape(2**n_qubits, 2**n_qubits)


@dataclass(frozen=True)
class Circuit:
    """Gate sequence on 1-3 qubits, applied left to right.

    Each step is ``(gate, targets)`` where ``gate`` is a name from
    :data:`GATES` or an explicit unitary matrix.
    """

    n_qubits: int
    steps: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= 3:
            raise ValueError("circuits support 1 to 3 qubits")
        checked = []
        for gate, targets in self.steps:
            m = standard_gate(gate) if isinstance(gate, str) else as_matrix(gate)
            if not is_unitary(m):
                raise ValidationError(f"step {gate!r} is not unitary")
            targets = tuple(int(t) for t in np.atleast_1d(targets))
            embed(m, targets, self.n_qubits)  # validates indices
            checked.append((gate if isinstance(gate, str) else m, targets))
        object.__setattr__(self, "steps", tuple(checked))

    def then(self, gate, *targets: int) -> "Circuit":
        """Return a new circuit with one more step appended."""
        return Circuit(self.n_qubits, self.steps + ((gate, targets),))

    def extend(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise DimensionError("cannot join circuits of different width")
        return Circuit(self.n_qubits, self.steps + other.steps)

    def unitary(self) -> np.ndarray:
        u = np.eye(2**self.n_qubits, dtype=complex)
        for gate, targets in self.steps:
            m = standard_gate(gate) if isinstance(gate, str) else gate
            u = embed(m, targets, self.n_qubits) @ u
        return u


def run_circuit(circuit: Circuit, state) -> np.ndarray:
    """Apply every step of ``circuit`` to a pure state or density matrix."""
    rho = _as_density(state)
    if rho.shape[0] != 2**circuit.n_qubits:
        raise DimensionError(
            f"state of dimension {rho.shape[0]} given to a {circuit.n_qubits}-qubit circuit"
        )
    for gate, targets in circuit.steps:
        m = standard_gate(gate) if isinstance(gate, str) else gate
        u = embed(m, targets, circuit.n_qubits)
        rho = u @ rho @ dagger(u)
    return rho


def partial_trace(rho, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on the qubits listed in ``keep`` (sorted order)."""
    rho = _as_density(rho)
    n = _n_qubits(rho.shape[0])
    keep = sorted({int(k) for k in keep})
    if not keep or any(not 0 <= k < n for k in keep):
        raise ValueError(f"invalid qubit indices {keep} for {n} qubits")
    traced = [q for q in range(n) if q not in keep]
    t = rho.reshape((2,) * (2 * n))
    letters = "abcdefghijklmnop"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for q in traced:
        col[q] = row[q]
    out = "".join(row[q] for q in keep) + "".join(col[q] for q in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    d = 2 ** len(keep)
    return reduced.reshape(d, d)


def computational_projectors(dim: int = 2) -> list[np.ndarray]:
    """Rank-1 projectors onto the computational basis states."""
    return [np.diag(np.eye(dim, dtype=complex)[i]) for i in range(dim)]


def _check_projectors(projectors, dim: int) -> list[np.ndarray]:
    ps = [as_matrix(p) for p in projectors]
    if not ps or any(p.shape[0] != dim for p in ps):
        raise DimensionError("projectors must match the state dimension")
    for p in ps:
        if not is_hermitian(p, PROJECTOR_TOL) or np.max(np.abs(p @ p - p)) > PROJECTOR_TOL:
            raise ValidationError("measurement operator is not an orthogonal projector")
    if np.max(np.abs(sum(ps) - np.eye(dim))) > PROJECTOR_TOL:
        raise ValidationError("projectors do not sum to the identity")
    return ps


def measure_probs(rho, projectors=None) -> np.ndarray:
    """Outcome probabilities ``Tr(P_i rho)`` of a projective measurement.

    Tiny negative values from round-off are clipped and the vector
    renormalized; a deficit larger than 1e-9 is an error.
    """
    rho = _as_density(rho)
    ps = _check_projectors(
        projectors if projectors is not None else computational_projectors(rho.shape[0]),
        rho.shape[0],
    )
    probs = np.array([np.trace(p @ rho).real for p in ps])
    clipped = np.clip(probs, 0.0, None)
    total = clipped.sum()
    if abs(total - 1.0) > RENORM_DEFICIT:
        raise ValidationError(f"probabilities sum to {total:.12g}; state is not normalized")
    return clipped / total


def post_measure_state(rho, projectors=None) -> np.ndarray:
    """Non-selective post-measurement state ``sum_i P_i rho P_i^dagger``."""
    rho = _as_density(rho)
    ps = _check_projectors(
        projectors if projectors is not None else computational_projectors(rho.shape[0]),
        rho.shape[0],
    )
    return sum(p @ rho @ dagger(p) for p in ps)
