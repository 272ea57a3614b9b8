"""Deutsch's algorithm with its four one-bit oracles, ideal and noisy."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .channels import KrausChannel, apply_channel
from .numkit import DimensionError
from .qstate import Circuit, ket, partial_trace, run_circuit

__all__ = [
    "Oracle",
    "ORACLES",
    "DeutschOutcome",
    "oracle_circuit",
    "deutsch_circuit",
    "ideal_output_state",
    "run_ideal",
    "run_noisy",
]

INPUT, ANCILLA = 0, 1


class Oracle(str, enum.Enum):
    """The four Boolean functions f: {0,1} -> {0,1}."""

    F0 = "f0"
    F_ID = "fId"
    F_NOT = "fNot"
    F1 = "f1"

    def __call__(self, x: int) -> int:
        return {"f0": 0, "fId": x, "fNot": 1 - x, "f1": 1}[self.value]

    @property
    def is_constant(self) -> bool:
        return self in (Oracle.F0, Oracle.F1)

    @property
    def ideal_bit(self) -> int:
        """Bit read out on the input qubit by an error-free run: 0 constant, 1 balanced."""
        return 0 if self.is_constant else 1

    @classmethod
    def parse(cls, name: Union[str, "Oracle"]) -> "Oracle":
        if isinstance(name, Oracle):
            return name
        aliases = {"fid": "fId", "f_id": "fId", "fnot": "fNot", "f_not": "fNot"}
        try:
            return cls(aliases.get(str(name).lower(), str(name)))
        except ValueError:
            raise ValueError(f"unknown oracle {name!r}; expected one of f0, fId, fNot, f1") from None


# Row order of the published tables.
ORACLES = (Oracle.F0, Oracle.F_ID, Oracle.F_NOT, Oracle.F1)


@dataclass(frozen=True)
class DeutschOutcome:
    oracle: Oracle
    output_state: np.ndarray
    predicted_bit: int
    success_prob: float


def oracle_circuit(kind: Oracle) -> Circuit:
    """Two-qubit block with U_f |x>|y> = |x>|y xor f(x)>, qubit 0 = x."""
    kind = Oracle.parse(kind)
    c = Circuit(2)
    if kind is Oracle.F_ID:
        c = c.then("Cnot", INPUT, ANCILLA)
    elif kind is Oracle.F_NOT:
        c = c.then("X", INPUT).then("Cnot", INPUT, ANCILLA).then("X", INPUT)
    elif kind is Oracle.F1:
        c = c.then("X", ANCILLA)
    return c


def deutsch_circuit(kind: Oracle) -> Circuit:
    """Full algorithm from |00>: X on ancilla, H on both, oracle, H on input."""
    prep = Circuit(2).then("X", ANCILLA).then("H", INPUT).then("H", ANCILLA)
    return prep.extend(oracle_circuit(kind)).then("H", INPUT)


def ideal_output_state(kind: Oracle) -> np.ndarray:
    """Reduced state of the input qubit at the end of an error-free run."""
    rho = run_circuit(deutsch_circuit(kind), ket("00"))
    # the joint state is a product here, so tracing out the ancilla is exact
    return partial_trace(rho, [INPUT])


def _outcome(kind: Oracle, rho: np.ndarray) -> DeutschOutcome:
    p0 = float(np.clip(rho[0, 0].real, 0.0, 1.0))
    p1 = float(np.clip(rho[1, 1].real, 0.0, 1.0))
    return DeutschOutcome(
        oracle=kind,
        output_state=rho,
        predicted_bit=0 if p0 >= p1 else 1,
        success_prob=(p0, p1)[kind.ideal_bit],
    )


def run_ideal(kind: Oracle) -> DeutschOutcome:
    kind = Oracle.parse(kind)
    return _outcome(kind, ideal_output_state(kind))


Model = Union[KrausChannel, Callable[[np.ndarray], np.ndarray], None]


def run_noisy(kind: Oracle, model: Model) -> DeutschOutcome:
    """Apply a one-qubit error model to the ideal output state.

    ``model`` may be a :class:`KrausChannel`, any callable mapping a 2x2
    density matrix to another, or ``None`` for the identity. Channels acting
    on a state of the wrong size raise :class:`DimensionError`.
    """
    kind = Oracle.parse(kind)
    rho = ideal_output_state(kind)
    if model is None:
        out = rho
    elif isinstance(model, KrausChannel):
        if model.dim != 2:
            raise DimensionError(f"error model acts on dimension {model.dim}, expected 2")
        out = apply_channel(model, rho)
    else:
        out = np.asarray(model(rho), dtype=complex)
        if out.shape != (2, 2):
            raise DimensionError("error model must return a 2x2 density matrix")
    return _outcome(kind, out)
