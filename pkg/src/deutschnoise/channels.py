"""Kraus-sum quantum operations.

A channel is an ordered tuple of Kraus operators ``E_k`` acting as
``rho -> sum_k E_k rho E_k^dagger``. Trace preservation is enforced in the
form ``sum_k E_k^dagger E_k = I``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numkit import DimensionError, ValidationError, as_matrix, dagger, is_unitary, polar_unitary
from .qstate import GATES, _as_density
from .reference import published_gates

__all__ = [
    "COMPLETENESS_TOL",
    "INTERPRETATIONS",
    "ORDERS",
    "KrausChannel",
    "GadParams",
    "MaGates",
    "PAPER_G0",
    "PAPER_G0_SIGN_CORRECTED",
    "PAPER_G1",
    "identity_channel",
    "unitary_channel",
    "gad_channel",
    "apply_channel",
    "rotation_error",
    "interpret_gate",
    "ma_channel",
    "ma_apply",
    "compose",
    "error_model",
]

COMPLETENESS_TOL = 1e-10
MA_UNITARY_TOL = 1e-8

INTERPRETATIONS = ("as-printed", "adjoint", "transpose", "conjugate")
ORDERS = ("ma-then-gad", "gad-then-ma")

# Misalignment gates as printed, three decimals.
PAPER_G0 = published_gates()["g0"]
PAPER_G1 = published_gates()["g1"]
# G0 with the sign of Im G0[0, 1] flipped; the printed matrix has columns
# overlapping by ~0.14i, the corrected one is unitary to ~3e-3.
PAPER_G0_SIGN_CORRECTED = PAPER_G0.copy()
PAPER_G0_SIGN_CORRECTED[0, 1] = np.conj(PAPER_G0[0, 1])
for _m in (PAPER_G0, PAPER_G1, PAPER_G0_SIGN_CORRECTED):
    _m.setflags(write=False)


@dataclass(frozen=True)
class KrausChannel:
    ops: tuple
    label: str = ""

    def __post_init__(self):
        ops = tuple(as_matrix(e) for e in self.ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        if any(e.shape[0] != dim for e in ops):
            raise DimensionError("Kraus operators have different dimensions")
        for e in ops:
            e.setflags(write=False)
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def completeness_error(self) -> float:
        """max |sum_k E_k^dagger E_k - I| over entries."""
        s = sum(dagger(e) @ e for e in self.ops)
        return float(np.max(np.abs(s - np.eye(self.dim))))

    def is_trace_preserving(self, tol: float = COMPLETENESS_TOL) -> bool:
        return self.completeness_error() <= tol

    def __call__(self, rho) -> np.ndarray:
        return apply_channel(self, rho)


@dataclass(frozen=True)
class GadParams:
    """Generalized amplitude damping parameters.

    ``gamma`` is the damping probability, ``p`` the ground-state weight of the
    bath's thermal state diag(p, 1 - p).
    """

    gamma: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and 0.0 <= self.gamma <= 1.0):
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not (math.isfinite(self.p) and 0.5 < self.p <= 1.0):
            raise ValueError(f"p must lie in (1/2, 1], got {self.p}")


@dataclass(frozen=True)
class MaGates:
    """Outcome-conditional misalignment gates: ``g0`` for bit 0, ``g1`` for bit 1."""

    g0: np.ndarray
    g1: np.ndarray

    def __post_init__(self):
        for name in ("g0", "g1"):
            m = as_matrix(getattr(self, name), allowed=(2,)).copy()
            if not is_unitary(m, MA_UNITARY_TOL):
                raise ValidationError(f"{name} is not unitary; re-unitarize with MaGates.from_printed")
            m.setflags(write=False)
            object.__setattr__(self, name, m)

    @classmethod
    def from_printed(cls, g0, g1) -> "MaGates":
        """Build from rounded matrices, projecting each onto the nearest unitary."""
        return cls(polar_unitary(g0), polar_unitary(g1))

    @classmethod
    def paper(cls, g0_variant: str = "printed") -> "MaGates":
        """Re-unitarized paper gates; ``g0_variant`` is "printed" or "sign-corrected"."""
        if g0_variant == "printed":
            g0 = PAPER_G0
        elif g0_variant == "sign-corrected":
            g0 = PAPER_G0_SIGN_CORRECTED
        else:
            raise ValueError(f"unknown g0 variant {g0_variant!r}")
        return cls.from_printed(g0, PAPER_G1)

    @classmethod
    def identity(cls) -> "MaGates":
        return cls(np.eye(2), np.eye(2))

    def for_bit(self, bit: int) -> np.ndarray:
        if bit == 0:
            return self.g0
        if bit == 1:
            return self.g1
        raise ValueError(f"ideal bit must be 0 or 1, got {bit!r}")


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),), label="identity")


def unitary_channel(u, label: str = "unitary") -> KrausChannel:
    u = as_matrix(u)
    if not is_unitary(u, MA_UNITARY_TOL):
        raise ValidationError("unitary_channel needs a unitary matrix")
    return KrausChannel((u,), label=label)


def gad_channel(params: GadParams, *, paper_literal: bool = False) -> KrausChannel:
    """Generalized amplitude damping channel.

    The standard operators relax toward diag(p, 1 - p). With
    ``paper_literal=True`` the second operator is sqrt(p)*diag(0, sqrt(gamma))
    as typeset in the source. That set is still trace preserving but never
    moves population out of |1>, so it only serves as a negative control.
    """
    g, p = params.gamma, params.p
    sg, s1g = math.sqrt(g), math.sqrt(1.0 - g)
    sp, s1p = math.sqrt(p), math.sqrt(1.0 - p)
    e0 = sp * np.array([[1.0, 0.0], [0.0, s1g]])
    if paper_literal:
        e1 = sp * np.array([[0.0, 0.0], [0.0, sg]])
    else:
        e1 = sp * np.array([[0.0, sg], [0.0, 0.0]])
    e2 = s1p * np.array([[s1g, 0.0], [0.0, 1.0]])
    e3 = s1p * np.array([[0.0, 0.0], [sg, 0.0]])
    label = f"GAD(gamma={g:.6g}, p={p:.6g}{', paper-literal' if paper_literal else ''})"
    return KrausChannel((e0, e1, e2, e3), label=label)


def apply_channel(ch: KrausChannel, rho, *, check: bool = True) -> np.ndarray:
    """``sum_k E_k rho E_k^dagger``; refuses channels that are not trace preserving."""
    rho = _as_density(rho)
    if rho.shape[0] != ch.dim:
        raise DimensionError(f"channel of dimension {ch.dim} applied to state {rho.shape}")
    if check and not ch.is_trace_preserving():
        raise ValidationError(
            f"channel {ch.label!r} is not trace preserving "
            f"(completeness error {ch.completeness_error():.2e})"
        )
    return sum(e @ rho @ dagger(e) for e in ch.ops)


def rotation_error(axis: str, epsilon: float) -> np.ndarray:
    """Systematic rotation ``exp(i epsilon sigma_axis) = cos(eps) I + i sin(eps) sigma``."""
    if axis not in ("X", "Y", "Z"):
        raise ValueError(f"axis must be X, Y or Z, got {axis!r}")
    if not math.isfinite(epsilon):
        raise ValueError("epsilon must be finite")
    return math.cos(epsilon) * np.eye(2, dtype=complex) + 1j * math.sin(epsilon) * GATES[axis]


def interpret_gate(g, interpretation: str) -> np.ndarray:
    """Map a misalignment gate to the unitary actually applied as the error."""
    g = np.asarray(g, dtype=complex)
    if interpretation == "as-printed":
        return g
    if interpretation == "adjoint":
        return dagger(g)
    if interpretation == "transpose":
        return g.T.copy()
    if interpretation == "conjugate":
        return np.conj(g)
    raise ValueError(f"unknown interpretation {interpretation!r}; choose from {INTERPRETATIONS}")


def ma_channel(gates: MaGates, ideal_bit: int, interpretation: str = "as-printed") -> KrausChannel:
    u = interpret_gate(gates.for_bit(ideal_bit), interpretation)
    return unitary_channel(u, label=f"MA(bit={ideal_bit}, {interpretation})")


def ma_apply(gates: MaGates, ideal_bit: int, rho, interpretation: str = "as-printed") -> np.ndarray:
    """Apply the misalignment gate selected by ``ideal_bit`` to a one-qubit state."""
    rho = _as_density(rho)
    if rho.shape != (2, 2):
        raise DimensionError("misalignment acts on a single qubit")
    return apply_channel(ma_channel(gates, ideal_bit, interpretation), rho)


def compose(first: KrausChannel, second: KrausChannel) -> KrausChannel:
    """Channel equal to ``second(first(rho))``; Kraus set ``{F_j E_i}``."""
    if first.dim != second.dim:
        raise DimensionError("cannot compose channels of different dimension")
    ops = tuple(f @ e for f in second.ops for e in first.ops)
    return KrausChannel(ops, label=f"{second.label} o {first.label}")


def error_model(
    gad: GadParams | None,
    gates: MaGates | None = None,
    ideal_bit: int = 0,
    interpretation: str = "as-printed",
    order: str = "ma-then-gad",
) -> KrausChannel:
    """Single-qubit noise model: optional misalignment gate plus optional GAD."""
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}")
    ma = ma_channel(gates, ideal_bit, interpretation) if gates is not None else None
    damp = gad_channel(gad) if gad is not None else None
    parts = [ma, damp] if order == "ma-then-gad" else [damp, ma]
    parts = [c for c in parts if c is not None]
    if not parts:
        return identity_channel(2)
    out = parts[0]
    for c in parts[1:]:
        out = compose(out, c)
    return out
