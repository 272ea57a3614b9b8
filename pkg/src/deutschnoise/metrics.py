"""Fidelity and the isotropic (weight, alignment) index.

Fidelity is the root (trace-norm) form ``Tr sqrt(sqrt(rho) sigma sqrt(rho))``,
not its square. Only the root form reproduces the published alignment
values from the published density matrices, see ``tests/test_metrics.py``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numkit import DimensionError, NotPSDError, PSD_TOL, as_matrix, herm_eig, singular_values
from .qstate import density, pure_state

__all__ = [
    "IsotropicIndex",
    "DEGENERATE_WEIGHT",
    "fidelity",
    "fidelity_2x2",
    "trace_distance",
    "isotropic_decompose",
    "alignment",
    "isotropic_index",
]

DEGENERATE_WEIGHT = 1.0 - 1e-9


@dataclass(frozen=True)
class IsotropicIndex:
    weight: float
    alignment: float


def _state(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return density(x) if x.ndim == 1 else as_matrix(x)


def _root_factor(rho) -> np.ndarray:
    """``A`` with ``rho = A A^dagger``, built from the eigen-decomposition."""
    w, v = herm_eig(rho)
    if w[0] < -PSD_TOL:
        raise NotPSDError(f"state has eigenvalue {w[0]:.3e}")
    return v * np.sqrt(np.clip(w, 0.0, None))


def _fidelity_from_factors(a: np.ndarray, b: np.ndarray) -> float:
    # Tr sqrt(sqrt(rho) sigma sqrt(rho)) is the trace norm of sqrt(rho) sqrt(sigma),
    # and the trace norm is unchanged by replacing either root with A or B
    f = float(np.sum(singular_values(a.conj().T @ b)))
    return min(max(f, 0.0), 1.0)


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity in root form; pure states may be passed as vectors."""
    rho = _state(rho)
    sigma = _state(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"states of shape {rho.shape} and {sigma.shape}")
    return _fidelity_from_factors(_root_factor(rho), _root_factor(sigma))


def fidelity_2x2(rho, sigma) -> float:
    """Closed-form one-qubit fidelity: F^2 = Tr(rho sigma) + 2 sqrt(det rho det sigma)."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    overlap = float(np.real(np.trace(rho @ sigma)))
    dr = max(float(np.real(np.linalg.det(rho))), 0.0)
    ds = max(float(np.real(np.linalg.det(sigma))), 0.0)
    f2 = overlap + 2.0 * math.sqrt(dr * ds)
    return min(math.sqrt(max(f2, 0.0)), 1.0)


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of ``rho - sigma``."""
    w, _ = herm_eig(_state(rho) - _state(sigma))
    return 0.5 * float(np.sum(np.abs(w)))


def isotropic_decompose(rho) -> tuple[float, np.ndarray]:
    """Split ``rho = w I/2^n + (1 - w) rho_hat`` with ``w = 2^n lambda_min``.

    The remainder ``rho_hat`` has smallest eigenvalue zero. For the maximally
    mixed state (``w`` within 1e-9 of 1) ``rho_hat`` is undefined and I/2^n
    is returned in its place.
    """
    rho = _state(rho)
    d = rho.shape[0]
    w, _ = herm_eig(rho)
    lam = float(w[0])
    weight = min(max(d * lam, 0.0), 1.0)
    if weight > DEGENERATE_WEIGHT:
        return weight, np.eye(d, dtype=complex) / d
    rho_hat = (rho - lam * np.eye(d)) / (1.0 - d * lam)
    return weight, rho_hat


def alignment(rho, reference) -> float:
    """Fidelity of ``rho_hat`` with the reference minus that with its isotropic complement.

    ``reference`` is a pure state vector |phi>. The complement is
    (I - |phi><phi|) / (2^n - 1). Maximally mixed input has no preferred
    direction and gets alignment 0.
    """
    rho = _state(rho)
    phi = pure_state(reference)
    if phi.size != rho.shape[0]:
        raise DimensionError("reference state does not match the density matrix")
    d = rho.shape[0]
    w, v = herm_eig(rho)
    lam = float(w[0])
    if d * lam > DEGENERATE_WEIGHT:
        return 0.0
    # rho_hat shares the eigenvectors of rho; its smallest eigenvalue is exactly 0
    hat = v * np.sqrt(np.clip((w - lam) / (1.0 - d * lam), 0.0, None))
    ref = np.zeros((d, d), dtype=complex)
    ref[:, 0] = phi
    # (I - P) / (d - 1) is a scaled projector, so its square root is (I - P) / sqrt(d - 1)
    complement = (np.eye(d) - np.outer(phi, np.conj(phi))) / np.sqrt(d - 1)
    a = _fidelity_from_factors(hat, ref) - _fidelity_from_factors(hat, complement)
    return min(max(a, -1.0), 1.0)


def isotropic_index(rho, reference) -> IsotropicIndex:
    weight, _ = isotropic_decompose(rho)
    return IsotropicIndex(weight=weight, alignment=alignment(rho, reference))
