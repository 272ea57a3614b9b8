"""Small dense complex linear algebra for 1-3 qubit operators.

Everything here works on plain ``numpy.ndarray`` values of shape (d, d) with
d in {2, 4, 8}. The Hermitian eigensolver is a cyclic complex Jacobi method;
at these sizes it converges in a handful of sweeps and keeps the package
free of LAPACK-specific ordering or phase conventions.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "LinalgError",
    "ValidationError",
    "DimensionError",
    "NotPSDError",
    "ConditioningError",
    "ALLOWED_DIMS",
    "HERMITIAN_TOL",
    "as_matrix",
    "dagger",
    "is_hermitian",
    "is_unitary",
    "kron",
    "herm_eig",
    "herm_eig_2x2",
    "singular_values",
    "mat_sqrt_psd",
    "polar_unitary",
]

ALLOWED_DIMS = (2, 4, 8)
MAX_DIM = 8

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10
PSD_TOL = 1e-10
JACOBI_OFF_TOL = 1e-14
SINGULAR_TOL = 1e-8
_MAX_SWEEPS = 64


class LinalgError(ValueError):
    """Base class for the numeric errors raised by this package."""


class ValidationError(LinalgError):
    pass


class DimensionError(LinalgError):
    pass


class NotPSDError(LinalgError):
    pass


class ConditioningError(LinalgError):
    pass


def as_matrix(a, *, allowed=ALLOWED_DIMS) -> np.ndarray:
    """Return ``a`` as a finite complex square matrix, validating its shape."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if allowed is not None and m.shape[0] not in allowed:
        raise DimensionError(f"matrix dimension {m.shape[0]} not in {allowed}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(a))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a - dagger(a)), initial=0.0) <= tol)


def is_unitary(a, tol: float = UNITARY_TOL) -> bool:
    a = np.asarray(a)
    eye = np.eye(a.shape[0])
    return bool(np.max(np.abs(dagger(a) @ a - eye)) <= tol)


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a ⊗ b`` of matrices or column vectors.

    Vectors (1-D arrays) are accepted so basis kets compose the same way as
    operators. Results larger than 8 in any dimension are rejected.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.kron(a, b)
    if max(out.shape) > MAX_DIM:
        raise DimensionError(f"Kronecker product of size {out.shape} exceeds {MAX_DIM}")
    return out


def herm_eig_2x2(h) -> np.ndarray:
    """Closed-form ascending eigenvalues of a 2x2 Hermitian matrix.

    lambda = mean +- sqrt(delta**2 + |h01|**2) with delta = (h00 - h11) / 2.
    """
    h = as_matrix(h, allowed=(2,))
    mean = 0.5 * (h[0, 0].real + h[1, 1].real)
    half_gap = 0.5 * (h[0, 0].real - h[1, 1].real)
    r = math.hypot(half_gap, abs(h[0, 1]))
    return np.array([mean - r, mean + r])


def herm_eig(h, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Args:
        h: Hermitian matrix (max |h - h^dagger| <= ``tol``).
        tol: Hermiticity tolerance.

    Returns:
        ``(w, v)`` with ``w`` ascending real eigenvalues and ``v`` a unitary
        whose columns are the matching eigenvectors, so that
        ``h == v @ diag(w) @ v^dagger``.
    """
    h = as_matrix(h)
    if not is_hermitian(h, tol):
        raise ValidationError("herm_eig requires a Hermitian matrix")
    return _jacobi(0.5 * (h + dagger(h)))


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi sweeps on an exactly Hermitian array (modified in place)."""
    n = a.shape[0]
    v = np.eye(n, dtype=complex)

    for _ in range(_MAX_SWEEPS):
        off = math.sqrt(2.0 * sum(abs(a[p, q]) ** 2 for p in range(n) for q in range(p + 1, n)))
        if off < JACOBI_OFF_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = a[p, q]
                mag = abs(z)
                if mag < 1e-300:
                    continue
                phase = z / mag
                app = a[p, p].real
                aqq = a[q, q].real
                # real symmetric 2x2 problem [[app, mag], [mag, aqq]] after the phase shift
                theta = 0.5 * math.atan2(2.0 * mag, aqq - app)
                c = math.cos(theta)
                s = math.sin(theta)
                # J = [[c, s*phase], [-s*conj(phase), c]] restricted to (p, q)
                jpp, jpq = c, s * phase
                jqp, jqq = -s * np.conj(phase), c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = col_p * jpp + col_q * jqp
                a[:, q] = col_p * jpq + col_q * jqq
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(jpp) * row_p + np.conj(jqp) * row_q
                a[q, :] = np.conj(jpq) * row_p + np.conj(jqq) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp * jpp + vq * jqp
                v[:, q] = vp * jpq + vq * jqq
    else:  # pragma: no cover - Jacobi converges quadratically at these sizes
        raise LinalgError("Jacobi eigensolver did not converge")

    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def singular_values(m) -> np.ndarray:
    """Singular values of a square matrix in descending order.

    Taken from the Jacobi eigenvalues of the Hermitian dilation
    ``[[0, m], [m^dagger, 0]]``, whose spectrum is ``+-s_i``. Small singular
    values keep an absolute error near machine epsilon, which forming
    ``m^dagger m`` and taking square roots would not.
    """
    m = as_matrix(m)
    n = m.shape[0]
    dil = np.zeros((2 * n, 2 * n), dtype=complex)
    dil[:n, n:] = m
    dil[n:, :n] = dagger(m)
    w, _ = _jacobi(dil)
    return np.clip(w[n:][::-1], 0.0, None)


def mat_sqrt_psd(a, tol: float = PSD_TOL) -> np.ndarray:
    """Principal square root of a Hermitian positive-semidefinite matrix.

    Eigenvalues in ``[-tol, 0)`` are treated as round-off and clipped.
    """
    w, v = herm_eig(a)
    if w[0] < -tol:
        raise NotPSDError(f"matrix has eigenvalue {w[0]:.3e} < -{tol}")
    root = np.sqrt(np.clip(w, 0.0, None))
    r = (v * root) @ dagger(v)
    return 0.5 * (r + dagger(r))


def polar_unitary(a) -> np.ndarray:
    """Unitary factor ``U`` of the polar decomposition ``a = U P``.

    ``U = a (a^dagger a)^{-1/2}`` is the unitary closest to ``a`` in Frobenius
    norm. Used to re-unitarize gate matrices printed with a few digits.
    """
    a = as_matrix(a)
    w, v = herm_eig(dagger(a) @ a)
    if w[0] <= SINGULAR_TOL**2:
        raise ConditioningError(
            f"smallest singular value {math.sqrt(max(w[0], 0.0)):.3e} below {SINGULAR_TOL}"
        )
    inv_root = (v / np.sqrt(w)) @ dagger(v)
    return a @ inv_root
