"""Single-qubit state tomography from X, Y and Z basis counts.

Only computational-basis readout is assumed. X and Y statistics come from
rotating the qubit first: H for X, and S^dagger followed by H for Y.
Reconstruction is linear inversion ``rho = (I + <X> X + <Y> Y + <Z> Z) / 2``;
finite-shot estimates that leave the Bloch ball are pulled back by
eigenvalue clipping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .deutsch import ORACLES, Oracle
from .numkit import ValidationError, as_matrix, dagger, herm_eig, is_hermitian
from .qstate import GATES, _as_density, measure_probs

__all__ = [
    "BASES",
    "RNG_ALGORITHM",
    "CountsRecord",
    "PauliExpectations",
    "TomographyError",
    "basis_rotation",
    "make_rng",
    "sample_counts",
    "expectation_from_counts",
    "pauli_expectations",
    "reconstruct",
    "is_physical",
    "project_to_density",
    "expectations_from_records",
    "reconstruct_from_records",
]

BASES = ("X", "Y", "Z")
RNG_ALGORITHM = "numpy.random.PCG64"
DEFAULT_SHOTS = 8192

TRACE_TOL = 1e-8
MAX_CLIP_DEFICIT = 0.5

Seed = Union[int, Sequence[int]]


class TomographyError(ValueError):
    pass


@dataclass(frozen=True)
class CountsRecord:
    """Tally of one (oracle, basis) measurement cell."""

    oracle: Optional[Oracle]
    basis: str
    shots: int
    n0: int
    n1: int
    seed: Optional[int] = None
    device: Optional[str] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.oracle is not None:
            object.__setattr__(self, "oracle", Oracle.parse(self.oracle))
        if self.basis not in BASES:
            raise TomographyError(f"basis must be one of {BASES}, got {self.basis!r}")
        if self.shots < 1 or self.n0 < 0 or self.n1 < 0 or self.n0 + self.n1 != self.shots:
            raise TomographyError(
                f"inconsistent counts: n0={self.n0}, n1={self.n1}, shots={self.shots}"
            )

    def to_dict(self) -> dict:
        d = {
            "oracle": self.oracle.value if self.oracle is not None else None,
            "basis": self.basis,
            "shots": int(self.shots),
            "counts": {"0": int(self.n0), "1": int(self.n1)},
        }
        if self.seed is not None:
            d["seed"] = int(self.seed)
        if self.device is not None:
            d["device"] = self.device
        d.update(self.meta)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CountsRecord":
        known = {"oracle", "basis", "shots", "counts", "seed", "device"}
        counts = d["counts"]
        return cls(
            oracle=d.get("oracle"),
            basis=d["basis"],
            shots=int(d["shots"]),
            n0=int(counts.get("0", 0)),
            n1=int(counts.get("1", 0)),
            seed=d.get("seed"),
            device=d.get("device"),
            meta={k: v for k, v in d.items() if k not in known},
        )


@dataclass(frozen=True)
class PauliExpectations:
    ex: float
    ey: float
    ez: float

    def __post_init__(self):
        for name in ("ex", "ey", "ez"):
            v = getattr(self, name)
            if not -1.0 - 1e-12 <= v <= 1.0 + 1e-12:
                raise TomographyError(f"{name}={v} outside [-1, 1]")

    def as_array(self) -> np.ndarray:
        return np.array([self.ex, self.ey, self.ez])


def basis_rotation(basis: str) -> np.ndarray:
    """Unitary applied before a Z readout to measure ``basis``."""
    if basis == "Z":
        return np.eye(2, dtype=complex)
    if basis == "X":
        return GATES["H"].copy()
    if basis == "Y":
        return GATES["H"] @ GATES["S_dagger"]
    raise TomographyError(f"basis must be one of {BASES}, got {basis!r}")


def make_rng(seed: Seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_counts(
    rho,
    basis: str,
    shots: int = DEFAULT_SHOTS,
    seed: Seed = 0,
    oracle: Optional[Oracle] = None,
) -> CountsRecord:
    """Simulate ``shots`` single-shot readouts of ``rho`` in ``basis``.

    The draw is a single binomial sample from a PCG64 stream keyed on
    ``seed`` (an int or a sequence of ints), so results depend only on the
    inputs.
    """
    if int(shots) < 1:
        raise TomographyError("shots must be at least 1")
    rho = _as_density(rho)
    u = basis_rotation(basis)
    p0 = measure_probs(u @ rho @ dagger(u))[0]
    n0 = int(make_rng(seed).binomial(int(shots), p0))
    seed_meta = seed if isinstance(seed, (int, np.integer)) else None
    meta = {"rng": RNG_ALGORITHM}
    if seed_meta is None:
        meta["seed_sequence"] = [int(s) for s in seed]
    return CountsRecord(
        oracle=oracle,
        basis=basis,
        shots=int(shots),
        n0=n0,
        n1=int(shots) - n0,
        seed=None if seed_meta is None else int(seed_meta),
        meta=meta,
    )


def expectation_from_counts(c: CountsRecord) -> float:
    """Estimated Pauli expectation P(0) - P(1)."""
    return (c.n0 - c.n1) / c.shots


def pauli_expectations(rho) -> PauliExpectations:
    """Exact expectations Tr(rho X), Tr(rho Y), Tr(rho Z)."""
    rho = as_matrix(rho, allowed=(2,))
    return PauliExpectations(
        *(float(np.real(np.trace(rho @ GATES[b]))) for b in BASES)
    )


def reconstruct(e: PauliExpectations) -> np.ndarray:
    """Linear-inversion estimate; may have a negative eigenvalue."""
    return 0.5 * (np.eye(2) + e.ex * GATES["X"] + e.ey * GATES["Y"] + e.ez * GATES["Z"])


def is_physical(raw, tol: float = 0.0) -> bool:
    """True when the Hermitian matrix ``raw`` has no eigenvalue below ``-tol``."""
    w, _ = herm_eig(0.5 * (as_matrix(raw) + dagger(as_matrix(raw))))
    return bool(w[0] >= -tol)


def project_to_density(raw) -> np.ndarray:
    """Clip negative eigenvalues and renormalize to unit trace.

    Valid density matrices come back unchanged. For one qubit this is the
    radial projection of the Bloch vector onto the unit ball.
    """
    raw = as_matrix(raw)
    if not is_hermitian(raw, TRACE_TOL):
        raise ValidationError("raw estimate is not Hermitian")
    if abs(np.trace(raw).real - 1.0) > TRACE_TOL:
        raise ValidationError(f"raw estimate has trace {np.trace(raw).real:.10g}")
    w, v = herm_eig(0.5 * (raw + dagger(raw)))
    if w[0] >= 0.0:
        return raw.copy()
    deficit = -float(np.sum(w[w < 0]))
    if deficit > MAX_CLIP_DEFICIT:
        raise ValidationError(f"clipping would remove {deficit:.3f} of the trace")
    w = np.clip(w, 0.0, None)
    w = w / w.sum()
    rho = (v * w) @ dagger(v)
    return 0.5 * (rho + dagger(rho))


def expectations_from_records(
    records: Iterable[CountsRecord],
) -> dict[Oracle, PauliExpectations]:
    """Group counts by oracle and turn each basis tally into an expectation.

    Several records for the same cell are pooled. Every oracle that appears
    must have all three bases.
    """
    pooled: dict[tuple, list[int]] = {}
    for r in records:
        key = (r.oracle, r.basis)
        n0, n = pooled.get(key, [0, 0])
        pooled[key] = [n0 + r.n0, n + r.shots]
    oracles = [o for o in ORACLES if any(k[0] is o for k in pooled)]
    if any(k[0] is None for k in pooled):
        oracles.append(None)
    out = {}
    for o in oracles:
        vals = []
        for b in BASES:
            if (o, b) not in pooled:
                name = o.value if o is not None else "<unnamed>"
                raise TomographyError(f"basis {b} absent for oracle {name}")
            n0, n = pooled[(o, b)]
            vals.append((2 * n0 - n) / n)
        out[o] = PauliExpectations(*vals)
    return out


def reconstruct_from_records(records: Iterable[CountsRecord]) -> dict[Oracle, np.ndarray]:
    """Per-oracle density matrices from count records."""
    return {
        o: project_to_density(reconstruct(e))
        for o, e in expectations_from_records(records).items()
    }
