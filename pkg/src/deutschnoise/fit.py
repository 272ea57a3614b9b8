"""Fit noise-model parameters to measured one-qubit density matrices.

The model for an oracle whose error-free answer is bit ``b`` is

    rho_model = GAD_{gamma, p}( U_b |b><b| U_b^dagger )

with ``U_b = I`` for the decoherence-only fit. Fits maximize the summed
fidelity against the observed matrices (or minimize the summed squared
Frobenius distance) with a grid search followed by Nelder-Mead refinement.

Internally everything is done on Bloch vectors. ``U(theta, phi, lam) |b>``
depends on ``lam`` only through a global phase, so ``lam`` cannot be
learned from states and is fixed to 0 in every fitted gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares, minimize

from .channels import GadParams, MaGates
from .deutsch import ORACLES, Oracle
from .numkit import as_matrix

__all__ = [
    "OBJECTIVES",
    "FitEntry",
    "FitDataset",
    "UnitaryParams",
    "FitResult",
    "simplex_minimize",
    "u3",
    "bloch_vector",
    "gad_bloch",
    "fidelity_bloch",
    "fit_gad",
    "fit_unitary",
    "fit_staged",
    "fit_joint",
    "state_action_distance",
]

OBJECTIVES = ("fidelity", "frobenius")

P_MIN = 0.5 + 1e-9
GRID_SIZE = 50
FLAT_TOL = 1e-9
POLISH_TIE_TOL = 1e-13
POLISH_ROUNDS = 6

_GAD_BOUNDS = [(0.0, 1.0), (P_MIN, 1.0)]
_THETA_BOUNDS = (0.0, math.pi)


# ---------------------------------------------------------------- optimizer


def simplex_minimize(
    objective: Callable[[np.ndarray], float],
    x0: Sequence[float],
    bounds: Optional[Sequence[tuple]] = None,
    tolerance: float = 1e-10,
    max_iters: int = 20000,
    step: float | Sequence[float] = 0.1,
) -> tuple[np.ndarray, float]:
    """Bounded downhill-simplex minimization.

    Thin wrapper over SciPy's Nelder-Mead: trial points are clipped to
    ``bounds`` (``None`` entries mean unbounded) and the search stops once
    every vertex lies within ``tolerance`` of the best one in each
    coordinate, or after ``max_iters`` iterations. ``step`` sets the edge
    lengths of the initial simplex.

    Returns:
        ``(x_best, f_best)``; ``f_best`` is never worse than ``objective(x0)``.
    """
    x0 = np.asarray(x0, dtype=float)
    f0 = float(objective(x0))
    if not math.isfinite(f0):
        raise ValueError(f"objective is not finite at x0 ({f0})")
    n = x0.size
    lo = np.full(n, -np.inf)
    hi = np.full(n, np.inf)
    if bounds is not None:
        for i, b in enumerate(bounds):
            if b is None:
                continue
            lo[i] = -np.inf if b[0] is None else b[0]
            hi[i] = np.inf if b[1] is None else b[1]
        if np.any(lo > hi):
            raise ValueError("inconsistent bounds")
        x0 = np.clip(x0, lo, hi)
        f0 = float(objective(x0))

    steps = np.broadcast_to(np.asarray(step, dtype=float), (n,))
    simplex = [x0.copy()]
    for i in range(n):
        v = x0.copy()
        # step inward when the start sits on an upper bound
        v[i] = x0[i] + steps[i] if x0[i] + steps[i] <= hi[i] else x0[i] - steps[i]
        simplex.append(np.clip(v, lo, hi))

    scipy_bounds = None if bounds is None else list(zip(lo, hi))
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        bounds=scipy_bounds,
        options={
            "initial_simplex": np.array(simplex),
            "xatol": tolerance,
            "fatol": np.inf,
            "maxiter": max_iters,
            "maxfev": 4 * max_iters,
        },
    )
    x = np.clip(np.asarray(res.x, dtype=float), lo, hi)
    f = float(objective(x))
    if f > f0:
        return x0, f0
    return x, f


# ----------------------------------------------------------- model algebra


def u3(theta: float, phi: float, lam: float = 0.0) -> np.ndarray:
    """U(theta, phi, lam) without global phase."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ]
    )


def bloch_vector(rho) -> np.ndarray:
    rho = as_matrix(rho, allowed=(2,))
    return np.array(
        [2.0 * rho[0, 1].real, -2.0 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real]
    )


def gad_bloch(r: np.ndarray, gamma: float, p: float) -> np.ndarray:
    """GAD action on a Bloch vector: transverse part shrinks by sqrt(1-gamma)."""
    shrink = math.sqrt(max(1.0 - gamma, 0.0))
    return np.array([shrink * r[0], shrink * r[1], (1.0 - gamma) * r[2] + gamma * (2.0 * p - 1.0)])


def _rotated_basis_bloch(theta: float, phi: float, bit: int) -> np.ndarray:
    """Bloch vector of U(theta, phi, .) |bit>."""
    v = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
    return v if bit == 0 else -v


def fidelity_bloch(r: np.ndarray, s: np.ndarray) -> float:
    """Root fidelity of two qubit states given by Bloch vectors."""
    a = max(1.0 - float(r @ r), 0.0)
    b = max(1.0 - float(s @ s), 0.0)
    f2 = 0.5 * (1.0 + float(r @ s) + math.sqrt(a * b))
    return math.sqrt(min(max(f2, 0.0), 1.0))


def _score(kind: str, model: np.ndarray, obs: np.ndarray) -> float:
    """Per-entry contribution to the quantity being minimized."""
    if kind == "fidelity":
        return -fidelity_bloch(model, obs)
    d = model - obs
    return 0.5 * float(d @ d)  # squared Frobenius norm of the matrix difference


def state_action_distance(u, v, bit: int) -> float:
    """Max entry deviation between ``u|bit>`` and ``v|bit>`` after phase alignment."""
    a = np.asarray(u, dtype=complex)[:, bit]
    b = np.asarray(v, dtype=complex)[:, bit]
    ov = np.vdot(b, a)
    phase = ov / abs(ov) if abs(ov) > 1e-15 else 1.0
    return float(np.max(np.abs(a - phase * b)))


# ------------------------------------------------------------------- data


@dataclass(frozen=True)
class FitEntry:
    oracle: Oracle
    ideal_bit: int
    observed: np.ndarray

    @property
    def bloch(self) -> np.ndarray:
        return bloch_vector(self.observed)


@dataclass(frozen=True)
class FitDataset:
    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        if not 1 <= len(entries) <= 4:
            raise ValueError("a dataset holds between 1 and 4 oracle entries")
        names = [e.oracle for e in entries]
        if len(set(names)) != len(names):
            raise ValueError("oracles in a dataset must be distinct")
        for e in entries:
            if e.ideal_bit not in (0, 1):
                raise ValueError("ideal bits must be 0 or 1")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_matrices(cls, matrices: Mapping) -> "FitDataset":
        """Build from ``{oracle: observed density matrix}``, in table order."""
        parsed = {Oracle.parse(k): v for k, v in matrices.items()}
        entries = [
            FitEntry(o, o.ideal_bit, as_matrix(parsed[o], allowed=(2,)))
            for o in ORACLES
            if o in parsed
        ]
        return cls(tuple(entries))

    @property
    def oracles(self) -> tuple:
        return tuple(e.oracle for e in self.entries)

    def bits(self) -> list[int]:
        return sorted({e.ideal_bit for e in self.entries})


@dataclass(frozen=True)
class UnitaryParams:
    """Gate angles, canonicalized to theta in [0, pi] and phi, lam in [-pi, pi)."""

    theta: float
    phi: float
    lam: float = 0.0

    def __post_init__(self):
        theta, phi, lam = float(self.theta), float(self.phi), float(self.lam)
        theta = math.fmod(theta, 2 * math.pi)
        if theta < 0:
            theta += 2 * math.pi
        if theta > math.pi:
            # U(2pi - t, phi, lam) ~ U(-t, phi, lam) ~ U(t, phi + pi, lam + pi)
            theta = 2 * math.pi - theta
            phi += math.pi
            lam += math.pi
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", _wrap(phi))
        object.__setattr__(self, "lam", _wrap(lam))

    def matrix(self) -> np.ndarray:
        return u3(self.theta, self.phi, self.lam)


def _wrap(a: float) -> float:
    w = (a + math.pi) % (2 * math.pi) - math.pi
    return -math.pi if w >= math.pi else w


@dataclass(frozen=True)
class FitResult:
    gad: GadParams
    objective_value: float
    objective_kind: str
    per_oracle_fidelity: dict
    method: str
    gates: Optional[MaGates] = None
    gate_params: Optional[tuple] = None
    p_identifiable: bool = True
    notes: tuple = field(default_factory=tuple)

    @property
    def mean_fidelity(self) -> float:
        return float(np.mean(list(self.per_oracle_fidelity.values())))

    @property
    def fidelity_sum(self) -> float:
        return float(sum(self.per_oracle_fidelity.values()))


# ------------------------------------------------------------------- fits


def _check_objective(kind: str) -> None:
    if kind not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {kind!r}")


def _model_blochs(gamma, p, angles: Mapping[int, tuple]) -> dict[int, np.ndarray]:
    out = {}
    for bit, (theta, phi) in angles.items():
        out[bit] = gad_bloch(_rotated_basis_bloch(theta, phi, bit), gamma, p)
    return out


def _per_oracle_fidelity(data: FitDataset, gamma, p, angles) -> dict:
    models = _model_blochs(gamma, p, angles)
    return {e.oracle: fidelity_bloch(models[e.ideal_bit], e.bloch) for e in data.entries}


def _gad_grid(data: FitDataset, kind: str) -> tuple[float, float, float]:
    """Vectorized objective on the coarse (gamma, p) lattice; returns the best point."""
    gammas = np.linspace(0.0, 1.0, GRID_SIZE)
    ps = np.linspace(0.5, 1.0, GRID_SIZE + 1)[1:]
    g, p = np.meshgrid(gammas, ps, indexing="ij")
    total = np.zeros_like(g)
    for e in data.entries:
        s = e.bloch
        z0 = 1.0 if e.ideal_bit == 0 else -1.0
        mz = (1.0 - g) * z0 + g * (2.0 * p - 1.0)  # transverse part stays zero
        if kind == "fidelity":
            a = np.clip(1.0 - mz**2, 0.0, None)
            b = max(1.0 - float(s @ s), 0.0)
            f2 = 0.5 * (1.0 + mz * s[2] + np.sqrt(a * b))
            total -= np.sqrt(np.clip(f2, 0.0, 1.0))
        else:
            total += 0.5 * (s[0] ** 2 + s[1] ** 2 + (mz - s[2]) ** 2)
    i, j = np.unravel_index(np.argmin(total), total.shape)
    return float(gammas[i]), float(ps[j]), float(total[i, j])


def fit_gad(data: FitDataset, objective_kind: str = "fidelity") -> FitResult:
    """Fit (gamma, p) with no misalignment gates to every entry at once."""
    _check_objective(objective_kind)
    if not data.entries:
        raise ValueError("empty dataset")
    ideal = {b: (0.0, 0.0) for b in (0, 1)}

    def f(x):
        models = _model_blochs(x[0], x[1], ideal)
        return sum(_score(objective_kind, models[e.ideal_bit], e.bloch) for e in data.entries)

    g0, p0, _ = _gad_grid(data, objective_kind)
    x, fx = simplex_minimize(f, [g0, p0], bounds=_GAD_BOUNDS, tolerance=1e-10, step=0.02)
    gamma, p = float(x[0]), float(x[1])
    flat = abs(f([gamma, P_MIN]) - f([gamma, 1.0])) < FLAT_TOL
    notes = ("p is not identifiable: objective is flat in p at the fitted gamma",) if flat else ()
    per = _per_oracle_fidelity(data, gamma, p, ideal)
    return FitResult(
        gad=GadParams(gamma, p),
        objective_value=-fx if objective_kind == "fidelity" else fx,
        objective_kind=objective_kind,
        per_oracle_fidelity=per,
        method="gad",
        p_identifiable=not flat,
        notes=notes,
    )


def _as_observed_list(observed) -> list[np.ndarray]:
    arr = np.asarray(observed, dtype=complex)
    if arr.ndim == 2:
        return [arr]
    return [np.asarray(o, dtype=complex) for o in observed]


def fit_unitary(
    observed,
    ideal_bit: int,
    gad: GadParams,
    objective_kind: str = "fidelity",
) -> tuple[UnitaryParams, float]:
    """Best misalignment gate for one ideal bit, with GAD held fixed.

    ``observed`` is one 2x2 matrix or several that share the gate (e.g. both
    constant oracles). Returns the canonical gate angles and the mean
    fidelity of the fitted model against the observations.
    """
    _check_objective(objective_kind)
    if ideal_bit not in (0, 1):
        raise ValueError("ideal bit must be 0 or 1")
    obs = [bloch_vector(o) for o in _as_observed_list(observed)]

    def f(x):
        m = gad_bloch(_rotated_basis_bloch(x[0], x[1], ideal_bit), gad.gamma, gad.p)
        return sum(_score(objective_kind, m, s) for s in obs)

    grid = [
        (t, ph)
        for t in np.linspace(0.0, math.pi, 13)
        for ph in np.linspace(-math.pi, math.pi, 12, endpoint=False)
    ]
    vals = [f(x) for x in grid]
    best = int(np.argmin(vals))
    x, _ = simplex_minimize(
        f, grid[best], bounds=[_THETA_BOUNDS, None], tolerance=1e-10, step=0.1
    )
    # never report a gate that does worse than leaving the state alone
    if f([0.0, 0.0]) < f(x):
        x = np.array([0.0, 0.0])
    params = UnitaryParams(x[0], x[1], 0.0)
    m = gad_bloch(_rotated_basis_bloch(params.theta, params.phi, ideal_bit), gad.gamma, gad.p)
    fid = float(np.mean([fidelity_bloch(m, s) for s in obs]))
    return params, fid


def _gates_from_angles(angles: Mapping[int, tuple]) -> tuple[MaGates, tuple]:
    params = tuple(UnitaryParams(*angles.get(b, (0.0, 0.0))) for b in (0, 1))
    return MaGates(params[0].matrix(), params[1].matrix()), params


def _objective_from_fids(data, kind, gamma, p, angles) -> float:
    models = _model_blochs(gamma, p, angles)
    v = sum(_score(kind, models[e.ideal_bit], e.bloch) for e in data.entries)
    return -v if kind == "fidelity" else v


def fit_staged(data: FitDataset, objective_kind: str = "fidelity") -> FitResult:
    """GAD first, then one gate per ideal bit with the GAD parameters frozen."""
    base = fit_gad(data, objective_kind)
    angles = {}
    for bit in data.bits():
        obs = [e.observed for e in data.entries if e.ideal_bit == bit]
        params, _ = fit_unitary(obs, bit, base.gad, objective_kind)
        angles[bit] = (params.theta, params.phi)
    gates, params = _gates_from_angles(angles)
    g, p = base.gad.gamma, base.gad.p
    return FitResult(
        gad=base.gad,
        objective_value=_objective_from_fids(data, objective_kind, g, p, angles),
        objective_kind=objective_kind,
        per_oracle_fidelity=_per_oracle_fidelity(data, g, p, angles),
        method="staged",
        gates=gates,
        gate_params=params,
        p_identifiable=base.p_identifiable,
        notes=base.notes,
    )


def _plugin_angles(gamma, p, s_bits: Mapping[int, np.ndarray]):
    """Gate angles that invert the GAD map on each bit's mean observed Bloch vector.

    Vectorized over arrays of ``gamma`` and ``p``.
    """
    a = np.sqrt(np.clip(1.0 - gamma, 1e-12, None))
    zs = np.clip(1.0 - gamma, 1e-12, None)
    shift = gamma * (2.0 * p - 1.0)
    out = {}
    for bit, sb in s_bits.items():
        nx, ny, nz = sb[0] / a, sb[1] / a, (sb[2] - shift) / zs
        if bit == 1:
            nx, ny, nz = -nx, -ny, -nz
        norm = np.sqrt(nx**2 + ny**2 + nz**2) + 1e-300
        out[bit] = (np.arccos(np.clip(nz / norm, -1.0, 1.0)), np.arctan2(ny, nx))
    return out


def _joint_starts(data: FitDataset, staged: FitResult, kind: str, n_starts: int) -> list[np.ndarray]:
    """Deterministic start set; the staged solution is start 0.

    The rest are the best cells of a (gamma, p) lattice on which each gate is
    the plug-in inverse of the GAD map, so starts already sit near a basin.
    """
    sp = staged.gate_params
    starts = [np.array([staged.gad.gamma, staged.gad.p, sp[0].theta, sp[0].phi, sp[1].theta, sp[1].phi])]
    s_bits = {
        b: np.mean([e.bloch for e in data.entries if e.ideal_bit == b], axis=0) for b in (0, 1)
    }
    gammas = np.linspace(0.0, 0.98, GRID_SIZE)
    ps = np.linspace(0.5, 1.0, GRID_SIZE + 1)[1:]
    g, p = np.meshgrid(gammas, ps, indexing="ij")
    ang = _plugin_angles(g, p, s_bits)
    total = np.zeros_like(g)
    a = np.sqrt(1.0 - g)
    for e in data.entries:
        t, ph = ang[e.ideal_bit]
        sign = 1.0 if e.ideal_bit == 0 else -1.0
        mx = sign * a * np.sin(t) * np.cos(ph)
        my = sign * a * np.sin(t) * np.sin(ph)
        mz = sign * (1.0 - g) * np.cos(t) + g * (2.0 * p - 1.0)
        s = e.bloch
        if kind == "fidelity":
            r2 = mx**2 + my**2 + mz**2
            f2 = 0.5 * (1.0 + mx * s[0] + my * s[1] + mz * s[2]
                        + np.sqrt(np.clip(1.0 - r2, 0.0, None) * max(1.0 - float(s @ s), 0.0)))
            total -= np.sqrt(np.clip(f2, 0.0, 1.0))
        else:
            total += 0.5 * ((mx - s[0]) ** 2 + (my - s[1]) ** 2 + (mz - s[2]) ** 2)
    order = np.argsort(total, axis=None, kind="stable")[: n_starts - 1]
    for flat in order:
        i, j = np.unravel_index(flat, total.shape)
        t0, p0 = ang[0][0][i, j], ang[0][1][i, j]
        t1, p1 = ang[1][0][i, j], ang[1][1][i, j]
        starts.append(np.array([g[i, j], max(p[i, j], P_MIN), t0, p0, t1, p1]))
    return starts


def _bloch_residuals(v, groups) -> np.ndarray:
    """Model minus observed Bloch vectors for ``v = (gamma, p, t0, f0, t1, f1)``."""
    out = []
    for bit, t, ph in ((0, v[2], v[3]), (1, v[4], v[5])):
        m = gad_bloch(_rotated_basis_bloch(t, ph, bit), v[0], v[1])
        out.extend(m - np.asarray(s) for s in groups[bit])
    return np.concatenate(out)


def _bloch_jacobian(v, groups) -> np.ndarray:
    """Analytic Jacobian of :func:`_bloch_residuals`."""
    gamma, p = v[0], v[1]
    a = math.sqrt(max(1.0 - gamma, 1e-300))
    rows = []
    for bit, t, ph in ((0, v[2], v[3]), (1, v[4], v[5])):
        sign = 1.0 if bit == 0 else -1.0
        st, ct, sp, cp = math.sin(t), math.cos(t), math.sin(ph), math.cos(ph)
        j = np.zeros((3, 6))
        j[:, 0] = [-sign * st * cp / (2 * a), -sign * st * sp / (2 * a), -sign * ct + 2 * p - 1]
        j[2, 1] = 2 * gamma
        c = 2 + 2 * bit
        j[:, c] = [sign * a * ct * cp, sign * a * ct * sp, -sign * (1 - gamma) * st]
        j[:, c + 1] = [-sign * a * st * sp, sign * a * st * cp, 0.0]
        rows.extend([j] * len(groups[bit]))
    return np.vstack(rows)


def _residual_polish(f, x, fx, groups, bounds):
    """Least-squares refinement on Bloch-vector residuals, kept only if ``f`` does not get worse.

    Both objectives are quadratic at an exact fit, so a direct search can
    only place the model states to about sqrt(machine epsilon). When the
    two probed states sit near the same pole the parameters are poorly
    conditioned and that residual turns into errors of order 1e-2 in
    (gamma, p). Working on the residual vector itself avoids the square
    root. With noisy data the residual optimum is the Frobenius one; under
    the fidelity objective it is then usually worse and is dropped.
    """
    lo = np.array([b[0] if b is not None else -np.inf for b in bounds])
    hi = np.array([b[1] if b is not None else np.inf for b in bounds])
    resid = lambda v: _bloch_residuals(v, groups)
    jac = lambda v: _bloch_jacobian(v, groups)
    start = np.clip(x, lo, hi)
    tols = dict(xtol=1e-15, ftol=1e-15, gtol=1e-15)

    # unbounded Levenberg-Marquardt copes best with long flat valleys;
    # fall back to the bounded trust-region solver if it leaves the box
    cand = start
    for _ in range(POLISH_ROUNDS):
        ls = least_squares(resid, cand, jac=jac, method="lm", max_nfev=5000, **tols)
        improved = float(np.sum(ls.fun**2)) < float(np.sum(resid(cand) ** 2))
        if improved:
            cand = ls.x
        # status 0 means the evaluation budget ran out while still descending
        if ls.status != 0 or not improved:
            break
    if not (lo[0] <= cand[0] <= hi[0] and lo[1] <= cand[1] <= hi[1]):
        try:
            cand = least_squares(resid, start, jac=jac, bounds=(lo, hi), max_nfev=2000, **tols).x
        except ValueError:
            return x, fx
    cand = np.asarray(cand, dtype=float)
    fc = f(cand)
    # below ~1e-13 the objective only shows rounding, so let the residual decide
    better_fit = float(np.sum(resid(cand) ** 2)) < float(np.sum(resid(x) ** 2))
    if fc <= fx or (fc <= fx + POLISH_TIE_TOL and better_fit):
        return cand, fc
    return x, fx


def fit_joint(
    data: FitDataset,
    objective_kind: str = "fidelity",
    n_starts: int = 16,
    refine_tolerance: float = 1e-10,
) -> FitResult:
    """Fit gamma, p and both gates together by multi-start Nelder-Mead.

    Needs all four oracles. The staged fit seeds start 0, so the joint
    objective is never worse than the staged one; at least 16 starts are
    used in total. Each start is run with a loose tolerance and the best is
    then polished to ``refine_tolerance``, followed by a residual
    least-squares step that is kept only when it does not raise the
    objective. Ties are broken by start index, so the answer does not depend on the
    order in which starts are evaluated.
    """
    _check_objective(objective_kind)
    missing = [o.value for o in ORACLES if o not in data.oracles]
    if missing:
        raise ValueError(f"joint fit needs all four oracles; missing {', '.join(missing)}")

    groups = {
        b: [tuple(float(v) for v in e.bloch) for e in data.entries if e.ideal_bit == b]
        for b in (0, 1)
    }
    use_fid = objective_kind == "fidelity"
    sqrt = math.sqrt

    def f(x):
        # scalar arithmetic only: this runs ~10^5 times per fit
        gamma, p = x[0], x[1]
        a = sqrt(max(1.0 - gamma, 0.0))
        shift = gamma * (2.0 * p - 1.0)
        total = 0.0
        for bit, t, ph in ((0, x[2], x[3]), (1, x[4], x[5])):
            sign = 1.0 if bit == 0 else -1.0
            st = math.sin(t)
            mx = sign * a * st * math.cos(ph)
            my = sign * a * st * math.sin(ph)
            mz = sign * (1.0 - gamma) * math.cos(t) + shift
            r2 = mx * mx + my * my + mz * mz
            for sx, sy, sz in groups[bit]:
                if use_fid:
                    s2 = sx * sx + sy * sy + sz * sz
                    f2 = 0.5 * (1.0 + mx * sx + my * sy + mz * sz
                                + sqrt(max(1.0 - r2, 0.0) * max(1.0 - s2, 0.0)))
                    total -= sqrt(min(max(f2, 0.0), 1.0))
                else:
                    total += 0.5 * ((mx - sx) ** 2 + (my - sy) ** 2 + (mz - sz) ** 2)
        return total

    bounds = _GAD_BOUNDS + [_THETA_BOUNDS, None, _THETA_BOUNDS, None]
    staged = fit_staged(data, objective_kind)
    runs = []
    for i, x0 in enumerate(_joint_starts(data, staged, objective_kind, max(n_starts, 16))):
        x, fx = simplex_minimize(f, x0, bounds=bounds, tolerance=1e-4, step=0.05, max_iters=2000)
        runs.append((fx, i, x))
    runs.sort(key=lambda r: (r[0], r[1]))
    x, fx = simplex_minimize(f, runs[0][2], bounds=bounds, tolerance=refine_tolerance, step=0.01)
    x, fx = _residual_polish(f, x, fx, groups, bounds)

    gamma, p = float(x[0]), float(max(x[1], P_MIN))
    angles = {0: (x[2], x[3]), 1: (x[4], x[5])}
    gates, params = _gates_from_angles(angles)
    return FitResult(
        gad=GadParams(gamma, p),
        objective_value=-fx if objective_kind == "fidelity" else fx,
        objective_kind=objective_kind,
        per_oracle_fidelity=_per_oracle_fidelity(data, gamma, p, angles),
        method="joint",
        gates=gates,
        gate_params=params,
        p_identifiable=staged.p_identifiable,
        notes=staged.notes,
    )
