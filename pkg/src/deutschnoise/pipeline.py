"""Model-versus-data comparisons used by the reports and the CLI."""

from __future__ import annotations

from typing import Mapping, Optional

import numpy as np

from .channels import INTERPRETATIONS, GadParams, MaGates, apply_channel, error_model
from .deutsch import ORACLES, Oracle, ideal_output_state
from .metrics import fidelity
from .reference import published_gad, published_states

__all__ = [
    "published_dataset",
    "paper_gad",
    "model_state",
    "success_probability",
    "interpretation_scan",
    "best_interpretations",
]


def published_dataset() -> dict[Oracle, np.ndarray]:
    """Published ibmqx4 density matrices keyed by :class:`Oracle`, in table order."""
    states = published_states()
    return {o: states[o.value] for o in ORACLES}


def paper_gad() -> GadParams:
    return GadParams(*published_gad())


def model_state(
    oracle: Oracle,
    gad: Optional[GadParams],
    gates: Optional[MaGates] = None,
    interpretation: str = "as-printed",
    order: str = "ma-then-gad",
) -> np.ndarray:
    """Noisy output state of one oracle under the composite error model."""
    oracle = Oracle.parse(oracle)
    ch = error_model(gad, gates, oracle.ideal_bit, interpretation, order)
    return apply_channel(ch, ideal_output_state(oracle))


def success_probability(rho, ideal_bit: int) -> float:
    return float(np.real(np.asarray(rho)[ideal_bit, ideal_bit]))


def interpretation_scan(
    observed: Mapping,
    gad: GadParams,
    gates: MaGates,
    order: str = "ma-then-gad",
) -> dict[Oracle, dict[str, float]]:
    """Fidelity of model vs observation for every gate interpretation."""
    out = {}
    for key, rho in observed.items():
        o = Oracle.parse(key)
        out[o] = {
            interp: fidelity(model_state(o, gad, gates, interp, order), rho)
            for interp in INTERPRETATIONS
        }
    return out


def best_interpretations(
    observed: Mapping,
    gad: GadParams,
    gates: MaGates,
    order: str = "ma-then-gad",
) -> dict[Oracle, tuple[str, float]]:
    """Per oracle, the interpretation with the highest fidelity (first wins ties)."""
    scan = interpretation_scan(observed, gad, gates, order)
    best = {}
    for o, fids in scan.items():
        interp = max(INTERPRETATIONS, key=lambda k: (fids[k], -INTERPRETATIONS.index(k)))
        best[o] = (interp, fids[interp])
    return best
