"""Published ibmqx4 values bundled with the package.

Values live in ``data/published_ibmqx4.json`` (see its ``provenance`` block)
so that tests and reports never carry the numbers inline. Oracles are
keyed by their short names: f0, fId, fNot, f1.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np

__all__ = [
    "load",
    "matrix_from_entries",
    "published_states",
    "published_success",
    "published_index",
    "published_gad",
    "published_gates",
]

_DATA_FILE = "published_ibmqx4.json"


@lru_cache(maxsize=None)
def _raw() -> str:
    return resources.files("deutschnoise").joinpath("data").joinpath(_DATA_FILE).read_text()


def load() -> dict:
    """A fresh copy of the full reference document."""
    return json.loads(_raw())


def matrix_from_entries(entries) -> np.ndarray:
    """Rebuild a complex matrix from nested ``{"re": .., "im": ..}`` cells."""
    return np.array([[complex(c["re"], c["im"]) for c in row] for row in entries])


def published_states() -> dict[str, np.ndarray]:
    return {k: matrix_from_entries(v["entries"]) for k, v in load()["states"].items()}


def published_success() -> dict[str, float]:
    return {k: float(v["success_probability"]) for k, v in load()["states"].items()}


def published_index() -> dict[str, dict]:
    """Per-oracle ``{"weight", "alignment", "fidelity"}``."""
    return load()["index"]


def published_gad() -> tuple[float, float]:
    g = load()["gad"]
    return float(g["gamma"]), float(g["p"])


def published_gates() -> dict[str, np.ndarray]:
    """The two misalignment gates exactly as printed (not unitary)."""
    return {k: matrix_from_entries(v) for k, v in load()["gates"].items()}
