import sys

import numpy as np
import pytest
from hypothesis import settings

from deutschnoise.pipeline import published_dataset

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (a + a.conj().T)


def random_unitary(rng, d):
    # QR of a Ginibre matrix with the phase fix gives Haar-distributed unitaries
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_bloch_state(rng, radius=None):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    r = rng.uniform(0, 1) if radius is None else radius
    x, y, z = r * v
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])


@pytest.fixture(scope="session")
def published():
    return published_dataset()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
