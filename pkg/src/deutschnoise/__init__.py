"""Density-matrix simulation and noise characterization of Deutsch's algorithm.

Submodules:

* :mod:`~deutschnoise.numkit` - small Hermitian linear algebra (Jacobi eigensolver, PSD roots, polar factor)
* :mod:`~deutschnoise.qstate` - states, gates, circuits, partial trace, projective measurement
* :mod:`~deutschnoise.channels` - Kraus channels: GAD, rotations, misalignment gates
* :mod:`~deutschnoise.deutsch` - the four oracles and the algorithm, ideal and noisy
* :mod:`~deutschnoise.tomography` - seeded counts and linear-inversion reconstruction
* :mod:`~deutschnoise.metrics` - fidelity and the isotropic (weight, alignment) index
* :mod:`~deutschnoise.fit` - GAD and misalignment parameter fits
* :mod:`~deutschnoise.pipeline` - model-vs-data comparisons behind the reports
* :mod:`~deutschnoise.cli` - ``deutschnoise`` command line
"""

from .channels import GadParams, KrausChannel, MaGates, apply_channel, compose, error_model, gad_channel
from .deutsch import ORACLES, Oracle, run_ideal, run_noisy
from .fit import FitDataset, FitResult, fit_gad, fit_joint, fit_staged, fit_unitary
from .metrics import IsotropicIndex, alignment, fidelity, isotropic_decompose, isotropic_index
from .tomography import CountsRecord, PauliExpectations, reconstruct, sample_counts

__version__ = "0.1.0"

__all__ = [
    "CountsRecord",
    "FitDataset",
    "FitResult",
    "GadParams",
    "IsotropicIndex",
    "KrausChannel",
    "MaGates",
    "ORACLES",
    "Oracle",
    "PauliExpectations",
    "alignment",
    "apply_channel",
    "compose",
    "error_model",
    "fidelity",
    "fit_gad",
    "fit_joint",
    "fit_staged",
    "fit_unitary",
    "gad_channel",
    "isotropic_decompose",
    "isotropic_index",
    "reconstruct",
    "run_ideal",
    "run_noisy",
    "sample_counts",
]
