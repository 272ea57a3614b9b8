"""Single-qubit state tomography from simulated X, Y and Z counts.

Each basis is read out 8192 times. The estimate converges like
1/sqrt(shots), and the occasional unphysical estimate is clipped back
into the Bloch ball.
"""

import numpy as np

from deutschnoise.deutsch import Oracle
from deutschnoise.metrics import trace_distance
from deutschnoise.pipeline import published_dataset
from deutschnoise.tomography import (
    BASES,
    PauliExpectations,
    expectation_from_counts,
    is_physical,
    project_to_density,
    reconstruct,
    sample_counts,
)

np.set_printoptions(precision=4, suppress=True)

rho = published_dataset()[Oracle.F0]
print("target state:\n", rho)


def estimate(rho, shots, seed):
    cells = [sample_counts(rho, b, shots, seed=[seed, i]) for i, b in enumerate(BASES)]
    for c in cells:
        if seed == 0 and shots == 8192:
            print(f"  basis {c.basis}: n0={c.n0:5d} n1={c.n1:5d}")
    raw = reconstruct(PauliExpectations(*(expectation_from_counts(c) for c in cells)))
    return raw, project_to_density(raw)


raw, est = estimate(rho, 8192, 0)
print("reconstruction from one run:\n", est)
print(f"trace distance {trace_distance(est, rho):.4f}")

print("\nmean trace distance over 200 runs")
for shots in (2**8, 2**10, 2**13, 2**16):
    errs = [trace_distance(estimate(rho, shots, s)[1], rho) for s in range(1, 201)]
    print(f"  {shots:6d} shots: {np.mean(errs):.5f}  (x sqrt(shots) = {np.mean(errs) * np.sqrt(shots):.3f})")

# A nearly pure state sometimes reconstructs outside the ball at low shot counts.
pure = np.array([[1, 0], [0, 0]], dtype=complex)
unphysical = sum(not is_physical(estimate(pure, 64, s)[0]) for s in range(200))
print(f"\n|0><0| at 64 shots: {unphysical}/200 raw estimates needed clipping")
