"""Fitting the GAD and misalignment parameters to the measured states.

Three fits are compared: GAD alone, staged (GAD first, then one gate per
ideal bit) and joint (everything at once, multi-start). The gate angle lam
only adds a global phase to U|b>, so fitted gates always have lam = 0.
"""

import math

import numpy as np

from deutschnoise.channels import GadParams, MaGates, apply_channel, error_model
from deutschnoise.deutsch import ORACLES, ideal_output_state
from deutschnoise.fit import FitDataset, fit_gad, fit_joint, fit_staged, state_action_distance, u3
from deutschnoise.pipeline import paper_gad, published_dataset

np.set_printoptions(precision=4, suppress=True)

data = FitDataset.from_matrices(published_dataset())
ref = paper_gad()
print(f"published gamma={ref.gamma}, p={ref.p}\n")

for name, res in [
    ("GAD, fidelity", fit_gad(data, "fidelity")),
    ("GAD, frobenius", fit_gad(data, "frobenius")),
    ("staged", fit_staged(data)),
    ("joint", fit_joint(data)),
]:
    g, p = res.gad.gamma, res.gad.p
    print(f"{name:15} gamma={g:.4f} ({g - ref.gamma:+.4f})  p={p:.4f} ({p - ref.p:+.4f})  "
          f"mean F={res.mean_fidelity:.5f}")

joint = fit_joint(data)
print("\njoint-fit gates:")
print(" G0 =\n", joint.gates.g0)
print(" G1 =\n", joint.gates.g1)

# Round trip on synthetic data with known parameters.
rng = np.random.default_rng(1)
true_gad = GadParams(0.3, 0.7)
true_gates = MaGates(u3(0.3, 1.0), u3(2.5, -0.4))
synthetic = {
    o: apply_channel(error_model(true_gad, true_gates, o.ideal_bit), ideal_output_state(o))
    for o in ORACLES
}
res = fit_joint(FitDataset.from_matrices(synthetic))
print(f"\nsynthetic round trip: gamma={res.gad.gamma:.6f} p={res.gad.p:.6f}")
for b in (0, 1):
    d = state_action_distance(res.gates.for_bit(b), true_gates.for_bit(b), b)
    print(f"  gate for bit {b}: max deviation of U|{b}> {d:.1e}")
