"""Generalized amplitude damping and misalignment as Kraus channels.

GAD relaxes every state toward diag(p, 1 - p) and shrinks coherences by
sqrt(1 - gamma). The misalignment model rotates the ideal output with a
gate that depends on the expected bit.
"""

import numpy as np

from deutschnoise.channels import GadParams, MaGates, apply_channel, error_model, gad_channel
from deutschnoise.deutsch import ORACLES, run_noisy
from deutschnoise.pipeline import paper_gad

np.set_printoptions(precision=4, suppress=True)

gad = paper_gad()
ch = gad_channel(gad)
print(f"GAD gamma={gad.gamma}, p={gad.p}; completeness error {ch.completeness_error():.1e}")

ground = np.diag([1.0, 0.0])
excited = np.diag([0.0, 1.0])
print("|0><0| ->\n", apply_channel(ch, ground).real)
print("|1><1| ->\n", apply_channel(ch, excited).real)

thermal = np.diag([gad.p, 1 - gad.p])
print("thermal state is fixed:", np.allclose(apply_channel(ch, thermal), thermal))

# Repeated application drives any state to the thermal one.
rho = 0.5 * np.array([[1, 1], [1, 1]], dtype=complex)
for _ in range(30):
    rho = apply_channel(ch, rho)
print("after 30 rounds from |+><+|:\n", rho.real)

# The operators as typeset with E1 diagonal keep |1> untouched,
# which cannot explain any population leaking back to |0>.
literal = gad_channel(gad, paper_literal=True)
print("literal E1 on |1><1| ->\n", apply_channel(literal, excited).real)

print("\nsuccess probabilities under GAD alone and with the published gates")
gates = MaGates.paper()
for o in ORACLES:
    only_gad = run_noisy(o, gad_channel(gad)).success_prob
    interp = "conjugate" if o.is_constant else "adjoint"
    both = run_noisy(o, error_model(gad, gates, o.ideal_bit, interp)).success_prob
    print(f"  {o.value:>4}: GAD {only_gad:.4f}   MA then GAD ({interp}) {both:.4f}")

weak = GadParams(0.05, 0.9)
print("\nweak damping keeps |1> mostly intact:", apply_channel(gad_channel(weak), excited)[1, 1].real)
