"""Deutsch's algorithm on a noiseless two-qubit register.

One oracle call tells constant functions (f0, f1) from balanced ones
(fId, fNot): the input qubit ends in |0> for the former, |1> for the latter.
"""

import numpy as np

from deutschnoise.deutsch import ORACLES, deutsch_circuit, run_ideal
from deutschnoise.qstate import GATES, apply_unitary, density, ket, partial_trace

np.set_printoptions(precision=4, suppress=True)

# A warm-up: Cnot turns |+>|0> into a Bell pair, whose halves are maximally mixed.
plus = np.array([1, 1]) / np.sqrt(2)
bell = apply_unitary(density(np.kron(plus, ket("0"))), GATES["Cnot"])
print("Bell state density matrix:\n", bell.real)
print("reduced state of qubit 0:\n", partial_trace(bell, [0]).real)

for oracle in ORACLES:
    steps = [name for name, _ in deutsch_circuit(oracle).steps]
    out = run_ideal(oracle)
    kind = "constant" if oracle.is_constant else "balanced"
    print(f"\n{oracle.value:>4} ({kind}) gates {steps}")
    print("  output state of the input qubit:\n", out.output_state.real)
    print(f"  reads {out.predicted_bit} with probability {out.success_prob:.6f}")
