"""Weight and alignment of the measured ibmqx4 output states.

The weight w = 2 * lambda_min is the share of the maximally mixed state in
rho. What remains, rho_hat, is compared with the ideal answer: the
alignment A is F(rho_hat, ideal) minus F(rho_hat, its orthogonal
complement), using the square-root fidelity.
"""

import numpy as np

from deutschnoise.deutsch import ORACLES, Oracle
from deutschnoise.metrics import fidelity, isotropic_decompose, isotropic_index
from deutschnoise.pipeline import published_dataset
from deutschnoise.qstate import density, ket
from deutschnoise.reference import published_index

data = published_dataset()
ref = published_index()

print(f"{'':5} {'w':>7} {'(pub)':>7} {'A':>7} {'(pub)':>7}")
for o in ORACLES:
    idx = isotropic_index(data[o], ket(str(o.ideal_bit)))
    r = ref[o.value]
    print(f"{o.value:5} {idx.weight:7.4f} {r['weight']:7.4f} {idx.alignment:7.4f} {r['alignment']:7.4f}")

# Squaring the fidelities gives visibly different alignments.
w, hat = isotropic_decompose(data[Oracle.F0])
p0 = density(ket("0"))
root = fidelity(hat, p0) - fidelity(hat, np.eye(2) - p0)
squared = fidelity(hat, p0) ** 2 - fidelity(hat, np.eye(2) - p0) ** 2
print(f"\nf0 alignment with root fidelity {root:.4f}, with squared fidelity {squared:.4f}")

# Limiting cases.
print("pure |0> vs |0>:", isotropic_index(ket("0"), ket("0")))
print("I/2:", isotropic_index(np.eye(2) / 2, ket("0")))
