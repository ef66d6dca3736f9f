# The same task with the four-qubit Smolin (unlockable bound entangled) resource.
import numpy as np

from ricsim import qmath
from ricsim.analysis import bound_entanglement_suite
from ricsim.protocol import ResourceKind, enumerate_branches
from ricsim.states import TelecloningParams, smolin_state

rho = smolin_state().density_matrix()
print("Smolin state eigenvalues:", np.round(qmath.hermitian_eigvalsh(rho), 6)[-4:], "(rank 4)")

# PPT across every 2:2 cut, yet a joint Bell measurement on DE unlocks FG.
print(bound_entanglement_suite().format_text())

for alpha, p in [(0.6, 0.7), (0.28, 0.9), (1.0, 0.5)]:
    rows = enumerate_branches(ResourceKind.SMOLIN, TelecloningParams(alpha, p=p))
    probs = np.array([b.probability for b in rows])
    print(f"alpha={alpha}, p={p}: P in [{probs.min():.6f}, {probs.max():.6f}], "
          f"worst fidelity {min(b.fidelity for b in rows):.15f}")
