# Concentrating a diluted qubit back onto David's qubit with a shared GHZ state.
import numpy as np

from ricsim import qmath
from ricsim.pauli import LABEL_NAMES
from ricsim.protocol import ResourceKind, enumerate_branches, run_once
from ricsim.states import TelecloningParams, input_state, telecloning_state

params = TelecloningParams(alpha=0.6, p=0.7)
print("input |chi> =", input_state(params).amplitudes.real)

# The information sits in three qubits A, B, C; no single one carries it.
psi = telecloning_state(params)
for q, name in enumerate("ABC"):
    rho = qmath.partial_trace(psi, [q])
    print(f"fidelity of clone {name} with |chi>: {qmath.fidelity_pure(input_state(params), rho):.4f}")

# One run: Alice, Bob and Charlie report Bell outcomes, David corrects.
transcript, record = run_once(ResourceKind.GHZ, params, seed=7)
for m in transcript.messages:
    print(f"{m.sender} -> David: Phi^{m.outcome}")
print("David applies", LABEL_NAMES[transcript.correction], "and reaches fidelity", round(record.fidelity, 12))

# All 64 branches at once.  Probabilities come in three sizes: 1, p^2 and q^2 over 16N.
rows = enumerate_branches(ResourceKind.GHZ, params)
scaled = np.array([b.probability * 16 * params.norm for b in rows])
for value in (1.0, params.p**2, params.q**2, 0.0):
    print(f"branches with 16N*P = {value:.2f}: {int(np.sum(np.isclose(scaled, value)))}")
print("worst fidelity over reachable branches:", min(b.fidelity for b in rows if b.reachable))
