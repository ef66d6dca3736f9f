# Sampled runs against the exact tables.
from ricsim.analysis import chi_square_gof
from ricsim.protocol import ResourceKind, enumerate_branches, sample_runs
from ricsim.states import TelecloningParams

params = TelecloningParams(0.6, p=0.7)
for resource in ResourceKind:
    outcomes, fidelities = sample_runs(resource, params, shots=64000, seed=42)
    counts = {}
    for row in map(tuple, outcomes.tolist()):
        counts[row] = counts.get(row, 0) + 1
    exact = {b.outcome: b.probability for b in enumerate_branches(resource, params)}
    stat, dof, pval, forbidden = chi_square_gof(counts, exact)
    print(f"{resource.value:7s} chi2={stat:7.2f} dof={dof} p={pval:.3f} "
          f"forbidden hits={forbidden} mean fidelity={fidelities.mean():.15f}")
