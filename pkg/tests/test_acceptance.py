"""Exit criteria, one test per criterion, each reporting a PASS/FAIL line."""

import time

import numpy as np

from conftest import ACCEPTANCE_LINES, GRID
from ricsim import oracles
from ricsim.analysis import (bound_entanglement_suite, chi_square_gof, exact_distribution,
                             mutual_information)
from ricsim.cli import main
from ricsim.pauli import (ALL_TRIPLES, CLASS_I_REFERENCE, GHZ_IDENTITY_REFERENCE, PAULI_MATRICES,
                          correction_classes, correction_for)
from ricsim.protocol import ResourceKind, enumerate_branches, sample_distribution
from ricsim.states import TelecloningParams

GHZ, SMOLIN = ResourceKind.GHZ, ResourceKind.SMOLIN
TOL = 1e-12


def record(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


def matrix_oracle_label(triple):
    m = PAULI_MATRICES[triple[0]] @ PAULI_MATRICES[triple[1]] @ PAULI_MATRICES[triple[2]]
    for c, s in enumerate(PAULI_MATRICES):
        for phase in (1, -1, 1j, -1j):
            if np.abs(m - phase * s).max() <= TOL:
                return c
    return None


def test_criterion_1_ghz_unit_recovery():
    start = time.perf_counter()
    tables = [enumerate_branches(GHZ, pr) for pr in GRID]
    elapsed = time.perf_counter() - start
    worst = max(abs(1 - b.fidelity) for rows in tables for b in rows if b.probability > 1e-14)
    reachable = sum(b.probability > 1e-14 for rows in tables for b in rows)
    record(1, "GHZ unit recovery", worst <= TOL and elapsed < 1.0,
           f"{reachable} reachable branches, worst |1-F| = {worst:.2e}, {elapsed:.3f} s")


def test_criterion_2_smolin_unit_recovery():
    tables = [enumerate_branches(SMOLIN, pr) for pr in GRID]
    worst_branch = max(abs(1 - b.fidelity) for rows in tables for b in rows)
    member = [f for rows in tables for b in rows for f in b.member_fidelities]
    worst_member = max(abs(1 - f) for f in member if f is not None)
    unreachable = sum(f is None for f in member)
    ok = worst_branch <= TOL and worst_member <= TOL and len(member) == 64 * 4 * len(GRID)
    record(2, "Smolin unit recovery", ok,
           f"worst branch |1-F| = {worst_branch:.2e}, worst member |1-F| = {worst_member:.2e} "
           f"over {len(member) - unreachable} reachable (branch, member) pairs, "
           f"{unreachable} have zero probability")


def test_criterion_3_ghz_probabilities():
    worst_named = 0.0
    worst_oracle = 0.0
    for pr in GRID:
        rows = {b.outcome: b.probability for b in enumerate_branches(GHZ, pr)}
        n16 = 16 * pr.norm
        worst_named = max(worst_named, abs(rows[(0, 0, 0)] - 1 / n16),
                          abs(rows[(2, 0, 2)] - pr.p**2 / n16), abs(rows[(2, 2, 0)] - pr.q**2 / n16))
        oracle = oracles.ghz_branch_oracle(pr.alpha, pr.beta, pr.p)
        worst_oracle = max(worst_oracle, max(abs(rows[t] - oracle[t][0]) for t in ALL_TRIPLES))
    record(3, "GHZ probabilities", worst_named <= TOL and worst_oracle <= TOL,
           f"named entries dev {worst_named:.2e}, brute-force table dev {worst_oracle:.2e}")


def test_criterion_4_smolin_uniformity():
    worst = max(np.abs(exact_distribution(SMOLIN, pr).probabilities() - 1 / 64).max() for pr in GRID)
    record(4, "Smolin uniformity", worst < TOL, f"max |P - 1/64| = {worst:.2e}")


def test_criterion_5_security():
    alpha_pair = [(0.5, TelecloningParams(0.28, p=0.7)), (0.5, TelecloningParams(0.8, p=0.7))]
    p_pair = [(0.5, TelecloningParams(0.6, p=0.6)), (0.5, TelecloningParams(0.6, p=0.9))]
    priors = [p_pair, alpha_pair, [(1 / len(GRID), pr) for pr in GRID], [(1.0, GRID[7])],
              [(0.1, GRID[0]), (0.3, GRID[12]), (0.6, GRID[24])]]
    worst_smolin = max(abs(mutual_information(SMOLIN, pr).mutual_information_bits) for pr in priors)
    ghz = mutual_information(GHZ, p_pair).mutual_information_bits
    record(5, "security comparison", worst_smolin <= TOL and ghz > 1e-3,
           f"Smolin max |I| = {worst_smolin:.2e} bits over {len(priors)} priors, GHZ I = {ghz:.6f} bits")


def test_criterion_6_correction_algebra():
    mismatches = sum(correction_for(t) != matrix_oracle_label(t) for t in ALL_TRIPLES)
    class_i = correction_classes()[0]
    reachable_sets_ok = True
    for pr in GRID:
        if 0 < pr.p < 1:
            probs = {b.outcome: b.probability for b in enumerate_branches(GHZ, pr)}
            reachable = {t for t in class_i if probs[t] > 1e-14}
            reachable_sets_ok &= reachable == GHZ_IDENTITY_REFERENCE
    ok = mismatches == 0 and class_i == CLASS_I_REFERENCE and reachable_sets_ok
    record(6, "correction algebra", ok,
           f"{mismatches} oracle mismatches, class I matches tabulated 16: {class_i == CLASS_I_REFERENCE}, "
           f"reachable class I equals tabulated 12 for 0<p<1: {reachable_sets_ok}")


def test_criterion_7_bound_entanglement():
    report = bound_entanglement_suite()
    detail = "; ".join(f"{c.name}: {c.worst:.1e}" for c in report.checks)
    record(7, "bound-entanglement suite", report.passed and len(report.checks) == 5, detail)


def test_criterion_8_statistical_consistency(tmp_path):
    params = TelecloningParams(0.6, p=0.7)
    shots, seed = 64000, 42
    start = time.perf_counter()
    results = []
    ok = True
    for resource in ResourceKind:
        exact = {b.outcome: b.probability for b in enumerate_branches(resource, params)}
        counts = sample_distribution(resource, params, shots, seed)
        stat, dof, pval, forbidden = chi_square_gof(counts, exact)
        ok &= pval >= 0.01 and forbidden == 0 and counts == sample_distribution(resource, params, shots, seed)
        results.append(f"{resource.value}: chi2={stat:.1f} dof={dof} p={pval:.3f}")
    elapsed = time.perf_counter() - start

    outputs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        main(["run", "--resource", "smolin", "--alpha", "0.6", "--p", "0.7", "--shots", "64000",
              "--seed", "42", "--format", "json", "--output", str(path)])
        outputs.append(path.read_bytes())
    identical = outputs[0] == outputs[1]
    record(8, "statistical consistency", ok and identical and elapsed < 10.0,
           "; ".join(results) + f"; byte-identical output: {identical}; sampling {elapsed:.2f} s")
