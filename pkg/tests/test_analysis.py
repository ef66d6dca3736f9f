import itertools
import math

import numpy as np
import pytest

from conftest import GRID, ghz_coefficient
from ricsim.analysis import (bound_entanglement_suite, chi_square_gof, exact_distribution,
                             mutual_information, shannon_entropy, verify_all)
from ricsim.pauli import correction_for
from ricsim.protocol import ResourceKind
from ricsim.states import TelecloningParams

GHZ, SMOLIN = ResourceKind.GHZ, ResourceKind.SMOLIN
TRIPLES = list(itertools.product(range(4), repeat=3))


def closed_form_ghz_table(p):
    n = 1 + p * p + (1 - p) ** 2
    return np.array([ghz_coefficient(t, p) ** 2 / (16 * n) for t in TRIPLES])


def entropy_bits(probs):
    return -sum(x * math.log2(x) for x in probs if x > 0)


def test_exact_distribution_ghz_values():
    d = exact_distribution(GHZ, TelecloningParams(0.6, p=0.7)).as_dict()
    assert d[(0, 0, 0)] == pytest.approx(1 / (16 * 1.58), abs=1e-12)
    assert d[(0, 0, 0)] == pytest.approx(0.0395569620253164, abs=1e-15)
    assert d[(2, 0, 2)] == pytest.approx(0.49 / (16 * 1.58), abs=1e-12)
    assert d[(2, 0, 2)] == pytest.approx(0.0193829113924051, abs=1e-15)


def test_exact_distribution_smolin_uniform():
    for pr in GRID:
        probs = exact_distribution(SMOLIN, pr).probabilities()
        assert np.abs(probs - 0.015625).max() < 1e-12


def test_symmetric_clones_give_equal_entries():
    d = exact_distribution(GHZ, TelecloningParams(0.6, p=0.5)).as_dict()
    assert d[(2, 0, 2)] == pytest.approx(d[(2, 2, 0)], abs=1e-15)


def test_distributions_sum_to_one():
    for resource in ResourceKind:
        for pr in GRID:
            assert abs(exact_distribution(resource, pr).probabilities().sum() - 1) < 1e-12


def test_shannon_entropy():
    assert shannon_entropy([0.5, 0.5]) == 1
    assert shannon_entropy([1, 0, 0]) == 0
    assert shannon_entropy(np.full(64, 1 / 64)) == pytest.approx(6, abs=1e-12)


def test_ghz_leakage_matches_closed_form():
    prior = [(0.5, TelecloningParams(0.6, p=0.6)), (0.5, TelecloningParams(0.6, p=0.9))]
    t1, t2 = closed_form_ghz_table(0.6), closed_form_ghz_table(0.9)
    expected = entropy_bits(0.5 * t1 + 0.5 * t2) - 0.5 * entropy_bits(t1) - 0.5 * entropy_bits(t2)
    report = mutual_information(GHZ, prior)
    assert report.mutual_information_bits == pytest.approx(expected, abs=1e-12)
    assert report.mutual_information_bits > 1e-3
    assert expected == pytest.approx(0.066429, abs=1e-6)


@pytest.mark.parametrize("prior", [
    [(0.5, TelecloningParams(0.6, p=0.6)), (0.5, TelecloningParams(0.6, p=0.9))],
    [(0.2, TelecloningParams(0.0, p=1.0)), (0.8, TelecloningParams(1.0, p=0.5))],
    [(1 / len(GRID), pr) for pr in GRID],
])
def test_smolin_leaks_nothing(prior):
    assert abs(mutual_information(SMOLIN, prior).mutual_information_bits) < 1e-12


def test_ghz_does_not_leak_alpha():
    prior = [(0.25, TelecloningParams(a, p=0.7)) for a in (0.0, 0.28, 0.6, 1.0)]
    assert abs(mutual_information(GHZ, prior).mutual_information_bits) < 1e-12


@pytest.mark.parametrize("resource", list(ResourceKind))
def test_single_hypothesis_is_zero(resource):
    assert abs(mutual_information(resource, [(1.0, TelecloningParams(0.8, p=0.9))]).mutual_information_bits) < 1e-12


def test_mutual_information_bounds():
    prior = [(1 / len(GRID), pr) for pr in GRID]
    mi = mutual_information(GHZ, prior).mutual_information_bits
    assert -1e-12 <= mi <= math.log2(len(prior)) + 1e-12
    assert mi > 0


def test_mutual_information_rejects_bad_prior():
    with pytest.raises(ValueError):
        mutual_information(GHZ, [])
    with pytest.raises(ValueError):
        mutual_information(GHZ, [(0.4, TelecloningParams(0.6, p=0.7))])


def test_chi_square_gof_excludes_forbidden():
    expected = {(0, 0, 0): 0.5, (0, 0, 1): 0.5, (0, 0, 2): 0.0}
    stat, dof, pval, forbidden = chi_square_gof({(0, 0, 0): 50, (0, 0, 1): 50}, expected)
    assert (stat, dof, forbidden) == (0.0, 1, 0)
    assert pval == pytest.approx(1.0)
    _, _, _, forbidden = chi_square_gof({(0, 0, 0): 50, (0, 0, 1): 49, (0, 0, 2): 1}, expected)
    assert forbidden == 1


def test_bound_entanglement_suite_passes():
    report = bound_entanglement_suite()
    assert report.passed
    assert len([c for c in report.checks if c.name.startswith("PPT")]) == 3


@pytest.fixture(scope="module")
def default_report():
    return verify_all()


def test_verify_all_passes(default_report):
    assert default_report.passed, default_report.format_text()
    sections = {c.section for c in default_report.checks}
    assert sections >= {"states", "bound-entanglement", "qmath", "pauli", "protocol", "sampling", "leakage"}
    structural = [c for c in default_report.checks if c.tolerance == 1e-12]
    assert all(c.worst < 1e-12 for c in structural)


def test_verify_all_flags_corrupted_corrections():
    bad = lambda t: correction_for(t) ^ 2 if t[0] == 3 else correction_for(t)
    report = verify_all([TelecloningParams(0.6, p=0.7)], correction=bad, shots=2000)
    assert not report.passed
    failed = {c.name for c in report.checks if not c.passed}
    assert "GHZ: every reachable branch recovers the input" in failed
    assert "Smolin: all 64 branches recover the input" in failed


def test_verify_all_rejects_empty_grid():
    with pytest.raises(ValueError):
        verify_all([])
