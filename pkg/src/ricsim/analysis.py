"""Outcome distributions, leakage of the input through the public outcomes,
and the verification suites that tie everything together."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import stats

from . import oracles, qmath
from .pauli import (ALL_TRIPLES, CLASS_I_REFERENCE, GHZ_IDENTITY_REFERENCE, PAULI_MATRICES,
                    correction_classes, correction_for, matrix_product_label, pauli_mul_mod_phase)
from .protocol import (DEFAULT_ORDER, PAIRS, REACHABLE_TOL, Correction, ResourceKind,
                       enumerate_branches, joint_state, sample_distribution)
from .states import (BELL_PROJECTORS, TelecloningParams, bell_projector, bell_state,
                     smolin_state, telecloning_state)

STRUCTURAL_TOL = 1e-12
EIGEN_TOL = 1e-9
PSD_TOL = -1e-10
CHI2_SIGNIFICANCE = 0.01
DEFAULT_SHOTS = 64000
DEFAULT_SEED = 20240101

ALPHAS = (0.0, 0.28, 0.6, 0.8, 1.0)
PS = (0.5, 0.6, 0.7, 0.9, 1.0)


def default_grid() -> list[TelecloningParams]:
    return [TelecloningParams(a, p=p) for a in ALPHAS for p in PS]


def dense_grid() -> list[TelecloningParams]:
    alphas = np.round(np.linspace(-1.0, 1.0, 21), 10)
    ps = np.round(np.linspace(0.5, 1.0, 11), 10)
    return [TelecloningParams(float(a), p=float(p)) for a in alphas for p in ps]


@dataclass(frozen=True)
class DistributionTable:
    resource: ResourceKind
    params: TelecloningParams
    entries: tuple[tuple[tuple[int, int, int], float], ...]

    def as_dict(self) -> dict:
        return dict(self.entries)

    def probabilities(self) -> np.ndarray:
        return np.array([p for _, p in self.entries])


def exact_distribution(resource: ResourceKind, params: TelecloningParams,
                       branches=None) -> DistributionTable:
    branches = branches if branches is not None else enumerate_branches(resource, params)
    return DistributionTable(ResourceKind(resource), params,
                             tuple((b.outcome, b.probability) for b in branches))


def shannon_entropy(probs: Iterable[float]) -> float:
    """Entropy in bits with ``0 log 0 = 0``."""
    probs = np.asarray(list(probs), dtype=float)
    nz = probs[probs > 0]
    return float(-(nz * np.log2(nz)).sum())


@dataclass(frozen=True)
class LeakageReport:
    resource: ResourceKind
    prior: tuple[tuple[float, TelecloningParams], ...]
    mutual_information_bits: float
    conditional_tables: tuple[DistributionTable, ...]


def mutual_information(resource: ResourceKind,
                       prior: Sequence[tuple[float, TelecloningParams]]) -> LeakageReport:
    """Shannon information the outcome triple carries about the input hypothesis.

    ``I = H(sum_x w_x P(.|x)) - sum_x w_x H(P(.|x))`` over the exact tables.
    """
    prior = tuple((float(w), p) for w, p in prior)
    if not prior:
        raise ValueError("prior must contain at least one hypothesis")
    weights = np.array([w for w, _ in prior])
    if np.any(weights <= 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError("prior weights must be positive and sum to 1")
    tables = tuple(exact_distribution(resource, p) for _, p in prior)
    conditionals = np.array([t.probabilities() for t in tables])
    marginal = weights @ conditionals
    mi = shannon_entropy(marginal) - sum(w * shannon_entropy(c) for w, c in zip(weights, conditionals))
    return LeakageReport(ResourceKind(resource), prior, float(mi), tables)


def chi_square_gof(counts: dict, expected_probs: dict) -> tuple[float, int, float, int]:
    """Pearson goodness of fit of sampled ``counts`` against exact probabilities.

    Categories with zero expected probability are excluded from the statistic
    and returned separately as the number of forbidden hits.

    Returns:
        ``(statistic, dof, p_value, forbidden_hits)``
    """
    keys = sorted(expected_probs)
    shots = sum(counts.values())
    allowed = [k for k in keys if expected_probs[k] > REACHABLE_TOL]
    forbidden = sum(counts.get(k, 0) for k in keys if expected_probs[k] <= REACHABLE_TOL)
    obs = np.array([counts.get(k, 0) for k in allowed], dtype=float)
    exp = np.array([expected_probs[k] for k in allowed]) * shots
    statistic = float(((obs - exp) ** 2 / exp).sum())
    dof = len(allowed) - 1
    return statistic, dof, float(stats.chi2.sf(statistic, dof)), int(forbidden)


@dataclass
class Check:
    section: str
    name: str
    tolerance: float
    worst: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"section": self.section, "name": self.name, "tolerance": self.tolerance,
                "worst": self.worst, "passed": self.passed, "detail": self.detail}


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, section: str, name: str, tolerance: float, worst: float,
            passed: Optional[bool] = None, detail: str = "") -> Check:
        """Record a check; by default it passes when ``worst <= tolerance``."""
        worst = float(worst)
        if passed is None:
            passed = bool(worst <= tolerance)
        check = Check(section, name, float(tolerance), worst, bool(passed), detail)
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    def as_dict(self) -> dict:
        return {"title": self.title, "passed": self.passed,
                "checks": [c.as_dict() for c in self.checks]}

    def format_text(self) -> str:
        lines = [self.title]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.section}: {c.name} (worst {c.worst:.3e}, tol {c.tolerance:.1e})"
                         + (f" {c.detail}" if c.detail else ""))
        lines.append("OVERALL: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


_CUTS = {"DE|FG": [0, 1], "DF|EG": [0, 2], "DG|EF": [0, 3]}


def bound_entanglement_suite() -> Report:
    """PPT across the 2:2 cuts, unlockability, and maximally mixed marginals."""
    report = Report("bound entanglement")
    smolin = smolin_state()
    rho = smolin.density_matrix()

    for cut, subset in _CUTS.items():
        lam = qmath.min_eigenvalue(qmath.partial_transpose(rho, subset))
        report.add("bound-entanglement", f"PPT across {cut}", -PSD_TOL, max(0.0, -lam),
                   passed=lam >= PSD_TOL, detail=f"min eigenvalue {lam:.3e}")

    worst = 0.0
    for i in range(4):
        p_i = qmath.expectation(bell_projector(i), [0, 1], smolin)
        post = []
        for w, s in smolin:
            v = qmath.apply_matrix(s.amplitudes, bell_projector(i), [0, 1])
            pv = np.vdot(v, v).real
            if pv > REACHABLE_TOL:
                post.append((w * pv / p_i, qmath.PureState.from_unnormalized(v)))
        fg = qmath.partial_trace(qmath.MixedState(*zip(*post)), [2, 3])
        worst = max(worst, abs(1.0 - qmath.fidelity_pure(bell_state(i), fg)))
    report.add("bound-entanglement", "unlock: Bell outcome on DE leaves FG in matching Bell state",
               STRUCTURAL_TOL, worst)

    worst = max(np.abs(qmath.partial_trace(smolin, [q]) - np.eye(2) / 2).max() for q in range(4))
    report.add("bound-entanglement", "single-qubit marginals are I/2", STRUCTURAL_TOL, worst)
    return report


def _max_abs(values) -> float:
    values = list(values)
    return float(max(values)) if values else 0.0


def _check_states(report: Report, grid: Sequence[TelecloningParams]) -> None:
    sec = "states"
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        norm_grid = [TelecloningParams(a, p=p) for a in ALPHAS for p in np.round(np.arange(11) / 10, 10)]
    worst = _max_abs(abs(np.linalg.norm(telecloning_state(pr).amplitudes) ** 2 - 1)
                     for pr in list(norm_grid) + list(grid))
    report.add(sec, "telecloning state normalized", STRUCTURAL_TOL, worst)

    support0 = {0b000, 0b101, 0b110}
    support1 = {0b111, 0b010, 0b001}
    leak = 0.0
    for pr in [TelecloningParams(1.0, p=p) for p in PS]:
        amps = telecloning_state(pr).amplitudes
        leak = max(leak, _max_abs(abs(amps[i]) for i in range(8) if i not in support0))
    for pr in [TelecloningParams(0.0, p=p) for p in PS]:
        amps = telecloning_state(pr).amplitudes
        leak = max(leak, _max_abs(abs(amps[i]) for i in range(8) if i not in support1))
    report.add(sec, "telecloning support sets for alpha=1 and alpha=0", STRUCTURAL_TOL, leak)

    gram = np.array([[np.vdot(bell_state(a).amplitudes, bell_state(b).amplitudes) for b in range(4)]
                     for a in range(4)])
    report.add(sec, "Bell states orthonormal", STRUCTURAL_TOL, np.abs(gram - np.eye(4)).max())

    worst = max(max(np.abs(P @ P - P).max(), np.abs(P - P.conj().T).max()) for P in BELL_PROJECTORS)
    worst = max(worst, np.abs(sum(BELL_PROJECTORS) - np.eye(4)).max())
    report.add(sec, "Bell projectors idempotent, Hermitian, complete", STRUCTURAL_TOL, worst)

    rho = smolin_state().density_matrix()
    perm = [2, 3, 0, 1]
    swapped = rho.reshape([2] * 8).transpose(perm + [4 + q for q in perm]).reshape(16, 16)
    report.add(sec, "Smolin state symmetric under (D,E) <-> (F,G)", STRUCTURAL_TOL,
               np.abs(swapped - rho).max())
    evals = qmath.hermitian_eigvalsh(rho)
    dev = max(np.abs(rho - rho.conj().T).max(), abs(np.trace(rho).real - 1),
              np.abs(rho - oracles.smolin_density_oracle()).max())
    rank = int((evals > EIGEN_TOL).sum())
    report.add(sec, "Smolin density matrix: Hermitian, trace 1, rank 4, equals Pauli form",
               STRUCTURAL_TOL, dev, passed=dev <= STRUCTURAL_TOL and rank == 4 and evals[0] >= PSD_TOL,
               detail=f"rank {rank}")


def _check_qmath(report: Report, params: TelecloningParams) -> None:
    sec = "qmath"
    joint = joint_state(ResourceKind.SMOLIN, params)
    rho = joint.density_matrix()
    worst = 0.0
    for pair in PAIRS:
        for P in BELL_PROJECTORS:
            worst = max(worst, abs(qmath.expectation(P, pair, joint) - qmath.expectation(P, pair, rho)))
    report.add(sec, "ensemble and density-matrix measurement statistics agree", STRUCTURAL_TOL, worst)

    a = telecloning_state(params)
    b = bell_state(2)
    reduced = qmath.partial_trace(qmath.tensor(a, b), [0, 1, 2])
    report.add(sec, "partial trace of a product state recovers the factor", STRUCTURAL_TOL,
               np.abs(reduced - a.density_matrix()).max())


def _check_pauli(report: Report, correction: Correction) -> dict:
    sec = "pauli"
    bad = 0
    for a, b, c in itertools.product(range(4), repeat=3):
        m = pauli_mul_mod_phase
        bad += m(m(a, b), c) != m(a, m(b, c))
        bad += m(a, b) != m(b, a)
        bad += m(0, a) != a or m(a, a) != 0
    report.add(sec, "Klein four-group laws", 0, bad, detail="violations counted")

    mismatches = 0
    worst_phase = 0.0
    for t in ALL_TRIPLES:
        label, phase = matrix_product_label(t)
        mismatches += label != correction(t)
        m = PAULI_MATRICES[t[0]] @ PAULI_MATRICES[t[1]] @ PAULI_MATRICES[t[2]]
        worst_phase = max(worst_phase, np.abs(m - phase * PAULI_MATRICES[label]).max())
    report.add(sec, "correction table matches 2x2 matrix products", STRUCTURAL_TOL, worst_phase,
               passed=mismatches == 0 and worst_phase <= STRUCTURAL_TOL,
               detail=f"{mismatches} mismatched triples")

    classes = correction_classes(correction)
    sizes = sorted(len(s) for s in classes.values())
    report.add(sec, "four classes of 16 outcomes", 0, int(sizes != [16] * 4), detail=f"sizes {sizes}")
    report.add(sec, "identity class equals the tabulated 16 outcomes", 0,
               len(classes[0] ^ CLASS_I_REFERENCE))
    return classes


def _check_protocol(report: Report, grid, tables, correction, classes) -> None:
    sec = "protocol"
    ghz = {pr: tables[(ResourceKind.GHZ, pr)] for pr in grid}
    smo = {pr: tables[(ResourceKind.SMOLIN, pr)] for pr in grid}

    worst = _max_abs(abs(1 - b.fidelity) for rows in ghz.values() for b in rows
                     if b.probability > REACHABLE_TOL)
    report.add(sec, "GHZ: every reachable branch recovers the input", STRUCTURAL_TOL, worst)
    worst = _max_abs(abs(1 - b.fidelity) for rows in smo.values() for b in rows)
    worst_member = _max_abs(abs(1 - f) for rows in smo.values() for b in rows
                            for f in b.member_fidelities if f is not None)
    missing = sum(f is None for rows in smo.values() for b in rows for f in b.member_fidelities)
    report.add(sec, "Smolin: all 64 branches recover the input", STRUCTURAL_TOL, worst)
    report.add(sec, "Smolin: every reachable (branch, ensemble member) recovers the input",
               STRUCTURAL_TOL, worst_member, detail=f"{missing} member-branches unreachable")

    worst = 0.0
    for pr, rows in list(ghz.items()) + list(smo.items()):
        worst = max(worst, abs(sum(b.probability for b in rows) - 1))
    report.add(sec, "branch probabilities sum to 1", STRUCTURAL_TOL, worst)

    worst = 0.0
    for pr, rows in ghz.items():
        probs = {b.outcome: b.probability for b in rows}
        n16 = 16 * pr.norm
        worst = max(worst, abs(probs[(0, 0, 0)] - 1 / n16), abs(probs[(2, 0, 2)] - pr.p**2 / n16),
                    abs(probs[(2, 2, 0)] - pr.q**2 / n16))
    report.add(sec, "GHZ: P(000)=1/16N, P(202)=p^2/16N, P(220)=q^2/16N", STRUCTURAL_TOL, worst)

    worst = 0.0
    worst_state = 0.0
    for pr, rows in ghz.items():
        oracle = oracles.ghz_branch_oracle(pr.alpha, pr.beta, pr.p)
        for b in rows:
            p_or, d = oracle[b.outcome]
            worst = max(worst, abs(b.probability - p_or))
            if p_or > REACHABLE_TOL:
                # oracle D state after correction, compared up to phase
                fixed = PAULI_MATRICES[matrix_product_label(b.outcome)[0]] @ d / math.sqrt(p_or)
                worst_state = max(worst_state, 1 - abs(np.vdot(fixed, b.d_state.amplitudes)) ** 2)
    report.add(sec, "GHZ: 64-entry table matches brute-force Bell-bra contraction", STRUCTURAL_TOL, worst)
    report.add(sec, "GHZ: corrected D state matches brute-force contraction", STRUCTURAL_TOL, worst_state)

    worst = 0.0
    ok = True
    for pr, rows in ghz.items():
        allowed = [0.0, 1.0, pr.p**2, pr.q**2]
        coeffs = [b.probability * 16 * pr.norm for b in rows]
        worst = max(worst, max(min(abs(c - a) for a in allowed) for c in coeffs))
        nonzero = sum(b.probability > REACHABLE_TOL for b in rows)
        if 0 < pr.p < 1 and pr.p != pr.q:
            counts = [sum(abs(c - a) < 1e-9 for c in coeffs) for a in allowed[1:]]
            ok &= nonzero == 48 and counts == [16, 16, 16]
        elif pr.p == pr.q:
            ok &= nonzero == 48
    report.add(sec, "GHZ: probabilities are c^2/16N, c in {0,1,p,q}, 48 nonzero", STRUCTURAL_TOL, worst,
               passed=ok and worst <= STRUCTURAL_TOL)

    by_p: dict = {}
    for pr, rows in ghz.items():
        by_p.setdefault(pr.p, []).append(np.array([b.probability for b in rows]))
    worst = _max_abs(np.abs(t - ts[0]).max() for ts in by_p.values() for t in ts)
    report.add(sec, "GHZ: branch probabilities independent of alpha", STRUCTURAL_TOL, worst)

    unreached = 0
    for pr, rows in ghz.items():
        if 0 < pr.p < 1:
            reachable_class_i = {b.outcome for b in rows
                                 if b.probability > REACHABLE_TOL and b.outcome in classes[0]}
            unreached += len(reachable_class_i ^ GHZ_IDENTITY_REFERENCE)
    report.add(sec, "GHZ: reachable identity-class outcomes equal the tabulated 12", 0, unreached)

    worst = _max_abs(abs(b.probability - 1 / 64) for rows in smo.values() for b in rows)
    report.add(sec, "Smolin: every outcome has probability 1/64 across the grid", STRUCTURAL_TOL, worst)


def _check_order_independence(report: Report, params_list, correction) -> None:
    worst = 0.0
    for resource in ResourceKind:
        for pr in params_list:
            base = enumerate_branches(resource, pr, correction)
            for order in itertools.permutations(range(3)):
                if order == DEFAULT_ORDER:
                    continue
                other = enumerate_branches(resource, pr, correction, order=order)
                for b0, b1 in zip(base, other):
                    worst = max(worst, abs(b0.probability - b1.probability),
                                1 - abs(np.vdot(b0.d_state.amplitudes, b1.d_state.amplitudes)) ** 2)
    report.add("protocol", "measurement order does not change any branch", STRUCTURAL_TOL, worst)


def _check_sampling(report: Report, params: TelecloningParams, tables, shots: int, seed: int,
                    correction: Correction) -> None:
    sec = "sampling"
    for resource in ResourceKind:
        counts = sample_distribution(resource, params, shots, seed, correction=correction)
        again = sample_distribution(resource, params, shots, seed, correction=correction)
        expected = {b.outcome: b.probability for b in tables[(resource, params)]}
        statistic, dof, pval, forbidden = chi_square_gof(counts, expected)
        report.add(sec, f"{resource.value}: chi-square goodness of fit at {shots} shots",
                   CHI2_SIGNIFICANCE, pval,
                   passed=pval >= CHI2_SIGNIFICANCE and forbidden == 0 and counts == again,
                   detail=f"chi2={statistic:.2f} dof={dof} p={pval:.3f} forbidden={forbidden} "
                          f"reproducible={counts == again}")


def _check_leakage(report: Report, grid) -> None:
    sec = "leakage"
    alpha = 0.6
    priors = [
        [(0.5, TelecloningParams(alpha, p=0.6)), (0.5, TelecloningParams(alpha, p=0.9))],
        [(0.5, TelecloningParams(0.28, p=0.7)), (0.5, TelecloningParams(0.8, p=0.7))],
        [(1 / len(grid), pr) for pr in grid],
        [(1.0, grid[0])],
    ]
    worst_smolin = 0.0
    bound_violation = 0.0
    for prior in priors:
        for resource in ResourceKind:
            mi = mutual_information(resource, prior).mutual_information_bits
            bound_violation = max(bound_violation, -mi, mi - math.log2(len(prior)))
            if resource is ResourceKind.SMOLIN:
                worst_smolin = max(worst_smolin, abs(mi))
    report.add(sec, "Smolin outcomes carry zero information about the input", STRUCTURAL_TOL, worst_smolin)
    report.add(sec, "0 <= I <= log2(prior size)", STRUCTURAL_TOL, bound_violation)

    ghz_p = mutual_information(ResourceKind.GHZ, priors[0]).mutual_information_bits
    report.add(sec, "GHZ outcomes leak p (two-point prior p in {0.6, 0.9})", 1e-3, ghz_p,
               passed=ghz_p > 1e-3, detail=f"I = {ghz_p:.6f} bits")
    ghz_a = mutual_information(ResourceKind.GHZ, priors[1]).mutual_information_bits
    report.add(sec, "GHZ outcomes do not leak alpha at fixed p", STRUCTURAL_TOL, abs(ghz_a))


def verify_all(grid: Optional[Sequence[TelecloningParams]] = None,
               correction: Correction = correction_for,
               shots: int = DEFAULT_SHOTS, seed: int = DEFAULT_SEED) -> Report:
    """Run every invariant over ``grid`` and collect a pass/fail report.

    ``correction`` can be swapped for a corrupted table to exercise the
    failure path.
    """
    grid = list(grid) if grid is not None else default_grid()
    if not grid:
        raise ValueError("grid must contain at least one parameter set")
    report = Report("remote information concentration: verification")
    tables = {(r, pr): enumerate_branches(r, pr, correction) for r in ResourceKind for pr in grid}

    _check_states(report, grid)
    report.extend(bound_entanglement_suite())
    _check_qmath(report, grid[0])
    classes = _check_pauli(report, correction)
    _check_protocol(report, grid, tables, correction, classes)
    _check_order_independence(report, grid[:2], correction)
    _check_sampling(report, grid[len(grid) // 2], tables, shots, seed, correction)
    _check_leakage(report, grid)
    return report
