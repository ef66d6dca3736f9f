"""Pauli labels, their products modulo phase, and outcome correction classes.

Labels follow the protocol's association of Bell outcomes with Paulis:
0 -> I, 1 -> Z, 2 -> X, 3 -> Y. Modulo global phase the four labels form the
Klein four-group, and with this numbering the product is bitwise XOR.
"""

from __future__ import annotations

import itertools
from functools import reduce

import numpy as np

IDENTITY, SIGMA_Z, SIGMA_X, SIGMA_Y = range(4)
LABEL_NAMES = ("I", "Z", "X", "Y")
CLASS_NAMES = ("I", "II", "III", "IV")

PAULI_MATRICES = (
    np.eye(2, dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
)

ALL_TRIPLES = tuple(itertools.product(range(4), repeat=3))


def pauli(label: int) -> np.ndarray:
    return PAULI_MATRICES[_check(label)]


def _check(label: int) -> int:
    if int(label) not in range(4):
        raise ValueError(f"Pauli label must be 0..3, got {label!r}")
    return int(label)


def pauli_mul_mod_phase(a: int, b: int) -> int:
    return _check(a) ^ _check(b)


def correction_for(outcome) -> int:
    """Pauli label David applies for Bell outcomes ``(l, j, k)``."""
    return reduce(pauli_mul_mod_phase, outcome, IDENTITY)


def correction_classes(correction=correction_for) -> dict[int, frozenset]:
    """Partition of all 64 outcome triples by their correction label."""
    classes = {c: set() for c in range(4)}
    for t in ALL_TRIPLES:
        classes[correction(t)].add(t)
    return {c: frozenset(s) for c, s in classes.items()}


def label_of_matrix(m: np.ndarray, tol: float = 1e-12) -> tuple[int, complex]:
    """Identify ``m = phase * sigma_c`` by direct matrix comparison.

    Returns ``(c, phase)``; raises ``ValueError`` if ``m`` is not a phased
    Pauli matrix within ``tol``.
    """
    m = np.asarray(m, dtype=complex)
    for c, s in enumerate(PAULI_MATRICES):
        # sigma_c is unitary and Hermitian, so the phase is Tr(sigma_c m)/2
        phase = np.trace(s @ m) / 2
        if abs(abs(phase) - 1) <= tol and np.allclose(m, phase * s, atol=tol, rtol=0):
            return c, complex(phase)
    raise ValueError("matrix is not a Pauli operator up to phase")


def matrix_product_label(outcome) -> tuple[int, complex]:
    """Multiply the actual 2x2 matrices of ``outcome`` and classify the product."""
    m = reduce(np.matmul, (PAULI_MATRICES[i] for i in outcome), np.eye(2, dtype=complex))
    return label_of_matrix(m)


# Outcomes listed as requiring no correction, as tabulated for the mixed
# resource (all sixteen) and for the GHZ resource (twelve).
CLASS_I_REFERENCE = frozenset({
    (0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0),
    (2, 2, 0), (2, 3, 1), (3, 2, 1), (3, 3, 0),
    (0, 2, 2), (0, 3, 3), (1, 2, 3), (1, 3, 2),
    (2, 0, 2), (2, 1, 3), (3, 0, 3), (3, 1, 2),
})
GHZ_IDENTITY_REFERENCE = frozenset({
    (0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0),
    (2, 0, 2), (3, 0, 3), (3, 1, 2), (2, 1, 3),
    (2, 2, 0), (3, 3, 0), (2, 3, 1), (3, 2, 1),
})
