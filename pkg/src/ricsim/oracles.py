"""Brute-force reference computations, kept independent of the simulator path.

Nothing here goes through ``qmath``'s projectors or the protocol's branch
tree: states are written out term by term and outcomes are obtained by
contracting explicit Bell bras with ``numpy.einsum``.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

_S = 1 / math.sqrt(2)
# Bell vectors as 2x2 tensors indexed [first qubit, second qubit]
BELL_TENSORS = np.array([
    [[_S, 0], [0, _S]],
    [[_S, 0], [0, -_S]],
    [[0, _S], [_S, 0]],
    [[0, _S], [-_S, 0]],
], dtype=complex)


def _ghz_joint_terms(alpha, beta, p, q):
    """Expansion of telecloning state x GHZ as (AE, BF, CG, D) bit strings."""
    return [
        (alpha, "00", "00", "00", "0"), (alpha * p, "10", "00", "10", "0"),
        (alpha * q, "10", "10", "00", "0"), (alpha, "01", "01", "01", "1"),
        (alpha * p, "11", "01", "11", "1"), (alpha * q, "11", "11", "01", "1"),
        (beta, "10", "10", "10", "0"), (beta * q, "00", "00", "10", "0"),
        (beta * p, "00", "10", "00", "0"), (beta, "11", "11", "11", "1"),
        (beta * q, "01", "01", "11", "1"), (beta * p, "01", "11", "01", "1"),
    ]


def ghz_joint_tensor(alpha: float, beta: float, p: float) -> np.ndarray:
    """Joint amplitudes as a tensor indexed ``[a, e, b, f, c, g, d]``."""
    q = 1.0 - p
    n = 1.0 + p * p + q * q
    t = np.zeros((2,) * 7, dtype=complex)
    for coeff, ae, bf, cg, d in _ghz_joint_terms(alpha, beta, p, q):
        idx = tuple(int(x) for x in ae + bf + cg + d)
        t[idx] += coeff / math.sqrt(2 * n)
    return t


def ghz_branch_oracle(alpha: float, beta: float, p: float) -> dict:
    """Map each outcome ``(l, j, k)`` to ``(probability, unnormalized D vector)``."""
    t = ghz_joint_tensor(alpha, beta, p)
    bras = BELL_TENSORS.conj()
    out = {}
    for l, j, k in itertools.product(range(4), repeat=3):
        d = np.einsum("aebfcgd,ae,bf,cg->d", t, bras[l], bras[j], bras[k])
        out[(l, j, k)] = (float(np.vdot(d, d).real), d)
    return out


def smolin_density_oracle() -> np.ndarray:
    """Smolin state in Pauli form, ``(IIII + XXXX + YYYY + ZZZZ) / 16``."""
    paulis = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    rho = np.zeros((16, 16), dtype=complex)
    for s in paulis:
        rho += np.kron(np.kron(s, s), np.kron(s, s))
    return rho / 16
