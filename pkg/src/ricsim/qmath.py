"""Dense complex linear algebra for small multi-qubit registers.

States are plain numpy vectors wrapped in immutable containers. Qubit 0 is
the most significant bit of a basis index, so ``|q0 q1 ... q(n-1)>`` maps to
``int("q0q1...", 2)``.

Operators (Pauli matrices, projectors, density matrices) are ordinary
``numpy.ndarray`` objects of shape ``(2**k, 2**k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

NORM_TOL = 1e-12
# accumulated round-off allowed for states built from many operations
STATE_NORM_TOL = 1e-10
MAX_QUBITS = 8


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over ``num_qubits`` qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        n = int(np.log2(amps.size)) if amps.size else -1
        if n < 0 or 2**n != amps.size:
            raise ValueError(f"amplitude vector length {amps.size} is not a power of two")
        if n > MAX_QUBITS:
            raise ValueError(f"{n} qubits exceeds the supported maximum of {MAX_QUBITS}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"state is not normalized (squared norm {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.sqrt(np.vdot(amps, amps).real)
        if norm < 1e-300:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm)

    @classmethod
    def basis(cls, bits: str) -> "PureState":
        """Computational basis state from a bit string such as ``"010"``."""
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(amps)

    @property
    def num_qubits(self) -> int:
        return int(np.log2(self.amplitudes.size))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def __repr__(self):
        return f"PureState(num_qubits={self.num_qubits}, amplitudes={np.round(self.amplitudes, 6)!r})"


@dataclass(frozen=True, eq=False)
class MixedState:
    """Weighted ensemble of pure states, ``rho = sum_i w_i |s_i><s_i|``."""

    weights: tuple[float, ...]
    states: tuple[PureState, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        states = tuple(self.states)
        if not states or len(weights) != len(states):
            raise ValueError("ensemble needs one weight per member and at least one member")
        if any(not (0.0 < w <= 1.0) for w in weights):
            raise ValueError("ensemble weights must lie in (0, 1]")
        if abs(sum(weights) - 1.0) > NORM_TOL:
            raise ValueError(f"ensemble weights sum to {sum(weights)!r}, not 1")
        if len({s.num_qubits for s in states}) != 1:
            raise ValueError("all ensemble members must have the same number of qubits")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "states", states)

    @property
    def num_qubits(self) -> int:
        return self.states[0].num_qubits

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __iter__(self):
        return iter(zip(self.weights, self.states))

    def __len__(self):
        return len(self.states)

    def density_matrix(self) -> np.ndarray:
        rho = np.zeros((self.dim, self.dim), dtype=complex)
        for w, s in self:
            rho += w * s.density_matrix()
        return rho


State = Union[PureState, MixedState]


def _check_targets(targets: Sequence[int], num_qubits: int) -> list[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise ValueError(f"target qubits must be distinct, got {targets}")
    if any(t < 0 or t >= num_qubits for t in targets):
        raise ValueError(f"target qubits {targets} out of range for {num_qubits} qubits")
    return targets


def _num_qubits_of(matrix: np.ndarray) -> int:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    n = int(np.log2(matrix.shape[0]))
    if 2**n != matrix.shape[0]:
        raise ValueError(f"matrix dimension {matrix.shape[0]} is not a power of two")
    return n


def apply_matrix(vector: np.ndarray, op: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Apply ``op`` to ``targets`` of a raw amplitude vector (no normalization).

    Works for any operator, including projectors; ``targets[0]`` is the most
    significant qubit of ``op``'s index.
    """
    vector = np.asarray(vector, dtype=complex)
    n = int(np.log2(vector.size))
    targets = _check_targets(targets, n)
    k = len(targets)
    if _num_qubits_of(op) != k:
        raise ValueError(f"operator of dimension {np.shape(op)[0]} does not match {k} target qubits")
    psi = vector.reshape([2] * n)
    op_t = np.asarray(op, dtype=complex).reshape([2] * (2 * k))
    out = np.tensordot(op_t, psi, axes=(list(range(k, 2 * k)), targets))
    # tensordot puts the operator's output axes first
    out = np.moveaxis(out, list(range(k)), targets)
    return out.reshape(-1)


def tensor(a: PureState, b: PureState) -> PureState:
    """Kronecker product; ``a`` occupies the leading qubits."""
    return PureState(np.kron(a.amplitudes, b.amplitudes))


def apply_local(op: np.ndarray, targets: Sequence[int], state: PureState) -> PureState:
    """Apply a unitary ``op`` to the listed qubits of ``state``.

    Raises:
        ValueError: on dimension mismatch, bad targets, or if ``op`` does not
            preserve the norm of ``state``.
    """
    out = apply_matrix(state.amplitudes, op, targets)
    norm = np.vdot(out, out).real
    if abs(norm - 1.0) > STATE_NORM_TOL:
        raise ValueError("operator did not preserve the norm; use measure_projective for projectors")
    return PureState(out)


def outcome_probabilities(projectors: Sequence[np.ndarray], targets: Sequence[int],
                          state: PureState) -> np.ndarray:
    return np.array([np.vdot(state.amplitudes, apply_matrix(state.amplitudes, P, targets)).real
                     for P in projectors])


def inverse_cdf(probs: Sequence[float], u: float) -> int:
    """First index whose cumulative probability exceeds ``u``."""
    probs = np.asarray(probs, dtype=float)
    hits = np.nonzero(np.cumsum(probs) > u)[0]
    if hits.size:
        return int(hits[0])
    # round-off can leave the total slightly below u
    return int(np.nonzero(probs > 0)[0][-1])


def measure_projective(projectors: Sequence[np.ndarray], targets: Sequence[int],
                       state: PureState, u: float) -> tuple[int, float, PureState]:
    """Projective measurement driven by a uniform draw ``u`` in [0, 1).

    The outcome is the first index whose cumulative probability exceeds ``u``
    (inverse CDF). Returns ``(index, probability, renormalized post state)``.

    Raises:
        ValueError: if the projectors are not complete on the target
            subspace or every outcome has vanishing probability.
    """
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must lie in [0, 1), got {u!r}")
    total = sum(np.asarray(P, dtype=complex) for P in projectors)
    if not np.allclose(total, np.eye(total.shape[0]), atol=NORM_TOL, rtol=0):
        raise ValueError("projectors do not sum to the identity")
    projected = [apply_matrix(state.amplitudes, P, targets) for P in projectors]
    probs = np.array([np.vdot(v, v).real for v in projected])
    if np.all(probs < 1e-14):
        raise ValueError("all outcome probabilities vanish; invalid measurement")
    index = inverse_cdf(probs, u)
    return index, float(probs[index]), PureState.from_unnormalized(projected[index])


def density_matrix(state: State | np.ndarray) -> np.ndarray:
    if isinstance(state, (PureState, MixedState)):
        return state.density_matrix()
    rho = np.asarray(state, dtype=complex)
    _num_qubits_of(rho)
    return rho


def partial_trace(state: State | np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on ``keep`` (returned in ascending qubit order).

    Pure states and ensembles are reduced member by member without forming
    the full density matrix.
    """
    if len(keep) == 0:
        raise ValueError("keep must name at least one qubit")
    if isinstance(state, PureState):
        n = state.num_qubits
        keep = sorted(_check_targets(keep, n))
        traced = [q for q in range(n) if q not in keep]
        psi = state.amplitudes.reshape([2] * n).transpose(keep + traced)
        psi = psi.reshape(2 ** len(keep), -1)
        return psi @ psi.conj().T
    if isinstance(state, MixedState):
        return sum(w * partial_trace(s, keep) for w, s in state)
    rho = density_matrix(state)
    n = _num_qubits_of(rho)
    keep = sorted(_check_targets(keep, n))
    traced = [q for q in range(n) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    t = t.transpose(keep + traced + [n + q for q in keep] + [n + q for q in traced])
    dk, dt = 2 ** len(keep), 2 ** len(traced)
    return np.einsum("atbt->ab", t.reshape(dk, dt, dk, dt))


def partial_transpose(rho: np.ndarray, subset: Sequence[int]) -> np.ndarray:
    """Transpose the row/column indices of the qubits in ``subset``."""
    rho = np.asarray(rho, dtype=complex)
    n = _num_qubits_of(rho)
    subset = _check_targets(subset, n)
    t = rho.reshape([2] * (2 * n))
    axes = list(range(2 * n))
    for q in subset:
        axes[q], axes[n + q] = axes[n + q], axes[q]
    return t.transpose(axes).reshape(2**n, 2**n)


def hermitian_eigvalsh(matrix: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix via its real symmetric embedding.

    ``H = A + iB`` maps to ``[[A, -B], [B, A]]``, whose spectrum is that of
    ``H`` with every eigenvalue doubled.
    """
    h = np.asarray(matrix, dtype=complex)
    h = 0.5 * (h + h.conj().T)
    a, b = h.real, h.imag
    embedded = np.block([[a, -b], [b, a]])
    return np.linalg.eigvalsh(embedded)[::2]


def min_eigenvalue(matrix: np.ndarray) -> float:
    return float(hermitian_eigvalsh(matrix)[0])


def _clip01(x: float) -> float:
    # round-off may push an exact 1 (or 0) just outside the unit interval
    return float(min(1.0, max(0.0, x)))


def fidelity_pure(target: PureState, achieved: PureState | np.ndarray) -> float:
    """``|<t|a>|^2`` for a pure ``achieved``, ``<t|rho|t>`` for a density matrix."""
    t = target.amplitudes
    if isinstance(achieved, PureState):
        if achieved.dim != t.size:
            raise ValueError("fidelity arguments have different dimensions")
        return _clip01(abs(np.vdot(t, achieved.amplitudes)) ** 2)
    rho = np.asarray(achieved, dtype=complex)
    if rho.shape != (t.size, t.size):
        raise ValueError("fidelity arguments have different dimensions")
    return _clip01(np.vdot(t, rho @ t).real)


def embed_operator(op: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """Full-register matrix of ``op`` acting on ``targets`` (identity elsewhere)."""
    dim = 2**num_qubits
    cols = [apply_matrix(np.eye(dim, dtype=complex)[:, c], op, targets) for c in range(dim)]
    return np.column_stack(cols)


def expectation(op: np.ndarray, targets: Sequence[int], state: State | np.ndarray) -> float:
    """Real part of ``Tr(rho O)`` with ``O`` acting on ``targets``.

    Ensembles are evaluated member by member; a raw density matrix goes
    through the dense route.
    """
    if isinstance(state, PureState):
        return float(np.vdot(state.amplitudes, apply_matrix(state.amplitudes, op, targets)).real)
    if isinstance(state, MixedState):
        return float(sum(w * expectation(op, targets, s) for w, s in state))
    rho = density_matrix(state)
    full = embed_operator(op, targets, _num_qubits_of(rho))
    return float(np.trace(full @ rho).real)


def is_density_matrix(rho: np.ndarray, tol: float = NORM_TOL, psd_tol: float = 1e-10) -> bool:
    rho = np.asarray(rho, dtype=complex)
    return (np.allclose(rho, rho.conj().T, atol=tol, rtol=0)
            and abs(np.trace(rho).real - 1.0) <= tol
            and min_eigenvalue(rho) >= -psd_tol)
