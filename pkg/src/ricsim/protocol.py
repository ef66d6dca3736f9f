"""The remote concentration protocol on the 7-qubit register ``ABCDEFG``.

Alice, Bob and Charlie Bell-measure the pairs (A,E), (B,F), (C,G), send
their outcomes to David, and David applies the product Pauli to qubit D.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import qmath
from .pauli import correction_for, pauli
from .qmath import MixedState, PureState
from .states import (A, B, BELL_PROJECTORS, C, D, E, F, G, TelecloningParams, ghz4,
                     input_state, smolin_state, telecloning_state)

PAIRS = ((A, E), (B, F), (C, G))
PARTIES = ("Alice", "Bob", "Charlie")
DEFAULT_ORDER = (0, 1, 2)
# branches at or below this probability are unreachable
REACHABLE_TOL = 1e-14

Correction = Callable[[Sequence[int]], int]


class ResourceKind(str, enum.Enum):
    GHZ = "ghz"
    SMOLIN = "smolin"


def resource_state(kind: ResourceKind) -> MixedState:
    """Shared DEFG resource as an ensemble (GHZ is a one-member ensemble)."""
    kind = ResourceKind(kind)
    if kind is ResourceKind.GHZ:
        return MixedState((1.0,), (ghz4(),))
    return smolin_state()


def joint_state(kind: ResourceKind, params: TelecloningParams) -> MixedState:
    psi = telecloning_state(params)
    res = resource_state(kind)
    return MixedState(res.weights, tuple(qmath.tensor(psi, s) for s in res.states))


@dataclass(frozen=True)
class Message:
    sender: str
    outcome: int


@dataclass(frozen=True)
class ProtocolTranscript:
    messages: tuple[Message, ...]
    correction: int
    applied_by: str = "David"

    @property
    def outcome(self) -> tuple[int, int, int]:
        by_sender = {m.sender: m.outcome for m in self.messages}
        return tuple(by_sender[p] for p in PARTIES)


@dataclass(frozen=True)
class BranchRecord:
    """One measurement branch after David's correction.

    ``member_fidelities`` holds the post-correction fidelity for each
    ensemble member of the resource (``None`` where that member cannot
    produce this outcome). Unreachable branches carry the input state and
    fidelity 1 by convention.
    """

    outcome: tuple[int, int, int]
    probability: float
    correction: int
    d_state: PureState
    fidelity: float
    reachable: bool = True
    member_fidelities: tuple[Optional[float], ...] = field(default=())


def _check_order(order: Sequence[int]) -> tuple[int, ...]:
    order = tuple(int(i) for i in order)
    if sorted(order) != [0, 1, 2]:
        raise ValueError(f"measurement order must be a permutation of (0, 1, 2), got {order}")
    return order


def _project_all(vector: np.ndarray, order: Sequence[int]) -> dict[tuple, np.ndarray]:
    """Unnormalized post-measurement vectors for all 64 outcome triples."""
    leaves = {(): vector}
    for pair_index in order:
        nxt = {}
        for prefix, v in leaves.items():
            for i, P in enumerate(BELL_PROJECTORS):
                nxt[prefix + ((pair_index, i),)] = qmath.apply_matrix(v, P, PAIRS[pair_index])
        leaves = nxt
    return {tuple(i for _, i in sorted(key)): v for key, v in leaves.items()}


def _corrected_d(post: PureState, label: int) -> np.ndarray:
    return qmath.partial_trace(qmath.apply_local(pauli(label), [D], post), [D])


def _principal_state(rho: np.ndarray) -> PureState:
    vals, vecs = np.linalg.eigh(rho)
    return PureState.from_unnormalized(vecs[:, -1])


def enumerate_branches(resource: ResourceKind, params: TelecloningParams,
                       correction: Correction = correction_for,
                       order: Sequence[int] = DEFAULT_ORDER) -> list[BranchRecord]:
    """Exact table of all 64 branches, averaged over the resource ensemble."""
    order = _check_order(order)
    chi = input_state(params)
    joint = joint_state(resource, params)
    member_leaves = [(w, _project_all(s.amplitudes, order)) for w, s in joint]

    records = []
    for outcome in sorted(member_leaves[0][1]):
        label = correction(outcome)
        prob = 0.0
        rho_d = np.zeros((2, 2), dtype=complex)
        member_fids = []
        for w, leaves in member_leaves:
            v = leaves[outcome]
            p_m = float(np.vdot(v, v).real)
            if p_m <= REACHABLE_TOL:
                member_fids.append(None)
                continue
            rho_m = _corrected_d(PureState.from_unnormalized(v), label)
            member_fids.append(qmath.fidelity_pure(chi, rho_m))
            prob += w * p_m
            rho_d += w * p_m * rho_m
        if prob > REACHABLE_TOL:
            rho_d /= prob
            records.append(BranchRecord(outcome, prob, label, _principal_state(rho_d),
                                        qmath.fidelity_pure(chi, rho_d), True, tuple(member_fids)))
        else:
            records.append(BranchRecord(outcome, prob, label, chi, 1.0, False, tuple(member_fids)))
    return records


def _draws(seed: int, shots: int) -> np.ndarray:
    # column 0 picks the resource member, columns 1-3 drive the three measurements
    return np.random.default_rng(seed).random((shots, 4))


def run_once(resource: ResourceKind, params: TelecloningParams, seed: int,
             correction: Correction = correction_for,
             order: Sequence[int] = DEFAULT_ORDER) -> tuple[ProtocolTranscript, BranchRecord]:
    """Simulate one protocol run with sequential, seeded measurements.

    The draws are row 0 of the stream used by ``sample_runs`` with the same
    seed, so ``run_once(seed)`` reproduces the first sampled shot. The
    recorded probability is the exact ensemble probability of the observed
    outcome.
    """
    order = _check_order(order)
    u = _draws(seed, 1)[0]
    chi = input_state(params)
    joint = joint_state(resource, params)
    member = qmath.inverse_cdf(joint.weights, u[0])
    state = joint.states[member]

    outcomes = [0, 0, 0]
    messages = []
    for step, pair_index in enumerate(order):
        i, _, state = qmath.measure_projective(BELL_PROJECTORS, PAIRS[pair_index], state, u[1 + step])
        outcomes[pair_index] = i
        messages.append(Message(PARTIES[pair_index], i))
    outcome = tuple(outcomes)

    label = correction(outcome)
    corrected = qmath.apply_local(pauli(label), [D], state)
    rho_d = qmath.partial_trace(corrected, [D])

    prob = 0.0
    for w, s in joint:
        v = s.amplitudes
        for pair_index, i in zip(range(3), outcome):
            v = qmath.apply_matrix(v, BELL_PROJECTORS[i], PAIRS[pair_index])
        prob += w * float(np.vdot(v, v).real)

    transcript = ProtocolTranscript(tuple(messages), label)
    record = BranchRecord(outcome, prob, label, _principal_state(rho_d),
                          qmath.fidelity_pure(chi, rho_d), True)
    return transcript, record


def _walk_tables(vector: np.ndarray, order: Sequence[int]):
    """Conditional outcome probabilities for every node of the measurement tree.

    Returns ``(tables, leaves)``: ``tables[d]`` has shape ``(4,) * (d + 1)``
    and holds the probabilities of the d-th measurement given the earlier
    outcomes (zeros below unreachable nodes); ``leaves`` maps each full
    prefix to its normalized post-measurement state, or ``None``.
    """
    tables = [np.zeros((4,) * (d + 1)) for d in range(3)]
    frontier = {(): PureState.from_unnormalized(vector)}
    for depth, pair_index in enumerate(order):
        nxt = {}
        for prefix, state in frontier.items():
            if state is None:
                nxt.update({prefix + (i,): None for i in range(4)})
                continue
            for i, P in enumerate(BELL_PROJECTORS):
                v = qmath.apply_matrix(state.amplitudes, P, PAIRS[pair_index])
                prob = float(np.vdot(v, v).real)
                tables[depth][prefix + (i,)] = prob
                nxt[prefix + (i,)] = PureState.from_unnormalized(v) if prob > REACHABLE_TOL else None
        frontier = nxt
    return tables, frontier


def _vector_inverse_cdf(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    # row-wise qmath.inverse_cdf
    idx = (np.cumsum(probs, axis=1) <= u[:, None]).sum(axis=1)
    last = 3 - np.argmax(probs[:, ::-1] > 0, axis=1)
    return np.minimum(idx, last)


def sample_runs(resource: ResourceKind, params: TelecloningParams, shots: int, seed: int,
                correction: Correction = correction_for,
                order: Sequence[int] = DEFAULT_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Monte Carlo runs of the protocol.

    Shot ``n`` uses row ``n`` of the seeded draw matrix and follows the
    ``run_once`` pipeline: pick a resource member, then measure the pairs one
    after another by inverse CDF on the conditional outcome probabilities.
    The measurement tree is tabulated once, so shots are walked in bulk.

    Returns:
        ``(outcomes, fidelities)`` with shapes ``(shots, 3)`` and ``(shots,)``.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    order = _check_order(order)
    chi = input_state(params)
    joint = joint_state(resource, params)

    tables, fids = [], []
    for _, s in joint:
        t, leaves = _walk_tables(s.amplitudes, order)
        fid = np.ones((4, 4, 4))
        for prefix, post in leaves.items():
            if post is not None:
                outcome = [0, 0, 0]
                for pair_index, i in zip(order, prefix):
                    outcome[pair_index] = i
                fid[prefix] = qmath.fidelity_pure(chi, _corrected_d(post, correction(tuple(outcome))))
        tables.append(t)
        fids.append(fid)

    u = _draws(seed, shots)
    member = _vector_inverse_cdf(np.tile(np.asarray(joint.weights + (0.0,) * (4 - len(joint))), (shots, 1)),
                                 u[:, 0])
    i0 = _vector_inverse_cdf(np.array([t[0] for t in tables])[member], u[:, 1])
    i1 = _vector_inverse_cdf(np.array([t[1] for t in tables])[member, i0], u[:, 2])
    i2 = _vector_inverse_cdf(np.array([t[2] for t in tables])[member, i0, i1], u[:, 3])
    walked = np.stack([i0, i1, i2], axis=1)

    outcomes = np.zeros((shots, 3), dtype=int)
    outcomes[:, list(order)] = walked
    fidelities = np.array(fids)[member, i0, i1, i2]
    return outcomes, fidelities


def sample_distribution(resource: ResourceKind, params: TelecloningParams, shots: int,
                        seed: int, **kwargs) -> dict[tuple[int, int, int], int]:
    """Counts for every outcome triple (zeros included) over ``shots`` runs."""
    outcomes, _ = sample_runs(resource, params, shots, seed, **kwargs)
    flat = outcomes[:, 0] * 16 + outcomes[:, 1] * 4 + outcomes[:, 2]
    counts = np.bincount(flat, minlength=64)
    return {(t // 16, (t // 4) % 4, t % 4): int(counts[t]) for t in range(64)}
