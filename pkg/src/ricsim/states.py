"""Builders for the states used by the concentration protocol.

Register layout of the full protocol is ``[A, B, C, D, E, F, G]``; the
builders here return the sub-registers ``ABC`` (telecloning state), ``D``
(input qubit) and ``DEFG`` (shared resource).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .qmath import MixedState, PureState, tensor

# qubit indices in the 7-qubit protocol register
A, B, C, D, E, F, G = range(7)
QUBIT_NAMES = "ABCDEFG"

_S = 1 / math.sqrt(2)

# |Phi^0>, |Phi^1> = (|00> +- |11>)/sqrt2 ; |Phi^2>, |Phi^3> = (|01> +- |10>)/sqrt2
_BELL_VECTORS = np.array([
    [_S, 0, 0, _S],
    [_S, 0, 0, -_S],
    [0, _S, _S, 0],
    [0, _S, -_S, 0],
], dtype=complex)


@dataclass(frozen=True)
class TelecloningParams:
    """Input amplitudes ``(alpha, beta)`` and asymmetry ``p``.

    ``beta`` defaults to ``+sqrt(1 - alpha**2)``. Values ``p < 1/2`` are
    accepted with a warning; the protocol is defined for every ``p`` in [0, 1].
    """

    alpha: float
    beta: Optional[float] = None
    p: float = 0.5

    def __post_init__(self):
        alpha = float(self.alpha)
        if not math.isfinite(alpha):
            raise ValueError("alpha must be finite")
        if self.beta is None:
            if alpha * alpha > 1.0 + 1e-9:
                raise ValueError(f"alpha={alpha!r} violates alpha^2 + beta^2 = 1 for real beta")
            beta = math.sqrt(max(0.0, 1.0 - alpha * alpha))
        else:
            beta = float(self.beta)
        if not math.isfinite(beta) or abs(alpha * alpha + beta * beta - 1.0) > 1e-9:
            raise ValueError(f"alpha^2 + beta^2 = 1 is required (alpha={alpha!r}, beta={beta!r})")
        p = float(self.p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p!r}")
        if p < 1.0 - p:
            warnings.warn(f"p={p!r} is below q=1-p; the clone asymmetry is reversed", stacklevel=3)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "p", p)

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def norm(self) -> float:
        """Normalizer ``N = 1 + p^2 + q^2``."""
        return 1.0 + self.p**2 + self.q**2

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "p": self.p, "q": self.q, "N": self.norm}


def input_state(params: TelecloningParams) -> PureState:
    return PureState(np.array([params.alpha, params.beta], dtype=complex))


def telecloning_state(params: TelecloningParams) -> PureState:
    """``alpha|phi0> + beta|phi1>`` on qubits A, B, C.

    |phi0> = (|000> + p|101> + q|110>)/sqrt(N)
    |phi1> = (|111> + p|010> + q|001>)/sqrt(N)
    """
    a, b, p, q = params.alpha, params.beta, params.p, params.q
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = a
    amps[0b101] = a * p
    amps[0b110] = a * q
    amps[0b111] = b
    amps[0b010] = b * p
    amps[0b001] = b * q
    return PureState(amps / math.sqrt(params.norm))


def ghz4() -> PureState:
    amps = np.zeros(16, dtype=complex)
    amps[0] = amps[15] = _S
    return PureState(amps)


def _check_bell_index(i: int) -> int:
    if int(i) not in range(4):
        raise ValueError(f"Bell index must be 0..3, got {i!r}")
    return int(i)


def bell_state(i: int) -> PureState:
    return PureState(_BELL_VECTORS[_check_bell_index(i)])


def bell_projector(i: int) -> np.ndarray:
    v = _BELL_VECTORS[_check_bell_index(i)]
    return np.outer(v, v.conj())


BELL_PROJECTORS = tuple(bell_projector(i) for i in range(4))


def smolin_state() -> MixedState:
    """Equal mixture of ``|Phi^i>_DE |Phi^i>_FG`` over the four Bell states."""
    members = tuple(tensor(bell_state(i), bell_state(i)) for i in range(4))
    return MixedState((0.25,) * 4, members)
