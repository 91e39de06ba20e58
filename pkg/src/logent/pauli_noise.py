"""Single-sided Pauli frames and the depolarizing noise channels.

A Pauli error on Alice's half of a Bell pair acts like the same Pauli on
Bob's half, so all errors are accumulated on Bob's side.  Paulis are stored
as 2-bit codes (bit 0 = X part, bit 1 = Z part); products modulo phase are
then plain XOR.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

I, X, Z, Y = 0, 1, 2, 3
LABELS = {I: "I", X: "X", Y: "Y", Z: "Z"}
CODES = {v: k for k, v in LABELS.items()}


def _check_prob(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True, eq=False)
class PauliFrame:
    """Per-qubit Pauli codes over the layout's data-site order."""

    codes: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.codes, dtype=np.uint8)
        if c.ndim != 1 or np.any(c > 3):
            raise ValueError("Pauli codes must be a 1-d array of values in 0..3")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "codes", c)

    @classmethod
    def identity(cls, n: int) -> "PauliFrame":
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_parts(cls, x_part, z_part) -> "PauliFrame":
        x = np.asarray(x_part, dtype=np.uint8) & 1
        z = np.asarray(z_part, dtype=np.uint8) & 1
        return cls(x | (z << 1))

    @classmethod
    def from_labels(cls, labels: str | Sequence[str]) -> "PauliFrame":
        return cls(np.array([CODES[s] for s in labels], dtype=np.uint8))

    @property
    def x_part(self) -> np.ndarray:
        return (self.codes & 1).astype(bool)

    @property
    def z_part(self) -> np.ndarray:
        return (self.codes >> 1).astype(bool)

    @property
    def n(self) -> int:
        return self.codes.size

    def weight(self) -> int:
        return int(np.count_nonzero(self.codes))

    def labels(self) -> str:
        return "".join(LABELS[int(c)] for c in self.codes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliFrame):
            return NotImplemented
        return np.array_equal(self.codes, other.codes)

    def __hash__(self) -> int:
        return hash(self.codes.tobytes())

    def __mul__(self, other: "PauliFrame") -> "PauliFrame":
        return PauliFrame(self.codes ^ other.codes)


@dataclass(frozen=True)
class NoiseParams:
    e_init: float
    e_swap: float

    def __post_init__(self):
        _check_prob("e_init", self.e_init)
        _check_prob("e_swap", self.e_swap)

    @property
    def e_tilde(self) -> float:
        return effective_swap_rate(self.e_swap)


def effective_swap_rate(e_swap: float) -> float:
    """Single-sided rate of two SWAP depolarizations, one on each node."""
    _check_prob("e_swap", e_swap)
    return 2.0 * e_swap - (4.0 / 3.0) * e_swap * e_swap


def compose_depolarizing(e1: float, e2: float) -> float:
    """Error rate of two depolarizing channels in sequence.

    The channel shrinks the Bloch vector by ``lambda = 1 - 4e/3`` and the
    shrink factors multiply.
    """
    lam = (1.0 - 4.0 * e1 / 3.0) * (1.0 - 4.0 * e2 / 3.0)
    return 0.75 * (1.0 - lam)


def marginal_error_probability(e_init: float, e_tilde: float, k: int) -> float:
    """Total error rate after Werner initialization and ``k`` SWAP events."""
    return reduce(compose_depolarizing, [e_tilde] * int(k), e_init)


def marginal_error_probabilities(e_init: float, e_tilde: float, counts) -> np.ndarray:
    counts = np.asarray(counts, dtype=float)
    lam = (1.0 - 4.0 * e_init / 3.0) * (1.0 - 4.0 * e_tilde / 3.0) ** counts
    return 0.75 * (1.0 - lam)


def _random_paulis(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    hit = rng.random(n) < p
    which = rng.integers(1, 4, size=n, dtype=np.uint8)
    return np.where(hit, which, 0).astype(np.uint8)


def sample_initial_errors(n_qubits: int, e_init: float, rng: np.random.Generator) -> PauliFrame:
    """I with probability ``1 - e_init``, otherwise uniform over X, Y, Z."""
    _check_prob("e_init", e_init)
    return PauliFrame(_random_paulis(rng, n_qubits, e_init))


def apply_swap_noise(frame: PauliFrame, swap_counts, e_tilde: float,
                     rng: np.random.Generator) -> PauliFrame:
    """Apply ``swap_counts[i]`` independent depolarizing events to qubit ``i``.

    ``swap_counts`` is given in the frame's qubit order (a
    :class:`~logent.rearrange.RearrangementPlan` provides it through
    ``counts_by_data_index``).
    """
    _check_prob("e_tilde", e_tilde)
    counts = np.asarray(swap_counts, dtype=np.int64)
    if counts.shape != (frame.n,):
        raise ValueError("swap_counts must have one entry per frame qubit")
    total = int(counts.sum())
    if total == 0:
        return frame
    events = _random_paulis(rng, total, e_tilde)
    owner = np.repeat(np.arange(frame.n), counts)
    codes = frame.codes.copy()
    np.bitwise_xor.at(codes, owner, events)
    return PauliFrame(codes)


def sample_frame(counts, e_init: float, e_tilde: float, rng: np.random.Generator) -> PauliFrame:
    """Initial Werner errors followed by SWAP noise, drawn from one stream."""
    frame = sample_initial_errors(len(counts), e_init, rng)
    return apply_swap_noise(frame, counts, e_tilde, rng)
