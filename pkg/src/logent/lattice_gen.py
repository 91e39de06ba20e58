"""Site grid and probabilistic Bell-pair generation.

Both nodes generate entanglement between qubits at the same coordinate, so a
single :class:`EntanglementPattern` describes the occupied sites of Alice and
Bob at once.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Tuple

import numpy as np

Site = Tuple[int, int]

# stream labels for per-trial generators
PATTERN_STREAM = 0
NOISE_STREAM = 1


@dataclass(frozen=True)
class GridSpec:
    size_L: int

    def __post_init__(self):
        if int(self.size_L) != self.size_L or self.size_L < 5:
            raise ValueError(f"grid size must be an integer >= 5, got {self.size_L}")

    @property
    def n_sites(self) -> int:
        return self.size_L * self.size_L

    def contains(self, site: Site) -> bool:
        r, c = site
        return 0 <= r < self.size_L and 0 <= c < self.size_L

    def index(self, site: Site) -> int:
        return site[0] * self.size_L + site[1]

    def site(self, index: int) -> Site:
        return divmod(int(index), self.size_L)


@dataclass(frozen=True)
class EntanglementPattern:
    grid: GridSpec
    occupied: FrozenSet[Site] = field(default_factory=frozenset)

    def __post_init__(self):
        occ = frozenset((int(r), int(c)) for r, c in self.occupied)
        for s in occ:
            if not self.grid.contains(s):
                raise ValueError(f"occupied site {s} outside {self.grid.size_L}x{self.grid.size_L} grid")
        object.__setattr__(self, "occupied", occ)

    @property
    def count_M(self) -> int:
        return len(self.occupied)

    def sorted_sites(self) -> list[Site]:
        return sorted(self.occupied)

    def mask(self) -> np.ndarray:
        """Boolean ``L x L`` occupancy array."""
        m = np.zeros((self.grid.size_L, self.grid.size_L), dtype=bool)
        for r, c in self.occupied:
            m[r, c] = True
        return m

    @classmethod
    def from_mask(cls, grid: GridSpec, mask: np.ndarray) -> "EntanglementPattern":
        rows, cols = np.nonzero(mask)
        return cls(grid, frozenset(zip(rows.tolist(), cols.tolist())))

    @classmethod
    def from_sites(cls, grid: GridSpec, sites: Iterable[Site]) -> "EntanglementPattern":
        return cls(grid, frozenset(sites))


def trial_rng(master_seed: int, trial: int, stream: int) -> np.random.Generator:
    """Generator for one (trial, stream) pair.

    Streams are keyed by ``(trial, stream)`` through ``SeedSequence.spawn_key``
    so any subset of trials can be regenerated in any order.
    """
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(trial), int(stream)))
    return np.random.Generator(np.random.PCG64(ss))


def sample_entanglement_pattern(grid: GridSpec, p_gen: float, rng: np.random.Generator) -> EntanglementPattern:
    """Include each of the ``L**2`` sites independently with probability ``p_gen``."""
    if not 0.0 <= p_gen <= 1.0:
        raise ValueError(f"p_gen must lie in [0, 1], got {p_gen}")
    mask = rng.random((grid.size_L, grid.size_L)) < p_gen
    return EntanglementPattern.from_mask(grid, mask)
