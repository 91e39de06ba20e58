"""Unrotated planar surface code embedded in the site grid.

Cell-local coordinates ``(r, c)`` run over ``0 <= r, c <= 2d-2``:

* data qubits where ``r + c`` is even,
* X checks at (even r, odd c), Z checks at (odd r, even c),
* logical Z along the top row, logical X along the left column.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .lattice_gen import GridSpec, Site

DEFAULT_MIN_DISTANCE = 3


class InsufficientEntanglement(Exception):
    """Too few Bell pairs for the minimum code distance."""

    def __init__(self, M: int, min_distance: int):
        self.M = M
        self.min_distance = min_distance
        need = n_data_qubits(min_distance)
        super().__init__(f"{M} entangled pairs cannot host a distance-{min_distance} code (needs {need})")


def n_data_qubits(d: int) -> int:
    return d * d + (d - 1) * (d - 1)


def cell_width(d: int) -> int:
    return 2 * d - 1


def choose_code_distance(M: int, grid: Optional[GridSpec] = None,
                         min_distance: int = DEFAULT_MIN_DISTANCE) -> int:
    """Largest ``d`` with ``d**2 + (d-1)**2 <= M``, capped so the cell fits ``grid``.

    Raises :class:`InsufficientEntanglement` when the result falls below
    ``min_distance``.
    """
    if M < 0:
        raise ValueError("M must be non-negative")
    d = 0
    while n_data_qubits(d + 1) <= M:
        d += 1
    if grid is not None:
        d = min(d, (grid.size_L + 1) // 2)
    if d < min_distance:
        raise InsufficientEntanglement(M, min_distance)
    return d


@dataclass(frozen=True)
class CodeLayout:
    distance_d: int
    cell_origin: Site
    data_sites: tuple
    x_checks: tuple
    z_checks: tuple
    x_supports: tuple  # per X check: tuple of data indices
    z_supports: tuple
    logical_z_support: tuple  # data indices
    logical_x_support: tuple
    data_index: dict = field(compare=False, repr=False)

    @property
    def n_data(self) -> int:
        return len(self.data_sites)

    @property
    def width(self) -> int:
        return cell_width(self.distance_d)

    def to_grid(self, local: Site) -> Site:
        return (self.cell_origin[0] + local[0], self.cell_origin[1] + local[1])

    def grid_data_sites(self) -> list[Site]:
        """Data sites in grid coordinates, in data-index order."""
        return [self.to_grid(s) for s in self.data_sites]

    @property
    def x_check_matrix(self) -> np.ndarray:
        return check_matrices(self.distance_d)[0]

    @property
    def z_check_matrix(self) -> np.ndarray:
        return check_matrices(self.distance_d)[1]

    def logical_z_mask(self) -> np.ndarray:
        m = np.zeros(self.n_data, dtype=bool)
        m[list(self.logical_z_support)] = True
        return m

    def logical_x_mask(self) -> np.ndarray:
        m = np.zeros(self.n_data, dtype=bool)
        m[list(self.logical_x_support)] = True
        return m


@lru_cache(maxsize=None)
def _local_geometry(d: int):
    w = cell_width(d)
    data = tuple((r, c) for r in range(w) for c in range(w) if (r + c) % 2 == 0)
    index = {s: i for i, s in enumerate(data)}
    x_checks = tuple((r, c) for r in range(0, w, 2) for c in range(1, w, 2))
    z_checks = tuple((r, c) for r in range(1, w, 2) for c in range(0, w, 2))

    def support(check):
        r, c = check
        nb = [(r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)]
        return tuple(sorted(index[s] for s in nb if s in index))

    x_sup = tuple(support(ch) for ch in x_checks)
    z_sup = tuple(support(ch) for ch in z_checks)
    lz = tuple(index[(0, 2 * j)] for j in range(d))
    lx = tuple(index[(2 * i, 0)] for i in range(d))
    return data, index, x_checks, z_checks, x_sup, z_sup, lz, lx


@lru_cache(maxsize=None)
def check_matrices(d: int):
    data, _, x_checks, z_checks, x_sup, z_sup, _, _ = _local_geometry(d)
    hx = np.zeros((len(x_checks), len(data)), dtype=np.uint8)
    hz = np.zeros((len(z_checks), len(data)), dtype=np.uint8)
    for i, sup in enumerate(x_sup):
        hx[i, list(sup)] = 1
    for i, sup in enumerate(z_sup):
        hz[i, list(sup)] = 1
    hx.setflags(write=False)
    hz.setflags(write=False)
    return hx, hz


def build_layout(d: int, cell_origin: Site, grid: Optional[GridSpec] = None) -> CodeLayout:
    """Distance-``d`` layout whose cell's top-left corner sits at ``cell_origin``."""
    if d < 2:
        raise ValueError(f"code distance must be >= 2, got {d}")
    r0, c0 = int(cell_origin[0]), int(cell_origin[1])
    w = cell_width(d)
    if grid is not None:
        if r0 < 0 or c0 < 0 or r0 + w > grid.size_L or c0 + w > grid.size_L:
            raise ValueError(f"distance-{d} cell at {cell_origin} does not fit a {grid.size_L}x{grid.size_L} grid")
    return _cached_layout(d, r0, c0)


@lru_cache(maxsize=4096)
def _cached_layout(d: int, r0: int, c0: int) -> CodeLayout:
    data, index, xc, zc, xs, zs, lz, lx = _local_geometry(d)
    return CodeLayout(d, (r0, c0), data, xc, zc, xs, zs, lz, lx, index)


@dataclass(frozen=True)
class SyndromeBits:
    x_defects: frozenset  # X-check indices (flipped by Z/Y)
    z_defects: frozenset  # Z-check indices (flipped by X/Y)

    def is_trivial(self) -> bool:
        return not self.x_defects and not self.z_defects


def syndrome_arrays(layout: CodeLayout, x_part: np.ndarray, z_part: np.ndarray):
    """Defect bit-vectors ``(x_check_bits, z_check_bits)`` for a Pauli given by parts."""
    sx = (layout.x_check_matrix @ np.asarray(z_part, dtype=np.uint8)) & 1
    sz = (layout.z_check_matrix @ np.asarray(x_part, dtype=np.uint8)) & 1
    return sx.astype(np.uint8), sz.astype(np.uint8)


def syndrome(layout: CodeLayout, frame) -> SyndromeBits:
    """Checks whose support anticommutes with ``frame`` (any object with ``x_part``/``z_part``)."""
    sx, sz = syndrome_arrays(layout, frame.x_part, frame.z_part)
    return SyndromeBits(frozenset(np.flatnonzero(sx).tolist()), frozenset(np.flatnonzero(sz).tolist()))
