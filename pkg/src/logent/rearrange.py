"""Placement of the code cell and movement of entangled qubits onto data sites.

Alice and Bob run the same deterministic planner on the same occupancy
pattern, so they arrive at the same SWAP schedule without communicating.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _routing
from .lattice_gen import EntanglementPattern, GridSpec, Site
from .surface_code import (
    DEFAULT_MIN_DISTANCE,
    CodeLayout,
    build_layout,
    cell_width,
    choose_code_distance,
)

WEIGHTS = ("squared_manhattan", "manhattan")


class RoutingBlocked(Exception):
    """No schedule found within the re-routing budget."""


@dataclass(frozen=True)
class Assignment:
    """Entangled qubit ``sources[i]`` moves to data site ``targets[i]``.

    Pairs are ordered by target, which is the layout's data-index order.
    """

    sources: tuple
    targets: tuple
    total_weight: int

    @property
    def pairs(self) -> list[tuple[Site, Site]]:
        return list(zip(self.sources, self.targets))

    def __len__(self) -> int:
        return len(self.targets)


@dataclass(frozen=True)
class RearrangementPlan:
    assignment: Assignment
    grid: GridSpec
    swap_a: np.ndarray  # flat site indices
    swap_b: np.ndarray
    counts_by_data_index: np.ndarray  # per assignment pair, in target order
    ok: bool = True

    @property
    def total_swaps(self) -> int:
        return int(self.swap_a.size)

    @property
    def swap_sequence(self) -> list[tuple[Site, Site]]:
        L = self.grid.size_L
        return [(divmod(int(a), L), divmod(int(b), L)) for a, b in zip(self.swap_a, self.swap_b)]

    @property
    def swap_counts(self) -> dict[Site, int]:
        """SWAP participations keyed by each matched qubit's starting site."""
        return {s: int(k) for s, k in zip(self.assignment.sources, self.counts_by_data_index)}


def _exact_sq_distances(pattern: EntanglementPattern) -> np.ndarray:
    """``M**2`` times the squared distance from every site to the occupied mean (integers)."""
    L = pattern.grid.size_L
    occ = np.array(pattern.sorted_sites(), dtype=np.int64)
    M = len(occ)
    sr, sc = occ[:, 0].sum(), occ[:, 1].sum()
    rr, cc = np.meshgrid(np.arange(L, dtype=np.int64), np.arange(L, dtype=np.int64), indexing="ij")
    return (M * rr - sr) ** 2 + (M * cc - sc) ** 2


def center_to_origin(center: Site, d: int, grid: GridSpec) -> Site:
    """Top-left corner of the cell centered at ``center``, shifted to fit the grid."""
    hi = grid.size_L - cell_width(d)
    if hi < 0:
        raise ValueError(f"distance-{d} cell does not fit a {grid.size_L}x{grid.size_L} grid")
    r = min(max(center[0] - (d - 1), 0), hi)
    c = min(max(center[1] - (d - 1), 0), hi)
    return (r, c)


def candidate_centers(pattern: EntanglementPattern, d: Optional[int] = None) -> list[Site]:
    """Sites at the smallest and second-smallest distance to the mean occupied position.

    Row-major within each distance shell.  When ``d`` is given, each candidate
    is shifted so its cell fits the grid and duplicates are dropped.
    """
    if pattern.count_M == 0:
        raise ValueError("candidate centers need a non-empty pattern")
    dist = _exact_sq_distances(pattern)
    shells = np.unique(dist)[:2]
    centers: list[Site] = []
    for value in shells:
        rows, cols = np.nonzero(dist == value)
        centers.extend(zip(rows.tolist(), cols.tolist()))
    if d is None:
        return centers
    out: list[Site] = []
    seen = set()
    for ctr in centers:
        o = center_to_origin(ctr, d, pattern.grid)
        shifted = (o[0] + d - 1, o[1] + d - 1)
        if shifted not in seen:
            seen.add(shifted)
            out.append(shifted)
    return out


def weight_matrix(sources, targets, weight: str = "squared_manhattan") -> np.ndarray:
    """``len(targets) x len(sources)`` matrix of movement costs."""
    s = np.asarray(sources, dtype=np.int64).reshape(-1, 2)
    t = np.asarray(targets, dtype=np.int64).reshape(-1, 2)
    manh = np.abs(t[:, None, 0] - s[None, :, 0]) + np.abs(t[:, None, 1] - s[None, :, 1])
    if weight == "squared_manhattan":
        return manh * manh
    if weight == "manhattan":
        return manh
    raise ValueError(f"unknown weight {weight!r}; expected one of {WEIGHTS}")


def assign_targets(sources: list[Site], targets: list[Site], weight: str = "squared_manhattan") -> Assignment:
    """Minimum-total-weight injection of ``sources`` onto every target."""
    if len(sources) < len(targets):
        raise ValueError(f"{len(sources)} entangled qubits cannot fill {len(targets)} data sites")
    if not targets:
        return Assignment((), (), 0)
    cost = weight_matrix(sources, targets, weight)
    rows, cols = linear_sum_assignment(cost)
    order = np.argsort(rows)
    rows, cols = rows[order], cols[order]
    return Assignment(
        sources=tuple(sources[j] for j in cols),
        targets=tuple(targets[i] for i in rows),
        total_weight=int(cost[rows, cols].sum()),
    )


def assign_qubits(pattern: EntanglementPattern, layout: CodeLayout,
                  weight: str = "squared_manhattan") -> Assignment:
    return assign_targets(pattern.sorted_sites(), layout.grid_data_sites(), weight)


def _route(assignment: Assignment, grid: GridSpec):
    L = grid.size_L
    n = len(assignment)
    src = np.array([grid.index(s) for s in assignment.sources], dtype=np.int64)
    tgt = np.array([grid.index(t) for t in assignment.targets], dtype=np.int64)
    # route in row-major target order; targets already come sorted that way
    order = np.argsort(tgt, kind="stable")
    cap = max(16, 3 * n * L * L)
    swap_a = np.empty(cap, dtype=np.int64)
    swap_b = np.empty(cap, dtype=np.int64)
    counts = np.zeros(n, dtype=np.int64)
    nswap, ok = _routing.route(L, src[order], tgt[order], swap_a, swap_b, counts)
    back = np.empty(n, dtype=np.int64)
    back[order] = counts
    return swap_a[:nswap].copy(), swap_b[:nswap].copy(), back, bool(ok)


def plan_schedule(assignment: Assignment, pattern: EntanglementPattern,
                  grid: Optional[GridSpec] = None) -> RearrangementPlan:
    """SWAP schedule that moves every matched qubit onto its data site.

    Targets are finalized in row-major order.  Each qubit follows a BFS
    shortest path that avoids finalized sites; when none exists it may pass
    through them, and every finalized qubit it displaces is queued again.
    Raises :class:`RoutingBlocked` once re-routing exceeds twice the number
    of qubits.
    """
    grid = grid or pattern.grid
    missing = set(assignment.sources) - pattern.occupied
    if missing:
        raise ValueError(f"assignment sources not in pattern: {sorted(missing)[:3]}")
    a, b, counts, ok = _route(assignment, grid)
    if not ok:
        raise RoutingBlocked(f"re-routing budget exhausted after {a.size} swaps")
    return RearrangementPlan(assignment, grid, a, b, counts)


def execute_schedule(pattern: EntanglementPattern, plan: RearrangementPlan) -> dict[Site, Site]:
    """Replay the schedule on a symbolic board; returns final site of each matched qubit.

    Keys are the qubits' starting sites.  Raises ``ValueError`` on a SWAP
    between non-adjacent sites.
    """
    board: dict[Site, Site] = {s: s for s in plan.assignment.sources}
    for a, b in plan.swap_sequence:
        if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
            raise ValueError(f"non-adjacent SWAP {a} <-> {b}")
        qa, qb = board.pop(a, None), board.pop(b, None)
        if qa is not None:
            board[b] = qa
        if qb is not None:
            board[a] = qb
    return {q: site for site, q in board.items()}


def participation_counts(plan: RearrangementPlan) -> dict[Site, int]:
    """Count, by replay, how many SWAPs each matched qubit took part in."""
    board: dict[Site, Site] = {s: s for s in plan.assignment.sources}
    counts = {s: 0 for s in plan.assignment.sources}
    for a, b in plan.swap_sequence:
        qa, qb = board.pop(a, None), board.pop(b, None)
        if qa is not None:
            counts[qa] += 1
            board[b] = qa
        if qb is not None:
            counts[qb] += 1
            board[a] = qb
    return counts


@dataclass(frozen=True)
class Placement:
    distance_d: int
    layout: CodeLayout
    plan: RearrangementPlan
    center: Site

    def __iter__(self):
        return iter((self.distance_d, self.layout, self.plan))


def select_placement(pattern: EntanglementPattern, grid: Optional[GridSpec] = None,
                     min_distance: int = DEFAULT_MIN_DISTANCE,
                     weight: str = "squared_manhattan") -> Placement:
    """Try every candidate center and keep the one needing the fewest SWAPs.

    Ties go to the earlier candidate.  Candidates whose routing exceeds the
    budget are skipped; :class:`RoutingBlocked` is raised if all of them do.
    """
    grid = grid or pattern.grid
    d = choose_code_distance(pattern.count_M, grid, min_distance)
    sources = pattern.sorted_sites()
    best = None
    for center in candidate_centers(pattern, d):
        layout = build_layout(d, center_to_origin(center, d, grid), grid)
        assignment = assign_targets(sources, layout.grid_data_sites(), weight)
        a, b, counts, ok = _route(assignment, grid)
        if not ok:
            continue
        if best is None or a.size < best[0]:
            best = (a.size, center, layout, RearrangementPlan(assignment, grid, a, b, counts))
    if best is None:
        raise RoutingBlocked("no candidate center could be routed")
    _, center, layout, plan = best
    return Placement(d, layout, plan, center)
