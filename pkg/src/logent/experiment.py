"""Monte-Carlo evaluation of the full protocol.

Each trial index owns two random streams derived from the master seed: one
for the entanglement pattern and one for the Pauli noise.  The pattern and
its SWAP plan are therefore shared by every ``e_swap`` value of a sweep, and
a single decode per ``(trial, e_swap)`` is thresholded at every ``w_thr``.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .decode_select import build_decoding_graphs, decode_arrays, residual_fails
from .lattice_gen import (
    NOISE_STREAM,
    PATTERN_STREAM,
    EntanglementPattern,
    GridSpec,
    sample_entanglement_pattern,
    trial_rng,
)
from .pauli_noise import effective_swap_rate, marginal_error_probabilities, sample_frame
from .rearrange import Placement, RoutingBlocked, select_placement
from .surface_code import InsufficientEntanglement, choose_code_distance, syndrome_arrays

LOW_CONFIDENCE_ACCEPTED = 100
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class SimulationParams:
    """The subset of an experiment configuration the simulator needs."""

    size_L: int
    p_gen: float
    e_init: float
    e_swaps: tuple = (0.0,)
    w_thrs: tuple = (0,)
    weighting: str = "uniform"
    min_distance: int = 3
    routing_weight: str = "squared_manhattan"

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.size_L)


@dataclass(frozen=True)
class TrialOutcome:
    realized_d: Optional[int]  # None: too few Bell pairs
    total_swaps: int
    estimated_weight: int
    accepted: bool
    logical_error: bool
    routing_failed: bool = False

    def __post_init__(self):
        if self.logical_error and not self.accepted:
            raise ValueError("a logical error is only defined for accepted trials")


@dataclass
class TrialTable:
    """Per-trial results for one ``e_swap``; ``d == 0`` marks insufficient entanglement."""

    d: np.ndarray
    total_swaps: np.ndarray
    estimated_weight: np.ndarray
    residual_logical: np.ndarray
    routing_failed: np.ndarray

    @classmethod
    def empty(cls, n: int) -> "TrialTable":
        return cls(
            d=np.zeros(n, dtype=np.int16),
            total_swaps=np.zeros(n, dtype=np.int32),
            estimated_weight=np.full(n, -1, dtype=np.int32),
            residual_logical=np.zeros(n, dtype=bool),
            routing_failed=np.zeros(n, dtype=bool),
        )

    @classmethod
    def concat(cls, parts: Sequence["TrialTable"]) -> "TrialTable":
        return cls(*(np.concatenate([getattr(p, f) for p in parts]) for f in
                     ("d", "total_swaps", "estimated_weight", "residual_logical", "routing_failed")))

    def __len__(self) -> int:
        return int(self.d.size)

    def accepted(self, w_thr: int) -> np.ndarray:
        return (self.d > 0) & ~self.routing_failed & (self.estimated_weight >= 0) & (self.estimated_weight <= w_thr)

    def outcome(self, i: int, w_thr: int) -> TrialOutcome:
        acc = bool(self.accepted(w_thr)[i])
        return TrialOutcome(
            realized_d=int(self.d[i]) or None,
            total_swaps=int(self.total_swaps[i]),
            estimated_weight=int(self.estimated_weight[i]),
            accepted=acc,
            logical_error=acc and bool(self.residual_logical[i]),
            routing_failed=bool(self.routing_failed[i]),
        )


def _place(params: SimulationParams, pattern: EntanglementPattern):
    try:
        return select_placement(pattern, params.grid, params.min_distance, params.routing_weight)
    except InsufficientEntanglement:
        return None
    except RoutingBlocked:
        return "blocked"


def _evaluate(params: SimulationParams, placement: Placement, noise_rng: np.random.Generator,
              e_swap: float) -> tuple[int, bool]:
    """Sample noise, decode, and return ``(estimated_weight, residual_is_logical)``."""
    layout, plan = placement.layout, placement.plan
    counts = plan.counts_by_data_index
    e_tilde = effective_swap_rate(e_swap)
    frame = sample_frame(counts, params.e_init, e_tilde, noise_rng)
    xp, zp = frame.x_part, frame.z_part
    sx, sz = syndrome_arrays(layout, xp, zp)
    if params.weighting == "uniform":
        graphs = build_decoding_graphs(layout)
    else:
        probs = marginal_error_probabilities(params.e_init, e_tilde, counts)
        graphs = build_decoding_graphs(layout, "per_qubit", probs)
    z_mask, x_mask = decode_arrays(graphs, sx, sz)
    weight = int(np.count_nonzero(z_mask | x_mask))
    return weight, residual_fails(layout, xp ^ x_mask, zp ^ z_mask)


def _run_range(params: SimulationParams, master_seed: int, start: int, stop: int,
               pattern: Optional[EntanglementPattern] = None) -> list[TrialTable]:
    n = stop - start
    tables = [TrialTable.empty(n) for _ in params.e_swaps]
    fixed = _place(params, pattern) if pattern is not None else None
    for k in range(n):
        idx = start + k
        if pattern is None:
            pat = sample_entanglement_pattern(params.grid, params.p_gen, trial_rng(master_seed, idx, PATTERN_STREAM))
            placement = _place(params, pat)
        else:
            pat, placement = pattern, fixed
        if placement is None:
            continue
        if placement == "blocked":
            d = choose_code_distance(pat.count_M, params.grid, params.min_distance)
            for t in tables:
                t.d[k] = d
                t.routing_failed[k] = True
            continue
        for t, e_swap in zip(tables, params.e_swaps):
            w, bad = _evaluate(params, placement, trial_rng(master_seed, idx, NOISE_STREAM), e_swap)
            t.d[k] = placement.distance_d
            t.total_swaps[k] = placement.plan.total_swaps
            t.estimated_weight[k] = w
            t.residual_logical[k] = bad
    return tables


def simulate_trials(params: SimulationParams, n_trials: int, master_seed: int, workers: int = 1,
                    pattern: Optional[EntanglementPattern] = None) -> list[TrialTable]:
    """Run ``n_trials`` trials; one :class:`TrialTable` per ``params.e_swaps`` entry.

    Results depend only on ``(params, n_trials, master_seed)``; ``workers``
    only changes wall-clock time.
    """
    if n_trials < 1:
        raise ValueError("need at least one trial")
    workers = max(1, int(workers))
    if workers == 1 or n_trials < 2 * workers:
        return _run_range(params, master_seed, 0, n_trials, pattern)
    bounds = np.linspace(0, n_trials, 4 * workers + 1).astype(int)
    chunks = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_range, params, master_seed, a, b, pattern) for a, b in chunks]
        parts = [f.result() for f in futures]
    return [TrialTable.concat([p[i] for p in parts]) for i in range(len(params.e_swaps))]


def run_trial(params: SimulationParams, trial: int, master_seed: int,
              e_swap: Optional[float] = None, w_thr: Optional[int] = None) -> TrialOutcome:
    """One protocol run: generate, rearrange, add noise, decode, post-select, judge."""
    e_swap = params.e_swaps[0] if e_swap is None else e_swap
    w_thr = params.w_thrs[0] if w_thr is None else w_thr
    p = SimulationParams(params.size_L, params.p_gen, params.e_init, (e_swap,), (w_thr,),
                         params.weighting, params.min_distance, params.routing_weight)
    table = _run_range(p, master_seed, trial, trial + 1)[0]
    return table.outcome(0, w_thr)


# aggregation -----------------------------------------------------------------

def wilson_interval(k: int, n: int, z: float = _Z95) -> tuple[float, float]:
    if n == 0:
        return (math.nan, math.nan)
    p = k / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    # the bounds are exactly 0 and 1 at the extremes; avoid rounding past them
    lo = 0.0 if k == 0 else max(0.0, center - half)
    hi = 1.0 if k == n else min(1.0, center + half)
    return (lo, hi)


@dataclass(frozen=True)
class DistanceRow:
    d: int
    N_d: int
    N_acc: int
    N_err: int
    median_total_swaps: float

    @property
    def p_log(self) -> float:
        return self.N_acc / self.N_d if self.N_d else math.nan

    @property
    def e_log(self) -> float:
        return self.N_err / self.N_acc if self.N_acc else math.nan

    @property
    def p_log_ci(self) -> tuple[float, float]:
        return wilson_interval(self.N_acc, self.N_d)

    @property
    def e_log_ci(self) -> tuple[float, float]:
        return wilson_interval(self.N_err, self.N_acc)

    @property
    def low_confidence(self) -> bool:
        return self.N_acc < LOW_CONFIDENCE_ACCEPTED


@dataclass(frozen=True)
class SweepRecord:
    p_gen: float
    size_L: int
    e_init: float
    e_swap: float
    w_thr: int
    n_trials: int
    n_insufficient: int
    n_routing_failed: int
    rows: tuple = field(default_factory=tuple)

    @property
    def dominant_d(self) -> Optional[int]:
        if not self.rows:
            return None
        return max(self.rows, key=lambda r: (r.N_d, -r.d)).d

    def row(self, d: int) -> Optional[DistanceRow]:
        for r in self.rows:
            if r.d == d:
                return r
        return None

    def dominant_row(self) -> Optional[DistanceRow]:
        d = self.dominant_d
        return None if d is None else self.row(d)


def aggregate(table: TrialTable, params: SimulationParams, e_swap: float, w_thr: int) -> SweepRecord:
    acc = table.accepted(w_thr)
    err = acc & table.residual_logical
    rows = []
    for d in sorted(set(table.d[table.d > 0].tolist())):
        sel = table.d == d
        rows.append(DistanceRow(
            d=int(d),
            N_d=int(sel.sum()),
            N_acc=int((acc & sel).sum()),
            N_err=int((err & sel).sum()),
            median_total_swaps=float(np.median(table.total_swaps[sel & ~table.routing_failed]))
            if np.any(sel & ~table.routing_failed) else math.nan,
        ))
    return SweepRecord(
        p_gen=params.p_gen, size_L=params.size_L, e_init=params.e_init, e_swap=e_swap, w_thr=int(w_thr),
        n_trials=len(table), n_insufficient=int((table.d == 0).sum()),
        n_routing_failed=int(table.routing_failed.sum()), rows=tuple(rows),
    )


def sweep(params: SimulationParams, n_trials: int, master_seed: int, workers: int = 1,
          pattern: Optional[EntanglementPattern] = None,
          tables: Optional[list[TrialTable]] = None) -> list[SweepRecord]:
    """One record per ``(e_swap, w_thr)``, all from the same trials."""
    if not params.e_swaps or not params.w_thrs:
        raise ValueError("e_swaps and w_thrs must be non-empty")
    if tables is None:
        tables = simulate_trials(params, n_trials, master_seed, workers, pattern)
    return [aggregate(t, params, e, w) for t, e in zip(tables, params.e_swaps) for w in params.w_thrs]


def run_batch(params: SimulationParams, n_trials: int, master_seed: int, workers: int = 1,
              pattern: Optional[EntanglementPattern] = None) -> SweepRecord:
    """Aggregate for the first ``e_swap`` and ``w_thr`` of ``params``."""
    p = SimulationParams(params.size_L, params.p_gen, params.e_init, params.e_swaps[:1], params.w_thrs[:1],
                         params.weighting, params.min_distance, params.routing_weight)
    return sweep(p, n_trials, master_seed, workers, pattern)[0]
