"""Syndrome decoding, post-selection and logical verdicts.

Bob decodes the Alice-Bob syndrome difference with minimum-weight perfect
matching, one matching graph per check type:

* X checks detect the Z part of the frame and yield a Z correction,
* Z checks detect the X part and yield an X correction.

The post-selection statistic is the number of distinct data qubits touched by
the estimated correction (an estimated Y counts once).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import pymatching

from .pauli_noise import PauliFrame
from .surface_code import CodeLayout, SyndromeBits, check_matrices, syndrome_arrays

WEIGHTINGS = ("uniform", "per_qubit")
_P_FLOOR = 1e-12


@dataclass(frozen=True)
class DecodingGraph:
    """Check nodes ``0..n_checks-1`` plus one boundary node ``n_checks``.

    ``edges`` holds ``(u, v, weight, data_index)``; every data site labels
    exactly one edge.
    """

    kind: str  # "x" (X checks, Z errors) or "z"
    n_checks: int
    n_data: int
    edges: tuple
    matching: pymatching.Matching = field(compare=False, repr=False)

    @property
    def boundary(self) -> int:
        return self.n_checks

    def boundary_edges(self) -> list:
        return [e for e in self.edges if e[1] == self.boundary]


def _edge_endpoints(check_matrix: np.ndarray):
    """For each data column: (u, v) with v = boundary when only one check touches it."""
    n_checks = check_matrix.shape[0]
    out = []
    for q in range(check_matrix.shape[1]):
        rows = np.flatnonzero(check_matrix[:, q]).tolist()
        if len(rows) == 2:
            out.append((rows[0], rows[1]))
        elif len(rows) == 1:
            out.append((rows[0], n_checks))
        else:
            raise ValueError(f"data qubit {q} touches {len(rows)} checks of one type")
    return out


def _make_graph(kind: str, check_matrix: np.ndarray, weights: np.ndarray) -> DecodingGraph:
    n_checks, n_data = check_matrix.shape
    m = pymatching.Matching()
    edges = []
    for q, (u, v) in enumerate(_edge_endpoints(check_matrix)):
        w = float(weights[q])
        if v == n_checks:
            m.add_boundary_edge(u, fault_ids={q}, weight=w)
        else:
            m.add_edge(u, v, fault_ids={q}, weight=w)
        edges.append((u, v, w, q))
    return DecodingGraph(kind, n_checks, n_data, tuple(edges), m)


@lru_cache(maxsize=None)
def _uniform_graphs(d: int):
    hx, hz = check_matrices(d)
    ones = np.ones(hx.shape[1])
    return _make_graph("x", hx, ones), _make_graph("z", hz, ones)


def log_likelihood_weights(p: np.ndarray) -> np.ndarray:
    p = np.clip(np.asarray(p, dtype=float), _P_FLOOR, 0.5 - _P_FLOOR)
    return np.log((1.0 - p) / p)


def build_decoding_graphs(layout: CodeLayout, weighting: str = "uniform",
                          error_probabilities=None) -> tuple[DecodingGraph, DecodingGraph]:
    """Matching graphs ``(x_graph, z_graph)`` for ``layout``.

    ``per_qubit`` weighting needs each data qubit's total depolarizing
    probability; an X or Z component then occurs with ``2/3`` of it.
    """
    hx, hz = layout.x_check_matrix, layout.z_check_matrix
    if weighting == "uniform":
        return _uniform_graphs(layout.distance_d)
    if weighting != "per_qubit":
        raise ValueError(f"unknown weighting {weighting!r}; expected one of {WEIGHTINGS}")
    if error_probabilities is None:
        raise ValueError("per_qubit weighting needs error_probabilities")
    p = np.asarray(error_probabilities, dtype=float)
    if p.shape != (layout.n_data,):
        raise ValueError("need one error probability per data qubit")
    w = log_likelihood_weights(2.0 * p / 3.0)
    return _make_graph("x", hx, w), _make_graph("z", hz, w)


@dataclass(frozen=True)
class Correction:
    z_mask: np.ndarray  # bool over data indices
    x_mask: np.ndarray

    @property
    def z_correction(self) -> frozenset:
        return frozenset(np.flatnonzero(self.z_mask).tolist())

    @property
    def x_correction(self) -> frozenset:
        return frozenset(np.flatnonzero(self.x_mask).tolist())

    @property
    def estimated_weight(self) -> int:
        return int(np.count_nonzero(self.z_mask | self.x_mask))

    def as_frame(self) -> PauliFrame:
        return PauliFrame.from_parts(self.x_mask, self.z_mask)


def decode_arrays(graphs, x_bits: np.ndarray, z_bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Correction masks ``(z_mask, x_mask)`` from raw defect bit-vectors."""
    gx, gz = graphs
    z_mask = gx.matching.decode(x_bits).astype(bool) if x_bits.any() else np.zeros(gx.n_data, dtype=bool)
    x_mask = gz.matching.decode(z_bits).astype(bool) if z_bits.any() else np.zeros(gz.n_data, dtype=bool)
    return z_mask, x_mask


def decode(graphs, syn: SyndromeBits) -> Correction:
    gx, gz = graphs
    xb = np.zeros(gx.n_checks, dtype=np.uint8)
    zb = np.zeros(gz.n_checks, dtype=np.uint8)
    xb[list(syn.x_defects)] = 1
    zb[list(syn.z_defects)] = 1
    return Correction(*decode_arrays(graphs, xb, zb))


def post_select(correction: Correction, w_thr: int) -> bool:
    """Accept (True) unless the estimated correction touches more than ``w_thr`` qubits."""
    if w_thr < 0:
        raise ValueError("w_thr must be non-negative")
    return correction.estimated_weight <= w_thr


def residual_fails(layout: CodeLayout, x_res: np.ndarray, z_res: np.ndarray) -> bool:
    """True when a trivial-syndrome residual acts as a logical operator."""
    z_flip = np.count_nonzero(z_res & layout.logical_x_mask()) % 2  # anticommutes with logical X
    x_flip = np.count_nonzero(x_res & layout.logical_z_mask()) % 2
    return bool(z_flip or x_flip)


def logical_verdict(frame: PauliFrame, correction: Correction, layout: CodeLayout) -> bool:
    """True when frame times correction is a nontrivial logical operator."""
    x_res = frame.x_part ^ correction.x_mask
    z_res = frame.z_part ^ correction.z_mask
    sx, sz = syndrome_arrays(layout, x_res, z_res)
    if sx.any() or sz.any():
        raise ValueError("correction does not reproduce the frame's syndrome")
    return residual_fails(layout, x_res, z_res)
