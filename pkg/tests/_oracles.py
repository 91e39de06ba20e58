"""Exhaustive reference computations for the distance-3 code."""
from functools import lru_cache

import numpy as np

from logent.decode_select import build_decoding_graphs, decode_arrays
from logent.surface_code import build_layout, check_matrices

N3 = 13


@lru_cache(maxsize=None)
def all_patterns(n: int = N3) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def _bits_to_int(rows: np.ndarray) -> np.ndarray:
    return (rows.astype(np.int64) << np.arange(rows.shape[1])).sum(1)


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.unpackbits(a.astype(">u2").view(np.uint8).reshape(-1, 2), axis=1).sum(1)


@lru_cache(maxsize=None)
def decoder_tables():
    """Per-type correction bitmasks and failure flags for every X or Z pattern."""
    lay = build_layout(3, (0, 0))
    graphs = build_decoding_graphs(lay)
    hx, hz = check_matrices(3)
    pats = all_patterns()
    lz, lx = lay.logical_z_mask(), lay.logical_x_mask()
    zero_x = np.zeros(hx.shape[0], np.uint8)
    zero_z = np.zeros(hz.shape[0], np.uint8)
    cz = np.empty((len(pats), N3), bool)  # Z correction for Z pattern
    cx = np.empty((len(pats), N3), bool)
    for i, e in enumerate(pats):
        sx = (hx @ e) & 1
        sz = (hz @ e) & 1
        cz[i] = decode_arrays(graphs, sx.astype(np.uint8), zero_z)[0]
        cx[i] = decode_arrays(graphs, zero_x, sz.astype(np.uint8))[1]
    pb = pats.astype(bool)
    z_fail = (np.count_nonzero((pb ^ cz) & lx, axis=1) % 2).astype(bool)
    x_fail = (np.count_nonzero((pb ^ cx) & lz, axis=1) % 2).astype(bool)
    return _bits_to_int(cx), x_fail, _bits_to_int(cz), z_fail


def exact_rates(p: float):
    """Exact ``(P(accept), P(accept and logical error))`` for ``w_thr = 0..13``.

    Every qubit independently carries I with probability ``1 - p`` and X, Y or
    Z with ``p / 3`` each.  Runs over all ``4**13`` joint patterns.
    """
    cx, xf, cz, zf = decoder_tables()
    ints = np.arange(1 << N3, dtype=np.int64)
    acc = np.zeros(N3 + 1)
    err = np.zeros(N3 + 1)
    for xi in range(1 << N3):
        k = _popcount(ints | xi)
        prob = (1 - p) ** (N3 - k) * (p / 3) ** k
        w = _popcount(cz | cx[xi])
        fail = zf | xf[xi]
        acc += np.bincount(w, weights=prob, minlength=N3 + 1)
        err += np.bincount(w, weights=prob * fail, minlength=N3 + 1)
    return np.cumsum(acc), np.cumsum(err)
