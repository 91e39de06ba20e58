"""Delimited and JSON output for sweep and rate results.

Numbers are formatted with explicit format specs so files do not depend on
the locale and identical runs produce identical bytes.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable

from .experiment import SweepRecord

SWEEP_COLUMNS = (
    "p_gen", "L", "e_init", "e_swap", "w_thr", "d", "N_d", "N_acc", "N_err",
    "p_log", "e_log", "ci_low", "ci_high", "median_total_swaps",
    "p_log_ci_low", "p_log_ci_high", "low_confidence",
)


def fmt_param(x: float) -> str:
    return f"{x:.6g}"


def fmt_rate(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.8f}"


def fmt_sci(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.6e}"


def sweep_rows(records: Iterable[SweepRecord]) -> list[dict]:
    """One row per (e_swap, w_thr, d); ``ci_*`` bound ``e_log``, ``p_log_ci_*`` bound ``p_log``."""
    rows = []
    for rec in records:
        for r in rec.rows:
            e_lo, e_hi = r.e_log_ci
            p_lo, p_hi = r.p_log_ci
            rows.append({
                "p_gen": fmt_param(rec.p_gen),
                "L": str(rec.size_L),
                "e_init": fmt_param(rec.e_init),
                "e_swap": fmt_param(rec.e_swap),
                "w_thr": str(rec.w_thr),
                "d": str(r.d),
                "N_d": str(r.N_d),
                "N_acc": str(r.N_acc),
                "N_err": str(r.N_err),
                "p_log": fmt_rate(r.p_log),
                "e_log": fmt_rate(r.e_log),
                "ci_low": fmt_rate(e_lo),
                "ci_high": fmt_rate(e_hi),
                "median_total_swaps": "nan" if math.isnan(r.median_total_swaps) else f"{r.median_total_swaps:.1f}",
                "p_log_ci_low": fmt_rate(p_lo),
                "p_log_ci_high": fmt_rate(p_hi),
                "low_confidence": "1" if r.low_confidence else "0",
            })
    return rows


def to_csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def sweep_csv(records: Iterable[SweepRecord]) -> str:
    return to_csv(sweep_rows(records), SWEEP_COLUMNS)


def record_summary(rec: SweepRecord) -> dict:
    return {
        "e_swap": rec.e_swap,
        "w_thr": rec.w_thr,
        "n_trials": rec.n_trials,
        "n_insufficient": rec.n_insufficient,
        "n_routing_failed": rec.n_routing_failed,
        "dominant_d": rec.dominant_d,
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def read_sweep_csv(text: str) -> list[dict]:
    """Parse a sweep CSV back into rows with numeric fields."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        conv = {}
        for k, v in row.items():
            if k in ("L", "w_thr", "d", "N_d", "N_acc", "N_err", "low_confidence"):
                conv[k] = int(v)
            else:
                conv[k] = float(v)
        out.append(conv)
    return out
