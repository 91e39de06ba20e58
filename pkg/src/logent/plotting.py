"""Figures for sweep, rate and rearrangement reports.

All functions write a PNG and return its path; the Agg backend is forced so
they run headless.
"""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams.update({
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
})


def _finish(ax, **legend_kw) -> None:
    # log axes and legends only when there is something to show
    ys = [y for line in ax.get_lines() for y in line.get_ydata() if np.isfinite(y) and y > 0]
    if ys:
        ax.set_yscale("log")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(**legend_kw)


def _dominant_rows(rows: list[dict]) -> list[dict]:
    counts: dict[int, int] = {}
    for r in rows:
        counts[r["d"]] = max(counts.get(r["d"], 0), r["N_d"])
    if not counts:
        return []
    d = max(counts, key=lambda k: (counts[k], -k))
    return [r for r in rows if r["d"] == d]


def plot_tradeoff(rows: list[dict], out_prefix, max_thresholds: int = 8) -> list[Path]:
    """Three panels for the most frequent distance.

    ``rows`` are parsed sweep CSV rows.  Writes ``<prefix>_p_log.png``,
    ``<prefix>_e_log.png`` and ``<prefix>_tradeoff.png``.
    """
    rows = _dominant_rows(rows)
    if not rows:
        return []
    out_prefix = Path(out_prefix)
    d = rows[0]["d"]
    thresholds = sorted({r["w_thr"] for r in rows})
    if len(thresholds) > max_thresholds:
        idx = np.linspace(0, len(thresholds) - 1, max_thresholds).round().astype(int)
        shown = [thresholds[i] for i in sorted(set(idx))]
    else:
        shown = thresholds
    e_swaps = sorted({r["e_swap"] for r in rows})
    paths = []

    for key, ylabel, name in (("p_log", r"$p_{\rm log}$", "p_log"), ("e_log", r"$e_{\rm log}$", "e_log")):
        fig, ax = plt.subplots(figsize=(4.5, 3.4))
        for w in shown:
            sel = sorted((r for r in rows if r["w_thr"] == w), key=lambda r: r["e_swap"])
            xs = [r["e_swap"] for r in sel]
            ys = [r[key] if r[key] > 0 else np.nan for r in sel]
            ax.plot(xs, ys, marker="o", ms=3, label=f"$w_{{\\rm thr}}={w}$")
        ax.set_xlabel(r"$e_{\rm swap}$")
        ax.set_ylabel(ylabel)
        ax.set_title(f"d = {d}")
        _finish(ax, fontsize=7, ncol=2)
        p = out_prefix.with_name(out_prefix.name + f"_{name}.png")
        fig.savefig(p)
        plt.close(fig)
        paths.append(p)

    fig, ax = plt.subplots(figsize=(4.5, 3.4))
    for e in e_swaps:
        sel = sorted((r for r in rows if r["e_swap"] == e and r["N_acc"] > 0), key=lambda r: r["w_thr"])
        sel = [r for r in sel if r["e_log"] > 0 and not math.isnan(r["e_log"])]
        if sel:
            ax.plot([r["p_log"] for r in sel], [r["e_log"] for r in sel], marker="o", ms=3,
                    label=f"$e_{{\\rm swap}}={e:g}$")
    ax.set_xlabel(r"$p_{\rm log}$")
    ax.set_ylabel(r"$e_{\rm log}$")
    ax.set_title(f"d = {d}")
    _finish(ax, fontsize=7)
    p = out_prefix.with_name(out_prefix.name + "_tradeoff.png")
    fig.savefig(p)
    plt.close(fig)
    paths.append(p)
    return paths


def plot_generation_curves(curves: dict, path) -> Path:
    """``curves`` maps preset name to ``(tau_array, p_gen_array)``."""
    fig, ax = plt.subplots(figsize=(4.5, 3.4))
    for name, (tau, p) in curves.items():
        ax.plot(tau, p, label=name.replace("_", " "))
    ax.set_xscale("log")
    ax.set_xlabel(r"$\tau$ [s]")
    ax.set_ylabel(r"$p_{\rm gen}$")
    ax.legend(fontsize=7)
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_post_distillation(points: list[dict], path) -> Path:
    """Final error against trial count, one series per distillation code."""
    fig, ax = plt.subplots(figsize=(4.5, 3.4))
    for key in sorted({(p["n"], p["code_d"]) for p in points}):
        sel = sorted((p for p in points if (p["n"], p["code_d"]) == key and p["e_post"] > 0),
                     key=lambda p: p["n_trial"])
        if sel:
            ax.plot([p["n_trial"] for p in sel], [p["e_post"] for p in sel], marker="o", ms=3,
                    label=f"[[{key[0]},1,{key[1]}]]")
    ax.set_xscale("log")
    ax.set_xlabel(r"$N_{\rm trial}$")
    ax.set_ylabel("logical error after distillation")
    _finish(ax, fontsize=7)
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_placement(demo: dict, path) -> Path:
    """Occupied sites, chosen code cell and assignment arrows."""
    L = demo["grid_size"]
    fig, ax = plt.subplots(figsize=(5, 5))
    occ = np.array(demo["occupied"]).reshape(-1, 2)
    data = np.array(demo["data_sites"]).reshape(-1, 2)
    r0, c0 = demo["cell_origin"]
    w = 2 * demo["distance"] - 1
    ax.add_patch(plt.Rectangle((c0 - 0.5, r0 - 0.5), w, w, fill=False, lw=1.2, ec="tab:red"))
    ax.scatter(data[:, 1], data[:, 0], s=40, facecolors="none", edgecolors="tab:gray", lw=0.8)
    if occ.size:
        ax.scatter(occ[:, 1], occ[:, 0], s=14, c="k")
    for src, tgt in demo["assignment"]:
        if src != tgt:
            ax.annotate("", xy=(tgt[1], tgt[0]), xytext=(src[1], src[0]),
                        arrowprops=dict(arrowstyle="->", lw=0.6, color="tab:blue"))
    ax.set_xlim(-0.5, L - 0.5)
    ax.set_ylim(L - 0.5, -0.5)
    ax.set_aspect("equal")
    ax.grid(False)
    ax.set_title(f"d = {demo['distance']}, {demo['total_swaps']} SWAPs")
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path
