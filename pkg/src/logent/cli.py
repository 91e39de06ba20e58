"""Command-line front end: ``logent {simulate,sweep,rates,rearrange-demo}``.

Exit status is 0 on success, 1 for invalid configuration or arguments and 2
for failures while running.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .config import ConfigError, ExperimentConfig, parse_config, preset_path
from .experiment import simulate_trials, sweep
from .lattice_gen import PATTERN_STREAM, sample_entanglement_pattern, trial_rng
from .rates import (
    DISTILLATION_PRESETS,
    PRESETS,
    bandwidth,
    generation_success,
    post_distillation,
    required_duration,
)
from .rearrange import select_placement
from .report import dumps, fmt_param, fmt_rate, fmt_sci, read_sweep_csv, sweep_csv, sweep_rows, to_csv

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2

RATE_COLUMNS = (
    "preset", "loss_base", "target_p_gen", "tau", "tau_arr", "tau_meas",
    "e_swap", "w_thr", "d", "p_log", "e_log", "n", "code_d", "e_post", "p_post", "n_trial", "bandwidth",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, config_required: bool = True) -> None:
    p.add_argument("--config", metavar="PATH", required=config_required,
                   help="config file, or a bundled preset name such as config1")
    p.add_argument("--seed", type=int, help="master seed (overrides config)")
    p.add_argument("--trials", type=int, help="number of trials (overrides config)")
    p.add_argument("--threads", type=int, help="worker processes (overrides config)")
    p.add_argument("--out", metavar="PATH", help="output file; stdout if omitted")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--figures", action="store_true", help="also write PNG figures next to --out")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="logent", description="Logical entanglement distribution simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="one (e_swap, w_thr) operating point")
    _common(p)
    p.add_argument("--e-swap", type=float, help="SWAP error rate (default: first in config)")
    p.add_argument("--w-thr", type=int, help="post-selection threshold (default: first in config)")

    p = sub.add_parser("sweep", help="every (e_swap, w_thr) in the config")
    _common(p)

    p = sub.add_parser("rates", help="generation time, distillation cost and bandwidth")
    _common(p, config_required=False)
    p.add_argument("--sweep", metavar="CSV", help="sweep output whose rows are used as operating points")
    p.add_argument("--target-p-gen", type=float, help="per-site generation probability to reach")

    p = sub.add_parser("rearrange-demo", help="dump one sampled placement and SWAP schedule")
    _common(p)
    p.add_argument("--trial", type=int, default=0, help="trial index whose pattern is sampled")
    return parser


def _load_config(args) -> ExperimentConfig:
    path = Path(args.config)
    if not path.exists() and not path.suffix:
        path = preset_path(args.config)
    cfg = parse_config(path)
    for key in ("seed", "trials", "threads"):
        v = getattr(args, key, None)
        if v is None:
            continue
        if v < (0 if key == "seed" else 1):
            raise ConfigError(f"--{key} out of range: {v}", key)
    cfg = cfg.with_overrides(seed=args.seed, trials=args.trials, threads=args.threads)
    if getattr(args, "e_swap", None) is not None:
        if not 0.0 <= args.e_swap <= 1.0:
            raise ConfigError("--e-swap outside [0, 1]", "e_swap")
        cfg = cfg.with_overrides(e_swap=(args.e_swap,))
    if getattr(args, "w_thr", None) is not None:
        if args.w_thr < 0:
            raise ConfigError("--w-thr must be non-negative", "w_thr")
        cfg = cfg.with_overrides(w_thr=(args.w_thr,))
    return cfg


def _provenance(cfg: ExperimentConfig, command: str) -> dict:
    # threads is left out: it never changes results
    d = cfg.to_dict()
    d.pop("threads")
    return {"command": command, "version": __version__, "config": d, "seed": cfg.seed}


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _sidecar(out: Optional[str], payload: dict) -> None:
    if out is not None:
        Path(out + ".meta.json").write_text(dumps(payload), encoding="utf-8")


def _figure_prefix(out: Optional[str]) -> Path:
    if out is None:
        raise ConfigError("--figures needs --out")
    p = Path(out)
    return p.with_name(p.stem)


def cmd_sweep(args, single: bool) -> int:
    cfg = _load_config(args)
    if single:
        cfg = cfg.with_overrides(e_swap=cfg.e_swap[:1], w_thr=cfg.w_thr[:1])
    if args.figures:
        _figure_prefix(args.out)
    params = cfg.simulation_params()
    tables = simulate_trials(params, cfg.trials, cfg.seed, cfg.threads)
    records = sweep(params, cfg.trials, cfg.seed, tables=tables)
    if args.format == "csv":
        text = sweep_csv(records)
    else:
        text = dumps({"rows": sweep_rows(records), "summary": [
            {"e_swap": r.e_swap, "w_thr": r.w_thr, "n_trials": r.n_trials, "n_insufficient": r.n_insufficient,
             "n_routing_failed": r.n_routing_failed, "dominant_d": r.dominant_d} for r in records]})
    _emit(text, args.out)
    _sidecar(args.out, _provenance(cfg, args.command))
    if args.figures:
        from .plotting import plot_tradeoff
        plot_tradeoff(read_sweep_csv(sweep_csv(records)), _figure_prefix(args.out))
    return EXIT_OK


def _operating_points(path: Optional[str]) -> list[dict]:
    if path is None:
        return []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read sweep file {path}: {exc.strerror}") from None
    try:
        rows = read_sweep_csv(text)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"malformed sweep file {path}: {exc}") from None
    # e_log = 1 cannot be distilled; such rows only occur with tiny samples
    return [r for r in rows if r["N_acc"] > 0 and 0.0 <= r["e_log"] < 1.0]


def cmd_rates(args) -> int:
    cfg = _load_config(args) if args.config else None
    loss_base = cfg.loss_base if cfg else "db"
    target = args.target_p_gen
    if target is None:
        target = (cfg.target_p_gen or cfg.p_gen) if cfg else 0.3
    if not 0.0 < target < 1.0:
        raise ConfigError("target p_gen must lie in (0, 1)", "target_p_gen")
    specs = (cfg.distillation,) if cfg else DISTILLATION_PRESETS
    if cfg and cfg.hardware_name in PRESETS and cfg.hardware != PRESETS[cfg.hardware_name]:
        hardware = {cfg.hardware_name + "_custom": cfg.hardware}
    else:
        hardware = dict(PRESETS)
    points = _operating_points(args.sweep)
    if args.figures:
        _figure_prefix(args.out)

    rows, curves, figure_points = [], {}, []
    taus = np.logspace(-6, 1, 71)
    for name, hw in hardware.items():
        tau = required_duration(hw, target, loss_base)
        curves[name] = {"tau": [fmt_sci(t) for t in taus],
                        "p_gen": [fmt_rate(p) for p in generation_success(hw, taus, loss_base)]}
        base = {"preset": name, "loss_base": loss_base, "target_p_gen": fmt_param(target), "tau": fmt_sci(tau),
                "tau_arr": fmt_sci(hw.tau_arr), "tau_meas": fmt_sci(hw.tau_meas)}
        if not points:
            # ideal encoding stage: every trial accepted and error free
            for spec in specs:
                pd = post_distillation(spec, 0.0, 1.0)
                rows.append({**base, "e_swap": "", "w_thr": "", "d": "", "p_log": fmt_rate(1.0),
                             "e_log": fmt_rate(0.0), "n": spec.n, "code_d": spec.d, "e_post": fmt_sci(pd.e_post),
                             "p_post": fmt_rate(pd.p_post), "n_trial": fmt_sci(pd.n_trial),
                             "bandwidth": fmt_sci(bandwidth(pd.n_trial, tau, hw.tau_arr, hw.tau_meas))})
        for pt in points:
            for spec in specs:
                pd = post_distillation(spec, pt["e_log"], pt["p_log"])
                bw = bandwidth(pd.n_trial, tau, hw.tau_arr, hw.tau_meas)
                rows.append({**base, "e_swap": fmt_param(pt["e_swap"]), "w_thr": pt["w_thr"], "d": pt["d"],
                             "p_log": fmt_rate(pt["p_log"]), "e_log": fmt_rate(pt["e_log"]), "n": spec.n,
                             "code_d": spec.d, "e_post": fmt_sci(pd.e_post), "p_post": fmt_rate(pd.p_post),
                             "n_trial": fmt_sci(pd.n_trial), "bandwidth": fmt_sci(bw)})
                if name == next(iter(hardware)):
                    figure_points.append({"n": spec.n, "code_d": spec.d, "e_post": pd.e_post, "n_trial": pd.n_trial})

    if args.format == "csv":
        text = to_csv(rows, RATE_COLUMNS)
    else:
        text = dumps({"rows": rows, "curves": curves})
    _emit(text, args.out)
    prov = {"command": "rates", "version": __version__, "target_p_gen": target, "loss_base": loss_base,
            "sweep": args.sweep, "config": _provenance(cfg, "rates")["config"] if cfg else None}
    _sidecar(args.out, prov)
    if args.figures:
        from .plotting import plot_generation_curves, plot_post_distillation
        prefix = _figure_prefix(args.out)
        plot_generation_curves({k: (taus, generation_success(hardware[k], taus, loss_base)) for k in hardware},
                               prefix.with_name(prefix.name + "_generation.png"))
        if figure_points:
            plot_post_distillation(figure_points, prefix.with_name(prefix.name + "_distillation.png"))
    return EXIT_OK


def cmd_rearrange_demo(args) -> int:
    cfg = _load_config(args)
    if args.trial < 0:
        raise ConfigError("--trial must be non-negative", "trial")
    params = cfg.simulation_params()
    pattern = sample_entanglement_pattern(params.grid, cfg.p_gen, trial_rng(cfg.seed, args.trial, PATTERN_STREAM))
    placement = select_placement(pattern, params.grid, cfg.min_distance, cfg.routing_weight)
    plan, layout = placement.plan, placement.layout
    demo = {
        "grid_size": cfg.size_L,
        "seed": cfg.seed,
        "trial": args.trial,
        "count_M": pattern.count_M,
        "distance": placement.distance_d,
        "center": list(placement.center),
        "cell_origin": list(layout.cell_origin),
        "occupied": [list(s) for s in pattern.sorted_sites()],
        "data_sites": [list(s) for s in layout.grid_data_sites()],
        "assignment": [[list(s), list(t)] for s, t in plan.assignment.pairs],
        "assignment_weight": plan.assignment.total_weight,
        "swap_participations": [int(k) for k in plan.counts_by_data_index],
        "total_swaps": plan.total_swaps,
        "schedule": [[list(a), list(b)] for a, b in plan.swap_sequence],
    }
    if args.format == "json":
        text = dumps(demo)
    else:
        sched = [{"step": i, "a_row": a[0], "a_col": a[1], "b_row": b[0], "b_col": b[1]}
                 for i, (a, b) in enumerate(plan.swap_sequence)]
        text = to_csv(sched, ("step", "a_row", "a_col", "b_row", "b_col"))
    if args.figures:
        _figure_prefix(args.out)
    _emit(text, args.out)
    _sidecar(args.out, _provenance(cfg, "rearrange-demo") | {"trial": args.trial})
    if args.figures:
        from .plotting import plot_placement
        prefix = _figure_prefix(args.out)
        plot_placement(demo, prefix.with_name(prefix.name + "_placement.png"))
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command in ("simulate", "sweep"):
            return cmd_sweep(args, single=args.command == "simulate")
        if args.command == "rates":
            return cmd_rates(args)
        return cmd_rearrange_demo(args)
    except (UsageError, ConfigError) as exc:
        print(f"logent: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except KeyboardInterrupt:
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - any module failure maps to exit 2
        print(f"logent: runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
