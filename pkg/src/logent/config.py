"""Flat ``key = value`` experiment configuration files.

Blank lines and ``#`` comments are ignored.  Lists are comma separated and
integer lists also accept inclusive ranges such as ``0..12``.

Required keys: ``grid_size``, ``p_gen``, ``e_init``, ``e_swap``, ``w_thr``.
See :data:`DEFAULTS` for the optional ones.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

from .decode_select import WEIGHTINGS
from .experiment import SimulationParams
from .rates import LOSS_BASES, PRESETS, DistillationSpec, HardwareParams, preset
from .rearrange import WEIGHTS

REQUIRED = ("grid_size", "p_gen", "e_init", "e_swap", "w_thr")
HARDWARE_KEYS = ("eta_ph", "eta_det", "eta_cov", "alpha", "length_l", "gamma", "tau_arr", "tau_meas")
DEFAULTS = {
    "trials": "100000",
    "seed": "0",
    "threads": "1",
    "weighting": "uniform",
    "min_distance": "3",
    "routing_weight": "squared_manhattan",
    "hardware": "free_space",
    "distillation": "11,5",
    "target_p_gen": "",
    "loss_base": "db",
}
KNOWN = set(REQUIRED) | set(DEFAULTS) | set(HARDWARE_KEYS)


class ConfigError(ValueError):
    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        where = []
        if key:
            where.append(f"key {key!r}")
        if line:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class ExperimentConfig:
    size_L: int
    p_gen: float
    e_init: float
    e_swap: tuple
    w_thr: tuple
    trials: int = 100_000
    seed: int = 0
    threads: int = 1
    weighting: str = "uniform"
    min_distance: int = 3
    routing_weight: str = "squared_manhattan"
    hardware_name: str = "free_space"
    hardware: HardwareParams = field(default_factory=lambda: PRESETS["free_space"])
    distillation: DistillationSpec = DistillationSpec(11, 5)
    target_p_gen: Optional[float] = None
    loss_base: str = "db"

    def simulation_params(self) -> SimulationParams:
        return SimulationParams(self.size_L, self.p_gen, self.e_init, self.e_swap, self.w_thr,
                                self.weighting, self.min_distance, self.routing_weight)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_dict(self) -> dict:
        out = asdict(self)
        out["e_swap"] = list(self.e_swap)
        out["w_thr"] = list(self.w_thr)
        return out


def _num(text: str, key: str, line: Optional[int], kind=float):
    try:
        return kind(text)
    except ValueError:
        raise ConfigError(f"cannot parse {text!r} as {kind.__name__}", key, line) from None


def _int_list(text: str, key: str, line: Optional[int]) -> tuple:
    out = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            a, b = _num(lo, key, line, int), _num(hi, key, line, int)
            if b < a:
                raise ConfigError(f"empty range {part!r}", key, line)
            out.extend(range(a, b + 1))
        else:
            out.append(_num(part, key, line, int))
    if not out:
        raise ConfigError("empty list", key, line)
    return tuple(out)


def _float_list(text: str, key: str, line: Optional[int]) -> tuple:
    out = tuple(_num(p.strip(), key, line) for p in text.split(",") if p.strip())
    if not out:
        raise ConfigError("empty list", key, line)
    return out


def _prob(v: float, key: str, line: Optional[int]) -> float:
    if not 0.0 <= v <= 1.0:
        raise ConfigError(f"value {v} outside [0, 1]", key, line)
    return v


def parse_text(text: str) -> ExperimentConfig:
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", line=lineno)
        key, value = (s.strip() for s in body.split("=", 1))
        if key not in KNOWN:
            raise ConfigError("unknown key", key, lineno)
        if key in raw:
            raise ConfigError("duplicate key", key, lineno)
        raw[key] = (value, lineno)
    for key in REQUIRED:
        if key not in raw:
            raise ConfigError("missing required key", key)
    for key, value in DEFAULTS.items():
        raw.setdefault(key, (value, None))

    def get(key):
        return raw[key]

    v, ln = get("grid_size")
    L = _num(v, "grid_size", ln, int)
    if L < 5:
        raise ConfigError("grid size must be at least 5", "grid_size", ln)
    v, ln = get("p_gen")
    p_gen = _prob(_num(v, "p_gen", ln), "p_gen", ln)
    v, ln = get("e_init")
    e_init = _prob(_num(v, "e_init", ln), "e_init", ln)
    v, ln = get("e_swap")
    e_swap = tuple(_prob(x, "e_swap", ln) for x in _float_list(v, "e_swap", ln))
    v, ln = get("w_thr")
    w_thr = _int_list(v, "w_thr", ln)
    if min(w_thr) < 0:
        raise ConfigError("thresholds must be non-negative", "w_thr", ln)

    ints = {}
    for key, lo in (("trials", 1), ("seed", 0), ("threads", 1), ("min_distance", 2)):
        v, ln = get(key)
        ints[key] = _num(v, key, ln, int)
        if ints[key] < lo:
            raise ConfigError(f"must be >= {lo}", key, ln)

    choices = {}
    for key, allowed in (("weighting", WEIGHTINGS), ("routing_weight", WEIGHTS),
                         ("hardware", tuple(PRESETS)), ("loss_base", LOSS_BASES)):
        v, ln = get(key)
        if v not in allowed:
            raise ConfigError(f"{v!r} not one of {list(allowed)}", key, ln)
        choices[key] = v

    overrides = {}
    for key in HARDWARE_KEYS:
        if key in raw:
            v, ln = raw[key]
            overrides[key] = _num(v, key, ln)
    try:
        hw = preset(choices["hardware"], **overrides)
    except ValueError as exc:
        raise ConfigError(str(exc), "hardware") from None

    v, ln = get("distillation")
    nd = _int_list(v, "distillation", ln)
    if len(nd) != 2:
        raise ConfigError("expected 'n,d'", "distillation", ln)
    try:
        dist = DistillationSpec(*nd)
    except ValueError as exc:
        raise ConfigError(str(exc), "distillation", ln) from None

    v, ln = get("target_p_gen")
    target = None
    if v:
        target = _num(v, "target_p_gen", ln)
        if not 0.0 < target < 1.0:
            raise ConfigError("target must lie in (0, 1)", "target_p_gen", ln)

    return ExperimentConfig(
        size_L=L, p_gen=p_gen, e_init=e_init, e_swap=e_swap, w_thr=w_thr,
        trials=ints["trials"], seed=ints["seed"], threads=ints["threads"],
        weighting=choices["weighting"], min_distance=ints["min_distance"],
        routing_weight=choices["routing_weight"], hardware_name=choices["hardware"], hardware=hw,
        distillation=dist, target_p_gen=target, loss_base=choices["loss_base"],
    )


def parse_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_text(text)


def preset_path(name: str) -> Path:
    """Bundled configuration file, e.g. ``config1``."""
    p = Path(__file__).with_name("presets") / f"{name}.cfg"
    if not p.exists():
        raise ConfigError(f"no bundled preset {name!r}")
    return p
