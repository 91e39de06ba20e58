import pytest

from logent.config import ConfigError, parse_config, parse_text, preset_path

BASE = "grid_size = 19\np_gen = 0.3\ne_init = 0.05\ne_swap = 0.03, 0.01\nw_thr = 0..3, 10\n"


def test_bundled_config1():
    cfg = parse_config(preset_path("config1"))
    assert (cfg.p_gen, cfg.size_L, cfg.e_init) == (0.3, 19, 0.05)
    assert 0.03 in cfg.e_swap and 5 in cfg.w_thr
    assert cfg.trials == 100_000


@pytest.mark.parametrize("name", ["config1", "config2", "config3"])
def test_all_presets_parse(name):
    cfg = parse_config(preset_path(name))
    assert cfg.simulation_params().grid.size_L == cfg.size_L


def test_defaults_and_ranges():
    cfg = parse_text(BASE)
    assert cfg.w_thr == (0, 1, 2, 3, 10)
    assert cfg.weighting == "uniform" and cfg.min_distance == 3
    assert cfg.trials == 100_000 and cfg.seed == 0
    assert cfg.distillation.n == 11 and cfg.target_p_gen is None


def test_comments_and_overrides():
    cfg = parse_text("# header\n" + BASE + "seed = 4  # trailing\nhardware = cavity\ngamma = 1000\n")
    assert cfg.seed == 4
    assert cfg.hardware.gamma == 1000 and cfg.hardware.eta_ph == 0.48
    assert cfg.with_overrides(seed=None, trials=7).trials == 7


def test_missing_key_named():
    with pytest.raises(ConfigError, match="p_gen"):
        parse_text(BASE.replace("p_gen = 0.3\n", ""))


def test_range_error():
    with pytest.raises(ConfigError, match="p_gen"):
        parse_text(BASE.replace("0.3", "1.5"))


@pytest.mark.parametrize("extra,needle", [
    ("colour = red\n", "unknown"),
    ("p_gen = 0.2\n", "duplicate"),
    ("weighting = fancy\n", "weighting"),
    ("trials = 0\n", "trials"),
    ("trials = many\n", "trials"),
    ("distillation = 3,5\n", "distillation"),
    ("target_p_gen = 1\n", "target_p_gen"),
    ("just words\n", "key = value"),
    ("eta_ph = 2\n", "hardware"),
])
def test_validation_errors(extra, needle):
    with pytest.raises(ConfigError, match=needle):
        parse_text(BASE + extra)


def test_line_numbers_reported():
    with pytest.raises(ConfigError) as info:
        parse_text(BASE + "\nbogus = 1\n")
    assert info.value.line == 7 and info.value.key == "bogus"


def test_bad_lists():
    with pytest.raises(ConfigError):
        parse_text(BASE.replace("0..3", "3..0"))
    with pytest.raises(ConfigError):
        parse_text(BASE.replace("0..3, 10", "-1"))


def test_unreadable(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(tmp_path / "missing.cfg")
    with pytest.raises(ConfigError):
        preset_path("config9")


def test_to_dict_roundtrip_fields():
    d = parse_text(BASE).to_dict()
    assert d["e_swap"] == [0.03, 0.01] and d["size_L"] == 19
