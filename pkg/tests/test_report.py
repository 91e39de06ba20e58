import locale
import math

from hypothesis import given
from hypothesis import strategies as st

from logent.experiment import DistanceRow, SweepRecord
from logent.report import SWEEP_COLUMNS, fmt_rate, fmt_sci, read_sweep_csv, sweep_csv


def _record(n_acc=40, n_err=3):
    return SweepRecord(0.3, 19, 0.05, 0.01, 5, 1000, 10, 0,
                       (DistanceRow(7, 700, n_acc, n_err, 240.0), DistanceRow(8, 290, 0, 0, math.nan)))


def test_csv_roundtrip():
    text = sweep_csv([_record()])
    assert text.splitlines()[0] == ",".join(SWEEP_COLUMNS)
    rows = read_sweep_csv(text)
    assert rows[0]["N_acc"] == 40 and rows[0]["low_confidence"] == 1
    assert math.isnan(rows[1]["e_log"]) and math.isnan(rows[1]["median_total_swaps"])
    assert abs(rows[0]["e_log"] - 3 / 40) < 1e-8


def test_fixed_precision():
    assert fmt_rate(0.1) == "0.10000000"
    assert fmt_sci(1.5e-15) == "1.500000e-15"
    assert fmt_rate(math.nan) == "nan"


def test_locale_independent():
    before = sweep_csv([_record()])
    try:
        locale.setlocale(locale.LC_NUMERIC, "de_DE.UTF-8")
    except locale.Error:
        pass
    try:
        assert sweep_csv([_record()]) == before
    finally:
        locale.setlocale(locale.LC_NUMERIC, "C")


@given(st.integers(1, 10_000), st.data())
def test_rates_written_in_unit_interval(n_acc, data):
    n_err = data.draw(st.integers(0, n_acc))
    row = read_sweep_csv(sweep_csv([_record(min(n_acc, 700), min(n_err, 700))]))[0]
    assert 0 <= row["ci_low"] <= row["e_log"] <= row["ci_high"] <= 1
    assert 0 <= row["p_log_ci_low"] <= row["p_log"] <= row["p_log_ci_high"] <= 1
