import logging
import math
from fractions import Fraction

import pytest

from digiseq.discrepancy import WeightSequence, l2_warnock_prefixes, star_disc_exact, weighted_star
from digiseq.recipes import (
    LIMSUP_CONSTANT,
    NOT_ASSERTED,
    _sequence_points,
    kronecker_subsequence_points,
    loglog_slope,
    read_table,
    recipe_figure1,
    recipe_interlaced_l2,
    recipe_kronecker_subsequence,
    recipe_metrical,
    recipe_vdc_lp_limsup,
    recipe_weighted,
    write_table,
)
from digiseq.laurent import LaurentSeries
from digiseq.sequences import generate_points, preset


def test_figure1_rows_and_checks(tmp_path):
    res = recipe_figure1(out_dir=tmp_path)
    assert res.ok and all(c.asserted for c in res.checks)
    rows = {r["N"]: r for r in res.rows}
    assert [r["N"] for r in res.rows] == list(range(2, 33))
    assert rows[2]["N_Dstar"] == 1
    assert rows[3]["N_Dstar"] == Fraction(3, 2) and rows[3]["bejian_faure"] == pytest.approx(1.5283, abs=1e-4)
    assert all(r["N_Dstar"] <= r["S2"] for r in res.rows)
    svg = (tmp_path / "figure1.svg").read_text()
    assert svg.startswith("<?xml") and "<svg" in svg


def test_recipes_are_byte_deterministic(tmp_path):
    for sub in ("a", "b"):
        recipe_figure1(out_dir=tmp_path / sub)
        recipe_interlaced_l2(1, 1024, out_dir=tmp_path / sub)
        recipe_metrical(2, 2, 6, 64, 5, seed=3, out_dir=tmp_path / sub)
    for name in ("figure1.csv", "figure1.svg", "interlaced.csv", "interlaced.svg", "metrical.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_table_round_trip(tmp_path, fmt):
    res = recipe_weighted(s=3, n_list=(8, 16))
    path = tmp_path / f"t.{fmt}"
    write_table(res.columns, res.rows, path, fmt)
    cols, rows = read_table(str(path))
    assert cols == res.columns and rows == res.rows
    res = recipe_figure1(n_max=12)
    cols, rows = read_table(write_table(res.columns, res.rows, fmt=fmt))
    assert rows == res.rows
    assert all(type(a["bejian_faure"]) is float for a in rows)


def test_limsup_recipe_trend_report():
    res = recipe_vdc_lp_limsup(2, 4096)
    assert res.ok
    trend = [c for c in res.checks if not c.asserted]
    assert trend and NOT_ASSERTED in trend[0].detail
    run = [r["running_max"] for r in res.rows]
    assert all(a <= b for a, b in zip(run, run[1:]))
    with pytest.raises(ValueError):
        recipe_vdc_lp_limsup(2, 2**15)


def test_limsup_window_maxima_approach_constant():
    # the running max is pinned by N = 2; per-octave maxima carry the trend
    P = generate_points(preset("vdc", 1, 2, 12), 4096)
    L = l2_warnock_prefixes(P)
    ratios, offsets = [], []
    for k in range(4, 13):
        lo, hi = 2 ** (k - 1) + 1, 2**k
        ratios.append(max(n * L[n - 1] / math.log(n) for n in range(lo, hi + 1)) / LIMSUP_CONSTANT)
        offsets.append(max(n * L[n - 1] - LIMSUP_CONSTANT * math.log(n) for n in range(lo, hi + 1)))
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    assert 1.0 < ratios[-1] < 1.31
    # worst-case N L2 = c log N + O(1) with a nearly constant offset
    assert max(offsets) - min(offsets) < 0.003


def test_limsup_other_p_uses_quadrature():
    res = recipe_vdc_lp_limsup(3.0, 64)
    assert "cell_quadrature" in res.notes[0]
    assert all(0 < r["L"] for r in res.rows)


def test_interlaced_recipe():
    res = recipe_interlaced_l2(1, 4096)
    assert res.ok
    assert [r["N"] for r in res.rows] == [2**k for k in range(4, 13)]
    assert res.extra["slope_interlaced"] <= 0.05
    # at N = 2^k van der Corput has N L2 = 1/sqrt(3) exactly, hence slope -1/2
    assert all(r["L2_vdc"] * r["N"] == pytest.approx(1 / math.sqrt(3), rel=1e-9) for r in res.rows)
    assert res.extra["slope_vdc"] == pytest.approx(-0.5, abs=1e-6)
    # growth shows up at the worst N in each octave instead
    assert res.extra["slope_vdc_window"] >= 0.2
    with pytest.raises(ValueError):
        recipe_interlaced_l2(3, 1024)


def test_interlaced_two_dimensional_base():
    # s = 2 needs four base matrices; Faure in base 2 supports at most 2
    with pytest.raises(ValueError):
        recipe_interlaced_l2(2, 256)
    res = recipe_interlaced_l2(2, 256, base_preset="random")
    assert len(res.rows) == 5


def test_loglog_slope():
    N = [2**k for k in range(3, 10)]
    assert loglog_slope(N, [math.log(n) ** 0.7 for n in N]) == pytest.approx(0.7)


def test_metrical_deterministic_and_logged(caplog):
    with caplog.at_level(logging.INFO, logger="digiseq.recipes"):
        a = recipe_metrical(2, 2, 6, 64, 8, seed=5)
    assert any("rejected" in r.message for r in caplog.records)
    b = recipe_metrical(2, 2, 6, 64, 8, seed=5)
    assert a.rows == b.rows and a.ok
    assert [r["N"] for r in a.rows] == [2, 4, 8, 16, 32, 64]
    assert all(r["q0"] <= r["q50"] <= r["q100"] for r in a.rows)
    assert any("not desk-verifiable" in n for n in a.notes)
    with pytest.raises(ValueError):
        recipe_metrical(reps=1001)


def test_metrical_median_stable_across_seeds():
    a = recipe_metrical(2, 2, 10, 1024, 100, seed=0)
    b = recipe_metrical(2, 2, 10, 1024, 100, seed=1)
    for ra, rb in zip(a.rows, b.rows):
        assert math.isfinite(ra["q50"])
        assert max(ra["q50"], rb["q50"]) / min(ra["q50"], rb["q50"]) < 1.2


def test_kronecker_subsequence_points():
    f = [LaurentSeries.from_coeffs([1, 0, 1, 1, 0, 0, 1, 0, 1, 1], 2)]
    P = kronecker_subsequence_points(f, 4, 3)
    # {t^n f} drops the first n coefficients
    assert [r[0] for r in P.numerators] == [0b101, 0b011, 0b110, 0b100]
    res = recipe_kronecker_subsequence(2, 2, 8, 32, 4, seed=1)
    assert [r["N"] for r in res.rows] == [2, 4, 8, 16, 32]
    assert any("i.i.d." in n for n in res.notes)


def test_weighted_recipe():
    res = recipe_weighted(s=3, n_list=(8, 16))
    assert res.ok
    unit = [r for r in res.rows if r["family"] == "unit"]
    assert all(r["argmax_subset"] == "{1,2,3}" for r in unit)
    one = recipe_weighted(s=1, n_list=(8,), sequences=("halton",))
    D = star_disc_exact(_sequence_points("halton", 1, 8)).value
    rows = {r["family"]: r for r in one.rows}
    assert rows["unit"]["N_weighted_Dstar"] == 8 * D
    assert rows["1/j"]["N_weighted_Dstar"] == 8 * D


def test_weighted_decaying_weights_pick_low_index_sets():
    for s in range(2, 11):
        for seq in ("halton", "faure"):
            ws = weighted_star(_sequence_points(seq, s, 16), WeightSequence.power_law(s, 3))
            assert ws.subset in ((1,), (1, 2))


def test_weighted_large_s_skips_unit_rows():
    res = recipe_weighted(s=6, n_list=(32,))
    unit = [r for r in res.rows if r["family"] == "unit"]
    assert all(r["N_weighted_Dstar"] == "n/a" for r in unit)
    assert any("skipped" in n for n in res.notes)


def test_weighted_gamma_file(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("# weights\n1, 1/2\n1/4\n")
    res = recipe_weighted(s=3, n_list=(8,), gamma_file=str(g))
    assert {r["family"] for r in res.rows} >= {"file"}
