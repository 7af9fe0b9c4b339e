import csv
import io
import os
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from recip_sums import cli, experiments, field, verify
from recip_sums.caps import DEFAULTS, parse_caps
from recip_sums.config import ExperimentConfig, emit_config, parse_config, with_overrides
from recip_sums.errors import ConfigError
from recip_sums.experiments import floor_power


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write_cfg(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# --- config -----------------------------------------------------------------


def test_config_roundtrip_example():
    text = """
    # sweep
    p = 101, 211
    alpha = 2/5, 1/2
    beta = 3/10
    sums = S, K
    weights = random
    seed = 42
    """
    cfg = parse_config(text)
    assert cfg.p == (101, 211) and cfg.alpha == (Fraction(2, 5), Fraction(1, 2))
    assert parse_config(emit_config(cfg)) == cfg


@given(
    st.lists(st.integers(2, 10**6), max_size=4),
    st.lists(st.fractions(0, 1, max_denominator=100), max_size=3),
    st.integers(0, 2**63),
    st.sampled_from(["unit", "random", "w.txt"]),
)
def test_config_roundtrip_property(ps, alphas, seed, weights):
    cfg = ExperimentConfig(p=tuple(ps), alpha=tuple(alphas), seed=seed, weights=weights)
    assert parse_config(emit_config(cfg)) == cfg


@pytest.mark.parametrize(
    "text,match",
    [
        ("p = 11\nbogus = 3\n", "line 2: unknown key 'bogus'"),
        ("p = 11\np = 13\n", "line 2: duplicate key 'p'"),
        ("U = 1, x\n", "line 1: bad value for 'U'"),
        ("alpha = 1/0\n", "line 1: bad value"),
        ("p 11\n", "line 1: expected"),
        ("sums = Q\n", "unknown sum kind"),
    ],
)
def test_config_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_missing_p_names_key():
    cfg = parse_config("U = 10\nV = 10\n")
    with pytest.raises(ConfigError, match="'p'"):
        experiments.cmd_eval(cfg)


def test_overrides():
    cfg = with_overrides(parse_config("p = 7\n"), seed=3, out=None)
    assert cfg.seed == 3 and "seed" in cfg.present and "out" not in cfg.present


def test_caps_parsing():
    assert parse_caps(None) == DEFAULTS
    assert parse_caps("1000")["naive"] == 1000
    assert parse_caps("conv=1e3, tuples=20") == {**DEFAULTS, "conv": 1000, "tuples": 20}
    with pytest.raises(ConfigError, match="unknown work cap"):
        parse_caps("speed=3")
    with pytest.raises(ConfigError):
        parse_caps("naive=lots")


def test_floor_power_exact():
    assert floor_power(101, Fraction(7, 10)) == 25  # 101^0.7 = 25.35
    assert floor_power(10007, Fraction(1, 2)) == 100
    assert floor_power(49, Fraction(1, 2)) == 7
    assert floor_power(7, Fraction(0)) == 1


# --- eval / sweep / count -----------------------------------------------------

EVAL_CFG = "p = 11\nU = 10\nV = 10\nf = 0, 1\nsums = S, K, T\n"


def test_eval_complete_sum(tmp_path, capsys):
    code, out, _ = run_cli(["eval", "--config", write_cfg(tmp_path, EVAL_CFG)], capsys)
    assert code == 0
    recs = rows(out)
    assert [r["kind"] for r in recs] == ["S", "K", "T"]
    s = recs[0]
    assert float(s["abs"]) == pytest.approx(10, abs=1e-6)
    assert float(s["re"]) == pytest.approx(-10, abs=1e-6)
    assert float(s["UV"]) == 100
    assert float(s["hard_bound"]) == pytest.approx((100 * 11) ** 0.5)
    assert list(recs[0]) == list(experiments.SUM_COLUMNS)


def test_eval_deterministic(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "p = 101\nU = 60\nV = 70\nd = 3\nweights = random\nsums = S, T\n")
    first = run_cli(["eval", "--config", cfg, "--seed", "5"], capsys)[1]
    second = run_cli(["eval", "--config", cfg, "--seed", "5"], capsys)[1]
    other = run_cli(["eval", "--config", cfg, "--seed", "6"], capsys)[1]
    assert first == second != other


def test_eval_out_file(tmp_path, capsys):
    out = tmp_path / "o.csv"
    code, stdout, _ = run_cli(["eval", "--config", write_cfg(tmp_path, EVAL_CFG), "--out", str(out)], capsys)
    assert code == 0 and stdout == ""
    assert rows(out.read_text())[0]["kind"] == "S"


def test_eval_polygon_region(tmp_path, capsys):
    poly = tmp_path / "tri.poly"
    poly.write_text("0 0\n4 0\n0 4\n")
    cfg = write_cfg(tmp_path, f"p = 11\nU = 4\nV = 4\nregion = {poly}\n")
    code, out, _ = run_cli(["eval", "--config", cfg], capsys)
    assert code == 0 and rows(out)[0]["terms"] == "6"


SWEEP_CFG = "p = 101, 211, 401\nd = 2\nalpha = 7/10\nbeta = 7/10\nsums = S\n"


def test_sweep_thm21_trend(tmp_path, capsys):
    code, out, _ = run_cli(["sweep", "--config", write_cfg(tmp_path, SWEEP_CFG)], capsys)
    assert code == 0
    recs = rows(out)
    assert [int(r["p"]) for r in recs] == [101, 211, 401]
    for r in recs:
        p, U, V = int(r["p"]), int(r["U"]), int(r["V"])
        assert U == V == floor_power(p, Fraction(7, 10))
        assert float(r["ratio_thm"]) == pytest.approx(float(r["abs"]) / (p ** (2 / 3) * U + V))


def test_sweep_parallel_identical(tmp_path, capsys):
    text = "p = 101, 103, 107, 109\nd = 1, 3\nalpha = 1/2, 3/4\nbeta = 1/2, 9/10\nweights = random\nsums = S, T, K1\n"
    cfg = write_cfg(tmp_path, text)
    one = run_cli(["sweep", "--config", cfg, "--parallel", "1"], capsys)[1]
    eight = run_cli(["sweep", "--config", cfg, "--parallel", "8"], capsys)[1]
    assert one == eight
    assert len(rows(one)) == 4 * 2 * 2 * 2 * 2 + 4 * 2 * 2


def test_sweep_empty_axis(tmp_path, capsys):
    code, out, _ = run_cli(["sweep", "--config", write_cfg(tmp_path, "p =\nU = 3\nV = 3\n")], capsys)
    assert code == 0
    assert out.strip() == ",".join(experiments.SUM_COLUMNS)


def test_sweep_cap_marks_skipped(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "p = 101\nU = 50, 5\nV = 50\nworkcap = 1000\n")
    code, out, _ = run_cli(["sweep", "--config", cfg], capsys)
    assert code == 0
    assert [r["status"] for r in rows(out)] == ["skipped", "ok"]
    assert "RECIP_SUMS_WORKCAP" not in os.environ


def test_bad_workcap_is_config_error(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "p = 101\nU = 5\nV = 5\nworkcap = fast\n")
    assert run_cli(["sweep", "--config", cfg], capsys)[0] == 2


def test_count_cli(tmp_path, capsys):
    text = "p = 11, 13\nquantities = J, N, moment, census, tuples\nd = 1, 2\nk = 2\nT = 3, 5\nU = 3, 10\nZ = 10\nV = 3\nL = 2\nK = 2\nnu = 1, 2\n"
    code, out, _ = run_cli(["count", "--config", write_cfg(tmp_path, text)], capsys)
    assert code == 0
    recs = rows(out)
    assert list(recs[0]) == list(experiments.COUNT_COLUMNS)
    for r in recs:
        assert r["status"] == "ok", r
        if r["quantity"] in ("J", "tuples"):
            assert r["count"] == r["count_check"]
        if r["quantity"] == "moment" and r["nu"] == "1":
            assert float(r["count"]) == pytest.approx(float(r["count_check"]))
    j = [r for r in recs if r["quantity"] == "J" and r["p"] == "11" and r["d"] == "1" and r["T"] == "3"]
    assert j[0]["count"] == "15"
    n = [r for r in recs if r["quantity"] == "N" and r["p"] == "11" and r["d"] == "1" and r["U"] == "10"]
    assert n[0]["count"] == "10"
    assert all(float(r["weil_ratio"]) < 10 for r in recs if r["quantity"] == "N")


def test_pigeonhole_and_discrepancy_cli(tmp_path, capsys):
    code, out, _ = run_cli(["pigeonhole", "--config", write_cfg(tmp_path, "p = 10007\nd = 1, 2\nU = 5\n")], capsys)
    assert code == 0
    assert all(r["status"] == "ok" and float(r["c"]) <= 2 for r in rows(out))
    code, out, _ = run_cli(["discrepancy", "--config", write_cfg(tmp_path, "p = 10007\nd = 3\nU = 40, 400\n")], capsys)
    assert code == 0
    for r in rows(out):
        assert float(r["discrepancy"]) < float(r["constant_ref"])


# --- table-compare / verify / exit codes ----------------------------------------


def test_table_compare_cli(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, text, _ = run_cli(["table-compare", "--out", str(out)], capsys)
    assert code == 0
    assert "p^419/600 (k=14 or 15)" in text and "* p^31/40" in text and "* p^14/15" in text
    recs = rows(out.read_text())
    assert {r["label"] for r in recs} >= {"Thm23", "Thm24", "Thm25"}


def test_table_compare_custom_row_and_kmax(capsys):
    code, text, _ = run_cli(["table-compare", "--row", "1/2", "1/2"], capsys)
    assert code == 0 and "(p^1/2, p^1/2)" in text
    code, text, err = run_cli(["table-compare", "--kmax", "1"], capsys)
    assert code == 1 and "mismatch" in err and "Thm23" in text


def test_config_error_exit_code(tmp_path, capsys):
    code, _, err = run_cli(["eval", "--config", write_cfg(tmp_path, "p = 11\nwat = 1\n")], capsys)
    assert code == 2 and "line 2" in err
    code, _, err = run_cli(["eval", "--config", write_cfg(tmp_path, "U = 3\nV = 3\n")], capsys)
    assert code == 2 and "'p'" in err
    code, _, _ = run_cli(["eval", "--config", str(tmp_path / "missing.cfg")], capsys)
    assert code == 2
    code, _, _ = run_cli(["eval", "--config", write_cfg(tmp_path, "p = 12\nU = 3\nV = 3\n")], capsys)
    assert code == 2


def test_help_mentions_natural_logs(capsys):
    with pytest.raises(SystemExit):
        cli.main(["--help"])
    assert "natural log" in capsys.readouterr().out


def test_verify_quick_exit_zero(capsys):
    code, out, _ = run_cli(["verify", "--level", "quick"], capsys)
    assert code == 0
    assert out.count("[PASS]") == len(verify.suites("quick"))


def test_mutation_breaks_orthogonality(monkeypatch):
    # a sign error in e_p: conjugated roots still sum to zero, so only the
    # independent cmath comparison catches it
    monkeypatch.setattr(field, "TWO_PI_I", -field.TWO_PI_I)
    res = verify.check_orthogonality([5, 7, 11])
    assert not res.passed


def test_mutation_fails_verify(monkeypatch, capsys):
    monkeypatch.setattr(field, "TWO_PI_I", -field.TWO_PI_I)
    code, out, _ = run_cli(["verify"], capsys)
    assert code == 1 and "[FAIL] field.orthogonality" in out


def test_csv_schema_rejects_extra_columns():
    with pytest.raises(Exception, match="outside the schema"):
        experiments.write_csv(("a",), [experiments.RunRecord({"a": 1, "b": 2})])
