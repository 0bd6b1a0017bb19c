"""End-to-end runs of the command line, in process."""

import io
import json

import pandas as pd
import pytest

from src.cli.main import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return pd.read_csv(io.StringIO(text), comment="#")


class TestEnumerate:

    def test_unit_beta(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--beta", "1", "--n", "3", "--quiet")
        assert code == 0
        assert out.startswith("# randfib-csv v1, command=enumerate, config=")
        frame = read_csv(out)
        assert list(frame.columns) == ["level", "S", "SS", "mean_abs", "raw_second", "variance"]
        assert frame["S"].tolist() == [1, 2, 6, 14]

    def test_half_beta(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--beta", "1/2", "--n", "1", "--mode", "exact", "--quiet")
        assert code == 0
        assert str(read_csv(out)["mean_abs"].iloc[-1]) == "1"

    def test_rationals_printed_as_ratios(self, capsys):
        _, out, _ = run(capsys, "enumerate", "--beta", "1/3", "--n", "2", "--quiet")
        assert "10/9" in out

    def test_header_echoes_config(self, capsys):
        _, out, _ = run(capsys, "enumerate", "--beta", "1/2", "--seed", "0,1", "--n", "2", "--quiet")
        config = json.loads(out.splitlines()[0].split("config=", 1)[1])
        assert config["beta"] == "1/2"
        assert config["seed_pair"] == ["0", "1"]
        assert config["n_max"] == 2

    def test_identical_flags_identical_bytes(self, capsys):
        _, first, _ = run(capsys, "enumerate", "--beta", "3/4", "--n", "6", "--quiet")
        _, second, _ = run(capsys, "enumerate", "--beta", "3/4", "--n", "6", "--quiet", "--threads", "2")
        assert first.replace('"threads":2', '"threads":1') == second.replace('"threads":2', '"threads":1')

    def test_level_guard(self, capsys):
        code, out, err = run(capsys, "enumerate", "--beta", "1", "--n", "40")
        assert code == 3
        assert out == ""
        assert "cap" in err

    def test_state_cap_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("RANDFIB_STATE_CAP", "3")
        code, _, _ = run(capsys, "enumerate", "--n", "5", "--quiet")
        assert code == 3

    def test_flag_beats_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("RANDFIB_STATE_CAP", "3")
        code, _, _ = run(capsys, "enumerate", "--n", "5", "--state-cap", "100", "--quiet")
        assert code == 0

    @pytest.mark.parametrize("argv", [
        ["enumerate", "--beta", "0"],
        ["enumerate", "--beta", "abc"],
        ["enumerate", "--seed", "0,0"],
        ["enumerate", "--threads", "0"],
        ["enumerate", "--no-such-flag"],
    ])
    def test_invalid_config(self, capsys, argv):
        code, out, _ = run(capsys, *argv)
        assert code == 2
        assert out == ""

    def test_json(self, capsys, tmp_path):
        target = tmp_path / "rows.json"
        code, _, _ = run(capsys, "enumerate", "--n", "2", "--format", "json", "--output", str(target), "--quiet")
        assert code == 0
        payload = json.loads(target.read_text())
        assert payload["command"] == "enumerate"
        assert [row["S"] for row in payload["rows"]] == [1, 2, 6]


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "12", "--quiet")
    assert code == 0
    frame = read_csv(out)
    assert frame["verdict"].all()
    assert (frame["L"] <= frame["S"]).all() and (frame["S"] <= frame["U"]).all()


def test_bounds_bad_initials_fail_the_sandwich(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "6", "--initials", "1,2,7", "--quiet")
    assert code == 4
    assert not read_csv(out)["verdict"].all()


def test_roots(capsys):
    code, out, _ = run(capsys, "roots", "--quiet")
    assert code == 0
    payload = json.loads(out)
    assert payload["lower_growth"] == pytest.approx(1.12095, abs=1e-5)
    assert payload["upper_growth"] == pytest.approx(1.23375, abs=1e-5)


def test_beta_audit_flags_printed_rows(capsys):
    code, out, _ = run(capsys, "beta-audit", "--beta", "2", "--trials", "2000", "--quiet")
    assert code == 0
    rows = {row["case"]: row for row in json.loads(out)["rows"]}
    assert rows[2]["eq_derived_sum"] == 16 and rows[2]["table_printed_sum"] == 18
    assert rows[2]["agree_table"] is False

    _, out, _ = run(capsys, "beta-audit", "--beta", "0.5", "--trials", "2000", "--quiet")
    rows = {row["case"]: row for row in json.loads(out)["rows"]}
    assert rows[6]["eq_derived_sum"] == 4 and rows[6]["table_printed_sum"] == 2


def test_sweep_default_grid(capsys):
    code, out, _ = run(capsys, "sweep", "--level", "4", "--mode", "exact", "--quiet")
    assert code == 0
    frame = read_csv(out)
    assert len(frame) == 141
    assert frame["beta"].iloc[0] == "1/10" and frame["beta"].iloc[-1] == "3/2"


def test_lyapunov(capsys):
    code, out, _ = run(capsys, "lyapunov", "--beta", "1", "--steps", "5000", "--trials", "10",
                       "--rng-seed", "42", "--quiet")
    assert code == 0
    frame = read_csv(out)
    assert 1.10 <= frame["growth_factor"].iloc[0] <= 1.16


def test_lyapunov_grid(capsys):
    code, out, _ = run(capsys, "lyapunov", "--betas", "0.5:1.5:0.5", "--steps", "500", "--trials", "2", "--quiet")
    assert code == 0
    assert read_csv(out)["beta"].tolist() == [0.5, 1.0, 1.5]


def test_crossing_same_sign_bracket(capsys):
    code, _, _ = run(capsys, "crossing", "--lo", "1.0", "--hi", "1.2", "--steps", "1000", "--trials", "4")
    assert code == 2


def test_breakpoints(capsys):
    code, out, _ = run(capsys, "breakpoints", "--level", "2", "--quiet")
    assert code == 0
    frame = read_csv(out)
    assert frame["beta_star"].tolist() == pytest.approx([0.6180339887, 1.0, 1.6180339887], abs=1e-9)


def test_crossing(capsys):
    code, out, _ = run(capsys, "crossing", "--lo", "0.6", "--hi", "0.8", "--tol", "0.01", "--steps", "20000",
                       "--trials", "20", "--format", "json", "--quiet")
    assert code == 0
    payload = json.loads(out)
    assert payload["variant"] == "lagged"
    assert 0.67 <= payload["beta_star"] <= 0.73
    assert payload["fibonacci_gamma"] > 0
    assert payload["critical_beta"] == pytest.approx(0.7071067811865476)


def test_crossing_fibonacci_variant_never_changes_sign(capsys):
    code, out, _ = run(capsys, "crossing", "--variant", "fibonacci", "--steps", "5000", "--trials", "8", "--quiet")
    assert code == 2
    assert out == ""


@pytest.mark.slow
def test_crossing_full_length(capsys):
    code, out, _ = run(capsys, "crossing", "--lo", "0.6", "--hi", "0.8", "--steps", "100000",
                       "--trials", "50", "--format", "json", "--quiet")
    assert code == 0
    assert 0.67 <= json.loads(out)["beta_star"] <= 0.73


def test_lyapunov_lagged_variant(capsys):
    code, out, _ = run(capsys, "lyapunov", "--beta", "0.5", "--variant", "lagged", "--steps", "5000",
                       "--trials", "8", "--quiet")
    assert code == 0
    frame = read_csv(out)
    assert frame["variant"].tolist() == ["lagged"]
    assert frame["gamma"].iloc[0] < 0


def test_bounds_report_variance_growth(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "10", "--quiet")
    assert code == 0
    assert "# mean_sq_growth=1.618033988" in out
    frame = read_csv(out)
    assert pd.isna(frame["variance_ratio"].iloc[0])
    assert frame["variance_ratio"].iloc[2] == pytest.approx(0.75)
    assert frame["variance_ratio"].iloc[-1] > 1

    _, out, _ = run(capsys, "bounds", "--n", "6", "--format", "json", "--quiet")
    payload = json.loads(out)
    assert payload["ss_root_growth"] == pytest.approx(3.2360679775, abs=1e-9)
    assert payload["rows"][3]["variance_ratio"] == pytest.approx(31 / 12)


def test_beta_audit_reports_critical_beta(capsys):
    code, out, _ = run(capsys, "beta-audit", "--beta", "1", "--trials", "2000", "--quiet")
    assert code == 0
    report = json.loads(out)["critical_beta"]
    assert report["value"] == pytest.approx(0.7071067811865476)
    assert report["below_beta"] == "7/10"
    assert report["below_witness"] is not None
    assert report["above_satisfiable"] is False


def test_enumerate_exits_on_broken_row(capsys, monkeypatch):
    import dataclasses

    import src.cli.commands as commands

    original = commands.enumerate_rows

    def lossy(*args, **kwargs):
        rows = original(*args, **kwargs)
        return rows[:-1] + [dataclasses.replace(rows[-1], count=rows[-1].count - 1)]

    monkeypatch.setattr(commands, "enumerate_rows", lossy)
    code, out, err = run(capsys, "enumerate", "--n", "4")
    assert code == 4
    assert out == ""
    assert "expected 16" in err


def test_yaml_knobs_reach_the_run(capsys, monkeypatch):
    import importlib

    cli_main = importlib.import_module("src.cli.main")
    from src.cli.config import load_config

    defaults = load_config()
    defaults["enumeration"]["chunk_size"] = 3
    defaults["enumeration"]["float_rescale_exponent"] = 8
    defaults["polyroots"]["newton_steps"] = 0
    monkeypatch.setattr(cli_main, "load_config", lambda: defaults)

    code, out, _ = run(capsys, "enumerate", "--beta", "3", "--n", "9", "--mode", "float", "--threads", "2", "--quiet")
    assert code == 0
    config = json.loads(out.splitlines()[0].split("config=", 1)[1])
    assert (config["chunk_size"], config["rescale_exponent"], config["newton_steps"]) == (3, 8, 0)
    monkeypatch.undo()
    _, plain, _ = run(capsys, "enumerate", "--beta", "3", "--n", "9", "--mode", "float", "--quiet")
    assert read_csv(out)["S"].tolist() == pytest.approx(read_csv(plain)["S"].tolist(), rel=1e-12)
