import json

import pandas as pd
import pytest

from data.artifacts import FIELD_COLUMNS, PERIOD_COLUMNS, TRAJECTORY_COLUMNS
from main import main, parse_flow
from utils.config import ENV_OUT_DIR, ENV_SEED, load_settings
from utils.errors import BranchCut
from verification.suites import SUITES


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv(ENV_SEED, raising=False)
    monkeypatch.delenv(ENV_OUT_DIR, raising=False)


def test_print_defaults(capsys):
    assert main(["--print-defaults"]) == 0
    assert json.loads(capsys.readouterr().out) == load_settings()


def test_print_defaults_includes_flags(capsys):
    assert main(["verify", "mirror", "--seed", "3", "--points", "4", "--print-defaults"]) == 0
    cfg = json.loads(capsys.readouterr().out)
    assert cfg["seed"] == 3 and cfg["verify"]["points"] == 4


def test_missing_command_is_config_error():
    assert main([]) == 2


def test_parse_flow():
    assert parse_flow("0,1") == [0, 1]
    assert parse_flow("2,3") == [2, 3]
    with pytest.raises(Exception):
        parse_flow("3,1")


def test_bad_config_file_exits_2(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("lattice: [unclosed\n")
    assert main(["periods", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_lattice_evolve_writes_trajectory(tmp_path):
    code = main(["lattice", "evolve", "--n", "8", "--t", "0.01", "--dt", "0.001",
                 "--record-every", "5", "--out", str(tmp_path)])
    assert code == 0
    df = pd.read_csv(tmp_path / "trajectory.csv")
    assert list(df.columns) == TRAJECTORY_COLUMNS
    assert len(df) == 3 * 8
    cons = json.loads((tmp_path / "conservation.json").read_text())
    assert "H_AL" in cons["drift"]
    assert len(cons["times"]) == 3


def test_lattice_evolve_semi_infinite(tmp_path):
    code = main(["lattice", "evolve", "--boundary", "semi_infinite", "--n", "12", "--t", "0.005",
                 "--dt", "0.001", "--flow", "1,1", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "trajectory.csv").exists()


def test_hydro_evolve_writes_fields(tmp_path):
    code = main(["hydro", "evolve", "--grid", "32", "--t", "0.01", "--out", str(tmp_path)])
    assert code == 0
    for name in ("field_initial.csv", "field_final.csv"):
        assert list(pd.read_csv(tmp_path / name).columns) == FIELD_COLUMNS
    drift = json.loads((tmp_path / "hydro_conservation.json").read_text())["drift"]
    assert set(drift) == {"int_t1", "int_t2", "int_h1_2"}


def test_gradient_catastrophe_exits_3_and_flushes(tmp_path):
    cfg = tmp_path / "steep.json"
    cfg.write_text(json.dumps({"hydro": {"max_gradient": 1e-6}}))
    code = main(["hydro", "evolve", "--config", str(cfg), "--grid", "32", "--t", "0.01", "--out", str(tmp_path)])
    assert code == 3
    assert (tmp_path / "field_partial.csv").exists()
    assert (tmp_path / "hydro_conservation_partial.json").exists()


def test_periods_table(tmp_path):
    assert main(["periods", "--out", str(tmp_path)]) == 0
    df = pd.read_csv(tmp_path / "periods.csv")
    assert list(df.columns) == PERIOD_COLUMNS
    assert set(df["route"]) == {"closed_form", "contour"}
    assert df["abs_route_gap"].max() < 1e-6


def test_verify_single_check(tmp_path):
    code = main(["verify", "lattice", "--suite", "al_equivalence", "--points", "5", "--out", str(tmp_path)])
    assert code == 0
    doc = json.loads((tmp_path / "verify_lattice.json").read_text())
    assert [d["check_name"] for d in doc] == ["lattice.al_equivalence"]
    assert doc[0]["pass"] is True


def test_lattice_verify_report_name(tmp_path):
    code = main(["lattice", "verify", "--suite", "semi_infinite", "--out", str(tmp_path)])
    assert code == 0
    names = [d["check_name"] for d in json.loads((tmp_path / "lattice_report.json").read_text())]
    assert "lattice.semi_infinite_uncorrected" in names


def test_unknown_check_exits_2(tmp_path):
    assert main(["verify", "mirror", "--suite", "nonsense", "--out", str(tmp_path)]) == 2


def test_failing_check_exits_1(tmp_path):
    cfg = tmp_path / "tight.json"
    cfg.write_text(json.dumps({"tolerances": {"frobenius.c_vs_prepotential": 1e-300}}))
    code = main(["verify", "frobenius", "--suite", "c_vs_prepotential", "--points", "10",
                 "--config", str(cfg), "--out", str(tmp_path)])
    assert code == 1


def test_numerical_error_in_check_writes_report_then_exits_3(tmp_path, monkeypatch):
    def cut(_ctx):
        raise BranchCut("log crossed the cut")

    monkeypatch.setitem(SUITES["mirror"].checks, "cut", cut)
    code = main(["verify", "mirror", "--seed", "7", "--points", "4", "--out", str(tmp_path)])
    assert code == 3
    doc = json.loads((tmp_path / "verify_mirror.json").read_text())
    names = [d["check_name"] for d in doc]
    assert "mirror.cut" in names and len(names) > 1
    assert next(d for d in doc if d["check_name"] == "mirror.cut")["pass"] is False


def test_verify_is_deterministic(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    for out in (first, second):
        assert main(["verify", "mirror", "--seed", "7", "--points", "4", "--out", str(out)]) == 0
    assert (first / "verify_mirror.json").read_bytes() == (second / "verify_mirror.json").read_bytes()


@pytest.mark.slow
def test_verify_all_is_deterministic(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    codes = [main(["verify", "all", "--seed", "7", "--points", "10", "--out", str(out)]) for out in (first, second)]
    assert codes == [0, 0]
    assert (first / "verify_all.json").read_bytes() == (second / "verify_all.json").read_bytes()


@pytest.mark.slow
def test_hydro_compare(tmp_path):
    assert main(["hydro", "compare", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "compare.json").read_text())
    assert [sorted(d) for d in doc] == [["epsilon", "order_estimate", "sup_error"]] * 2
    assert doc[1]["order_estimate"] >= 0.7
