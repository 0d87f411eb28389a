import json
import os

import pytest

from pseudobosons.cli import main, resolve_config
from pseudobosons.errors import ConfigError
from pseudobosons.report import Check, Report, dumps, format_complex, format_float


def _run(tmp_path, *argv, name="r.json"):
    out = tmp_path / name
    code = main([*argv, "--output", str(out)])
    return code, out


def test_gll_verify_passes(tmp_path):
    code, out = _run(tmp_path, "gll-verify", "--k1", "0.2", "--k2", "-0.3", "--nmax", "6", "--lmax", "6")
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == "pseudoboson-report/1"
    tags = {c["tag"] for c in rep["checks"]}
    assert {"Eq.417", "Eq.420", "Eq.421", "Eq.422", "Eq.424", "Eq.426", "Eq.427", "Eq.430"} <= tags
    assert all(c["status"] in ("pass", "info") for c in rep["checks"])


def test_sll_baseline(tmp_path):
    code, out = _run(tmp_path, "sll-baseline")
    assert code == 0
    rep = json.loads(out.read_text())
    names = {c["name"]: c for c in rep["checks"]}
    assert names["metric_identity"]["status"] == "pass"
    assert names["r_constant_one"]["status"] == "pass"


def test_dho_sweep(tmp_path):
    code, out = _run(tmp_path, "dho-sweep", "--n", "200", "--seed", "7")
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["data"]["normalizable_count"] == 0


def test_dho_check_fields(tmp_path):
    code, out = _run(tmp_path, "dho-check", "--gamma", "1", "--k", "1", "--Gamma", "1")
    assert code == 0
    data = json.loads(out.read_text())["data"]
    for key in ("params", "Omega", "omega_plus", "omega_minus", "commutator_residual_max", "conjugation_ok",
                "ratio_residual", "re1", "re2", "normalizable", "hamiltonian_residual_max"):
        assert key in data
    assert data["normalizable"] is False


def test_gll_coherent_and_roi(tmp_path):
    code, out = _run(tmp_path, "gll-coherent", "--z", "0.5", "--zp", "0.3j", "--nmax", "8", "--lmax", "8")
    assert code == 0
    data = json.loads(out.read_text())["data"]
    assert set(data) >= {"params", "z", "zp", "eigen_residuals", "overlap", "series_vs_closed"}
    code, out = _run(tmp_path, "gll-roi", "--nodes", "12", name="roi.json")
    assert code == 0
    roi = json.loads(out.read_text())["data"]["roi"][0]
    assert set(roi) == {"nodes", "scale", "value_re", "value_im", "target_re", "target_im", "abs_err"}


def test_failure_exit_code(tmp_path):
    code, _ = _run(tmp_path, "gll-verify", "--nmax", "3", "--lmax", "3", "--tol", "1e-30")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["gll-verify", "--k1", "0.5"],
    ["gll-verify", "--nmax", "30"],
    ["gll-roi", "--nodes", "4"],
    ["dho-check", "--Gamma", "1", "--delta", "2"],
    ["dho-check", "--gamma", "5"],
    ["gll-verify", "--bogus", "1"],
])
def test_config_errors(tmp_path, argv, capsys):
    code, out = _run(tmp_path, *argv)
    assert code == 3
    assert not out.exists()


def test_unknown_key_in_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"k1": 0.1, "m": 1.0}))
    code, _ = _run(tmp_path, "gll-verify", "--config", str(cfg))
    assert code == 3


def test_flags_override_file():
    cfg = resolve_config("gll-verify", {"k1": 0.1, "nmax": 2}, {"k1": 0.3})
    assert cfg["params"]["k1"] == 0.3 and cfg["params"]["nmax"] == 2


def test_resolve_rejects_bad_types():
    with pytest.raises(ConfigError):
        resolve_config("gll-verify", {"nmax": 2.5}, {})
    with pytest.raises(ConfigError):
        resolve_config("dho-sweep", {"n": "many"}, {})


def test_reports_are_byte_identical(tmp_path):
    _, a = _run(tmp_path, "gll-verify", "--nmax", "3", "--lmax", "3", name="a.json")
    _, b = _run(tmp_path, "gll-verify", "--nmax", "3", "--lmax", "3", name="b.json")
    assert a.read_bytes() == b.read_bytes()


def test_config_round_trip(tmp_path):
    _, a = _run(tmp_path, "dho-check", "--gamma", "0.7", "--Gamma", "1.5-0.5j", name="a.json")
    echo = json.loads(a.read_text())["config"]
    cfg = tmp_path / "echo.json"
    cfg.write_text(json.dumps(echo))
    _, b = _run(tmp_path, "dho-check", "--config", str(cfg), name="b.json")
    assert a.read_bytes() == b.read_bytes()


def test_csv_export(tmp_path):
    out = tmp_path / "r.json"
    assert main(["gll-verify", "--nmax", "1", "--lmax", "1", "--format", "both", "--output", str(out)]) == 0
    text = (tmp_path / "r.csv").read_text().splitlines()
    header = next(line for line in text if line.startswith("gram,"))
    assert header == "gram,0.0,0.1,1.0,1.1"
    row = text[text.index(header) + 1].split(",")
    assert row[0] == "0.0" and row[1].endswith("j") and ("+" in row[1][1:] or "-" in row[1][1:])


def test_no_temp_files_left(tmp_path):
    _run(tmp_path, "dho-sweep", "--n", "5")
    assert sorted(os.listdir(tmp_path)) == ["r.json"]


def test_timing_is_opt_in(tmp_path):
    _, a = _run(tmp_path, "dho-sweep", "--n", "5", name="a.json")
    _, b = _run(tmp_path, "dho-sweep", "--n", "5", "--timing", name="b.json")
    assert "wall_time_ms" not in json.loads(a.read_text())
    assert json.loads(b.read_text())["wall_time_ms"] >= 0


def test_stdout_when_no_output(capsys):
    assert main(["dho-sweep", "--n", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["command"] == "dho-sweep"


def test_float_format():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(1.0) == "1.0"
    assert format_float(1e-30) == "1.0000000000000001e-30"
    assert float(format_float(0.1 + 0.2)) == 0.1 + 0.2
    assert format_complex(1 - 2j) == "1.0-2.0j"
    assert dumps({"a": 1j, "b": [1, 2.5], "c": None}) == '{"a": [0.0, 1.0], "b": [1, 2.5], "c": null}'


def test_report_status_logic():
    rep = Report("x", {})
    rep.add(Check.info("i", "Eq.1"))
    rep.add(Check.bound("ok", "Eq.2", 1e-16, 1e-14))
    assert rep.exit_code == 0
    rep.add(Check.bound("bad", "Eq.3", float("nan"), 1e-14))
    assert rep.exit_code == 2
    assert json.loads(rep.to_json())["checks"][2]["values"]["residual"] == "NaN"
