import io
import json
import math

import pytest

from gravnu import GravitySource, OscillationParams, PropagationScenario, evaluate
from gravnu.cli import EXIT_DOMAIN, EXIT_OK, EXIT_SELFTEST_FAILED, EXIT_USAGE, main
from gravnu.oscillation import phase_flat, transition_probability


def run(*argv, environ=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err, environ={} if environ is None else environ)
    return code, out.getvalue(), err.getvalue()


def data_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:]]


def config_echo(text):
    for line in text.splitlines():
        if line.startswith("# config: "):
            return json.loads(line[len("# config: "):])
    raise AssertionError("no config echo")


SINGLE_K3 = ["k3", "--direction", "outward", "--gm", "3e7", "--r-source", "1e8", "--baseline", "3e8",
            "--energy", "300", "--alpha", "mu", "--units", "paper_figure"]


def test_single_k3_value():
    code, out, err = run(*SINGLE_K3)
    assert code == EXIT_OK and err == ""
    (row,) = data_rows(out)
    assert set(row) == {"k3", "c_0_1", "c_1_2", "c_0_2", "violation"}
    s = PropagationScenario(OscillationParams(), GravitySource(3e7), "outward", 1e8, 3e8, 300.0)
    assert float(row["k3"]) == evaluate(s).k3
    assert row["violation"] in ("true", "false")


def test_single_k3_json():
    code, out, _ = run(*SINGLE_K3, "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["config"]["gm"] == 3e7
    assert set(data["result"]) == {"k3", "c_0_1", "c_1_2", "c_0_2", "violation"}


def test_gm_zero_equals_flat():
    args = ["k3", "--energy", "250", "--direction", "inward", "--r-source", "6.5e8"]
    _, curved_zero, _ = run(*args, "--gm", "0")
    s = PropagationScenario(OscillationParams(), GravitySource(0.0), "inward", 6.5e8, 3e8, 250.0)
    assert float(data_rows(curved_zero)[0]["k3"]) == evaluate(s).k3


def test_coherence_single_values():
    code, out, _ = run("coherence", "--baseline", "0")
    assert code == EXIT_OK
    assert float(data_rows(out)[0]["coherence"]) == 0.0
    _, out, _ = run("coherence", "--gm", "0", "--baseline", "2.7e8")
    p = transition_probability(0.59, phase_flat(OscillationParams(), 2.7e8, 300.0))
    assert float(data_rows(out)[0]["coherence"]) == pytest.approx(2 * math.sqrt(p * (1 - p)), abs=1e-12)


def test_sweep_preset_to_file(tmp_path):
    path = tmp_path / "fig1a.csv"
    code, out, _ = run("k3", "--sweep", "--preset", "fig1a", "--out", str(path))
    assert code == EXIT_OK and out == ""
    rows = data_rows(path.read_text())
    assert len(rows) == 2000
    assert config_echo(path.read_text())["preset"] == "fig1a"


def test_coherence_preset_max_is_one(tmp_path):
    path = tmp_path / "fig2a.csv"
    assert run("coherence", "--preset", "fig2a", "--out", str(path))[0] == EXIT_OK
    text = path.read_text()
    max_curved = [ln for ln in text.splitlines() if ln.startswith("# max_curved: ")][0]
    assert float(max_curved.split(": ")[1]) == pytest.approx(1.0, abs=1e-3)


def test_sweep_json_has_config():
    code, out, _ = run("coherence", "--preset", "fig2b", "--steps", "20", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["config"]["steps"] == 20
    assert len(data["rows"]) == 20


def test_precedence_flag_over_file_over_preset(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"steps": 30, "energy-max": 400.0, "seed": 5}))
    code, out, _ = run("k3", "--preset", "fig1a", "--config", str(cfg), "--steps", "12", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["config"]["steps"] == 12  # flag beats file
    assert data["config"]["energy_max"] == 400.0  # file beats preset
    assert data["config"]["energy_min"] == 150.0  # preset beats defaults
    assert "seed" not in data["config"]  # other commands' keys are ignored


def test_config_from_environment(tmp_path):
    cfg = tmp_path / "env.json"
    cfg.write_text(json.dumps({"energy": 180.0}))
    _, out, _ = run("k3", environ={"GRAVNU_CONFIG": str(cfg)})
    assert config_echo(out)["energy"] == 180.0


def test_echoed_config_reproduces_output(tmp_path):
    _, first, _ = run("coherence", "--preset", "fig2b", "--steps", "40", "--gm", "2e7")
    cfg = tmp_path / "echo.json"
    cfg.write_text(json.dumps(config_echo(first)))
    _, second, _ = run("coherence", "--config", str(cfg))
    assert first == second


@pytest.mark.parametrize(
    "content",
    ['{"colour": 1}', "[1, 2]", "not json", '{"gm": "heavy"}'],
)
def test_bad_config_is_usage_error(tmp_path, content):
    cfg = tmp_path / "bad.json"
    cfg.write_text(content)
    code, out, err = run("k3", "--config", str(cfg))
    assert code == EXIT_USAGE
    assert out == "" and "usage error" in err


def test_missing_config_file():
    assert run("k3", "--config", "/nonexistent/gravnu.json")[0] == EXIT_USAGE


def test_usage_errors():
    assert run()[0] == EXIT_USAGE
    assert run("k3", "--direction", "sideways")[0] == EXIT_USAGE
    assert run("k3", "--preset", "fig2a")[0] == EXIT_USAGE
    assert run("frobnicate")[0] == EXIT_USAGE


def test_domain_error_names_precondition():
    code, out, err = run("k3", "--direction", "inward", "--r-source", "1e8", "--baseline", "3e8")
    assert code == EXIT_DOMAIN
    assert out == ""
    assert "inward baseline exceeds source radius" in err


def test_negative_gm_is_domain_error():
    code, _, err = run("k3", "--gm", "-1")
    assert code == EXIT_DOMAIN
    assert "error" in err


def test_invalid_sweep_grid():
    code, _, err = run("coherence", "--sweep", "--baseline-min", "4e8", "--baseline-max", "2e8")
    assert code == EXIT_DOMAIN and "grid" in err


def test_selftest_passes_and_reproduces():
    code, first, _ = run("selftest", "--samples", "40", "--seed", "7")
    assert code == EXIT_OK
    assert "FAIL" not in first
    for name in ("oracle-equivalence", "unitarity", "gm-to-zero", "round-trip", "coherence-shortcut"):
        assert name in first
    assert run("selftest", "--samples", "40", "--seed", "7")[1] == first
    assert run("selftest", "--samples", "40", "--seed", "8")[1] != first


def test_selftest_rejects_negative_gm():
    code, out, _ = run("selftest", "--gm", "-1")
    assert code == EXIT_SELFTEST_FAILED
    assert "config" in out and "FAIL" in out
