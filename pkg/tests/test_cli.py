import hashlib
import json
import math
import os

import pytest
import sympy

from common.utility import readConfig
from kleinian import execute
from modules.volume.VolumeBounds import c_p
from modules.words.TracePolynomial import Z, BETA


def errorDoc(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def test_text_output(capsys):
    assert execute(["margulis", "ideal", "--orders", "3,3,3"]) == 0
    assert capsys.readouterr().out == "0.962423650 (ideal_symmetric)\n"


def test_json_output(capsys):
    assert execute(["margulis", "ideal", "--orders", "3,3,3", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema_version"] == 1
    assert doc["command"] == "margulis ideal"
    assert doc["result"]["value"] == pytest.approx(0.96242365, abs=1e-9)
    assert doc["result"]["method"] == "ideal_symmetric"


def test_volume_cp(capsys):
    assert execute(["volume", "cp", "--p", "6"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(math.sqrt(3)*math.pi/6)


def test_negative_values_are_read_as_values(capsys):
    assert execute(["volume", "kill", "--tau", "1.0", "--theta", "-0.3", "--p", "2"]) == 0
    assert capsys.readouterr().out.startswith("m=")


def test_domain_error(capsys):
    assert execute(["volume", "kill", "--tau", "5", "--theta", "0", "--p", "3"]) == 1
    doc = errorDoc(capsys)
    assert doc["schema_version"] == 1
    assert doc["command"] == "volume kill"
    assert doc["error"] == "UnsupportedParameterError"
    assert "c_p" in doc["message"]


def test_holonomy_failure_carries_diagnostics(capsys):
    argv = ["volume", "kill", "--tau", repr(c_p(3)), "--theta", repr(math.pi/3), "--p", "3"]
    assert execute(argv) == 1
    doc = errorDoc(capsys)
    assert doc["error"] == "HolonomyBoundError"
    assert doc["diagnostics"]["p"] == 3
    assert doc["diagnostics"]["value"] > doc["diagnostics"]["bound"]


def test_missing_option(capsys):
    assert execute(["volume", "cp"]) == 1
    doc = errorDoc(capsys)
    assert doc["error"] == "UnsupportedParameterError"
    assert "--p" in doc["message"]


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["volume", "nope"],
    ["volume", "cp", "--p", "six"],
    [],
])
def test_usage_errors(argv, capsys):
    assert execute(argv) == 2


@pytest.mark.parametrize("argv", [
    ["params", "realize", "--gamma", "foo"],
    ["margulis", "ideal", "--orders", "3,x,3"],
    ["slice", "render", "--window", "-1,a,0,1"],
])
def test_unreadable_values_are_domain_errors(argv, capsys):
    assert execute(argv) == 1
    assert errorDoc(capsys)["error"] == "UnsupportedParameterError"


def test_arithmeticity_check(capsys):
    assert execute(["arith", "check", "--poly", "z^4+6z^3+12z^2+9z+1", "--beta", "-3"]) == 0
    out = capsys.readouterr().out
    assert "accepted" in out
    assert "rejected" not in out


def test_schur_json(capsys):
    assert execute(["arith", "schur", "--r", "4", "--json"]) == 0
    result = json.loads(capsys.readouterr().out)["result"]
    assert result["M"] == "4096/3125"
    assert result["M_float"] == pytest.approx(1.31072)


def test_word_polynomial(capsys):
    assert execute(["word", "poly", "--word", "aba^-1"]) == 0
    out = capsys.readouterr().out.strip()
    assert out.startswith("p_w = ")
    expr = sympy.sympify(out[len("p_w = "):].replace("^", "**"), locals={"beta": BETA, "z": Z})
    assert sympy.expand(expr - (Z**2 - BETA*Z)) == 0


def test_tables_checksum(capsys):
    assert execute(["tables", "checksum"]) == 0
    assert capsys.readouterr().out.startswith("all ")


def test_params_save(settings_copy, capsys):
    argv = ["params", "realize", "--gamma", "2", "--beta", "-1", "--save", "--config", str(settings_copy)]
    assert execute(argv) == 0
    assert capsys.readouterr().out.startswith("f = ")
    config = readConfig(None, configFile=str(settings_copy))
    assert config.get("Moebius", "gamma") == "2"
    assert config.get("Moebius", "beta") == "-1"
    assert config.get("Arithmetic", "q") == "2"


def test_slice_render(tmp_path, capsys):
    path = str(tmp_path / "slice.ppm")
    argv = ["slice", "render", "--beta", "0", "--window", "-2,2,-2,2", "--res", "8x6",
            "--out", path, "--threads", "1"]
    assert execute(argv) == 0
    assert os.path.isfile(path)
    assert os.path.isfile(path + ".json")
    assert capsys.readouterr().out.startswith("Wrote")


def test_missing_config_file_is_a_usage_error(tmp_path, capsys):
    assert execute(["volume", "cp", "--p", "6", "--config", str(tmp_path / "none.ini")]) == 2


@pytest.mark.slow
def test_riley_window_is_identical_across_threads(tmp_path, capsys):
    digests = set()
    for threads in (1, 4, 8):
        path = str(tmp_path / "riley-{0}.ppm".format(threads))
        argv = ["slice", "render", "--beta", "0", "--window", "-4,4,-3,3", "--res", "400x300",
                "--out", path, "--threads", str(threads)]
        assert execute(argv) == 0
        with open(path, 'rb') as f:
            digests.add(hashlib.sha256(f.read()).hexdigest())
    assert len(digests) == 1


def test_margulis_triangle_reports_erratum(capsys):
    argv = ["margulis", "triangle", "--orders", "3,3,3", "--angles", "pi/4,pi/4,pi/4", "--json"]
    assert execute(argv) == 0
    result = json.loads(capsys.readouterr().out)["result"]
    assert result["value"] == pytest.approx(0.632974, abs=1e-6)
    assert result["erratum"]["kind"] == "one_vertex_formula"
    assert result["erratum"]["printed_formula"] == pytest.approx(2.21191, abs=1e-5)
