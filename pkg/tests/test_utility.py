import json
import math
import shutil

import numpy as np
import pytest

from common.errors import UnsupportedParameterError, WordSyntaxError
from common.utility import (parseComplex, parseFloatList, formatComplex, fmt12, toJsonable, dumpJson, readConfig,
                            writeConfig, getSetting, threadCount, listTables, readTable, verifyChecksums, DATA_DIR)


@pytest.mark.parametrize("text, expected", [
    ("-1.5+0.6066i", -1.5 + 0.6066j),
    ("1+1i", 1 + 1j),
    ("i", 1j),
    ("-i", -1j),
    ("2 - 3j", 2 - 3j),
    ("-3", -3 + 0j),
    (4, 4 + 0j),
])
def test_parse_complex(text, expected):
    assert parseComplex(text) == expected


def test_parse_errors():
    with pytest.raises(UnsupportedParameterError):
        parseComplex("1+")
    with pytest.raises(UnsupportedParameterError):
        parseFloatList("1,two")
    assert parseFloatList("-4,4,-3,3") == [-4, 4, -3, 3]


def test_format_complex():
    assert formatComplex(1 - 2j) == "1-2i"
    assert parseComplex(formatComplex(-1.5 + 0.25j)) == -1.5 + 0.25j


def test_fmt12():
    assert fmt12(1/3) == 0.333333333333
    assert fmt12(0.0) == 0.0
    assert math.isinf(fmt12(math.inf))


def test_to_jsonable():
    obj = {"z": 1 + 2j, "arr": np.array([1.0, 2.0]), "n": np.int64(3), "ok": np.bool_(True),
           "inf": math.inf, "nan": math.nan, 5: (1, 2)}
    out = toJsonable(obj)
    assert out == {"z": {"re": 1.0, "im": 2.0}, "arr": [1.0, 2.0], "n": 3, "ok": True,
                   "inf": "inf", "nan": None, "5": [1, 2]}
    json.dumps(out)


def test_errors_serialise():
    doc = toJsonable(WordSyntaxError("Unexpected character", position=3))
    assert doc == {"error": "WordSyntaxError", "message": "Unexpected character (at position 3)", "position": 3}


def test_dump_json():
    doc = json.loads(dumpJson({"x": 0.1 + 0.2}, "volume cp"))
    assert doc == {"schema_version": 1, "command": "volume cp", "result": {"x": 0.3}}


def test_settings(settings):
    assert getSetting(settings, 'Arithmetic', 'q', int) == 2
    assert getSetting(settings, 'Arithmetic', 'dedupe', bool) is True
    assert getSetting(settings, 'Slice', 'window', str) == "-4,4,-3,3"
    assert getSetting(settings, 'Volume', 'beta_prime', str) == "-4"
    assert getSetting(settings, 'Volume', 'missing', int, 7) == 7
    assert getSetting(None, 'Volume', 'witness_samples', int, 5) == 5


def test_write_config(settings_copy):
    writeConfig(None, [("Moebius", "gamma", "2-1i"), ("Extra", "flag", True)], cfgFile=str(settings_copy))
    config = readConfig(None, configFile=str(settings_copy))
    assert config.get("Moebius", "gamma") == "2-1i"
    assert getSetting(config, "Extra", "flag", bool) is True
    assert config.get("Exclusion", "depth") == "2"


def test_missing_config(tmp_path):
    with pytest.raises(SystemExit):
        readConfig(str(tmp_path))


def test_thread_count(monkeypatch):
    monkeypatch.setenv("KLEINIAN_THREADS", "3")
    assert threadCount() == 3
    monkeypatch.setenv("KLEINIAN_THREADS", "0")
    assert threadCount() == 1
    monkeypatch.setenv("KLEINIAN_THREADS", "many")
    assert threadCount() >= 1


def test_tables(table):
    names = listTables()
    assert "plane23" in names
    assert "margulis_triangles" in names
    df = table("plane23")
    assert len(df) > 0
    with pytest.raises(FileNotFoundError):
        readTable("nope")


def test_checksums():
    report = verifyChecksums()
    assert set(report) == set(listTables())
    assert all(v["ok"] for v in report.values())


def test_checksum_mismatch(tmp_path):
    data = tmp_path / "tables"
    shutil.copytree(DATA_DIR, str(data))
    with open(str(data / "pq6.csv"), 'a') as f:
        f.write("\n")
    report = verifyChecksums(str(data))
    assert not report["pq6"]["ok"]
    assert report["plane23"]["ok"]
