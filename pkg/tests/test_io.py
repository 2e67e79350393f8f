import json

import numpy as np

from greybdg import io


def test_csv_roundtrip_is_exact(tmp_path):
    rows = [[i, np.float64(np.pi * i / 7), 1 / 3 + i] for i in range(5)]
    io.write_csv(tmp_path / "a.csv", ["i", "x", "y"], rows)
    header, data = io.read_csv(tmp_path / "a.csv")
    assert header == ["i", "x", "y"]
    assert np.array_equal(data, np.array(rows, dtype=float))


def test_json_plain_types():
    doc = io.report_document("demo", [{"measured": np.float32(0.5), "pass": np.bool_(True)}],
                             {"z": 1 + 2j, "a": np.arange(3), "bad": float("nan")})
    out = json.loads(io.dumps(doc))
    assert out["schema_version"] == io.SCHEMA_VERSION
    assert out["meta"] == {"a": [0, 1, 2], "bad": "nan", "z": [1.0, 2.0]}
    assert out["checks"][0]["pass"] is True


def test_json_is_deterministic():
    a = io.dumps({"b": 1, "a": [0.1, 2]})
    b = io.dumps({"a": [0.1, 2], "b": 1})
    assert a == b


def test_schema_file_ships():
    s = io.load_schemas()
    assert s["schema_version"] == io.SCHEMA_VERSION
    assert set(s["csv"]) >= {"soliton", "spectrum", "modes", "field", "timeseries"}
