"""Deterministic serialization: canonical JSON documents and RFC-4180 CSV."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import pytest

from photonlab.reports import (
    ReportIOError,
    csv_document,
    json_document,
    to_jsonable,
    write_csv,
    write_json,
)


@dataclass(frozen=True)
class _Inner:
    value: float
    flag: bool


@dataclass(frozen=True)
class _Outer:
    name: str
    inner: _Inner
    items: tuple


def test_to_jsonable_nested_dataclasses():
    obj = _Outer(name="x", inner=_Inner(value=0.5, flag=True), items=(1, 2.5))
    assert to_jsonable(obj) == {
        "name": "x",
        "inner": {"value": 0.5, "flag": True},
        "items": [1, 2.5],
    }


def test_to_jsonable_numpy_and_nonfinite():
    out = to_jsonable(
        {
            "i": np.int64(3),
            "f": np.float64(0.1),
            "b": np.bool_(True),
            "arr": np.array([1.0, 2.0]),
            "nan": float("nan"),
            "pinf": float("inf"),
            "ninf": float("-inf"),
        }
    )
    assert out["i"] == 3 and isinstance(out["i"], int)
    assert out["f"] == 0.1 and isinstance(out["f"], float)
    assert out["b"] is True
    assert out["arr"] == [1.0, 2.0]
    assert out["nan"] == "NaN"
    assert out["pinf"] == "Infinity"
    assert out["ninf"] == "-Infinity"


def test_bools_do_not_collapse_to_ints():
    assert to_jsonable(True) is True
    assert to_jsonable(np.bool_(False)) is False


def test_json_document_is_sorted_and_stable():
    doc_a = json_document({"b": 1, "a": {"d": 2, "c": 3}})
    doc_b = json_document({"a": {"c": 3, "d": 2}, "b": 1})
    assert doc_a == doc_b
    assert doc_a.endswith("\n")
    assert doc_a.index('"a"') < doc_a.index('"b"')
    # strictly standard JSON: non-finite values never leak through as bare
    # tokens that json.loads would reject
    parsed = json.loads(json_document({"x": math.inf}))
    assert parsed == {"x": "Infinity"}


def test_json_document_round_trips_floats():
    value = 0.1 + 0.2  # 0.30000000000000004
    parsed = json.loads(json_document({"v": value}))
    assert parsed["v"] == value


def test_csv_document_is_rfc4180():
    text = csv_document(("a", "b"), [[1.5, True], [0.1 + 0.2, False]])
    lines = text.split("\r\n")
    assert lines == [
        "a,b",
        "1.5,true",
        "0.30000000000000004,false",
        "",
    ]
    assert "\n" not in text.replace("\r\n", "")


def test_csv_quoting_of_embedded_commas():
    text = csv_document(("name", "note"), [["x", "a,b"]])
    assert text == 'name,note\r\nx,"a,b"\r\n'


def test_write_json_and_csv_round_trip(tmp_path):
    path = tmp_path / "doc.json"
    write_json(path, {"k": [1.0, 2.0]})
    assert json.loads(path.read_text()) == {"k": [1.0, 2.0]}
    csv_path = tmp_path / "table.csv"
    write_csv(csv_path, ("a",), [[1.0]])
    assert csv_path.read_bytes() == b"a\r\n1.0\r\n"


def test_write_errors_are_report_io_errors(tmp_path):
    missing_dir = tmp_path / "nope" / "doc.json"
    with pytest.raises(ReportIOError):
        write_json(missing_dir, {})
    with pytest.raises(ReportIOError):
        write_csv(missing_dir, ("a",), [])
