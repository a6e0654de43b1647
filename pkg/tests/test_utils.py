import json
import math

import numpy as np
import pandas as pd
import pytest

from utils import PerformanceMonitor, file_utils, format_duration, format_number, setup_logging


def test_format_number():
    assert format_number(-1.0 / 96.0) == "-0.0104166666667"
    assert format_number(2.0) == "2"


@pytest.mark.parametrize(
    "seconds, expected",
    [(0.035, "35ms"), (4.25, "4.2초"), (150.0, "2분 30.0초"), (7260.0, "2시간 1분")],
)
def test_format_duration(seconds, expected):
    assert format_duration(seconds) == expected


def test_setup_logging_rejects_unknown_level():
    with pytest.raises(ValueError):
        setup_logging("LOUD")


def test_to_jsonable():
    data = file_utils.to_jsonable(
        {"inf": math.inf, "nan": math.nan, "arr": np.array([1.0, 2.0]), "flag": np.bool_(True), 3: np.int64(4)}
    )
    assert data == {"inf": "inf", "nan": None, "arr": [1.0, 2.0], "flag": True, "3": 4}


def test_writers(tmp_path):
    json_path = file_utils.write_json({"b": 1, "a": -math.inf}, tmp_path / "deep" / "r.json")
    text = json_path.read_text(encoding="utf-8")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text)["a"] == "-inf"

    csv_path = file_utils.write_csv(pd.DataFrame({"x": [1.0 / 3.0]}), tmp_path / "t.csv")
    assert csv_path.read_text(encoding="utf-8").splitlines() == ["x", "0.333333333333"]


def test_output_paths(tmp_path):
    paths = file_utils.output_paths(tmp_path, "b2", (".json", ".trace.csv"))
    assert [p.name for p in paths] == ["b2.json", "b2.trace.csv"]


def test_performance_monitor():
    monitor = PerformanceMonitor()
    with monitor.measure_time("stage"):
        sum(range(1000))
    summary = monitor.get_performance_summary()
    assert summary["operations"]["stage"]["execution_time"] >= 0.0
    assert "python_version" in summary["system_info"]
    monitor.reset_metrics()
    assert monitor.metrics == {}
