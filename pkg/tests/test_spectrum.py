import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from svc_tunneling._fmt import dumps, fmt_float
from svc_tunneling.analysis import sweep
from svc_tunneling.geometry import SvcParams
from svc_tunneling.spectrum import Spectrum, read_csv


def test_csv_round_trip_exact(tmp_path):
    s = sweep(SvcParams(2.5, 5, 20.0, 15.0), 0.05, 15, 777)
    text = s.to_csv(tmp_path / "s.csv")
    assert text.startswith("k,T,R\n") and text.endswith("\n") and not text.endswith("\n\n")
    assert "\r" not in text
    back = read_csv(tmp_path / "s.csv")
    np.testing.assert_array_equal(back.k, s.k)
    np.testing.assert_array_equal(back.t, s.t)
    np.testing.assert_array_equal(back.r, s.r)
    assert read_csv(text).k.size == 777


def test_csv_rejects_bad_header():
    with pytest.raises(ValueError):
        read_csv("k,T,X\n1,2,3\n")


def test_spectrum_validation():
    with pytest.raises(ValueError):
        Spectrum([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        Spectrum([1.0], [1.0], method="other")
    s = Spectrum([1.0, 2.0], [0.25, 1.0])
    np.testing.assert_array_equal(s.r, [0.75, 0.0])


@settings(max_examples=200)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_format_round_trips(x):
    assert float(fmt_float(x)) == x


def test_json_writer():
    doc = {"b": 1, "a": [0.1, 2.0, float("nan")], "c": {"x": None, "y": True}, "d": []}
    text = dumps(doc)
    assert text.index('"b"') < text.index('"a"')
    assert '[0.10000000000000001, 2, null]' in text
    assert __import__("json").loads(text)["c"] == {"x": None, "y": True}
    assert dumps(np.float64(0.5)) == "0.5"
    with pytest.raises(TypeError):
        dumps(object())
