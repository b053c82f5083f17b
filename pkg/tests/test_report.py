import json
import math
from dataclasses import dataclass

import numpy as np

from zetalab.report import dumps_csv, dumps_json, fmt_float, plain


@dataclass(frozen=True)
class _R:
    b: float
    a: complex
    c: tuple


def test_fmt_float():
    assert fmt_float(1 / 3) == "0.333333333333"
    assert fmt_float(math.inf) == "inf"
    assert fmt_float(-math.inf) == "-inf"


def test_json_field_order_and_types():
    r = _R(np.float64(2.0), 1 + 2j, (np.int64(3), math.inf))
    text = dumps_json(r)
    assert list(json.loads(text)) == ["b", "a", "c"]
    assert json.loads(text)["a"] == {"re": 1.0, "im": 2.0}
    assert json.loads(text)["c"] == [3, "inf"]
    assert text.endswith("}\n")
    assert plain(np.bool_(True)) is True


def test_csv():
    out = dumps_csv(("x", "y"), [(1.0 / 7, 2), (np.float64(math.pi), 0)])
    assert out == "x,y\n0.142857142857,2\n3.14159265359,0\n"
