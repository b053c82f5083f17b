import json
from importlib import resources

import pytest

from zetalab.baselines import BASELINE_SLACK, load_baselines, measure, within_baseline


def test_baseline_file_complete():
    data = json.loads(resources.files("zetalab").joinpath("baselines.json").read_text())
    keys = set(data["baselines"])
    assert {"theorem1_upper", "theorem1_lower", "theorem2_upper", "theorem2_lower", "corollary",
            "littlewood_ratio", "s_ratio"} <= keys  # fmt: skip
    assert all(k.startswith("bound_") for k in keys - {
        "theorem1_upper", "theorem1_lower", "theorem2_upper", "theorem2_lower", "corollary", "littlewood_ratio", "s_ratio"})


def test_within_baseline():
    b = {"k": 1.0}
    assert within_baseline(1.0 * BASELINE_SLACK, "k", b)
    assert not within_baseline(1.0 * BASELINE_SLACK * 1.001, "k", b)
    assert not within_baseline(float("inf"), "k", b)


def test_no_regression(big_catalog):
    frozen = load_baselines()
    now = measure(big_catalog)
    assert set(now) == set(frozen)
    for key, value in now.items():
        assert value <= frozen[key] * BASELINE_SLACK, (key, value, frozen[key])
        # the stored numbers are the measured ones, not loosened copies
        assert value == pytest.approx(frozen[key], rel=1e-6, abs=1e-12)
