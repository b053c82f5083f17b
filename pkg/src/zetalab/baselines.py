"""Frozen regression baselines standing in for unstated implied constants.

Each baseline is the maximum ratio |computed| / bound over a fixed grid,
measured once against the catalog on [14, BASELINE_T1] and stored in
baselines.json. Later runs may exceed a baseline by at most BASELINE_SLACK.
"""

from __future__ import annotations

import json
import math
from importlib import resources

from .sizdc import DEFAULT_PARAMS, SizdcParams
from .verify import (
    LEMMA_IDS,
    check_proof_bound,
    littlewood_scan,
    repel,
    verify_corollary,
    verify_theorem1,
    verify_theorem2,
)
from .zeros import ZeroCatalog

BASELINE_SLACK = 1.05
BASELINE_T1 = 10100.0

_T = (100.5, 200.5, 400.5, 700.5, 1000.5, 1500.5, 2500.5, 4000.5, 6000.5, 9000.5)
_X = (5.0, 10.0, 20.0, 50.0, 100.0)

# (t, x, sigma) per point; theorem 2 grids carry a fixed a
GRIDS: dict[str, list[tuple[float, float, float]]] = {
    "theorem1_upper": [(t, _X[i % 5], 2.0) for i, t in enumerate(_T)],
    "theorem1_lower": [(t, _X[i % 5], (0.5, 0.55, 0.6)[i % 3]) for i, t in enumerate(_T)],
    "theorem2_upper": [(t, _X[i % 5], 2.0) for i, t in enumerate(_T)],
    "theorem2_lower": [(t, _X[i % 5], (0.5, 0.6, 0.7)[i % 3]) for i, t in enumerate(_T)],
}
THEOREM2_A = 0.5
COROLLARY_T = (1000.5, 2000.5, 5000.5, 9000.5)
COROLLARY_X = 3.0
COROLLARY_EPS0 = 0.1
SCAN = (100.0, 1e4, 200)
BOUND_GRID = (200.5, 1000.5, 5000.5)
BOUND_X = 10.0
BOUND_A = 0.3
BOUND_SIGMA = {"zero_real": 0.7}
BOUND_SIGMA_DEFAULT = 1.5


def key_for(what: str, case: str | None = None) -> str:
    return f"{what}_{case}" if case else what


def load_baselines() -> dict[str, float]:
    text = resources.files("zetalab").joinpath("baselines.json").read_text(encoding="utf-8")
    return {k: float(v) for k, v in json.loads(text)["baselines"].items()}


def within_baseline(ratio: float, key: str, baselines: dict[str, float] | None = None) -> bool:
    b = (baselines if baselines is not None else load_baselines()).get(key)
    if b is None or not math.isfinite(ratio):
        return b is None
    return ratio <= b * BASELINE_SLACK


def measure(catalog: ZeroCatalog, keys: tuple[str, ...] | None = None) -> dict[str, float]:
    """Max ratio per baseline key on its fixed grid."""
    params = SizdcParams.parse(DEFAULT_PARAMS)
    out: dict[str, float] = {}
    wanted = set(keys) if keys else None

    def want(k: str) -> bool:
        return wanted is None or k in wanted

    for key, grid in GRIDS.items():
        if not want(key):
            continue
        ratios = []
        for t, x, sigma in grid:
            t, _ = repel(t, catalog)
            if key.startswith("theorem1"):
                r = verify_theorem1(t, x, sigma, catalog, params)
            else:
                r = verify_theorem2(t, x, THEOREM2_A, sigma, catalog, params)
            assert r.case == key.split("_")[1], (key, t, x, sigma, r.case)
            ratios.append(r.ratio)
        out[key] = max(ratios)
    if want("corollary"):
        out["corollary"] = max(
            verify_corollary(t, COROLLARY_EPS0, catalog, x=COROLLARY_X).report.ratio for t in COROLLARY_T
        )
    if want("littlewood_ratio") or want("s_ratio"):
        sc = littlewood_scan(SCAN[0], SCAN[1], SCAN[2], COROLLARY_EPS0, catalog)
        out["littlewood_ratio"] = sc.max_littlewood_ratio
        out["s_ratio"] = sc.max_s_ratio
    for lid in LEMMA_IDS:
        key = f"bound_{lid}"
        if not want(key):
            continue
        sigma = BOUND_SIGMA.get(lid, BOUND_SIGMA_DEFAULT)
        ratios = []
        for t in BOUND_GRID:
            t, _ = repel(t, catalog)
            ratios.append(check_proof_bound(lid, t, BOUND_X, BOUND_A, sigma, catalog, params).ratio)
        out[key] = max(ratios)
    return out
