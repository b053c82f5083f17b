import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalab.errors import DomainError, FormatError, MonotonicityError, UncertifiedRangeError
from zetalab.sizdc import (
    FunctionSpec,
    SizdcParams,
    check_sizdc,
    corollary_params,
    eval_spec,
    lindelof_case,
    parse_spec,
    rh_case,
    sigma_grid,
    sizdc_ratio,
    sizdc_rhs,
)
from zetalab.zeros import NontrivialZero, inject_synthetic


def test_eval_spec_examples():
    assert eval_spec(FunctionSpec("const", 0.5), 1e5) == 0.5
    assert eval_spec(FunctionSpec("recip_loglog"), math.exp(math.e)) == pytest.approx(1.0, abs=1e-15)
    assert eval_spec(FunctionSpec("power_log", 0.1), math.exp(10)) == pytest.approx(10**0.1, rel=1e-15)
    assert eval_spec(FunctionSpec("one"), -50.0) == 1.0  # even extension
    with pytest.raises(DomainError):
        eval_spec(FunctionSpec("one"), 10.0)


def test_parse():
    p = SizdcParams.parse("l=recip_loglog;v=one;phi=power_log:0.1;psi=scaled_loglog:0.1")
    assert p == corollary_params(0.1)
    assert SizdcParams.parse(str(p)) == p
    assert parse_spec("const:4") == FunctionSpec("const", 4.0)
    for bad in ("l=one;v=one;phi=const:4", "l=one;v=one;phi=const:x;psi=one", "nonsense", "l=foo;v=one;phi=one;psi=one"):
        with pytest.raises(FormatError):
            SizdcParams.parse(bad)


def test_validate_hypotheses():
    assert SizdcParams.parse("l=one;v=one;phi=const:4;psi=const:10").validate() == []
    bad = SizdcParams.parse("l=power_log:0.5;v=one;phi=const:2;psi=const:10").validate()
    assert any("l" in m for m in bad) and any("phi" in m.lower() for m in bad)


def test_corollary_params_on_computed(big_catalog):
    rep = check_sizdc(big_catalog, corollary_params(0.1), (100.0, 1e4), (60, None))
    assert rep.satisfied
    assert all(p.lhs_count == 0 for p in rep.grid)
    assert rep.max_ratio == 0.0


def test_rh_case(big_catalog):
    rep = check_sizdc(big_catalog, rh_case(), (100.0, 2000.0), (30, None))
    assert rep.satisfied and rep.max_ratio == 0.0
    syn = inject_synthetic(big_catalog, [NontrivialZero(500.3, 0.75, 1, "synthetic")])
    rep = check_sizdc(syn, rh_case(), (100.0, 2000.0), (1901, None))
    assert not rep.satisfied
    bad = rep.first_violation()
    assert bad.T <= 500.3 <= bad.T + 1 and bad.sigma <= 0.75
    assert rep.max_ratio == math.inf


def test_synthetic_flip_hand_oracle(big_catalog):
    # const params: l = 1, v = 1, Phi = 4, Psi = 10; the sigma grid starts at
    # 0.6 and its next step 0.6 + 1/log 4 passes 1, so one cell per T.
    params = SizdcParams.parse("l=one;v=one;phi=const:4;psi=const:10")
    syn = inject_synthetic(big_catalog, [NontrivialZero(500.3, 0.75, 1, "synthetic")])
    rep = check_sizdc(syn, params, (499.0, 502.0), (13, None))
    flipped = set()
    for p in rep.grid:
        contains = p.T <= 500.3 <= p.T + 1.0
        expected_lhs = 1 if (contains and p.sigma <= 0.75) else 0
        assert p.lhs_count == expected_lhs
        rhs = math.log(p.T) * 4.0 ** (0.5 - p.sigma)
        assert p.rhs_bound == pytest.approx(rhs, rel=1e-14)
        assert p.satisfied == (expected_lhs <= rhs)
        if expected_lhs:
            flipped.add(p.T)
    assert len(rep.grid) == 13
    # T = 499.5, 499.75, 500, 500.25 contain 500.3
    assert flipped == {499.5, 499.75, 500.0, 500.25}
    # with rhs = log T * 4^{-0.1} ~ 5.4 the condition still holds
    assert rep.satisfied


def test_sigma_grid():
    p = SizdcParams.parse("l=one;v=one;phi=const:4;psi=const:10")
    g, high = sigma_grid(p, 100.0)
    assert not high
    assert g[0] == pytest.approx(0.6)
    assert g == [pytest.approx(0.6)]
    g100, _ = sigma_grid(SizdcParams.parse("l=one;v=one;phi=const:100;psi=const:10"), 100.0)
    step = 1 / math.log(100)
    assert g100 == [pytest.approx(0.6 + j * step) for j in range(int((1 - 0.6) / step) + 1)]
    assert len(sigma_grid(p, 100.0, step=0.1)[0]) == 5
    g2, high2 = sigma_grid(SizdcParams.parse("l=one;v=one;phi=const:4;psi=const:1.5"), 100.0)
    assert high2 and len(g2) == 1


def test_ratio_convention():
    assert sizdc_ratio(0, 0.0) == 0.0
    assert sizdc_ratio(1, 0.0) == math.inf
    assert sizdc_ratio(2, 4.0) == 0.5


def test_check_requires_coverage(catalog100):
    with pytest.raises(UncertifiedRangeError):
        check_sizdc(catalog100, rh_case(), (50.0, 100.0), (5, None))


def test_lindelof():
    p = lindelof_case(FunctionSpec("recip_loglog"))
    assert p.l == FunctionSpec("one") and p.notes == ()
    assert p.validate() == []
    c = lindelof_case(FunctionSpec("const", 0.1))
    assert c.notes
    with pytest.raises(MonotonicityError):
        lindelof_case(FunctionSpec("power_log", 0.1))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(0.0, 5.0), st.floats(100.0, 5000.0), st.floats(0.51, 0.95))
def test_monotone_in_v(big_catalog, v1, dv, gamma, beta):
    syn = inject_synthetic(big_catalog, [NontrivialZero(round(gamma, 6) + 1e-7, round(beta, 6), 1, "synthetic")])
    lo = SizdcParams.parse(f"l=one;v=const:{v1!r};phi=const:4;psi=const:10")
    hi = SizdcParams.parse(f"l=one;v=const:{v1 + dv!r};phi=const:4;psi=const:10")
    a = check_sizdc(syn, lo, (gamma - 2, gamma + 1), (7, None))
    b = check_sizdc(syn, hi, (gamma - 2, gamma + 1), (7, None))
    for pa, pb in zip(a.grid, b.grid):
        assert pb.satisfied or not pa.satisfied
        assert pb.rhs_bound >= pa.rhs_bound
    assert sizdc_rhs(hi, 200.0, 0.7) >= sizdc_rhs(lo, 200.0, 0.7)
