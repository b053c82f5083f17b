import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalab.errors import DomainError, NearZeroError, UncertifiedRangeError
from zetalab.explicit import von_mangoldt
from zetalab.zeros import n_of_t
from zetalab.zeta import (
    EvalPoint,
    gram_point,
    log_zeta,
    riemann_siegel_Z,
    s_of_t,
    theta_rs,
    zeta,
    zeta_log_deriv,
)

# mpmath at 30 digits, frozen
MP_ZETA = {
    complex(0.8, 100): complex(1.9098374037573894, -0.058401382077235847),
    complex(0.5, 20): complex(0.42991386043784337, -1.0642914430805891),
    complex(2, 50): complex(0.77395093315669076, 0.1259447158263342),
    complex(0.4, 9000): complex(1.1934120076692263, 0.61229649161303345),
    complex(1.5, 14): complex(0.54522901328793937, 0.0024424587077306209),
}
MP_Z = {20.0: 1.1478424121851973, 100.0: 2.6926970566644635, 5000.5: 0.58542531924643895,
        20000.5: -3.1479473825734679, 500000.5: 8.0388673625790475}  # fmt: skip
MP_LOGDERIV_08_50 = complex(1.2357051760832333, -1.798614316890258)
MP_THETA_100 = 87.97216523178722
GAMMA_1 = 14.1347251417347


def test_zeta_two():
    r = zeta(2 + 0j)
    assert abs(r.value - math.pi**2 / 6) < 1e-10
    assert r.abs_error_bound < 1e-10


@pytest.mark.parametrize("s", list(MP_ZETA))
def test_zeta_against_mpmath(s):
    r = zeta(s)
    ref = MP_ZETA[s]
    assert abs(r.value - ref) < 1e-10 * max(1.0, abs(ref))
    assert r.abs_error_bound <= 1e-10 * max(1.0, abs(ref))


def test_zeta_reflection():
    a, b = zeta(complex(0.8, 100)).value, zeta(complex(0.8, -100)).value
    assert abs(a - b.conjugate()) < 1e-12


def test_zeta_at_first_zero():
    assert abs(zeta(complex(0.5, 14.134725141)).value) < 1e-6


def test_zeta_accepts_eval_point():
    assert zeta(EvalPoint(0.8, 100.0)).value == zeta(complex(0.8, 100)).value


@pytest.mark.parametrize("s", [complex(0.3, 20), complex(3.5, 20), complex(0.5, 2e6), 1 + 0j])
def test_zeta_domain(s):
    with pytest.raises(DomainError):
        zeta(s)


def test_eval_point_domain():
    with pytest.raises(DomainError):
        EvalPoint(0.8, 10.0)
    with pytest.raises(DomainError):
        EvalPoint(0.8, 100.0, -1.0)


@pytest.mark.parametrize("t", list(MP_Z))
def test_Z_against_mpmath(t):
    r = riemann_siegel_Z(t)
    assert abs(r.value - MP_Z[t]) < max(1e-8, 2 * r.abs_error_bound)
    assert r.method == ("euler_maclaurin" if t <= 1e4 else "riemann_siegel")


def test_Z_first_zero_and_sign():
    assert abs(riemann_siegel_Z(14.134725141).value) < 1e-6
    # cross-method: |zeta| with the theta phase
    z = zeta(complex(0.5, 20)).value * cmath.exp(1j * theta_rs(20.0))
    assert abs(z.imag) < 1e-9
    assert np.sign(z.real) == np.sign(riemann_siegel_Z(20.0).value)


def test_Z_modulus_matches_zeta():
    assert abs(abs(riemann_siegel_Z(100.0).value) - abs(zeta(complex(0.5, 100)).value)) < 1e-8
    for t in np.linspace(14.5, 1000, 200):
        assert abs(abs(riemann_siegel_Z(t).value) - abs(zeta(complex(0.5, t)).value)) < 1e-8


def test_Z_rs_agrees_with_em_near_switch():
    # both routes evaluated at the same height above the switch
    t = 10000.5
    z_rs = riemann_siegel_Z(t).value
    z_em = (zeta(complex(0.5000000001, t)).value * cmath.exp(1j * theta_rs(t))).real
    assert abs(z_rs - z_em) < 1e-6


def test_Z_domain():
    with pytest.raises(DomainError):
        riemann_siegel_Z(13.9)


def test_theta_and_gram():
    assert abs(theta_rs(100.0) - MP_THETA_100) < 1e-10
    g = gram_point(100)
    assert abs(theta_rs(g) - 100 * math.pi) < 1e-9
    assert theta_rs(-100.0) == -theta_rs(100.0)


def test_log_deriv_at_two():
    # -sum Lambda(n)/n^2; tail past 2e4 is below sum log n / n^2 < 1e-3 ... use a long sum
    N = 200_000
    from zetalab.explicit import von_mangoldt_table

    tab = von_mangoldt_table(10**6)
    n = np.arange(1, N + 1)
    direct = -float(np.sum(tab.values[1 : N + 1] / n.astype(float) ** 2))
    tail = (math.log(N) + 1) / N  # integral bound for sum_{n>N} log n / n^2
    r = zeta_log_deriv(2 + 0j)
    assert abs(r.value - direct) < tail + 1e-12
    assert abs(r.value - (-0.5699609930945)) < 1e-12  # zeta'(2)/zeta(2) from mpmath


def test_log_deriv_against_mpmath_and_finite_difference(big_catalog):
    s = complex(0.8, 50)
    r = zeta_log_deriv(s, big_catalog)
    assert abs(r.value - MP_LOGDERIV_08_50) < 1e-9
    h = 1e-5
    fd = (log_zeta(s + h, big_catalog).value - log_zeta(s - h, big_catalog).value) / (2 * h)
    assert abs(fd - r.value) < 1e-5
    assert abs(zeta_log_deriv(s.conjugate(), big_catalog).value - r.value.conjugate()) < 1e-12


def test_log_zeta_at_two_is_principal(big_catalog):
    for t in (20.0, 333.3, 5000.0):
        assert abs(log_zeta(complex(2, t), big_catalog).value - cmath.log(zeta(complex(2, t)).value)) < 1e-13


def test_log_zeta_real_part_and_S(big_catalog):
    lz = log_zeta(complex(0.5, 100), big_catalog).value
    assert abs(lz.real - 0.99054331461806223) < 1e-8
    s100 = n_of_t(big_catalog, 100.0) - theta_rs(100.0) / math.pi - 1
    assert abs(lz.imag / math.pi - s100) < 1e-8
    assert round(theta_rs(100.0) / math.pi + 1 + s_of_t(100.0, big_catalog)) == 29


def test_log_zeta_against_mpmath(big_catalog):
    ref = complex(-0.10697346326098275, 0.2505403835058389)
    assert abs(log_zeta(complex(0.8, 1000), big_catalog).value - ref) < 1e-9


def test_log_zeta_branch_is_quadrature_of_log_deriv(big_catalog):
    from scipy.integrate import quad

    t, sigma = 300.3, 0.6
    f = lambda u, part: getattr(zeta_log_deriv(complex(u, t)).value, part)  # noqa: E731
    re = quad(f, 2.0, sigma, args=("real",), limit=200)[0]
    im = quad(f, 2.0, sigma, args=("imag",), limit=200)[0]
    diff = log_zeta(complex(sigma, t), big_catalog).value - log_zeta(complex(2, t), big_catalog).value
    assert abs(diff - complex(re, im)) < 1e-6


def test_exp_log_zeta(big_catalog):
    for s in (complex(0.5, 100.7), complex(0.7, 777.7), complex(1.3, 2222.2)):
        z = zeta(s).value
        assert abs(cmath.exp(log_zeta(s, big_catalog).value) - z) < 1e-8 * abs(z)


def test_guard(big_catalog):
    with pytest.raises(NearZeroError):
        log_zeta(complex(0.5, GAMMA_1 + 1e-4), big_catalog)
    with pytest.raises(NearZeroError):
        zeta_log_deriv(EvalPoint(0.5, 100.0, 1e-5))
    # exactly at the guard passes
    g = float(big_catalog.gammas[0])
    log_zeta(complex(0.5, g + 1e-3), big_catalog)


def test_guard_requires_coverage(catalog100):
    with pytest.raises(UncertifiedRangeError):
        s_of_t(100.0, catalog100)


def test_S_small_near_start(big_catalog):
    for t in np.linspace(14.2, 20, 25):
        if abs(t - GAMMA_1) > 1e-3:
            assert abs(s_of_t(t, big_catalog)) < 1


def test_S_jump_at_first_zero(big_catalog):
    g = float(big_catalog.gammas[0])
    jump = s_of_t(g + 1e-3, big_catalog) - s_of_t(g - 1e-3, big_catalog)
    assert abs(jump - 1) < 1e-3


def test_S_mean_small(big_catalog):
    rng = np.random.default_rng(7)
    vals = []
    for t in rng.uniform(100, 1000, 500):
        if big_catalog.ordinate_distance(t) >= 1e-3:
            vals.append(s_of_t(t, big_catalog))
    assert abs(np.mean(vals)) < 0.2


@settings(max_examples=40, deadline=None)
@given(st.floats(0.4, 3.0), st.floats(14.0, 9999.0))
def test_reflection_property(sigma, t):
    s = complex(sigma, t)
    if abs(s - 1) < 1e-3:
        return
    assert abs(zeta(s.conjugate()).value - zeta(s).value.conjugate()) < 1e-9
    assert abs(zeta_log_deriv(s.conjugate()).value - zeta_log_deriv(s).value.conjugate()) < 1e-9 * max(
        1, abs(zeta_log_deriv(s).value)
    )


@settings(max_examples=25, deadline=None)
@given(st.floats(0.4, 3.0), st.floats(14.5, 9000.0))
def test_exp_log_zeta_property(big_catalog, sigma, t):
    if big_catalog.ordinate_distance(t) < 1e-3:
        return
    s = complex(sigma, t)
    z = zeta(s).value
    lz = log_zeta(s, big_catalog).value
    assert abs(cmath.exp(lz) - z) < 1e-8 * abs(z)
    assert abs(log_zeta(s.conjugate(), big_catalog).value - lz.conjugate()) < 1e-9 * max(1, abs(lz))
