"""Evaluation of zeta(s), zeta'/zeta(s), log zeta(s), Z(t), theta(t) and S(t).

Two evaluation routes are used:

* Euler-Maclaurin summation for every sigma in [0.4, 3] and |t| <= 1e4, and
  for sigma != 1/2 at larger heights.
* The Riemann-Siegel main sum with the corrections C0..C3 for Z(t) (and
  hence zeta(1/2+it)) when t > 1e4.

The vectorised private helpers (``zeta_array``, ``z_array``) back the zero
scanner; the public functions wrap single points with domain checks and an
error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import TYPE_CHECKING, Literal

import mpmath
import numpy as np

from .errors import BranchTrackError, DomainError, NearZeroError, UncertifiedRangeError

if TYPE_CHECKING:
    from .zeros import ZeroCatalog

SIGMA_MIN = 0.4
SIGMA_MAX = 3.0
T_MIN = 14.0
T_MAX = 1.0e6
EM_T_LIMIT = 1.0e4
ZERO_GUARD = 1.0e-3

Method = Literal["euler_maclaurin", "riemann_siegel", "dirichlet_tail"]

_EPS = np.finfo(float).eps
_EM_FACTOR = 1.25
_EM_MIN_N = 12
_EM_MAX_TERMS = 200
_CHUNK_ELEMENTS = 2_000_000
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EvalPoint:
    """A point s = sigma + i t of the strip, optionally tagged with the
    distance from t to the nearest catalogued ordinate."""

    sigma: float
    t: float
    min_zero_distance: float | None = None

    def __post_init__(self) -> None:
        if not (SIGMA_MIN <= self.sigma <= SIGMA_MAX):
            raise DomainError(f"sigma={self.sigma} outside [{SIGMA_MIN}, {SIGMA_MAX}]")
        if not (T_MIN <= abs(self.t) <= T_MAX):
            raise DomainError(f"|t|={abs(self.t)} outside [{T_MIN}, {T_MAX:g}]")
        if self.min_zero_distance is not None and self.min_zero_distance < 0:
            raise DomainError("min_zero_distance must be >= 0")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)

    def with_distance(self, catalog: ZeroCatalog) -> EvalPoint:
        return replace(self, min_zero_distance=catalog.ordinate_distance(self.t))


@dataclass(frozen=True)
class EvalResult:
    value: complex
    abs_error_bound: float
    method: Method


def _as_complex(s: complex | EvalPoint) -> complex:
    if isinstance(s, EvalPoint):
        return s.s
    return complex(s)


def _check_strip(s: complex) -> None:
    if not (SIGMA_MIN <= s.real <= SIGMA_MAX):
        raise DomainError(f"Re s={s.real} outside [{SIGMA_MIN}, {SIGMA_MAX}]")
    if abs(s.imag) > T_MAX:
        raise DomainError(f"|Im s|={abs(s.imag)} exceeds {T_MAX:g}")
    if abs(s - 1.0) < 1e-6:
        raise DomainError("s too close to the pole at 1")
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError("non-finite argument")


# ---------------------------------------------------------------------------
# Riemann-Siegel theta and Gram points
# ---------------------------------------------------------------------------

# Stirling series for Im log Gamma(1/4 + it/2) - (t/2) log pi.
_THETA_COEFFS = (1 / 48, 7 / 5760, 31 / 80640, 127 / 430080, 511 / 1216512)


def theta_rs(t):
    """Riemann-Siegel theta function; odd in t, accurate for |t| >= 5."""
    t = np.asarray(t, dtype=float)
    a = np.abs(t)
    inv = 1.0 / a
    inv2 = inv * inv
    corr = np.zeros_like(a)
    p = inv.copy()
    for c in _THETA_COEFFS:
        corr += c * p
        p = p * inv2
    val = 0.5 * a * np.log(a / _TWO_PI) - 0.5 * a - math.pi / 8 + corr
    out = np.sign(t) * val
    return float(out) if out.ndim == 0 else out


def theta_rs_prime(t):
    t = np.asarray(t, dtype=float)
    return 0.5 * np.log(np.abs(t) / _TWO_PI) - 1.0 / (48.0 * t * t)


def gram_point(n):
    """Solve theta(g) = n*pi by Newton iteration (n >= -1)."""
    from scipy.special import lambertw

    n = np.asarray(n, dtype=float)
    g = _TWO_PI * np.exp(1.0 + np.real(lambertw((8.0 * n + 1.0) / (8.0 * math.e))))
    for _ in range(50):
        step = (theta_rs(g) - n * math.pi) / theta_rs_prime(g)
        g = g - step
        if np.all(np.abs(step) < 1e-13 * np.maximum(1.0, np.abs(g))):
            break
    return float(g) if g.ndim == 0 else g


def gram_index_below(t: float) -> int:
    """Largest n with g_n <= t."""
    n = int(math.floor(theta_rs(t) / math.pi))
    while gram_point(n) > t:
        n -= 1
    while gram_point(n + 1) <= t:
        n += 1
    return n


# ---------------------------------------------------------------------------
# Euler-Maclaurin
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _bernoulli_ratios() -> np.ndarray:
    """B_{2k}/(2k)! for k = 1.._EM_MAX_TERMS+1."""
    with mpmath.workdps(30):
        vals = [mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k) for k in range(1, _EM_MAX_TERMS + 2)]
        return np.array([float(v) for v in vals])


def _em_cutoff(t: np.ndarray) -> np.ndarray:
    return np.ceil(_EM_FACTOR * np.abs(t) / _TWO_PI).astype(np.int64) + _EM_MIN_N


def _em_tail(s: np.ndarray, N: int, deriv: bool):
    """Remainder terms of the Euler-Maclaurin formula at cutoff N.

    Returns (tail, dtail, truncation_bound, dtruncation_bound)."""
    b = _bernoulli_ratios()
    logN = math.log(N)
    Ns = np.exp(-s * logN)  # N^{-s}
    tail = N * Ns / (s - 1.0) + 0.5 * Ns
    dtail = -N * Ns * (logN / (s - 1.0) + 1.0 / (s - 1.0) ** 2) - 0.5 * logN * Ns if deriv else None
    recip = 1.0 / s  # sum 1/(s+j), j=0..2k-2
    term = b[0] * s * Ns / N  # B_2/2! s N^{-s-1}
    term_prev = np.full(s.shape, np.inf)
    active = np.ones(s.shape, dtype=bool)
    bound = np.zeros(s.shape)
    dbound = np.zeros(s.shape)
    for k in range(1, _EM_MAX_TERMS + 1):
        mag = np.abs(term)
        stop = active & ((mag > np.abs(term_prev)) | (mag < 1e-17 * np.maximum(1.0, np.abs(tail))))
        if np.any(stop):
            # Backlund: |R_M| <= |(s+2M+1)/(sigma+2M+1)| |T_{M+1}|
            fac = np.abs(s + 2 * k - 1) / (s.real + 2 * k - 1)
            bound[stop] = (fac * mag)[stop]
            if deriv:
                dbound[stop] = (fac * np.abs(term * (recip - logN)))[stop]
            active &= ~stop
        if not np.any(active):
            break
        tail = tail + np.where(active, term, 0)
        if deriv:
            dtail = dtail + np.where(active, term * (recip - logN), 0)
        term_prev = np.where(active, term, term_prev)
        a1 = s + (2 * k - 1)
        a2 = s + 2 * k
        recip = recip + 1.0 / a1 + 1.0 / a2
        term = np.where(active, term * (b[k] / b[k - 1]) * (a1 / N) * (a2 / N), 0)
    else:
        bound[active] = np.inf
    return tail, dtail, bound, dbound


def zeta_array(s, deriv: bool = False):
    """Vectorised Euler-Maclaurin evaluation.

    Returns (zeta, zeta_prime or None, error_bound, derivative_error_bound)
    as arrays shaped like ``s``. No domain checks."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    shape = s.shape
    s = s.ravel()
    out = np.empty_like(s)
    dout = np.empty_like(s) if deriv else None
    err = np.empty(s.shape)
    derr = np.empty(s.shape)
    cut = _em_cutoff(s.imag)
    order = np.argsort(cut, kind="stable")
    i = 0
    while i < len(order):
        N = int(cut[order[i]])
        rows = max(1, _CHUNK_ELEMENTS // N)
        j = i
        while j < len(order) and j - i < rows:
            j += 1
        idx = order[i:j]
        N = int(cut[idx].max())
        ss = s[idx]
        n = np.arange(1, N, dtype=float)
        logn = np.log(n)
        terms = np.exp(-np.outer(ss, logn))
        head = terms.sum(axis=1)
        tail, dtail, tb, dtb = _em_tail(ss, N, deriv)
        out[idx] = head + tail
        # statistical rounding estimate of the head sum
        mod2 = np.exp(-2.0 * np.outer(ss.real, logn)).sum(axis=1)
        phase = 1.0 + np.abs(ss.imag) * math.log(N)
        rnd = _EPS * phase * np.sqrt(mod2) + 4 * _EPS * np.abs(out[idx])
        err[idx] = tb + rnd
        if deriv:
            dhead = -(terms * logn).sum(axis=1)
            dout[idx] = dhead + dtail
            derr[idx] = dtb + rnd * math.log(N)
        i = j
    out = out.reshape(shape)
    err = err.reshape(shape)
    if deriv:
        return out, dout.reshape(shape), err, derr.reshape(shape)
    return out, None, err, None


# ---------------------------------------------------------------------------
# Riemann-Siegel
# ---------------------------------------------------------------------------

# Gabcke's bound for the remainder after C0..C3: 0.031 t^{-9/4}, t >= 200.
_RS_REMAINDER = 0.031


@lru_cache(maxsize=1)
def _psi_series(deg: int = 90) -> np.ndarray:
    """Taylor coefficients in u = p - 1/2 of cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p).

    With p = u + 1/2 the function is -cos(2 pi u^2 - 5 pi / 8) / cos(2 pi u), an
    even entire function; the series is produced by exact power-series
    division at 50 digits."""
    with mpmath.workdps(50):
        pi2 = 2 * mpmath.pi
        c58, s58 = mpmath.cos(5 * mpmath.pi / 8), mpmath.sin(5 * mpmath.pi / 8)
        num = [mpmath.mpf(0)] * (deg + 1)
        for k in range(deg // 4 + 1):
            if 4 * k <= deg:
                num[4 * k] -= (-1) ** k * pi2 ** (2 * k) / mpmath.factorial(2 * k) * c58
            if 4 * k + 2 <= deg:
                num[4 * k + 2] -= (-1) ** k * pi2 ** (2 * k + 1) / mpmath.factorial(2 * k + 1) * s58
        den = [mpmath.mpf(0)] * (deg + 1)
        for k in range(deg // 2 + 1):
            den[2 * k] = (-1) ** k * pi2 ** (2 * k) / mpmath.factorial(2 * k)
        q = [mpmath.mpf(0)] * (deg + 1)
        for n in range(deg + 1):
            acc = num[n]
            for j in range(1, n + 1):
                acc -= den[j] * q[n - j]
            q[n] = acc / den[0]
        return np.array([float(c) for c in q])


@lru_cache(maxsize=None)
def _psi_derivative_coeffs(order: int) -> np.ndarray:
    c = _psi_series()
    for _ in range(order):
        c = c[1:] * np.arange(1, len(c))
    return c


def _psi_deriv(order: int, u: np.ndarray) -> np.ndarray:
    c = _psi_derivative_coeffs(order)
    return np.polynomial.polynomial.polyval(u, c)


def _rs_corrections(p: np.ndarray, r: np.ndarray) -> np.ndarray:
    u = p - 0.5
    pi2 = math.pi ** 2
    c0 = _psi_deriv(0, u)
    c1 = -_psi_deriv(3, u) / (96 * pi2)
    c2 = _psi_deriv(2, u) / (64 * pi2) + _psi_deriv(6, u) / (18432 * pi2 ** 2)
    c3 = (
        -_psi_deriv(1, u) / (64 * pi2)
        - _psi_deriv(5, u) / (3840 * pi2 ** 2)
        - _psi_deriv(9, u) / (5308416 * pi2 ** 3)
    )
    return c0 + r * (c1 + r * (c2 + r * c3))


def z_rs_array(t):
    """Riemann-Siegel Z(t) for t > 0 (meaningful for t >~ 200).

    Returns (Z, error_bound)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a = np.sqrt(t / _TWO_PI)
    N = np.floor(a).astype(np.int64)
    p = a - N
    th = theta_rs(t)
    Nmax = int(N.max())
    n = np.arange(1, Nmax + 1, dtype=float)
    logn = np.log(n)
    out = np.empty_like(t)
    rows = max(1, _CHUNK_ELEMENTS // Nmax)
    for i in range(0, len(t), rows):
        sl = slice(i, i + rows)
        ph = th[sl, None] - np.outer(t[sl], logn)
        terms = np.cos(ph) / np.sqrt(n)
        terms[n[None, :] > N[sl, None]] = 0.0
        out[sl] = 2.0 * terms.sum(axis=1)
    r = np.sqrt(_TWO_PI / t)
    sign = np.where(N % 2 == 1, 1.0, -1.0)  # (-1)^{N-1}
    out += sign * np.sqrt(r) * _rs_corrections(p, r)
    err = _RS_REMAINDER * t ** -2.25 + 4 * _EPS * (1.0 + t * np.log(np.maximum(N, 2))) * np.sqrt(np.log(N + 1.0) + 1.0)
    return out, err


def _z_em_array(t: np.ndarray):
    """Euler-Maclaurin Z(t): only the real part of the rotated head sum is formed."""
    out = np.empty_like(t)
    err = np.empty_like(t)
    cut = _em_cutoff(t)
    order = np.argsort(cut, kind="stable")
    th = theta_rs(t)
    i = 0
    while i < len(order):
        rows = max(1, _CHUNK_ELEMENTS // int(cut[order[i]]))
        idx = order[i : i + rows]
        N = int(cut[idx].max())
        tt = t[idx]
        n = np.arange(1, N, dtype=float)
        logn = np.log(n)
        head = (np.cos(th[idx, None] - np.outer(tt, logn)) / np.sqrt(n)).sum(axis=1)
        s = 0.5 + 1j * tt
        tail, _, tb, _ = _em_tail(s, N, False)
        out[idx] = head + (np.exp(1j * th[idx]) * tail).real
        rnd = _EPS * (1.0 + np.abs(tt) * math.log(N)) * math.sqrt(math.log(N) + 1.0)
        err[idx] = tb + rnd + 4 * _EPS * np.abs(out[idx])
        i += rows
    return out, err


def z_array(t):
    """Z(t) on the method regions: Euler-Maclaurin up to 1e4, Riemann-Siegel above.

    Returns (Z, error_bound). No domain checks (the zero scanner needs to
    step a few Gram intervals past the public range)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    err = np.empty_like(t)
    em = np.abs(t) <= EM_T_LIMIT
    if np.any(em):
        out[em], err[em] = _z_em_array(t[em])
    if np.any(~em):
        out[~em], err[~em] = z_rs_array(t[~em])
    return out, err


# ---------------------------------------------------------------------------
# Public evaluation
# ---------------------------------------------------------------------------


def zeta(s: complex | EvalPoint) -> EvalResult:
    """zeta(s) for sigma in [0.4, 3], |t| <= 1e6."""
    s = _as_complex(s)
    _check_strip(s)
    if s.real == 0.5 and abs(s.imag) > EM_T_LIMIT:
        t = abs(s.imag)
        z, e = z_rs_array(t)
        v = complex(z[0] * np.exp(-1j * theta_rs(t)))
        if s.imag < 0:
            v = v.conjugate()
        return EvalResult(v, float(e[0]), "riemann_siegel")
    # evaluate at |t| and reflect so conjugation symmetry is exact
    v, _, e, _ = zeta_array(complex(s.real, abs(s.imag)))
    val = complex(v[0])
    if s.imag < 0:
        val = val.conjugate()
    return EvalResult(val, float(e[0]), "euler_maclaurin")


def riemann_siegel_Z(t: float) -> EvalResult:
    """Hardy's Z(t) = exp(i theta(t)) zeta(1/2 + it), real for real t."""
    t = float(t)
    if t < T_MIN:
        raise DomainError(f"Z(t) requires t >= {T_MIN}, got {t}")
    if t > T_MAX:
        raise DomainError(f"t={t} exceeds {T_MAX:g}")
    z, e = z_array(t)
    return EvalResult(float(z[0]), float(e[0]), "euler_maclaurin" if t <= EM_T_LIMIT else "riemann_siegel")


def _guard(s: complex, catalog: ZeroCatalog | None, guard: float, point: EvalPoint | None = None) -> None:
    t = abs(s.imag)
    if catalog is not None:
        if not catalog.covers(t - 1.0, t + 1.0):
            raise UncertifiedRangeError(f"catalog does not cover [{t - 1:.6g}, {t + 1:.6g}]")
        d = catalog.ordinate_distance(t)
    elif point is not None and point.min_zero_distance is not None:
        d = point.min_zero_distance
    else:
        return
    if d < guard * (1.0 - 1e-9):  # a point placed exactly at the guard distance passes
        raise NearZeroError(f"t={t} is within {d:.3g} of a zero ordinate (guard {guard:g})")


def zeta_log_deriv(
    s: complex | EvalPoint, catalog: ZeroCatalog | None = None, guard: float = ZERO_GUARD
) -> EvalResult:
    """zeta'(s)/zeta(s)."""
    point = s if isinstance(s, EvalPoint) else None
    s = _as_complex(s)
    _check_strip(s)
    _guard(s, catalog, guard, point)
    sp = complex(s.real, abs(s.imag))
    z, dz, e, de = zeta_array(sp, deriv=True)
    z, dz, e, de = complex(z[0]), complex(dz[0]), float(e[0]), float(de[0])
    val = dz / z
    if s.imag < 0:
        val = val.conjugate()
    bound = float(de / abs(z) + abs(dz) * e / abs(z) ** 2)
    return EvalResult(val, bound, "euler_maclaurin")


_PATH_STEP = 0.05
_MAX_DARG = math.pi / 4
_MIN_STEP = 1e-7


def _path_nodes(sigma_end: float, t: float, catalog: ZeroCatalog | None) -> np.ndarray:
    """Nodes from 2 to sigma_end with step <= min(0.05, half the distance to the
    nearest catalogued zero)."""
    if catalog is not None:
        near = catalog.zeros_between(t - 1.0, t + 1.0)
        zs = np.array([complex(z.beta, z.gamma) for z in near])
    else:
        zs = np.empty(0, dtype=complex)
    nodes = [2.0]
    direction = -1.0 if sigma_end < 2.0 else 1.0
    cur = 2.0
    while (sigma_end - cur) * direction > 1e-15:
        step = _PATH_STEP
        if zs.size:
            d = float(np.min(np.abs(zs - complex(cur, t))))
            step = min(step, 0.5 * d)
        if step < _MIN_STEP:
            raise BranchTrackError(f"path step collapsed near sigma={cur:.6g}, t={t}")
        nxt = cur + direction * step
        if (sigma_end - nxt) * direction < 0:
            nxt = sigma_end
        nodes.append(nxt)
        cur = nxt
    return np.array(nodes)


def _zeta_on_path(sigma: np.ndarray, t: float):
    s = sigma + 1j * t
    if t > EM_T_LIMIT:
        # sigma = 1/2 nodes come from Riemann-Siegel, the rest from EM
        vals = np.empty(s.shape, dtype=complex)
        errs = np.empty(s.shape)
        half = sigma == 0.5
        if np.any(~half):
            v, _, e, _ = zeta_array(s[~half])
            vals[~half], errs[~half] = v, e
        if np.any(half):
            z, e = z_rs_array(np.full(int(half.sum()), t))
            vals[half] = z * np.exp(-1j * theta_rs(t))
            errs[half] = e
        return vals, errs
    v, _, e, _ = zeta_array(s)
    return v, e


def log_zeta(
    s: complex | EvalPoint, catalog: ZeroCatalog | None = None, guard: float = ZERO_GUARD
) -> EvalResult:
    """The branch of log zeta(s) continued horizontally from the principal value at 2+it.

    The imaginary part is accumulated as principal arguments of successive
    ratios zeta(node_{k+1})/zeta(node_k); an interval whose phase change
    exceeds pi/4 is bisected until it does not, or BranchTrackError is raised.
    """
    point = s if isinstance(s, EvalPoint) else None
    s = _as_complex(s)
    _check_strip(s)
    if abs(s.imag) < T_MIN:
        raise DomainError(f"log_zeta requires |t| >= {T_MIN}")
    _guard(s, catalog, guard, point)
    t = abs(s.imag)
    nodes = _path_nodes(s.real, t, catalog)
    vals, errs = _zeta_on_path(nodes, t)
    arg = math.atan2(vals[0].imag, vals[0].real)  # Re zeta(2+it) > 0
    for k in range(len(nodes) - 1):
        arg += _phase_increment(nodes[k], nodes[k + 1], vals[k], vals[k + 1], t, 0)
    end = complex(vals[-1])
    if end == 0:
        raise NearZeroError(f"zeta vanishes numerically at {s}")
    val = complex(math.log(abs(end)), arg)
    bound = float(2.0 * errs[-1] / abs(end) + 2.0 * errs[0] / abs(vals[0]))
    if s.imag < 0:
        val = val.conjugate()
    return EvalResult(val, bound, "riemann_siegel" if (t > EM_T_LIMIT and s.real == 0.5) else "euler_maclaurin")


def _phase_increment(a: float, b: float, za: complex, zb: complex, t: float, depth: int) -> float:
    d = math.atan2((zb / za).imag, (zb / za).real)
    if abs(d) <= _MAX_DARG:
        return d
    if depth > 25 or abs(b - a) < _MIN_STEP:
        raise BranchTrackError(f"cannot certify phase change between sigma={a:.8g} and {b:.8g} at t={t}")
    m = 0.5 * (a + b)
    zm = complex(_zeta_on_path(np.array([m]), t)[0][0])
    if zm == 0:
        raise BranchTrackError(f"zeta vanishes on the path at sigma={m}, t={t}")
    return _phase_increment(a, m, za, zm, t, depth + 1) + _phase_increment(m, b, zm, zb, t, depth + 1)


def s_of_t(t: float, catalog: ZeroCatalog | None = None, guard: float = ZERO_GUARD) -> float:
    """S(t) = Im log zeta(1/2 + it) / pi."""
    if abs(t) < T_MIN:
        raise DomainError(f"S(t) requires |t| >= {T_MIN}")
    return log_zeta(complex(0.5, t), catalog, guard).value.imag / math.pi
