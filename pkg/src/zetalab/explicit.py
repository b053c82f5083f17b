"""Smoothed von Mangoldt weights, Dirichlet polynomials, the zero
neighbourhood A(x, t) and the composite bound quantities F, G, Y, E.

Notation follows the usual conventions: delta_x = 1/log x,
s_1 = sigma_1 + it with sigma_1 = 1/2 + a + delta_x, and Phi, Psi, l, v are
the SIZDC parameter functions evaluated at t/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np
from scipy import integrate

from .errors import DomainError, UncertifiedRangeError
from .sizdc import SizdcParams
from .zeros import NontrivialZero, ZeroCatalog
from .zeta import theta_rs_prime, zeta_log_deriv

X_MIN = 3.0
X_MAX = 1000.0
SUM_CHUNK = 4096
TRIVIAL_CUTOFF = 1e-16

Weight = Literal["plain", "over_log_n"]


# ---------------------------------------------------------------------------
# von Mangoldt
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VonMangoldtTable:
    """Lambda(n) for 0 <= n <= limit, from a smallest-prime-factor sieve.

    ``prime[n]`` and ``power[n]`` hold the factorisation n = p^k when n is a
    prime power, and 0 otherwise."""

    limit: int
    prime: np.ndarray = field(repr=False)
    power: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, limit: int) -> VonMangoldtTable:
        limit = max(int(limit), 2)
        spf = np.zeros(limit + 1, dtype=np.int64)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
                spf[p * p :: p] = block
        n = np.arange(limit + 1)
        is_prime = (spf == 0) & (n >= 2)
        spf[is_prime] = n[is_prime]
        prime = np.zeros(limit + 1, dtype=np.int64)
        power = np.zeros(limit + 1, dtype=np.int64)
        prime[is_prime] = n[is_prime]
        power[is_prime] = 1
        # prime powers p^k, k >= 2
        for p in n[is_prime]:
            if p * p > limit:
                break
            q, k = p * p, 2
            while q <= limit:
                prime[q], power[q] = p, k
                q *= p
                k += 1
        values = np.zeros(limit + 1)
        mask = prime > 0
        values[mask] = np.log(prime[mask].astype(float))
        return cls(limit, prime, power, values)

    def __call__(self, n: int) -> float:
        return float(self.values[n])


@lru_cache(maxsize=4)
def von_mangoldt_table(limit: int) -> VonMangoldtTable:
    return VonMangoldtTable.build(limit)


def von_mangoldt(n: int) -> float:
    if n < 2:
        return 0.0
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            return math.log(p) if m == 1 else 0.0
        p += 1
    return math.log(m)


def lambda_x(n: int, x: float) -> float:
    """The triangle-smoothed weight: Lambda(n) up to x, tapering linearly in
    log n to zero at x^2."""
    if x < X_MIN:
        raise DomainError(f"x={x} < 3")
    if n < 1 or n > x * x:
        return 0.0
    lam = von_mangoldt(n)
    if n <= x:
        return lam
    return lam * math.log(x * x / n) / math.log(x)


def lambda_x_array(x: float) -> tuple[np.ndarray, np.ndarray]:
    """(n, Lambda_x(n)) for the prime powers 2 <= n <= x^2."""
    if not (X_MIN <= x <= X_MAX):
        raise DomainError(f"x={x} outside [{X_MIN:g}, {X_MAX:g}]")
    top = int(math.floor(x * x))
    tab = von_mangoldt_table(int(X_MAX * X_MAX))
    n = np.flatnonzero(tab.values[: top + 1] > 0)
    lam = tab.values[n]
    w = np.where(n <= x, lam, lam * np.log(x * x / n) / math.log(x))
    return n.astype(float), w


def dirichlet_sum(s: complex, x: float, weight: Weight = "plain") -> complex:
    """sum_{n <= x^2} Lambda_x(n) n^{-s}, optionally with an extra 1/log n.

    Summed in fixed-size chunks so the floating-point order never changes."""
    s = complex(s)
    n, w = lambda_x_array(x)
    logn = np.log(n)
    terms = w * np.exp(-s * logn)
    if weight == "over_log_n":
        terms = terms / logn
    elif weight != "plain":
        raise DomainError(f"unknown weight {weight!r}")
    total = 0j
    for i in range(0, terms.size, SUM_CHUNK):
        total += complex(np.sum(terms[i : i + SUM_CHUNK]))
    return total


# ---------------------------------------------------------------------------
# Parameters and the neighbourhood A(x, t)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothingParams:
    x: float
    a: float

    def __post_init__(self) -> None:
        if not (X_MIN <= self.x <= X_MAX):
            raise DomainError(f"x={self.x} outside [{X_MIN:g}, {X_MAX:g}]")
        if not (0.0 < self.a <= 1.0):
            raise DomainError(f"a={self.a} outside (0, 1]")

    @property
    def delta_x(self) -> float:
        return 1.0 / math.log(self.x)

    @property
    def sigma_1(self) -> float:
        return 0.5 + self.a + self.delta_x


def membership_radius(beta: float, x: float, t: float) -> float:
    return min(t / 2.0, x ** (3.0 * (beta - 0.5)) / math.sqrt(math.log(x)))


def coverage_radius(x: float, t: float) -> float:
    """Largest radius any zero (beta < 1) can have, hence the window the
    catalog must be complete on."""
    return min(t / 2.0, x**1.5 / math.sqrt(math.log(x)))


@dataclass(frozen=True)
class ZeroNeighborhood:
    members: tuple[NontrivialZero, ...]
    sigma_A: float
    L: float
    x: float
    t: float
    catalog_id: str
    empty: bool
    flags: tuple[str, ...] = ()


def build_neighborhood(catalog: ZeroCatalog, x: float, t: float) -> ZeroNeighborhood:
    if t < 14:
        raise DomainError(f"t={t} < 14")
    if x < X_MIN:
        raise DomainError(f"x={x} < 3")
    flags = []
    R = coverage_radius(x, t)
    if not catalog.covers(t - R, t + R):
        if not catalog.hypothesis_mode:
            raise UncertifiedRangeError(f"catalog must be complete on [{t - R:.6g}, {t + R:.6g}]")
        flags.append("coverage_waived_hypothesis_mode")
    # conjugates sit at -gamma, at distance > t > t/2: never members
    cand = catalog.zeros_between(t - R, t + R)
    members = tuple(z for z in cand if abs(t - z.gamma) <= membership_radius(z.beta, x, t))
    if members:
        sigma_A = max(z.beta for z in members)
        L = min(t / 2.0, max(membership_radius(z.beta, x, t) for z in members))
        empty = False
    else:
        sigma_A, L, empty = 0.5, 1.0 / math.log(x), True
        flags.append("empty_A_sentinel")
    if catalog.hypothesis_mode:
        flags.append("hypothesis_mode")
    return ZeroNeighborhood(members, sigma_A, L, float(x), float(t), catalog.fingerprint, empty, tuple(flags))


# ---------------------------------------------------------------------------
# tau, F, G, Y, E
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundQuantities:
    sigma: float
    a: float
    x: float
    t: float
    tau: int
    F_a: float
    G_a: float
    Y_a: float
    E_a: float
    components: dict[str, float]
    flags: tuple[str, ...] = ()


def tau_of(a: float, nbhd: ZeroNeighborhood) -> int:
    if nbhd.empty:
        return 0
    return 1 if a <= nbhd.sigma_A else 0


def f_sum(a: float, sigma_A: float, x: float, phi: float) -> float:
    """(x/Phi)^a sum_{k=0}^{[(sigma_A - a) log Phi]} (x^2/Phi)^{(k+1)/log Phi}."""
    H1 = math.log(phi)
    K = math.floor((sigma_A - a) * H1)
    if K < 0:
        return 0.0
    k = np.arange(K + 1)
    ratio = (2.0 * math.log(x) - H1) / H1
    return float((x / phi) ** a * np.sum(np.exp((k + 1) * ratio)))


def bound_quantities(
    nbhd: ZeroNeighborhood, params: SmoothingParams, sizdc: SizdcParams, sigma: float, t: float
) -> BoundQuantities:
    x, a = params.x, params.a
    if not (0.5 <= sigma <= 3.0):
        raise DomainError(f"sigma={sigma} outside [1/2, 3]")
    half = t / 2.0
    phi = sizdc.phi(half)
    psi = sizdc.psi(half)
    if psi <= 0 or not (1.0 / psi <= a <= 1.0):
        raise DomainError(f"a={a} outside [1/Psi(t/2), 1] = [{1.0 / psi if psi > 0 else math.inf:.6g}, 1]")
    if phi <= 1.0:
        raise DomainError(f"Phi(t/2)={phi} <= 1: log Phi must be positive")
    flags = list(nbhd.flags)
    lx, lphi, dx = math.log(x), math.log(phi), params.delta_x
    tau = tau_of(a, nbhd)
    F = f_sum(a, nbhd.sigma_A, x, phi)
    G = tau * (sizdc.l(half) + dx) * sizdc.v(half) * lx * math.log(t)
    D1 = abs(dirichlet_sum(complex(params.sigma_1, t), x, "plain"))
    logt = math.log(t)
    xs = x ** (0.5 + a - sigma) / lx
    x0 = x ** (0.5 - sigma)
    comps = {
        "Y.dirichlet": xs * D1,
        "Y.log_t": xs * logt,
        "Y.F": G * x0 * F / lx,
        "Y.shift": G * x0 / lx * (1.0 + phi ** (-dx) * lx / lphi) * (x / phi) ** a,
        "Y.near": G * phi ** (0.5 - sigma + dx) / lphi,
        "E.dirichlet": D1,
        "E.log_t": logt,
        "E.F": G * x ** (-a) * F,
        "E.shift": G * phi ** (-a) * (1.0 + lx / lphi * phi ** (-dx)),
    }
    Y = sum(v for k, v in comps.items() if k.startswith("Y."))
    E = sum(v for k, v in comps.items() if k.startswith("E."))
    return BoundQuantities(float(sigma), a, x, float(t), tau, F, G, Y, E, comps, tuple(flags))


# ---------------------------------------------------------------------------
# The explicit-formula identity
# ---------------------------------------------------------------------------


def zero_term(rho: complex, s: complex, x: float) -> complex:
    """(x^{2(rho-s)} - x^{rho-s}) / ((rho-s)^2 log x)."""
    w = rho - s
    lx = math.log(x)
    return (np.exp(2 * w * lx) - np.exp(w * lx)) / (w * w * lx)


def _trudgian_s_bound(u: float) -> float:
    return 0.112 * math.log(u) + 0.278 * math.log(math.log(u)) + 2.510


def zero_sum_tail_bound(s: complex, x: float, cutoff: float) -> float:
    """Majorant for the zero sum over |gamma| > cutoff, valid for any beta in (0, 1).

    Each term is at most (x^{2(1-sigma)} + x^{1-sigma}) / ((gamma -+ t)^2 log x).
    The sum of f(gamma) = 1/(gamma-t)^2 + 1/(gamma+t)^2 over gamma > c is
    bounded by writing N = M + (N - M) with M(u) = theta(u)/pi + 1 and
    |N - M| <= 0.112 log u + 0.278 log log u + 2.510, then integrating by parts."""
    sigma, t = s.real, abs(s.imag)
    c = float(cutoff)
    if c <= t + 1.0:
        raise DomainError(f"zero cutoff {c} must exceed |t| + 1 = {t + 1}")
    lx = math.log(x)
    amp = (x ** (2 * (1 - sigma)) + x ** (1 - sigma)) / lx

    def f(u: float) -> float:
        return 1.0 / (u - t) ** 2 + 1.0 / (u + t) ** 2

    def fprime_abs(u: float) -> float:
        return 2.0 / (u - t) ** 3 + 2.0 / (u + t) ** 3

    main, _ = integrate.quad(lambda u: f(u) * float(theta_rs_prime(u)) / math.pi, c, math.inf, limit=200)
    drift, _ = integrate.quad(lambda u: _trudgian_s_bound(u) * fprime_abs(u), c, math.inf, limit=200)
    return amp * (main + f(c) * _trudgian_s_bound(c) + drift)


def trivial_zero_sum(s: complex, x: float) -> complex:
    """sum_{k>=1} (x^{-2(2k+s)} - x^{-2k-s}) / ((2k+s)^2 log x), stopped once terms drop below 1e-16."""
    lx = math.log(x)
    total = 0j
    k = 1
    while True:
        w = 2 * k + s
        term = (np.exp(-2 * w * lx) - np.exp(-w * lx)) / (w * w * lx)
        total += term
        if abs(term) < TRIVIAL_CUTOFF:
            break
        k += 1
    return complex(total)


@dataclass(frozen=True)
class Lemma1Result:
    value: complex
    tail_bound: float
    eval_error: float
    zeros_used: int
    parts: dict[str, complex]


def lemma1_rhs(s: complex, x: float, catalog: ZeroCatalog, gamma_cutoff: float) -> Lemma1Result:
    """Right side of the explicit formula for sum_{n <= x^2} Lambda_x(n) n^{-s}.

    The zero sum runs over computed catalog zeros and their conjugates with
    |gamma| <= gamma_cutoff; the rest is covered by ``tail_bound``."""
    s = complex(s)
    if not (X_MIN <= x <= X_MAX):
        raise DomainError(f"x={x} outside [{X_MIN:g}, {X_MAX:g}]")
    if gamma_cutoff > catalog.certified_range[1]:
        raise UncertifiedRangeError(f"cutoff {gamma_cutoff} beyond certified T1={catalog.certified_range[1]}")
    if not catalog.anchored:
        raise UncertifiedRangeError("the zero sum needs a catalog complete from height 0")
    comp = catalog.computed_only()
    ld = zeta_log_deriv(s, comp)
    lx = math.log(x)
    w1 = 1 - s
    pole = (np.exp(2 * w1 * lx) - np.exp(w1 * lx)) / (w1 * w1 * lx)
    g = comp.gammas[comp.gammas <= gamma_cutoff]
    rho = 0.5 + 1j * g
    zs = complex(np.sum(zero_term(rho, s, x)) + np.sum(zero_term(rho.conjugate(), s, x)))
    triv = trivial_zero_sum(s, x)
    value = -ld.value + complex(pole) - zs - triv
    tail = zero_sum_tail_bound(s, x, gamma_cutoff)
    parts = {"log_deriv": -ld.value, "pole": complex(pole), "zeros": -zs, "trivial": -triv}
    return Lemma1Result(value, tail, ld.abs_error_bound, int(g.size), parts)
