"""Numerical checks of the log-zeta decomposition, the Littlewood-type
corollary, and the sum-over-zeros bounds used in its proof.

Where the statements are identities the residual is compared with
accumulated error bounds; where they are O-bounds the ratio
|computed| / bound is reported and compared against frozen baselines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Literal

import numpy as np

from .errors import DomainError, HypothesisError, UncertifiedRangeError
from .explicit import (
    BoundQuantities,
    SmoothingParams,
    ZeroNeighborhood,
    bound_quantities,
    build_neighborhood,
    dirichlet_sum,
    zero_term,
)
from .sizdc import SizdcParams, check_sizdc, corollary_params
from .zeros import NontrivialZero, ZeroCatalog
from .zeta import ZERO_GUARD, log_zeta, zeta_log_deriv

Case = Literal["upper", "lower"]
LemmaId = Literal["near", "zero1", "zero_real", "near_critical", "prop1", "prop_uncon"]
LEMMA_IDS: tuple[str, ...] = ("near", "zero1", "zero_real", "near_critical", "prop1", "prop_uncon")
SIZDC_CHECK_POINTS = 9


@dataclass(frozen=True)
class DecompositionReport:
    what: str
    t: float
    x: float
    a: float
    sigma: float
    sigma_1: float
    delta_x: float
    case: Case
    near_zero_log_sum: float
    shifted_zero_terms: float
    dirichlet_term: complex
    lhs_log_zeta: complex
    residual: complex
    y_bound: float
    ratio: float
    eval_error: float
    quantities: BoundQuantities | None
    sigma_A: float
    L: float
    neighborhood_size: int
    sizdc_assumption_holds: bool | None
    params: str
    catalog_id: str
    flags: tuple[str, ...]

    def numbers(self) -> dict:
        """Every field except the label naming which check produced it."""
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "what"}


@dataclass(frozen=True)
class BoundCheckReport:
    lemma_id: str
    lhs_value: float
    bound_value: float
    ratio: float
    branches: dict[str, float]
    inputs: dict[str, float | str]
    flags: tuple[str, ...]


@dataclass(frozen=True)
class LittlewoodRow:
    t: float
    t_requested: float
    log_abs_zeta: float
    s_t: float
    littlewood_ratio: float
    s_ratio: float
    repelled: bool


@dataclass(frozen=True)
class LittlewoodScan:
    eps0: float
    rows: tuple[LittlewoodRow, ...]
    max_littlewood_ratio: float
    max_s_ratio: float

    CSV_HEADER = ("t", "log_abs_zeta", "s_t", "littlewood_ratio", "s_ratio", "repelled")

    def csv_rows(self):
        return [(r.t, r.log_abs_zeta, r.s_t, r.littlewood_ratio, r.s_ratio, int(r.repelled)) for r in self.rows]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _ratio(num: float, den: float) -> float:
    if num == 0.0:
        return 0.0
    return num / den if den > 0 else math.inf


def _for_zeta(catalog: ZeroCatalog) -> ZeroCatalog:
    """Synthetic zeros are hypothetical; zeta itself is evaluated against the computed ones."""
    return catalog.computed_only() if catalog.hypothesis_mode else catalog


def _local_zeros(catalog: ZeroCatalog, t: float, radius: float) -> list[NontrivialZero]:
    return catalog.zeros_between(t - radius, t + radius)


def _sizdc_holds(catalog: ZeroCatalog, params: SizdcParams, t: float, L: float) -> bool | None:
    lo = max(t - L, params.l.t_min)
    try:
        rep = check_sizdc(catalog, params, (lo, t + L), (SIZDC_CHECK_POINTS, None))
    except UncertifiedRangeError:
        return None
    return rep.satisfied


def _check_x(x: float, t: float) -> None:
    if not (3.0 <= x <= t * t):
        raise HypothesisError("3 <= x <= t^2", f"x={x}, t={t}")


def _check_a(a: float, psi_half: float) -> None:
    if not (1.0 / psi_half <= a <= 1.0):
        raise HypothesisError("1/Psi(t/2) <= a <= 1", f"a={a}, 1/Psi(t/2)={1.0 / psi_half:.6g}")


def _check_t(t: float) -> None:
    if t < 14.0:
        raise HypothesisError("t >= 14", f"t={t}")


def repel(t: float, catalog: ZeroCatalog, guard: float = ZERO_GUARD) -> tuple[float, bool]:
    """Move t to twice the guard distance from the nearest ordinate if it is closer than the guard."""
    moved = False
    for _ in range(8):
        d = catalog.ordinate_distance(t)
        if d >= guard:
            return t, moved
        k = int(np.argmin(np.abs(catalog.gammas - t)))
        g = float(catalog.gammas[k])
        t = g + (2.0 * guard if t >= g else -2.0 * guard)
        moved = True
    return t, moved


# ---------------------------------------------------------------------------
# decomposition of log zeta
# ---------------------------------------------------------------------------


def _decompose(
    what: str, t: float, x: float, a: float, sigma: float, catalog: ZeroCatalog, params: SizdcParams
) -> DecompositionReport:
    sp = SmoothingParams(x, a)
    dx, s1v = sp.delta_x, sp.sigma_1
    nb = build_neighborhood(catalog, x, t)
    s = complex(sigma, t)
    s1 = complex(s1v, t)
    near = _local_zeros(catalog, t, 1.0 + dx)
    lz = log_zeta(s, _for_zeta(catalog))
    flags = list(nb.flags)
    if sigma >= s1v:
        case: Case = "upper"
        disk = sum(
            math.log(abs(s - z.rho) / abs(complex(dx, t - z.gamma))) for z in near if abs(s - z.rho) <= dx
        )
        shifted = 0.0
        dirichlet = dirichlet_sum(s, x, "over_log_n")
        q = bound_quantities(nb, sp, params, sigma, t)
        y = q.Y_a
    else:
        case = "lower"
        shifted = 0.0
        for z in near:
            if abs(t - z.gamma) <= dx:
                if s == z.rho:
                    raise DomainError(f"s={s} coincides with a catalogued zero")
                shifted += math.log(abs(s - z.rho) / abs(s1 - z.rho))
        disk = sum(
            math.log(abs(s1 - z.rho) / abs(complex(dx, t - z.gamma))) for z in near if abs(s1 - z.rho) <= dx
        )
        dirichlet = dirichlet_sum(s1, x, "over_log_n")
        q = bound_quantities(nb, sp, params, s1v, t)
        y = (s1v - sigma) * (1.0 + a / dx) ** 2 * q.E_a + q.Y_a
        flags.append("lower_error_term_uses_Y_at_sigma_1")
    residual = lz.value - disk - shifted - dirichlet
    holds = _sizdc_holds(catalog, params, t, nb.L)
    if holds is None:
        flags.append("sizdc_assumption_unchecked")
    elif not holds:
        flags.append("sizdc_assumption_fails")
    return DecompositionReport(
        what, float(t), float(x), float(a), float(sigma), s1v, dx, case,
        float(disk), float(shifted), complex(dirichlet), lz.value, complex(residual),
        float(y), _ratio(abs(residual), y), lz.abs_error_bound, q,
        nb.sigma_A, nb.L, len(nb.members), holds, str(params), catalog.fingerprint, tuple(flags),
    )  # fmt: skip


def verify_theorem1(t: float, x: float, sigma: float, catalog: ZeroCatalog, params: SizdcParams) -> DecompositionReport:
    """Decomposition with a = delta_x; the case split sits at sigma_x = 1/2 + 2 delta_x."""
    _check_t(t)
    if not (0.5 <= sigma <= 2.0):
        raise HypothesisError("1/2 <= sigma <= 2", f"sigma={sigma}")
    psi_half = params.psi(t / 2.0)
    if not (3.0 <= x <= min(math.exp(psi_half), t * t)):
        raise HypothesisError("3 <= x <= min(e^Psi(t/2), t^2)", f"x={x}, e^Psi(t/2)={math.exp(psi_half):.6g}, t^2={t * t:.6g}")
    return _decompose("theorem1", t, x, 1.0 / math.log(x), sigma, catalog, params)


def verify_theorem2(
    t: float, x: float, a: float, sigma: float, catalog: ZeroCatalog, params: SizdcParams
) -> DecompositionReport:
    """Decomposition with general a; the case split sits at sigma_1 = 1/2 + a + delta_x."""
    _check_t(t)
    if not (0.5 <= sigma <= 2.0):
        raise HypothesisError("1/2 <= sigma <= 2", f"sigma={sigma}")
    _check_x(x, t)
    _check_a(a, params.psi(t / 2.0))
    return _decompose("theorem2", t, x, a, sigma, catalog, params)


# ---------------------------------------------------------------------------
# Littlewood-type corollary
# ---------------------------------------------------------------------------


def _littlewood_row(t: float, t_requested: float, repelled: bool, catalog: ZeroCatalog) -> LittlewoodRow:
    lz = log_zeta(complex(0.5, t), _for_zeta(catalog))
    scale = math.log(math.log(t)) / math.log(t)
    log_abs = lz.value.real
    s_t = lz.value.imag / math.pi
    return LittlewoodRow(t, t_requested, log_abs, s_t, log_abs * scale, abs(s_t) * scale, repelled)


@dataclass(frozen=True)
class CorollaryResult:
    report: DecompositionReport
    row: LittlewoodRow
    eps0: float
    effective_eps0: float


def verify_corollary(t: float, eps0: float, catalog: ZeroCatalog, x: float | None = None) -> CorollaryResult:
    """Corollary decomposition at s = 1/2 + it with x = (log(t/2))^{eps0/4}.

    Passing ``x`` back-solves an effective eps0 = 4 log x / log log(t/2),
    the only way to meet x >= 3 at computable heights."""
    _check_t(t)
    if not (0.0 < eps0 < 1.0):
        raise DomainError(f"eps0={eps0} outside (0, 1)")
    llh = math.log(math.log(t / 2.0))
    flags = []
    if x is None:
        x = math.log(t / 2.0) ** (eps0 / 4.0)
        eff = eps0
        if x < 3.0:
            raise HypothesisError("x = (log(t/2))^{eps0/4} >= 3", f"x={x:.6g} at t={t}, eps0={eps0}")
    else:
        if x < 3.0:
            raise HypothesisError("x >= 3", f"x={x}")
        eff = 4.0 * math.log(x) / llh
        flags.append("effective_eps0")
        if eff >= 1.0:
            flags.append("effective_eps0_not_small")
    t_used, repelled = repel(t, catalog)
    if repelled:
        flags.append("repelled_from_ordinate")
    t = t_used
    ll = math.log(math.log(t))
    radius = 1.0 / ll
    shift = 8.0 / (eff * ll)
    s = complex(0.5, t)
    near = _local_zeros(catalog, t, radius)
    total = 0.0
    for z in near:
        if abs(s - z.rho) <= radius:
            total += math.log(abs(s - z.rho) / abs(s + shift - z.rho))
    row = _littlewood_row(t, t, repelled, catalog)
    lz = complex(row.log_abs_zeta, math.pi * row.s_t)
    residual = lz - total
    y = math.log(t) / ll
    params = corollary_params(eff)
    nb = build_neighborhood(catalog, x, t)
    holds = _sizdc_holds(catalog, params, t, nb.L)
    if holds is None:
        flags.append("sizdc_assumption_unchecked")
    flags.append("asymptotic_content_unverifiable")
    rep = DecompositionReport(
        "corollary", float(t), float(x), 1.0 / math.log(x), 0.5, 0.5 + shift, 1.0 / math.log(x), "lower",
        float(total), 0.0, 0j, lz, complex(residual), y, _ratio(abs(residual), y), 0.0, None,
        nb.sigma_A, nb.L, len(nb.members), holds, str(params), catalog.fingerprint, tuple(flags),
    )  # fmt: skip
    return CorollaryResult(rep, row, eps0, eff)


def littlewood_scan(t_min: float, t_max: float, n_points: int, eps0: float, catalog: ZeroCatalog) -> LittlewoodScan:
    """log|zeta(1/2+it)| and |S(t)| against log t / log log t on a uniform grid."""
    if t_max < t_min or t_min < 14.0:
        raise DomainError(f"bad scan range [{t_min}, {t_max}]")
    if not catalog.covers(t_min - 1.0, t_max + 1.0):
        raise UncertifiedRangeError(f"catalog must cover [{t_min - 1}, {t_max + 1}]")
    grid = np.linspace(t_min, t_max, n_points) if (n_points > 1 and t_max > t_min) else np.array([t_min])
    rows = []
    for tr in grid:
        t, moved = repel(float(tr), catalog)
        rows.append(_littlewood_row(t, float(tr), moved, catalog))
    return LittlewoodScan(
        eps0,
        tuple(rows),
        max(r.littlewood_ratio for r in rows),
        max(r.s_ratio for r in rows),
    )


# ---------------------------------------------------------------------------
# sums over zeros from the proof
# ---------------------------------------------------------------------------


def near_term(rho: complex, s: complex, x: float) -> complex:
    """zero_term(rho, s) + 1/(s - rho), which is entire in rho - s."""
    w = rho - s
    lx = math.log(x)
    if abs(w) * lx > 1e-3:
        return complex(zero_term(rho, s, x)) + 1.0 / (s - rho)
    # sum_{n>=2} w^{n-2} ((2L)^n - L^n) / (n! L)
    total, k = 0j, 2
    wp = 1.0 + 0j
    while True:
        term = wp * ((2 * lx) ** k - lx**k) / (math.factorial(k) * lx)
        total += term
        if abs(term) < 1e-17 * abs(total) or k > 40:
            return total
        wp *= w
        k += 1


def _g_of(a_like: float, nb: ZeroNeighborhood, params: SizdcParams, x: float, t: float) -> float:
    tau = 0 if nb.empty else int(a_like <= nb.sigma_A)
    half = t / 2.0
    return tau * (params.l(half) + 1.0 / math.log(x)) * params.v(half) * math.log(x) * math.log(t)


def check_proof_bound(
    lemma_id: str,
    t: float,
    x: float,
    a: float,
    sigma: float,
    catalog: ZeroCatalog,
    params: SizdcParams,
) -> BoundCheckReport:
    """Sum the zero-side quantity of one proof step directly over the catalog
    and compare it with the bound the proof gives for it."""
    if lemma_id not in LEMMA_IDS:
        raise DomainError(f"unknown lemma id {lemma_id!r}; expected one of {', '.join(LEMMA_IDS)}")
    _check_t(t)
    if x < 3.0:
        raise HypothesisError("x >= 3", f"x={x}")
    half = t / 2.0
    psi_half = params.psi(half)
    phi_half = params.phi(half)
    dx = 1.0 / math.log(x)
    s = complex(sigma, t)
    inputs: dict[str, float | str] = {"t": t, "x": x, "a": a, "sigma": sigma, "params": str(params), "catalog_id": catalog.fingerprint}
    nb = build_neighborhood(catalog, x, t)
    flags = list(nb.flags)
    branches: dict[str, float] = {}
    zs = _local_zeros(catalog, t, max(1.0, nb.L) + dx)

    if lemma_id in ("near", "zero1", "prop_uncon"):
        if lemma_id != "prop_uncon":
            _check_a(a, psi_half)
        elif not (0.0 < a <= 1.0):
            raise HypothesisError("0 < a <= 1", f"a={a}")
        if sigma < 0.5 + a + dx:
            raise HypothesisError("sigma >= 1/2 + a + delta_x", f"sigma={sigma}, 1/2+a+delta_x={0.5 + a + dx:.6g}")
    if lemma_id in ("near_critical", "prop1"):
        _check_x(x, t)
        _check_a(a, psi_half)
    if lemma_id == "prop_uncon":
        _check_x(x, t)

    if lemma_id == "near":
        total = sum((near_term(z.rho, s, x) for z in zs if abs(s - z.rho) <= dx), 0j)
        lhs = abs(total)
        branches["disk"] = lhs
        G = _g_of(a, nb, params, x, t)
        bound = G * phi_half ** (0.5 - sigma + dx)
    elif lemma_id == "zero1":
        parts = {"S3": 0j, "S4": 0j, "S5": 0j}
        for z in nb.members:
            if abs(s - z.rho) <= dx or abs(z.beta - 0.5) < a:
                continue
            d = abs(t - z.gamma)
            key = "S3" if d <= dx else ("S4" if d <= 1.0 else "S5")
            parts[key] += complex(zero_term(z.rho, s, x))
        branches = {k: abs(v) for k, v in parts.items()}
        lhs = abs(parts["S3"] + parts["S4"] + parts["S5"])
        q = bound_quantities(nb, SmoothingParams(x, a), params, sigma, t)
        bound = q.G_a * x ** (0.5 - sigma) * q.F_a
    elif lemma_id == "zero_real":
        if sigma < 0.5 + 1.0 / psi_half:
            raise HypothesisError("sigma >= 1/2 + 1/Psi(t/2)", f"sigma={sigma}")
        parts_r = {"S6": 0.0, "S7": 0.0}
        for z in zs:
            d = abs(t - z.gamma)
            if d > 1.0 or z.beta < sigma or abs(s - z.rho) <= dx:
                continue
            parts_r["S6" if d <= dx else "S7"] += (-1.0 / (s - z.rho)).real * z.multiplicity
        branches = dict(parts_r)
        lhs = parts_r["S6"] + parts_r["S7"]
        G = _g_of(sigma, nb, params, x, t)
        bound = G * (math.log(x) / math.log(phi_half) + 1.0) * phi_half ** (0.5 - sigma)
    elif lemma_id == "near_critical":
        hi = t + a + dx
        if not catalog.hypothesis_mode and not catalog.covers(t, hi):
            raise UncertifiedRangeError(f"catalog must cover [{t}, {hi}]")
        g = catalog.gammas
        sel = (g > t) & (g <= hi)
        lhs = float(catalog.multiplicities[sel].sum())
        branches["count"] = lhs
        q = bound_quantities(nb, SmoothingParams(x, a), params, 0.5 + a + dx, t)
        bound = (a + dx) * q.E_a
    else:
        zc = _for_zeta(catalog)
        s1 = complex(0.5 + a + dx, t)
        D1 = dirichlet_sum(s1, x, "plain")
        ld1 = zeta_log_deriv(s1, zc).value
        bracket = ld1 - sum((1.0 / (s1 - z.rho) for z in zs if abs(s1 - z.rho) <= dx), 0j)
        q = bound_quantities(nb, SmoothingParams(x, a), params, 0.5 + a + dx, t)
        if lemma_id == "prop1":
            total = bracket + D1
            lhs = abs(total)
            branches["remainder"] = lhs
            bound = q.E_a
        else:
            ld = zeta_log_deriv(s, zc).value
            disk = [z for z in zs if abs(s - z.rho) <= dx]
            far_A = [z for z in nb.members if abs(s - z.rho) > dx and abs(z.beta - 0.5) >= a]
            total = (
                ld
                - sum((1.0 / (s - z.rho) for z in disk), 0j)
                + dirichlet_sum(s, x, "plain")
                + sum((near_term(z.rho, s, x) for z in disk), 0j)
                + sum((complex(zero_term(z.rho, s, x)) for z in far_A), 0j)
            )
            lhs = abs(total)
            xs = x ** (0.5 + a - sigma)
            right = sum(
                (-1.0 / (s1 - z.rho)).real
                for z in zs
                if abs(t - z.gamma) <= 1.0 and abs(s1 - z.rho) > dx and z.beta >= 0.5 + a + dx
            )
            branches = {"remainder": lhs, "multiplier_term": 2.0 * xs * abs(bracket), "error_term": xs * (math.log(t) + right)}
            bound = branches["multiplier_term"] + branches["error_term"]
            flags.append("multiplier_existential_envelope_only")
    return BoundCheckReport(lemma_id, float(lhs), float(bound), _ratio(float(lhs), float(bound)), branches, inputs, tuple(flags))
