"""Short-interval zero density condition: parameter functions, the grid check,
and the RH / Lindelof special cases."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .errors import DomainError, FormatError, MonotonicityError, UncertifiedRangeError

if TYPE_CHECKING:
    from .zeros import ZeroCatalog

SPEC_T_MIN = 14.0
GRID_T_MAX = 1e6
GRID_POINTS = 100
SIGMA_CAP = 1.0

# family -> takes an argument
_FAMILIES = {
    "const": True,
    "zero": False,
    "one": False,
    "power_log": True,
    "recip_loglog": False,
    "scaled_loglog": True,
    "recip": True,
}


@dataclass(frozen=True)
class FunctionSpec:
    family: str
    arg: float | None = None
    t_min: float = SPEC_T_MIN

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {', '.join(_FAMILIES)}")
        if _FAMILIES[self.family] and self.arg is None:
            raise DomainError(f"family {self.family!r} needs an argument")
        if not _FAMILIES[self.family] and self.arg is not None:
            raise DomainError(f"family {self.family!r} takes no argument")

    def __call__(self, t: float) -> float:
        return eval_spec(self, t)

    @property
    def monotonicity(self) -> str:
        """'constant', 'increasing' or 'decreasing' on t >= t_min."""
        if self.family == "recip_loglog":
            return "decreasing"
        c = self.arg or 0.0
        if self.family in ("const", "zero", "one") or c == 0.0:
            return "constant"
        rising = c > 0 if self.family in ("power_log", "scaled_loglog") else c < 0
        return "increasing" if rising else "decreasing"

    def __str__(self) -> str:
        return self.family if self.arg is None else f"{self.family}:{self.arg:g}"


def eval_spec(f: FunctionSpec, t: float) -> float:
    """Evaluate at |t| (the functions are even)."""
    t = abs(float(t))
    if t < f.t_min:
        raise DomainError(f"{f} evaluated at |t|={t} below t_min={f.t_min}")
    fam, c = f.family, f.arg
    if fam == "const":
        return float(c)
    if fam == "zero":
        return 0.0
    if fam == "one":
        return 1.0
    if fam == "power_log":
        return math.log(t) ** c
    if fam == "recip_loglog":
        return 1.0 / math.log(math.log(t))
    if fam == "scaled_loglog":
        return c * math.log(math.log(t))
    return c / t  # recip


def parse_spec(text: str) -> FunctionSpec:
    fam, sep, arg = text.strip().partition(":")
    try:
        value = float(arg) if sep else None
    except ValueError:
        raise FormatError(f"bad numeric argument in {text!r}") from None
    try:
        return FunctionSpec(fam, value)
    except DomainError as exc:
        raise FormatError(str(exc)) from None


GRAMMAR = "key=family[:arg] joined by ';' with keys l, v, phi, psi and families " + ", ".join(_FAMILIES)


@dataclass(frozen=True)
class SizdcParams:
    l: FunctionSpec
    v: FunctionSpec
    phi: FunctionSpec
    psi: FunctionSpec
    notes: tuple[str, ...] = ()

    @classmethod
    def parse(cls, text: str) -> SizdcParams:
        parts: dict[str, FunctionSpec] = {}
        for item in text.split(";"):
            if not item.strip():
                continue
            key, sep, value = item.partition("=")
            key = key.strip().lower()
            if not sep or key not in ("l", "v", "phi", "psi"):
                raise FormatError(f"bad item {item!r}; grammar: {GRAMMAR}")
            if key in parts:
                raise FormatError(f"duplicate key {key!r}")
            parts[key] = parse_spec(value)
        missing = [k for k in ("l", "v", "phi", "psi") if k not in parts]
        if missing:
            raise FormatError(f"missing {', '.join(missing)}; grammar: {GRAMMAR}")
        return cls(parts["l"], parts["v"], parts["phi"], parts["psi"])

    def __str__(self) -> str:
        return f"l={self.l};v={self.v};phi={self.phi};psi={self.psi}"

    def validate(self, t_max: float = GRID_T_MAX, n: int = GRID_POINTS) -> list[str]:
        """Hypothesis violations on a log grid over [t_min, t_max]; empty when all hold."""
        out = []
        for name, f, lower, direction in (
            ("l", self.l, 0.0, -1),
            ("v", self.v, 0.0, -1),
            ("phi", self.phi, 3.0, 1),
            ("psi", self.psi, 3.0, 1),
        ):
            grid = np.geomspace(f.t_min, t_max, n)
            vals = np.array([f(t) for t in grid])
            if name in ("l", "v"):
                if np.any(vals < lower):
                    out.append(f"{name}={f} is negative on the grid")
            elif np.any(vals <= lower):
                k = int(np.argmax(vals <= lower))
                out.append(f"{name}={f} is not greater than three (value {vals[k]:.6g} at t={grid[k]:.6g})")
            steps = np.diff(vals) * direction
            if np.any(steps < -1e-15 * np.maximum(1.0, np.abs(vals[1:]))):
                kind = "weakly decreasing" if direction < 0 else "weakly increasing"
                out.append(f"{name}={f} is not {kind} on the grid")
        return out


DEFAULT_PARAMS = "l=one;v=one;phi=const:4;psi=const:10"


def corollary_params(eps0: float) -> SizdcParams:
    return SizdcParams(
        FunctionSpec("recip_loglog"),
        FunctionSpec("one"),
        FunctionSpec("power_log", eps0),
        FunctionSpec("scaled_loglog", eps0),
    )


def rh_case(
    l: FunctionSpec | None = None, phi: FunctionSpec | None = None, psi: FunctionSpec | None = None
) -> SizdcParams:
    """Volume zero: the condition then forbids any zero right of the domain floor."""
    return SizdcParams(
        l or FunctionSpec("one"),
        FunctionSpec("zero"),
        phi or FunctionSpec("const", 4.0),
        psi or FunctionSpec("const", 10.0),
    )


def lindelof_case(
    v_decay: FunctionSpec, phi_const: float = 4.0, psi: FunctionSpec | None = None
) -> SizdcParams:
    """Unit length, constant density, and a volume that should decay to zero."""
    grid = np.geomspace(v_decay.t_min, GRID_T_MAX, GRID_POINTS)
    vals = np.array([v_decay(t) for t in grid])
    if np.any(np.diff(vals) > 0) or np.any(vals < 0):
        raise MonotonicityError(f"v={v_decay} is not nonnegative and weakly decreasing on the grid")
    notes = ()
    if v_decay.monotonicity == "constant" and vals[0] != 0.0:
        notes = (f"v={v_decay} is constant, not a decaying o(1) surrogate",)
    return SizdcParams(FunctionSpec("one"), v_decay, FunctionSpec("const", phi_const), psi or FunctionSpec("const", 10.0), notes)


# ---------------------------------------------------------------------------
# Grid check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SizdcPoint:
    T: float
    sigma: float
    lhs_count: int
    rhs_bound: float
    satisfied: bool
    ratio: float


@dataclass(frozen=True)
class SizdcReport:
    params: str
    interval: tuple[float, float]
    grid: tuple[SizdcPoint, ...]
    domain_floor: tuple[float, ...]
    max_ratio: float
    satisfied: bool
    hypothesis_mode: bool
    catalog_id: str
    notes: tuple[str, ...] = field(default=())

    def first_violation(self) -> SizdcPoint | None:
        return next((p for p in self.grid if not p.satisfied), None)


def sizdc_rhs(params: SizdcParams, T: float, sigma: float) -> float:
    return params.l(T) * params.v(T) * math.log(T) * params.phi(T) ** (0.5 - sigma)


def sizdc_ratio(lhs: int, rhs: float) -> float:
    if lhs == 0:
        return 0.0
    if rhs <= 0.0:
        return math.inf
    return lhs / rhs


def sigma_grid(params: SizdcParams, T: float, n_sigma: int | None = None, step: float | None = None) -> tuple[list[float], bool]:
    """Grid from the domain floor 1/2 + 1/Psi(T) up to 1 in steps of 1/log Phi(T).

    Returns (grid, floor_above_cap); a floor above 1 yields the floor alone."""
    psi = params.psi(T)
    floor = 0.5 + 1.0 / psi if psi > 0 else math.inf
    if not math.isfinite(floor):
        raise DomainError(f"Psi({T})={psi} leaves no admissible sigma")
    if floor > SIGMA_CAP:
        return [floor], True
    if step is None:
        phi = params.phi(T)
        step = 1.0 / math.log(phi) if phi > 1.0 else SIGMA_CAP - floor
    out, j = [], 0
    while True:
        s = floor + j * step
        if s > SIGMA_CAP + 1e-12 or (n_sigma is not None and j >= n_sigma):
            break
        out.append(min(s, SIGMA_CAP))
        if step <= 0:
            break
        j += 1
    return out, False


def _count(catalog: ZeroCatalog, sigma: float, T: float, h: float) -> int:
    from .zeros import CountQuery, count_short_interval

    if h > 0:
        return count_short_interval(catalog, CountQuery(sigma, T, h))
    # zero length: zeros sitting exactly at height T
    k = np.flatnonzero((catalog.gammas == T) & (catalog.betas >= sigma))
    return int(catalog.multiplicities[k].sum())


def check_sizdc(
    catalog: ZeroCatalog,
    params: SizdcParams,
    interval: tuple[float, float],
    grid_density: tuple[int, int | None] = (50, None),
    sigma_step: float | None = None,
) -> SizdcReport:
    """Evaluate N(sigma, T, l(T)) <= l(T) v(T) log T Phi(T)^{1/2 - sigma} on a
    (T, sigma) grid. T is spaced linearly over the interval."""
    Ta, Tb = map(float, interval)
    if Tb < Ta:
        raise DomainError(f"empty interval [{Ta}, {Tb}]")
    n_T, n_sigma = grid_density
    Ts = np.linspace(Ta, Tb, n_T) if n_T > 1 else np.array([Ta])
    max_l = max(params.l(T) for T in Ts)
    if not catalog.hypothesis_mode and not catalog.covers(Ta, Tb + max_l):
        raise UncertifiedRangeError(f"[{Ta}, {Tb + max_l}] not inside certified range {catalog.certified_range}")
    notes = list(params.notes)
    notes.append(f"sigma grid capped at {SIGMA_CAP:g}: no zero has beta >= 1")
    notes.extend(params.validate())
    points, floors = [], []
    above = 0
    for T in Ts:
        T = float(T)
        sigmas, floor_high = sigma_grid(params, T, n_sigma, sigma_step)
        above += floor_high
        floors.append(sigmas[0])
        h = params.l(T)
        for s in sigmas:
            lhs = _count(catalog, s, T, h)
            rhs = sizdc_rhs(params, T, s)
            points.append(SizdcPoint(T, s, lhs, rhs, lhs <= rhs, sizdc_ratio(lhs, rhs)))
    if above:
        notes.append(f"domain floor above {SIGMA_CAP:g} at {above} of {len(Ts)} heights; single point at the floor")
    max_ratio = max((p.ratio for p in points), default=0.0)
    return SizdcReport(
        str(params),
        (Ta, Tb),
        tuple(points),
        tuple(floors),
        max_ratio,
        all(p.satisfied for p in points),
        catalog.hypothesis_mode,
        catalog.fingerprint,
        tuple(notes),
    )
