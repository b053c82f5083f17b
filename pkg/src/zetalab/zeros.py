"""Nontrivial zeros: scanning, Turing certification, counting and the cache file.

A scan samples Z(t) at Gram points, groups them into Gram blocks (runs
between consecutive good Gram points), refines each block until it shows
as many sign changes as its length, and then closes the count with Turing's
method:

* an upper bound N(g_B) <= B + 1 from the blocks following g_B,
* a lower bound N(g_A) >= A + 1 from the blocks preceding g_A, or, for
  scans starting low, from counting sign changes upward from t = 14
  (zeta has no zeros with 0 < gamma <= 14).

Both bounds use the parity of S at good Gram points (S(g_n) is even there)
and Trudgian's estimate |int_{t1}^{t2} S(t) dt| <= 2.067 + 0.059 log t2,
valid for t2 > t1 > 168 pi.
"""

from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Literal

import numpy as np

from .errors import CertificationError, DomainError, FormatError, OrderingError, UncertifiedRangeError
from .zeta import T_MAX, T_MIN, gram_index_below, gram_point, z_array

Provenance = Literal["computed", "synthetic"]

ANCHOR_HEIGHT = 14.0
ANCHOR_LIMIT = 1000.0
TURING_FLOOR = 168.0 * math.pi
REFINE_DOUBLINGS = 6
LOCALIZATION_WIDTH = 1e-9
STORED_DECIMALS = 12
HEADER_TAG = "zetalab-zeros v1"

_TURING_MARGIN = 16
_TURING_ATTEMPTS = 4
_Z_CHUNK = 4096


@dataclass(frozen=True)
class NontrivialZero:
    gamma: float
    beta: float = 0.5
    multiplicity: int = 1
    provenance: Provenance = "computed"

    def __post_init__(self) -> None:
        if not (0.0 < self.beta < 1.0):
            raise DomainError(f"beta={self.beta} outside (0, 1)")
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise DomainError(f"gamma={self.gamma} must be positive")
        if self.multiplicity < 1:
            raise DomainError("multiplicity must be >= 1")
        if self.provenance not in ("computed", "synthetic"):
            raise DomainError(f"unknown provenance {self.provenance!r}")
        if self.provenance == "computed" and (self.beta != 0.5 or self.multiplicity != 1):
            raise DomainError("computed zeros are simple and lie on the critical line")

    @property
    def rho(self) -> complex:
        return complex(self.beta, self.gamma)


@dataclass(frozen=True)
class ZeroCatalog:
    """Zeros with ascending ordinates, complete on ``certified_range``.

    Conjugate zeros beta - i gamma are implied and never stored. A catalog
    holding any synthetic zero is in hypothesis mode: its counts describe a
    hypothetical zero set, not zeta."""

    zeros: tuple[NontrivialZero, ...]
    certified_range: tuple[float, float]
    gammas: np.ndarray = field(init=False, repr=False, compare=False)
    betas: np.ndarray = field(init=False, repr=False, compare=False)
    multiplicities: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        zs = tuple(self.zeros)
        object.__setattr__(self, "zeros", zs)
        lo, hi = self.certified_range
        object.__setattr__(self, "certified_range", (float(lo), float(hi)))
        if not lo < hi:
            raise DomainError("certified range must have T0 < T1")
        g = np.array([z.gamma for z in zs], dtype=float)
        if g.size > 1 and not np.all(np.diff(g) > 0):
            k = int(np.argmin(np.diff(g) > 0))
            raise OrderingError(f"ordinates not strictly ascending at {g[k]!r}, {g[k + 1]!r}")
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "betas", np.array([z.beta for z in zs], dtype=float))
        object.__setattr__(self, "multiplicities", np.array([z.multiplicity for z in zs], dtype=np.int64))

    def __len__(self) -> int:
        return len(self.zeros)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZeroCatalog):
            return NotImplemented
        return self.zeros == other.zeros and self.certified_range == other.certified_range

    def __hash__(self) -> int:
        return hash((self.zeros, self.certified_range))

    @property
    def provenance_mix(self) -> frozenset[str]:
        return frozenset(z.provenance for z in self.zeros)

    @property
    def hypothesis_mode(self) -> bool:
        return "synthetic" in self.provenance_mix

    @property
    def anchored(self) -> bool:
        """True when the catalog is complete all the way down from height 0."""
        return self.certified_range[0] <= ANCHOR_HEIGHT

    def covers(self, lo: float, hi: float) -> bool:
        t0, t1 = self.certified_range
        return hi <= t1 and (lo >= t0 or self.anchored)

    def ordinate_distance(self, t: float) -> float:
        if not len(self.zeros):
            return math.inf
        t = abs(t)
        k = int(np.searchsorted(self.gammas, t))
        best = math.inf
        for j in (k - 1, k):
            if 0 <= j < len(self.gammas):
                best = min(best, abs(t - self.gammas[j]))
        return best

    def zeros_between(self, lo: float, hi: float) -> list[NontrivialZero]:
        i = int(np.searchsorted(self.gammas, lo, side="left"))
        j = int(np.searchsorted(self.gammas, hi, side="right"))
        return list(self.zeros[i:j])

    @cached_property
    def fingerprint(self) -> str:
        """Short digest of the serialized catalog, used to tag reports."""
        return hashlib.sha256(dumps_catalog(self).encode("ascii")).hexdigest()[:16]

    def computed_only(self) -> ZeroCatalog:
        return ZeroCatalog(tuple(z for z in self.zeros if z.provenance == "computed"), self.certified_range)


@dataclass(frozen=True)
class CountQuery:
    sigma: float
    T: float
    h: float

    def __post_init__(self) -> None:
        if self.sigma < 0.5:
            raise DomainError("N(sigma, T, h) is defined here for sigma >= 1/2")
        if not self.h > 0:
            raise DomainError("h must be positive")


def count_short_interval(catalog: ZeroCatalog, q: CountQuery) -> int:
    """N(sigma, T, h): zeros with beta >= sigma and T <= gamma <= T + h, with multiplicity."""
    if not catalog.hypothesis_mode and not catalog.covers(q.T, q.T + q.h):
        raise UncertifiedRangeError(
            f"[{q.T}, {q.T + q.h}] not inside certified range {catalog.certified_range}"
        )
    g = catalog.gammas
    i = int(np.searchsorted(g, q.T, side="left"))
    j = int(np.searchsorted(g, q.T + q.h, side="right"))
    sel = catalog.betas[i:j] >= q.sigma
    return int(catalog.multiplicities[i:j][sel].sum())


def n_of_t(catalog: ZeroCatalog, T: float) -> int:
    """N(T): zeros with 0 < gamma <= T, with multiplicity."""
    if T > catalog.certified_range[1]:
        raise UncertifiedRangeError(f"T={T} beyond certified T1={catalog.certified_range[1]}")
    if not catalog.anchored:
        raise UncertifiedRangeError("catalog is not complete from height 0; N(T) unavailable")
    j = int(np.searchsorted(catalog.gammas, T, side="right"))
    return int(catalog.multiplicities[:j].sum())


def inject_synthetic(catalog: ZeroCatalog, zeros: Iterable[NontrivialZero]) -> ZeroCatalog:
    """Merge synthetic zeros into a catalog; the result is in hypothesis mode.

    A synthetic zero at an existing ordinate with the same beta raises that
    zero's multiplicity; a different beta at the same ordinate is an
    OrderingError."""
    merged: dict[float, NontrivialZero] = {z.gamma: z for z in catalog.zeros}
    for z in zeros:
        if z.provenance != "synthetic":
            z = NontrivialZero(z.gamma, z.beta, z.multiplicity, "synthetic")
        old = merged.get(z.gamma)
        if old is None:
            merged[z.gamma] = z
        elif old.beta == z.beta:
            merged[z.gamma] = NontrivialZero(z.gamma, z.beta, old.multiplicity + z.multiplicity, "synthetic")
        else:
            raise OrderingError(f"ordinate {z.gamma} already carries a zero with beta={old.beta}")
    ordered = tuple(merged[g] for g in sorted(merged))
    return ZeroCatalog(ordered, catalog.certified_range)


# ---------------------------------------------------------------------------
# Cache file
# ---------------------------------------------------------------------------


def _fixed(x: float) -> str:
    return f"{x:.{STORED_DECIMALS}f}"


def dumps_catalog(catalog: ZeroCatalog) -> str:
    t0, t1 = catalog.certified_range
    lines = [f"{HEADER_TAG}; certified={_fixed(t0)}:{_fixed(t1)}; count={len(catalog)}"]
    for z in catalog.zeros:
        lines.append(f"{_fixed(z.gamma)} {_fixed(z.beta)} {z.multiplicity} {z.provenance}")
    return "\n".join(lines) + "\n"


def save_catalog(catalog: ZeroCatalog, path: str | os.PathLike) -> None:
    Path(path).write_text(dumps_catalog(catalog), encoding="ascii")


def loads_catalog(text: str) -> ZeroCatalog:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty file", line=1)
    parts = [p.strip() for p in lines[0].split(";")]
    if parts[0] != HEADER_TAG:
        raise FormatError(f"expected header tag {HEADER_TAG!r}, got {parts[0]!r}", line=1)
    fields: dict[str, str] = {}
    for p in parts[1:]:
        key, sep, value = p.partition("=")
        if not sep:
            raise FormatError(f"malformed header field {p!r}", line=1)
        if key not in ("certified", "count"):
            raise FormatError(f"unknown header field {key!r}", line=1)
        fields[key] = value
    for key in ("certified", "count"):
        if key not in fields:
            raise FormatError(f"missing header field {key!r}", line=1)
    try:
        lo, hi = (float(v) for v in fields["certified"].split(":"))
        count = int(fields["count"])
    except ValueError as exc:
        raise FormatError(f"bad header value: {exc}", line=1) from None
    zeros = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cols = line.split()
        if len(cols) != 4:
            raise FormatError(f"expected 4 columns, got {len(cols)}", line=lineno)
        try:
            gamma, beta, mult = float(cols[0]), float(cols[1]), int(cols[2])
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno) from None
        if not (0.0 < beta < 1.0):
            raise FormatError(f"beta={beta} outside (0, 1)", line=lineno)
        try:
            zeros.append(NontrivialZero(gamma, beta, mult, cols[3]))  # type: ignore[arg-type]
        except DomainError as exc:
            raise FormatError(str(exc), line=lineno) from None
        if len(zeros) > 1 and zeros[-1].gamma <= zeros[-2].gamma:
            raise FormatError("ordinates not strictly ascending", line=lineno)
    if len(zeros) != count:
        raise FormatError(f"header count={count} but {len(zeros)} zero lines", line=1)
    try:
        return ZeroCatalog(tuple(zeros), (lo, hi))
    except DomainError as exc:
        raise FormatError(str(exc), line=1) from None


def load_catalog(path: str | os.PathLike) -> ZeroCatalog:
    return loads_catalog(Path(path).read_text(encoding="ascii"))


# ---------------------------------------------------------------------------
# Scanning
# ---------------------------------------------------------------------------


def _z(t: np.ndarray, workers: int) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if workers <= 1 or t.size <= _Z_CHUNK:
        return z_array(t)[0]
    chunks = [t[i : i + _Z_CHUNK] for i in range(0, t.size, _Z_CHUNK)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.concatenate([r[0] for r in pool.map(z_array, chunks)])


def _s1_bound(t2: float) -> float:
    return 2.067 + 0.059 * math.log(t2)


@dataclass
class _Block:
    a: int  # index of the opening good Gram point
    b: int  # index of the closing good Gram point
    x: np.ndarray  # sample abscissae, ascending, x[0] = g_a, x[-1] = g_b
    z: np.ndarray

    def sign_changes(self) -> int:
        return int(np.count_nonzero(np.signbit(self.z[1:]) != np.signbit(self.z[:-1])))


def _gram_blocks(idx: np.ndarray, pos: np.ndarray, zg: np.ndarray, workers: int) -> list[_Block]:
    good = np.flatnonzero(np.where(idx % 2 == 0, 1.0, -1.0) * zg > 0)
    blocks = []
    for ga, gb in zip(good[:-1], good[1:]):
        blocks.append(_Block(int(idx[ga]), int(idx[gb]), pos[ga : gb + 1].copy(), zg[ga : gb + 1].copy()))
    # densify deficient blocks, all at once per doubling level
    for level in range(1, REFINE_DOUBLINGS + 1):
        short = [bl for bl in blocks if bl.sign_changes() < bl.b - bl.a]
        if not short:
            break
        k = 2**level
        new_x = []
        for bl in short:
            grams = bl.x if level == 1 else bl.grams  # type: ignore[attr-defined]
            bl.grams = grams  # type: ignore[attr-defined]
            frac = np.arange(1, k) / k
            inner = (grams[:-1, None] + np.diff(grams)[:, None] * frac[None, :]).ravel()
            new_x.append(inner)
        vals = _z(np.concatenate(new_x), workers)
        off = 0
        for bl, nx in zip(short, new_x):
            nz = vals[off : off + nx.size]
            off += nx.size
            x = np.concatenate([bl.x, nx])
            z = np.concatenate([bl.z, nz])
            x, keep = np.unique(x, return_index=True)
            bl.x, bl.z = x, z[keep]
    for bl in blocks:
        if bl.sign_changes() < bl.b - bl.a:
            raise CertificationError(
                f"Gram block [g_{bl.a}, g_{bl.b}] = [{bl.x[0]:.6f}, {bl.x[-1]:.6f}] shows "
                f"{bl.sign_changes()} sign changes, needs {bl.b - bl.a} (after {2**REFINE_DOUBLINGS}x sampling)",
                block=(float(bl.x[0]), float(bl.x[-1])),
            )
    return blocks


def _shifts(bl: _Block, grams: dict[int, float]) -> dict[int, float]:
    """h_j = p_j - g_j for the bad Gram points inside an exactly-counted block,
    where p_j is the sample closest to g_j carrying the sign (-1)^j."""
    signs = np.signbit(bl.z)
    run = np.concatenate([[0], np.cumsum(signs[1:] != signs[:-1])])
    out = {}
    for j in range(bl.a + 1, bl.b):
        cand = bl.x[run == j - bl.a]
        out[j] = float(cand[np.argmin(np.abs(cand - grams[j]))] - grams[j])
    return out


def _illinois(lo: np.ndarray, hi: np.ndarray, flo: np.ndarray, fhi: np.ndarray, workers: int):
    """Bracketed root refinement to width LOCALIZATION_WIDTH, then one secant step."""
    lo, hi, flo, fhi = lo.copy(), hi.copy(), flo.copy(), fhi.copy()
    last = np.zeros(lo.shape, dtype=np.int8)  # side retained last time: -1 lo, +1 hi
    for it in range(200):
        act = (hi - lo) > LOCALIZATION_WIDTH
        if not np.any(act):
            break
        a, b, fa, fb = lo[act], hi[act], flo[act], fhi[act]
        x = (a * fb - b * fa) / (fb - fa)
        w = b - a
        # once the estimate has settled, straddle it so that both ends collapse
        settled = (it >= 3) & (it % 3 == 0)
        if settled:
            x = np.where(x - a < b - x, x + 0.45 * LOCALIZATION_WIDTH, x - 0.45 * LOCALIZATION_WIDTH)
        bad = ~((x > a) & (x < b)) | ~np.isfinite(x)
        x = np.where(bad, 0.5 * (a + b), x)
        if it > 60:
            x = 0.5 * (a + b)
        fx = _z(x, workers)
        same_lo = np.signbit(fx) == np.signbit(fa)
        # Illinois: halve the retained endpoint's value when it is kept twice
        l_act = last[act]
        new_fa = np.where(same_lo, fx, np.where(l_act == -1, 0.5 * fa, fa))
        new_fb = np.where(~same_lo, fx, np.where(l_act == 1, 0.5 * fb, fb))
        new_a = np.where(same_lo, x, a)
        new_b = np.where(same_lo, b, x)
        last[act] = np.where(same_lo, 1, -1)
        lo[act], hi[act], flo[act], fhi[act] = new_a, new_b, new_fa, new_fb
        del w
    # flo/fhi may have been scaled by Illinois; use fresh values for the final secant step
    fl, fh = _z(lo, workers), _z(hi, workers)
    root = np.where(fh != fl, (lo * fh - hi * fl) / (fh - fl), 0.5 * (lo + hi))
    return np.clip(root, lo, hi), hi - lo


def _turing_upper(blocks: list[_Block], B: int, grams: dict[int, float], shifts: dict[int, float]) -> bool:
    """Certify N(g_B) <= B + 1 using blocks after g_B."""
    closing = [bl.b for bl in blocks if bl.a >= B]
    total = 0.0
    for end in closing:
        hs = sum(shifts[j] for j in range(B + 1, end) if j in shifts)
        D = grams[end] - grams[B]
        bound = 0.5 + (_s1_bound(grams[end]) + hs) / D
        total = bound
        if bound < 2.0:
            return True
    del total
    return False


def _turing_lower(blocks: list[_Block], A: int, grams: dict[int, float], shifts: dict[int, float]) -> bool:
    """Certify N(g_A) >= A + 1 using blocks before g_A."""
    opening = sorted((bl.a for bl in blocks if bl.b <= A), reverse=True)
    for start in opening:
        if grams[start] <= TURING_FLOOR:
            break
        hs = sum(shifts[j] for j in range(start + 1, A) if j in shifts)
        D = grams[A] - grams[start]
        steps = np.diff([grams[j] for j in range(start, A + 1)])
        # chord-versus-curve slack of the convex theta: theta'' <= 1/t
        eps = float(np.sum(steps**3)) / (12.0 * math.pi * grams[start])
        bound = -0.5 - (_s1_bound(grams[A]) - hs + eps) / D
        if bound > -2.0:
            return True
    return False


def scan_zeros(t_min: float, t_max: float, workers: int = 1) -> ZeroCatalog:
    """Locate and certify every zero with t_min <= gamma <= t_max.

    Raises CertificationError (carrying the offending Gram block) when a
    block cannot be resolved or Turing's bound does not close."""
    if not (T_MIN <= t_min < t_max <= T_MAX):
        raise DomainError(f"need {T_MIN} <= t_min < t_max <= {T_MAX:g}, got [{t_min}, {t_max}]")
    anchored = t_min < ANCHOR_LIMIT
    margin = _TURING_MARGIN
    for attempt in range(_TURING_ATTEMPTS):
        try:
            return _scan(t_min, t_max, anchored, margin, workers)
        except _TuringOpen as exc:
            if attempt == _TURING_ATTEMPTS - 1:
                raise CertificationError(str(exc), block=exc.block) from None
            margin *= 2
    raise AssertionError("unreachable")


class _TuringOpen(Exception):
    def __init__(self, message: str, block: tuple[float, float]):
        super().__init__(message)
        self.block = block


def _scan(t_min: float, t_max: float, anchored: bool, margin: int, workers: int) -> ZeroCatalog:
    hi_target = max(t_max, TURING_FLOOR + 1.0)
    j_hi = gram_index_below(hi_target) + 1 + margin
    if anchored:
        j_lo = 0
    else:
        j_lo = gram_index_below(t_min) - margin
    idx = np.arange(j_lo, j_hi + 1)
    pos = np.asarray(gram_point(idx), dtype=float)
    zg = _z(pos, workers)
    if anchored:
        # the anchor t = 14 plays the part of a good Gram point of index -1
        z14 = float(_z(np.array([ANCHOR_HEIGHT]), workers)[0])
        if not z14 < 0:
            raise CertificationError("Z(14) is expected to be negative", block=(ANCHOR_HEIGHT, float(pos[0])))
        idx = np.concatenate([[-1], idx])
        pos = np.concatenate([[ANCHOR_HEIGHT], pos])
        zg = np.concatenate([[z14], zg])
    grams = {int(i): float(p) for i, p in zip(idx, pos)}
    blocks = _gram_blocks(idx, pos, zg, workers)
    if not blocks:
        raise _TuringOpen("no good Gram points in range", (float(pos[0]), float(pos[-1])))

    goods = sorted({bl.a for bl in blocks} | {bl.b for bl in blocks})
    B = next((g for g in goods if grams[g] >= hi_target), None)
    if B is None:
        raise _TuringOpen("no good Gram point above the range", (float(pos[0]), float(pos[-1])))
    if anchored:
        A = -1
    else:
        below = [g for g in goods if grams[g] <= t_min]
        if not below:
            raise _TuringOpen("no good Gram point below the range", (float(pos[0]), t_min))
        A = below[-1]

    used = [bl for bl in blocks if A <= bl.a and bl.b <= B]
    found = sum(bl.sign_changes() for bl in used)
    if found != B - A:
        bad = next(bl for bl in used if bl.sign_changes() != bl.b - bl.a)
        raise CertificationError(
            f"found {found} sign changes between g_{A} and g_{B}, expected {B - A}",
            block=(float(bad.x[0]), float(bad.x[-1])),
        )
    shifts: dict[int, float] = {}
    for bl in blocks:
        if bl.sign_changes() == bl.b - bl.a:
            shifts.update(_shifts(bl, grams))
    if not _turing_upper(blocks, B, grams, shifts):
        raise _TuringOpen(f"Turing upper bound at g_{B}={grams[B]:.6f} does not close", (grams[B], float(pos[-1])))
    if not anchored and not _turing_lower(blocks, A, grams, shifts):
        raise _TuringOpen(f"Turing lower bound at g_{A}={grams[A]:.6f} does not close", (float(pos[0]), grams[A]))

    lo, hi, flo, fhi = [], [], [], []
    for bl in used:
        ch = np.flatnonzero(np.signbit(bl.z[1:]) != np.signbit(bl.z[:-1]))
        for k in ch:
            if bl.x[k + 1] >= t_min and bl.x[k] <= t_max:
                lo.append(bl.x[k])
                hi.append(bl.x[k + 1])
                flo.append(bl.z[k])
                fhi.append(bl.z[k + 1])
    if lo:
        roots, _ = _illinois(np.array(lo), np.array(hi), np.array(flo), np.array(fhi), workers)
    else:
        roots = np.empty(0)
    roots = np.round(roots, STORED_DECIMALS)
    kept = [float(r) for r in roots if t_min <= r <= t_max]
    zeros = tuple(NontrivialZero(g) for g in kept)
    return ZeroCatalog(zeros, (round(t_min, STORED_DECIMALS), round(t_max, STORED_DECIMALS)))
