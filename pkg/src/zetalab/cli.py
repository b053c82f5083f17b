"""zetalab command line.

Exit codes:
  0   success
  1   numerical failure not covered below (e.g. branch tracking)
  2   zero scan could not be certified
  3   a ratio exceeded its frozen baseline, or the explicit-formula identity failed
  4   a hypothesis of the checked statement does not hold
  5   the SIZDC inequality is violated somewhere on the grid
  64  usage error: bad flags, out-of-range input, unreadable or uncovered catalog
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import key_for, load_baselines, within_baseline
from .errors import (
    CertificationError,
    DomainError,
    FormatError,
    HypothesisError,
    NearZeroError,
    UncertifiedRangeError,
    ZetalabError,
)
from .explicit import dirichlet_sum, lemma1_rhs
from .report import dumps_csv, dumps_json
from .sizdc import DEFAULT_PARAMS, GRAMMAR, SizdcParams, check_sizdc, rh_case
from .verify import (
    LEMMA_IDS,
    LittlewoodScan,
    check_proof_bound,
    littlewood_scan,
    verify_corollary,
    verify_theorem1,
    verify_theorem2,
)
from .zeros import NontrivialZero, ZeroCatalog, inject_synthetic, load_catalog, save_catalog, scan_zeros

EXIT_OK, EXIT_FAIL, EXIT_CERT, EXIT_BASELINE, EXIT_HYPOTHESIS, EXIT_SIZDC, EXIT_USAGE = 0, 1, 2, 3, 4, 5, 64
CACHE_ENV = "ZETALAB_ZERO_CACHE"
LEMMA1_SLACK = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _grid(text: str) -> tuple[int, int | None]:
    parts = text.split(",")
    try:
        nT = int(parts[0])
        nS = int(parts[1]) if len(parts) > 1 and parts[1] else None
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected nT[,nS], got {text!r}") from None
    if nT < 1 or (nS is not None and nS < 1) or len(parts) > 2:
        raise argparse.ArgumentTypeError(f"expected positive nT[,nS], got {text!r}")
    return nT, nS


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zetalab", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"zetalab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    z = sub.add_parser("zeros", help="scan and certify zeros, write the cache file")
    z.add_argument("--from", dest="t0", type=float, required=True, help="lower height, 14 <= FROM < TO")
    z.add_argument("--to", dest="t1", type=float, required=True, help="upper height, TO <= 1e6")
    z.add_argument("--out", type=Path, required=True, help="zero cache file to write")
    z.add_argument("--workers", type=int, default=1, help="threads for Z evaluation (>= 1); output does not depend on it")

    v = sub.add_parser("verify", help="run one decomposition, identity or proof-bound check and write a JSON report")
    v.add_argument(
        "--what",
        required=True,
        help="lemma1 | theorem1 | theorem2 | corollary | bound:<id> with id in " + ", ".join(LEMMA_IDS),
    )
    v.add_argument("--t", type=float, required=True, help="height, t >= 14 and at least 1e-3 from any ordinate")
    v.add_argument("--x", type=float, help="smoothing length, 3 <= x <= min(t^2, 1000); theorem1 also x <= e^Psi(t/2)")
    v.add_argument("--sigma", type=float, help="real part; 1/2 <= sigma <= 2 for theorems, [0.4, 3] for lemma1")
    v.add_argument("--a", type=float, help="theorem2 and bound checks: 1/Psi(t/2) <= a <= 1")
    v.add_argument("--eps0", type=float, help="corollary: 0 < eps0 < 1")
    v.add_argument("--cutoff", type=float, default=1000.0, help="lemma1: zero-sum cutoff, t + 1 < cutoff <= catalog T1 (default 1000)")
    v.add_argument("--zeros", type=Path, help=f"zero cache file (default ${CACHE_ENV}); must cover the window the check needs")
    v.add_argument("--sizdc", default=DEFAULT_PARAMS, help=f"SIZDC parameters, {GRAMMAR} (default {DEFAULT_PARAMS})")
    v.add_argument("--synthetic", type=Path, help="file of synthetic zeros 'gamma beta [multiplicity]' to inject")
    v.add_argument("--json", type=Path, help="report destination (default stdout)")

    s = sub.add_parser("sizdc", help="check the SIZDC inequality on a (T, sigma) grid and write CSV")
    grp = s.add_mutually_exclusive_group()
    grp.add_argument("--params", help=f"SIZDC parameters, {GRAMMAR} (default {DEFAULT_PARAMS})")
    grp.add_argument("--rh-case", action="store_true", help="volume v = zero with default l, Phi, Psi")
    s.add_argument("--zeros", type=Path, help=f"zero cache file (default ${CACHE_ENV}); must cover [FROM, TO + max l]")
    s.add_argument("--from", dest="t0", type=float, required=True, help="first grid height, >= 14")
    s.add_argument("--to", dest="t1", type=float, required=True, help="last grid height, >= FROM")
    s.add_argument("--grid", type=_grid, default=(50, None), help="nT[,nS]: heights and max sigma steps (default 50)")
    s.add_argument("--synthetic", type=Path, help="file of synthetic zeros 'gamma beta [multiplicity]' to inject")
    s.add_argument("--random-synthetic", type=int, default=0, metavar="N", help="inject N random off-line zeros in [FROM, TO]")
    s.add_argument("--seed", type=int, default=0, help="seed for --random-synthetic")
    s.add_argument("--csv", type=Path, help="report destination (default stdout)")

    c = sub.add_parser("scan", help="Littlewood-ratio scan of log|zeta(1/2+it)| and S(t), written as CSV")
    c.add_argument("--littlewood", action="store_true", required=True, help="the scan kind (only one is available)")
    c.add_argument("--t-min", type=float, required=True, help="first height, >= 15 (catalog must cover t_min - 1)")
    c.add_argument("--t-max", type=float, required=True, help="last height, >= t_min (catalog must cover t_max + 1)")
    c.add_argument("--n", type=int, default=200, help="number of grid points (>= 1)")
    c.add_argument("--eps0", type=float, default=0.1, help="corollary parameter, echoed in the report (0 < eps0 < 1)")
    c.add_argument("--zeros", type=Path, help=f"zero cache file (default ${CACHE_ENV})")
    c.add_argument("--csv", type=Path, help="destination (default stdout)")
    return p


def _catalog(path: Path | None) -> ZeroCatalog:
    if path is None:
        env = os.environ.get(CACHE_ENV)
        if not env:
            raise UsageError(f"no --zeros given and ${CACHE_ENV} is unset")
        path = Path(env)
    if not path.exists():
        raise UsageError(f"zero cache {path} does not exist")
    return load_catalog(path)


def _read_synthetic(path: Path) -> list[NontrivialZero]:
    out = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        cols = line.split()
        try:
            if len(cols) not in (2, 3):
                raise ValueError(f"expected 'gamma beta [multiplicity]', got {len(cols)} columns")
            mult = int(cols[2]) if len(cols) == 3 else 1
            out.append(NontrivialZero(float(cols[0]), float(cols[1]), mult, "synthetic"))
        except (ValueError, DomainError) as exc:
            raise FormatError(str(exc), line=lineno) from None
    return out


def _emit(text: str, dest: Path | None) -> None:
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.write_text(text)


def _need(args, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--what {args.what} needs {', '.join(missing)}")


def _refuse(args, *names: str) -> None:
    given = [f"--{n}" for n in names if getattr(args, n) is not None]
    if given:
        raise UsageError(f"--what {args.what} does not take {', '.join(given)}")


def cmd_zeros(args) -> int:
    if not (args.t0 < args.t1):
        raise UsageError(f"--from {args.t0:g} must be below --to {args.t1:g}")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    cat = scan_zeros(args.t0, args.t1, workers=args.workers)
    save_catalog(cat, args.out)
    print(f"certified {len(cat)} zeros on [{args.t0:g}, {args.t1:g}] -> {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    what = args.what
    if what not in ("lemma1", "theorem1", "theorem2", "corollary") and not (
        what.startswith("bound:") and what[6:] in LEMMA_IDS
    ):
        raise UsageError(f"unknown --what {what!r}")
    try:
        params = SizdcParams.parse(args.sizdc)
    except FormatError as exc:
        raise UsageError(f"bad --sizdc: {exc}") from None
    cat = _catalog(args.zeros)
    if args.synthetic:
        cat = inject_synthetic(cat, _read_synthetic(args.synthetic))
    baselines = load_baselines()
    ok = True
    if what == "lemma1":
        _need(args, "x", "sigma")
        _refuse(args, "a", "eps0")
        s = complex(args.sigma, args.t)
        res = lemma1_rhs(s, args.x, cat, args.cutoff)
        lhs = dirichlet_sum(s, args.x, "plain")
        resid = abs(lhs - res.value)
        tol = res.tail_bound + res.eval_error + LEMMA1_SLACK
        ok = resid <= tol
        report = {
            "what": "lemma1", "s": s, "x": args.x, "cutoff": args.cutoff, "lhs_dirichlet": lhs,
            "rhs": res.value, "abs_residual": resid, "tail_bound": res.tail_bound,
            "eval_error": res.eval_error, "tolerance": tol, "identity_holds": ok,
            "zeros_used": res.zeros_used, "parts": res.parts, "catalog_id": cat.fingerprint,
        }  # fmt: skip
    elif what in ("theorem1", "theorem2"):
        _need(args, "x", "sigma", *(("a",) if what == "theorem2" else ()))
        _refuse(args, "eps0", *(("a",) if what == "theorem1" else ()))
        if what == "theorem1":
            report = verify_theorem1(args.t, args.x, args.sigma, cat, params)
        else:
            report = verify_theorem2(args.t, args.x, args.a, args.sigma, cat, params)
        if not cat.hypothesis_mode:
            ok = within_baseline(report.ratio, key_for(what, report.case), baselines)
    elif what == "corollary":
        _need(args, "eps0")
        _refuse(args, "a", "sigma")
        res_c = verify_corollary(args.t, args.eps0, cat, x=args.x)
        report = res_c
        if not cat.hypothesis_mode:
            ok = within_baseline(res_c.report.ratio, "corollary", baselines)
    else:
        lid = what[6:]
        _need(args, "x", "a", "sigma")
        _refuse(args, "eps0")
        report = check_proof_bound(lid, args.t, args.x, args.a, args.sigma, cat, params)
        if not cat.hypothesis_mode:
            ok = within_baseline(report.ratio, f"bound_{lid}", baselines)
    _emit(dumps_json(report), args.json)
    if not ok:
        print(f"zetalab: {what}: outside frozen baseline or identity tolerance", file=sys.stderr)
        return EXIT_BASELINE
    return EXIT_OK


def cmd_sizdc(args) -> int:
    if args.t1 < args.t0:
        raise UsageError("--to must not be below --from")
    if args.rh_case:
        params = rh_case()
    else:
        try:
            params = SizdcParams.parse(args.params or DEFAULT_PARAMS)
        except FormatError as exc:
            raise UsageError(f"bad --params: {exc}") from None
    cat = _catalog(args.zeros)
    extra: list[NontrivialZero] = []
    if args.synthetic:
        extra += _read_synthetic(args.synthetic)
    if args.random_synthetic:
        rng = np.random.default_rng(args.seed)
        g = np.sort(rng.uniform(args.t0, args.t1, args.random_synthetic))
        b = rng.uniform(0.55, 0.95, args.random_synthetic)
        extra += [NontrivialZero(round(float(gi), 12), round(float(bi), 12), 1, "synthetic") for gi, bi in zip(g, b)]
    if extra:
        cat = inject_synthetic(cat, extra)
    rep = check_sizdc(cat, params, (args.t0, args.t1), args.grid)
    rows = [(pt.T, pt.sigma, pt.lhs_count, pt.rhs_bound, int(pt.satisfied), pt.ratio) for pt in rep.grid]
    _emit(dumps_csv(("T", "sigma", "lhs_count", "rhs_bound", "satisfied", "ratio"), rows), args.csv)
    for note in rep.notes:
        print(f"note: {note}", file=sys.stderr)
    bad = rep.first_violation()
    if bad is not None:
        print(
            f"zetalab: SIZDC violated first at T={bad.T:.12g}, sigma={bad.sigma:.12g}: "
            f"{bad.lhs_count} > {bad.rhs_bound:.12g}",
            file=sys.stderr,
        )
        return EXIT_SIZDC
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.t_max < args.t_min:
        raise UsageError("--t-max must not be below --t-min")
    cat = _catalog(args.zeros)
    sc: LittlewoodScan = littlewood_scan(args.t_min, args.t_max, args.n, args.eps0, cat)
    _emit(dumps_csv(LittlewoodScan.CSV_HEADER, sc.csv_rows()), args.csv)
    moved = sum(r.repelled for r in sc.rows)
    if moved:
        print(f"note: {moved} grid points moved 2e-3 away from a zero ordinate (repelled column)", file=sys.stderr)
    b = load_baselines()
    if not (within_baseline(sc.max_littlewood_ratio, "littlewood_ratio", b) and within_baseline(sc.max_s_ratio, "s_ratio", b)):
        print("zetalab: scan maxima exceed frozen baselines", file=sys.stderr)
        return EXIT_BASELINE
    return EXIT_OK


_COMMANDS = {"zeros": cmd_zeros, "verify": cmd_verify, "sizdc": cmd_sizdc, "scan": cmd_scan}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CertificationError as exc:
        block = f" (Gram block {exc.block[0]:.9g}..{exc.block[1]:.9g})" if exc.block else ""
        print(f"zetalab: certification failed: {exc}{block}", file=sys.stderr)
        return EXIT_CERT
    except HypothesisError as exc:
        print(f"zetalab: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (UsageError, FormatError, DomainError, UncertifiedRangeError, NearZeroError, OSError) as exc:
        print(f"zetalab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ZetalabError as exc:
        print(f"zetalab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
