"""Command-line entry point: ``deqlens analyze|generate|check-corollary|sweep``.

Exit codes: 0 analysis finished (whatever the verdict), 1 corollary domain
error, 2 invalid input, 3 solver failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from .config import AnalysisConfig
from .errors import ConvergenceFailure, DeqlensError, DomainError, MatrixError, MatrixMarketError
from .families import FamilyKind, FamilySpec, generate, spec_from_comments
from .mmio import read_matrix_market, write_matrix_market, dumps
from .quasinorms import profile
from .verdict import classify, corollary_family_check

log = logging.getLogger("deqlens")

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3

PREDICATE_COLUMNS = (
    "lemma_deq_sufficient",
    "lemma_undeq_bound",
    "theorem_form_A",
    "theorem_form_B",
    "intermediate_sqrt_s_bound",
    "corollary_family",
)
KEY_COLUMNS = ("family", "n", "d", "s", "seed")
SWEEP_COLUMNS = (
    KEY_COLUMNS
    + ("frobenius", "mu", "p_star", "inner_model", "abs_min", "abs_max", "kappa")
    + tuple(f"{p}_{part}" for p in PREDICATE_COLUMNS for part in ("lhs", "rhs", "holds"))
    + ("classification", "error")
)

FAMILY_NAMES = {
    "identity": FamilyKind.IDENTITY,
    "diag-power": FamilyKind.DIAG_POWER,
    "random-block": FamilyKind.RANDOM_BLOCK,
    "random-support": FamilyKind.RANDOM_SUPPORT,
}


def parse_real(text: str):
    """'4' -> 4, '9/2' -> Fraction(9, 2), '4.5' -> 4.5."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    if "/" in text:
        return Fraction(text)
    return float(text)


def parse_range(text: str) -> range:
    """Inclusive integer range 'lo:hi', or a single integer."""
    lo, _, hi = text.partition(":")
    lo = int(lo)
    hi = int(hi) if hi else lo
    return range(lo, hi + 1)


def _add_analysis_flags(p):
    p.add_argument("--grid", type=int, default=None, help="p-grid resolution (env DEQLENS_GRID)")
    p.add_argument("--p-tol", type=float, default=None, help="refinement tolerance in p (env DEQLENS_P_TOL)")
    p.add_argument("--tie-tol", type=float, default=None)
    p.add_argument("--membership-tol", type=float, default=None)
    p.add_argument("--singular-rtol", type=float, default=None)
    p.add_argument("--signed-strict", action="store_true", default=None,
                   help="require positive eigenvalues for sparse-access membership")
    p.add_argument("--normalize", action="store_true", default=None,
                   help="divide A by its largest eigenvalue magnitude first")
    p.add_argument("--eigensolver", choices=("lapack", "jacobi"), default=None)


def _config(args) -> AnalysisConfig:
    return AnalysisConfig.from_env(
        grid_resolution=args.grid,
        p_tol=args.p_tol,
        tie_tol=args.tie_tol,
        membership_tol=args.membership_tol,
        singular_rtol=args.singular_rtol,
        signed_strict=args.signed_strict,
        normalize=args.normalize,
        eigensolver=args.eigensolver,
    )


def _family_pair(spec: FamilySpec | None):
    if spec is not None and spec.kind is FamilyKind.DIAG_POWER:
        return spec.n, spec.d
    return None


def cmd_analyze(args) -> int:
    cfg = _config(args)
    try:
        a, comments = read_matrix_market(args.matrix, zero_tol=args.zero_tol,
                                         herm_tol=args.herm_tol, with_comments=True)
        family = _family_pair(spec_from_comments(comments))
    except (OSError, MatrixMarketError, MatrixError, ValueError) as exc:
        print(f"error: {args.matrix}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report = classify(a, cfg, family=family)
    except (ConvergenceFailure, np.linalg.LinAlgError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print("\n".join(report.summary_lines()))
    if args.json:
        _write_text(args.json, report.to_json())
    if args.profile_csv:
        _write_text(args.profile_csv, profile(a, cfg.grid_resolution).to_csv())
    if args.spectrum_csv:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["index", "eigenvalue"])
        for i, lam in enumerate(report.spectrum.eigenvalues):
            w.writerow([i, repr(lam)])
        _write_text(args.spectrum_csv, out.getvalue())
    return EXIT_OK


def _write_text(path, text):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _spec_from_args(args) -> FamilySpec:
    kind = FAMILY_NAMES[args.family]
    d = parse_real(args.d) if getattr(args, "d", None) is not None else None
    rng = (args.lo, args.hi) if kind is FamilyKind.RANDOM_BLOCK else None
    seed = args.seed if kind in (FamilyKind.RANDOM_BLOCK, FamilyKind.RANDOM_SUPPORT) else None
    s = args.s if kind in (FamilyKind.RANDOM_BLOCK, FamilyKind.RANDOM_SUPPORT) else None
    if kind is FamilyKind.DIAG_POWER and d is None:
        raise DomainError("diag-power needs --d")
    if s is None and kind in (FamilyKind.RANDOM_BLOCK, FamilyKind.RANDOM_SUPPORT):
        raise DomainError(f"{args.family} needs --s")
    return FamilySpec(kind=kind, n=args.n, d=d, s=s, spectrum_range=rng, seed=seed,
                      signed=bool(getattr(args, "signed", False)),
                      complex_entries=bool(getattr(args, "complex", False)))


def cmd_generate(args) -> int:
    try:
        spec = _spec_from_args(args)
        g = generate(spec)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if g.singular:
        log.warning("generated matrix is numerically singular")
    if args.out in (None, "-"):
        sys.stdout.write(dumps(g.matrix, spec.header()))
    else:
        write_matrix_market(args.out, g.matrix, spec.header())
    return EXIT_OK


def cmd_check_corollary(args) -> int:
    try:
        d = parse_real(args.d)
        pred = corollary_family_check(args.n, d)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if pred.holds:
        print(f"{pred.lhs} ≥ {pred.rhs} ⇒ dequantizable")
        return EXIT_OK
    print(f"{pred.lhs} < {pred.rhs} ⇒ not confirmed")
    return EXIT_DOMAIN


# -- sweep ------------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    return str(x)


def sweep_points(args):
    kind = FAMILY_NAMES[args.family]
    ns = parse_range(args.n)
    points = []
    for n in ns:
        if kind is FamilyKind.IDENTITY:
            points.append(FamilySpec(kind, n))
        elif kind is FamilyKind.DIAG_POWER:
            for off in parse_range(args.d_offset):
                points.append(FamilySpec(kind, n, d=n + off))
        else:
            for s in parse_range(args.s):
                for k in range(args.seeds):
                    rng = (args.lo, args.hi) if kind is FamilyKind.RANDOM_BLOCK else None
                    points.append(FamilySpec(kind, n, s=s, spectrum_range=rng,
                                             seed=args.seed_base + k))
    return points


def _key(spec: FamilySpec) -> tuple[str, ...]:
    d = str(spec.d) if spec.d is not None else ""
    return (spec.kind.value, str(spec.n), d, _fmt(spec.s), _fmt(spec.seed))


def sweep_row(spec: FamilySpec, cfg: AnalysisConfig) -> dict:
    row = dict(zip(KEY_COLUMNS, _key(spec)))
    try:
        g = generate(spec)
        rep = classify(g.matrix, cfg, family=_family_pair(spec))
    except (DeqlensError, ValueError, np.linalg.LinAlgError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}".replace("\n", " ")
        return {c: row.get(c, "") for c in SWEEP_COLUMNS}
    m, sp = rep.mu, rep.spectrum
    row.update(frobenius=_fmt(m.frobenius), mu=_fmt(m.mu_value), p_star=_fmt(m.p_star),
               inner_model=m.inner_model.value, abs_min=_fmt(sp.abs_min),
               abs_max=_fmt(sp.abs_max), kappa=_fmt(sp.kappa))
    for name in PREDICATE_COLUMNS:
        p = rep.predicates.get(name)
        if p is None:
            continue
        row[f"{name}_lhs"] = _fmt(p.lhs)
        row[f"{name}_rhs"] = _fmt(p.rhs)
        row[f"{name}_holds"] = _fmt(p.holds) if p.applicable else "n/a"
    row["classification"] = rep.classification.value
    return {c: row.get(c, "") for c in SWEEP_COLUMNS}


def _row_job(item):
    spec, cfg = item
    return sweep_row(spec, cfg)


def run_sweep(points, cfg, jobs=1, existing=None) -> list[dict]:
    existing = existing or {}
    todo = [(i, p) for i, p in enumerate(points) if _key(p) not in existing]
    rows: list[dict | None] = [existing.get(_key(p)) for p in points]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_row_job, [(p, cfg) for _, p in todo]))
    else:
        done = [sweep_row(p, cfg) for _, p in todo]
    for (i, _), row in zip(todo, done):
        rows[i] = row
    return rows


def rows_to_csv(rows) -> str:
    out = io.StringIO()
    w = csv.DictWriter(out, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return out.getvalue()


def _load_existing(path) -> dict:
    if not path or path == "-" or not os.path.exists(path):
        return {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != SWEEP_COLUMNS:
            log.warning("existing sweep file has a different column set; recomputing all rows")
            return {}
        return {tuple(r[c] for c in KEY_COLUMNS): r for r in reader if not r["error"]}


def cmd_sweep(args) -> int:
    cfg = _config(args)
    try:
        points = sweep_points(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not points:
        print("error: empty parameter range", file=sys.stderr)
        return EXIT_INPUT
    existing = _load_existing(args.out) if args.resume else {}
    rows = run_sweep(points, cfg, args.jobs, existing)
    for r in rows:
        if r["error"]:
            log.warning("n=%s d=%s s=%s seed=%s: %s", r["n"], r["d"], r["s"], r["seed"], r["error"])
    _write_text(args.out or "-", rows_to_csv(rows))
    if all(r["error"] for r in rows):
        return EXIT_SOLVER
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deqlens", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify a Matrix Market file")
    p.add_argument("matrix")
    p.add_argument("--json", metavar="PATH", help="write the full report as JSON")
    p.add_argument("--profile-csv", metavar="PATH", help="write the s_p profile as CSV")
    p.add_argument("--spectrum-csv", metavar="PATH", help="write the eigenvalues as CSV")
    p.add_argument("--zero-tol", type=float, default=0.0)
    p.add_argument("--herm-tol", type=float, default=1e-10)
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="write a family member as Matrix Market")
    p.add_argument("family", choices=sorted(FAMILY_NAMES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", help="base for diag-power; integer, p/q, or decimal")
    p.add_argument("--s", type=int)
    p.add_argument("--lo", type=float, default=0.1)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--signed", action="store_true")
    p.add_argument("--complex", action="store_true")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("check-corollary", help="closed-form check of d^n >= d^(n-1)(n-1)+1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", required=True)
    p.set_defaults(func=cmd_check_corollary)

    p = sub.add_parser("sweep", help="classify a grid of family members into CSV")
    p.add_argument("--family", choices=sorted(FAMILY_NAMES), required=True)
    p.add_argument("--n", required=True, help="inclusive range lo:hi")
    p.add_argument("--d-offset", default="1:3", help="diag-power: d = n + offset, range lo:hi")
    p.add_argument("--s", default="1", help="random families: sparsity range lo:hi")
    p.add_argument("--lo", type=float, default=0.1)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--seeds", type=int, default=1, help="seeds per (n, s) point")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--resume", action="store_true", help="reuse finished rows from --out")
    p.add_argument("-o", "--out")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        # malformed DEQLENS_* values surface here
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
