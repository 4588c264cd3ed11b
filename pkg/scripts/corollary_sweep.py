"""Exact corollary check next to the numeric pipeline for the d^-i diagonal family.

    python3 scripts/corollary_sweep.py --n-max 12 --d-span 10 -o corollary.csv
"""
import argparse
import csv
import sys
import time

from deqlens import Classification, classify, corollary_family_check, diag_power_family


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--d-span", type=int, default=10, help="d runs over n+1 .. n+span")
    ap.add_argument("-o", "--out", help="CSV path (default: stdout)")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    rows, mismatches = [], 0
    for n in range(2, args.n_max + 1):
        for d in range(n + 1, n + args.d_span + 1):
            cor = corollary_family_check(n, d)
            rep = classify(diag_power_family(n, d))
            ok = cor.holds and rep.classification is Classification.DEQUANTIZABLE_BY_SPECTRUM
            mismatches += not ok
            b = rep.predicates["theorem_form_B"]
            rows.append({
                "n": n, "d": d, "d_pow_n": cor.lhs, "rhs": cor.rhs,
                "kappa": repr(rep.spectrum.kappa),
                "form_B_lhs": repr(b.lhs), "form_B_rhs": repr(b.rhs),
                "form_A_holds": rep.predicates["theorem_form_A"].holds,
                "classification": rep.classification.value,
                "agree": ok,
            })
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        out.close()
    print(f"{len(rows)} points, {mismatches} disagreements, {time.perf_counter() - t0:.2f} s",
          file=sys.stderr)
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
