"""How often the theorem's two stated forms disagree, before and after spectral normalization.

Form A is kappa < sum|lambda| / (sqrt(s) |lambda|_min); form B is
|lambda|_min > sqrt(s) / (kappa (n - 1) + 1). The script counts outcome
disagreements on seeded random sparse-access matrices and on the diagonal family.

    python3 scripts/form_discrepancy.py --count 500 --seed 0
"""
import argparse
import sys
from collections import Counter

import numpy as np

from deqlens import (
    AnalysisConfig,
    classify,
    diag_power_family,
    random_block_hermitian,
    random_support_hermitian,
)


def tally(mats, cfg):
    counts = Counter()
    for a in mats:
        rep = classify(a, cfg)
        if not rep.spectrum.sparse_access_member:
            counts["not a member"] += 1
            continue
        fa = rep.predicates["theorem_form_A"].holds
        fb = rep.predicates["theorem_form_B"].holds
        counts[f"A={fa} B={fb}"] += 1
    return counts


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    mats = []
    for k in range(args.count):
        n = int(rng.integers(2, 16))
        s = int(rng.integers(1, n + 1))
        sub = int(rng.integers(0, 2 ** 32))
        if k % 2:
            mats.append(random_support_hermitian(n, s, sub))
        else:
            mats.append(random_block_hermitian(n, s, (0.01, 0.9), sub, signed=bool(k % 4)))
    diag = [diag_power_family(n, d) for n in range(2, 13) for d in range(n + 1, n + 11)]

    for label, group in (("random", mats), ("diag family", diag)):
        for norm in (False, True):
            counts = tally(group, AnalysisConfig(normalize=norm))
            body = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
            print(f"{label:12s} normalize={norm!s:5s} {body}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
