"""The identity chain 1/n < 1 < n: form B and form A sides for I_n.

    python3 scripts/identity_chain.py --n-max 32
"""
import argparse
import sys

from deqlens import classify, identity


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=32)
    args = ap.parse_args(argv)

    print("n,form_B_rhs,form_B_lhs,form_A_lhs,form_A_rhs,mu,inner_model,classification")
    for n in range(2, args.n_max + 1):
        rep = classify(identity(n))
        a, b = rep.predicates["theorem_form_A"], rep.predicates["theorem_form_B"]
        print(f"{n},{b.rhs!r},{b.lhs!r},{a.lhs!r},{a.rhs!r},{rep.mu.mu_value!r},"
              f"{rep.mu.inner_model.value},{rep.classification.value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
