"""Which root-vector convention makes the barred and plain root vectors agree?

The recursive definitions of the root vectors e_alpha, f_alpha admit two
orderings for the plain recursion and two split orders for the barred one.
This script evaluates all four on the cyclic representation and prints which
identities hold under each.

Run:  python3 demos/calibrate_conventions.py [--n 2] [--l 3]
"""

from __future__ import annotations

import argparse

from qroot import calibrate_conventions, default_params
from qroot.roots import ALL_FLAGS


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--l", type=int, default=3)
    args = ap.parse_args()

    P = default_params(args.n, args.l, (1,) * args.n)
    cal = calibrate_conventions(P)
    rows = [("flag", "bar = eps^(h-1) plain", "bar^l = plain^l", "twisted relations")]
    for flag in ALL_FLAGS:
        k = str(flag)
        rows.append((k, str(cal.bar_scaled[k]), str(cal.bar_power[k]), str(cal.twisted_relations[k])))
    width = [max(len(r[i]) for r in rows) for i in range(4)]
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, width)))
    print(f"\nselected: {cal.selected}")
    if not cal.reproduced_as_stated:
        print("no convention satisfies the scaled identity; fell back to equal l-th powers")


if __name__ == "__main__":
    main()
