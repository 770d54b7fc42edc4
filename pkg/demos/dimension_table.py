"""Dimensions of the simple quotients over the default grid, by two strategies.

For each grid point the top vector u_0 is closed under e, f, t (strategy A)
and, independently, PBW monomials in the root vectors f_alpha are applied to
u_0 (strategy B).  The two spans must coincide; the table also shows the
irreducibility verdict.

Run:  python3 demos/dimension_table.py
"""

from __future__ import annotations

import time

from qroot import default_params, dimension_report, irreducibility_certificate
from qroot.grid import grid_points


def main() -> None:
    print(f"{'n':>2} {'l':>2}  {'lambda':<10} {'dim V':>6} {'closure':>8} {'PBW':>5}  verdict")
    t0 = time.time()
    for n, l, lam in grid_points():
        P = default_params(n, l, lam)
        rep = dimension_report(P)
        cert = irreducibility_certificate(P, rep.flag)
        pbw = "-" if rep.dim_pbw is None else str(rep.dim_pbw)
        lam_s = ",".join(map(str, lam))
        print(f"{n:>2} {l:>2}  {lam_s:<10} {P.shape.dim:>6} {rep.dim_closure:>8} {pbw:>5}  {cert.verdict}")
    print(f"\n{time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
