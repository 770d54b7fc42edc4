"""sl_2 at l = 5: the cyclic representation, its top vector and its simple quotient.

Run:  python3 demos/sl2_walkthrough.py [--l 5] [--lambda 2]
"""

from __future__ import annotations

import argparse

from qroot import (
    default_params,
    dimension_report,
    gen_image,
    irreducibility_certificate,
    primitive_subspace,
    relation_suite,
    to_matrix,
    validate_params,
)


def show(name, op):
    m = to_matrix(op)
    print(f"  {name}:")
    for row, col, v in sorted(m.entries(), key=lambda t: t[1]):
        print(f"    u_{col[0]} -> ({v}) u_{row[0]}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--l", type=int, default=5)
    ap.add_argument("--lambda", dest="lam", type=int, default=2)
    args = ap.parse_args()

    P = default_params(1, args.l, (args.lam,))
    print(f"V has basis u_0 .. u_{args.l - 1}; dim V = {P.shape.dim}")

    spec = validate_params(P)
    print(f"parameters specialize at lambda = {spec.lam}: {spec.ok}")

    print("generator images (eps = exp(2 pi i / l)):")
    for g in ("e", "f", "t"):
        show(f"{g}_1", gen_image(g, 1, P))

    rep = relation_suite("uq-defining", P)
    print(f"defining relations: {len(rep.instances)} instances, all hold: {rep.ok}")

    prim = primitive_subspace(P)
    print(f"kernel of e_1 on V has dimension {prim.dim}, spanned by u_0: {prim.is_span_of(P.shape.zero_index())}")

    dims = dimension_report(P)
    print(f"the top vector generates a module of dimension {dims.dim_closure} (expected lambda + 1 = {args.lam + 1})")

    cert = irreducibility_certificate(P)
    print(f"verdict: {cert.verdict}")
    print(f"weights: {cert.weights.to_json()['multiplicities']}")


if __name__ == "__main__":
    main()
