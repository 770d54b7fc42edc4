"""The default test grid of (n, l) points and lambda samples."""

from __future__ import annotations

import itertools

GRID = ((1, 3), (1, 5), (2, 3), (2, 5), (3, 3))


def lambda_sample(n: int, l: int) -> list[tuple[int, ...]]:
    """All lambda for n = 1; otherwise zero, ones, top (l-1), and a staircase.

    The staircase is (1, 2, ..., n) reduced mod l, e.g. (1, 2) at n=2 and
    (1, 2, 0) at (n, l) = (3, 3).
    """
    if n == 1:
        return [(x,) for x in range(l)]
    cand = [
        (0,) * n,
        (1,) * n,
        (l - 1,) * n,
        tuple(j % l for j in range(1, n + 1)),
    ]
    out = []
    for lam in cand:
        if lam not in out:
            out.append(lam)
    return out


def grid_points(grid=GRID):
    """(n, l, lambda) triples of the default grid, in a fixed order."""
    for n, l in grid:
        for lam in lambda_sample(n, l):
            yield n, l, lam


def all_lambdas(n: int, l: int):
    return itertools.product(range(l), repeat=n)
