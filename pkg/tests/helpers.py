from __future__ import annotations

import random

from qroot.cyclotomic import Cyclotomic
from qroot.operators import SpaceShape
from qroot.representation import ParamSet


def random_element(l: int, rng: random.Random) -> Cyclotomic:
    while True:
        c = Cyclotomic.from_coeffs(l, [rng.randint(-3, 3) for _ in range(l - 1)])
        if c:
            return c


def generic_params(n: int, l: int, seed: int = 0) -> ParamSet:
    """Random nonzero parameters; not a specialization."""
    rng = random.Random(seed)
    sh = SpaceShape(n, l)
    return ParamSet(
        n=n,
        l=l,
        r=tuple(random_element(l, rng) for _ in range(n)),
        s=tuple(random_element(l, rng) for _ in range(n)),
        a={p: random_element(l, rng) for p in sh.pairs},
        b={p: random_element(l, rng) for p in sh.pairs},
    )
