"""Seeded random instances small enough for the brute-force oracle."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import Bimatrix, CombNFoldInstance, PiecewiseLinear, SeparableObjective, Linear


@dataclass(frozen=True)
class CorpusShape:
    max_n: int = 3
    max_t: int = 3
    max_r: int = 2
    max_abs_d: int = 1
    max_width: int = 3
    max_coeff: int = 3
    feasible_share: float = 0.75
    convex_share: float = 0.0


def random_instance(rng: random.Random, shape: CorpusShape = CorpusShape()) -> CombNFoldInstance:
    n = rng.randint(1, shape.max_n)
    t = rng.randint(1, shape.max_t)
    r = rng.randint(1, shape.max_r)
    D = [[rng.randint(-shape.max_abs_d, shape.max_abs_d) for _ in range(t)] for _ in range(r)]
    lower = [rng.randint(-1, 1) for _ in range(n * t)]
    upper = [l + rng.randint(0, shape.max_width) for l in lower]
    if rng.random() < shape.feasible_share:
        x = [rng.randint(l, u) for l, u in zip(lower, upper)]
        b_local = [sum(x[i * t:(i + 1) * t]) for i in range(n)]
        sums = [sum(x[j::t]) for j in range(t)]
        b0 = [sum(d * s for d, s in zip(row, sums)) for row in D]
    else:
        b_local = [rng.randint(sum(lower[i * t:(i + 1) * t]), sum(upper[i * t:(i + 1) * t]))
                   for i in range(n)]
        b0 = [rng.randint(-3, 3) for _ in range(r)]
    terms = []
    for l, u in zip(lower, upper):
        if rng.random() < shape.convex_share:
            a, c = rng.randint(0, 2), rng.randint(-shape.max_coeff, shape.max_coeff)
            terms.append(PiecewiseLinear.from_function(lambda v, a=a, c=c: a * v * v + c * v, l, u))
        else:
            terms.append(Linear(rng.randint(-shape.max_coeff, shape.max_coeff)))
    return CombNFoldInstance(Bimatrix(D), n, b0, b_local, lower, upper, SeparableObjective(terms))


def corpus(seed: int, count: int, shape: CorpusShape = CorpusShape()) -> list:
    rng = random.Random(seed)
    return [random_instance(rng, shape) for _ in range(count)]
