"""Seeded fixture families for the rewrite and encoder checks."""

import random
from fractions import Fraction

from combnfold.core import Bimatrix, CombNFoldInstance, SeparableObjective
from combnfold.corpus import CorpusShape, random_instance
from combnfold.transform import PreNFoldInstance, RelationalInstance

WEAK = ("<=", "=", ">=")
ALL = ("<", "<=", "=", ">=", ">")


def _small(rng):
    return random_instance(rng, CorpusShape(max_n=3, max_t=2, max_r=2, max_width=2,
                                            feasible_share=0.8))


def local_fixtures(seed=1, count=24):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        inst = _small(rng)
        rel = tuple(rng.choice(WEAK) for _ in range(inst.n))
        out.append(RelationalInstance(inst, None, rel))
    return out


def global_fixtures(seed=2, count=24):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        inst = _small(rng)
        rel = tuple(rng.choice(ALL) for _ in range(inst.r))
        out.append(RelationalInstance(inst, rel, None))
    return out


def prenfold_fixtures(seed=3, count=24):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        T = rng.randint(1, 3)
        r = rng.randint(1, 2)
        widths = [rng.randint(1, 2) for _ in range(T)]
        blocks = [[[rng.randint(-1, 1) for _ in range(w)] for _ in range(r)] for w in widths]
        total = sum(widths)
        lower = [rng.randint(-1, 0) for _ in range(total)]
        upper = [l + rng.randint(0, 2) for l in lower]
        x = [rng.randint(l, u) for l, u in zip(lower, upper)]
        offsets = [sum(widths[:k]) for k in range(T)]
        b_local = [sum(x[o:o + w]) for o, w in zip(offsets, widths)]
        b0 = [sum(blk[row][j] * x[o + j] for blk, o, w in zip(blocks, offsets, widths)
                  for j in range(w)) for row in range(r)]
        coeffs = [rng.randint(-3, 3) for _ in range(total)]
        out.append(PreNFoldInstance(
            blocks, b0, b_local, lower, upper, SeparableObjective.linear(coeffs),
            tuple(rng.choice(WEAK) for _ in range(r)),
            tuple(rng.choice(WEAK) for _ in range(T))))
    return out


def wide_fixtures(seed=4, count=24):
    """Plain instances whose boxes are far wider than the proximity radius."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n, t = 2, 2
        D = [[rng.randint(-1, 1) for _ in range(t)]]
        lower = [0] * (n * t)
        upper = [rng.randint(100, 150) for _ in range(n * t)]
        x = [rng.randint(0, u) for u in upper]
        b_local = [x[0] + x[1], x[2] + x[3]]
        b0 = [D[0][0] * (x[0] + x[2]) + D[0][1] * (x[1] + x[3])]
        coeffs = [rng.randint(-3, 3) for _ in range(n * t)]
        out.append(CombNFoldInstance(Bimatrix(D), n, b0, b_local, lower, upper,
                                     SeparableObjective.linear(coeffs)))
    return out


def lp_relaxation(inst):
    """Continuous optimum through scipy, as exact fractions."""
    from scipy.optimize import linprog

    from combnfold.oracle import nfold_matrix

    A = nfold_matrix(inst.D, inst.n)
    b = list(inst.b0) + list(inst.b_local)
    c = [f.coeff for f in inst.objective.terms]
    res = linprog(c, A_eq=A, b_eq=b, bounds=list(zip(inst.lower, inst.upper)), method="highs")
    if res.status != 0:
        return None
    return [Fraction(v).limit_denominator(10**6) for v in res.x]


def closest_fixtures(seed=5, count=50):
    """(strings, sigma, d) with k <= 3, |sigma| <= 3, L <= 5."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        k = rng.randint(1, 3)
        sigma = "abc"[:rng.randint(2, 3)]
        L = rng.randint(1, 5)
        strings = ["".join(rng.choice(sigma) for _ in range(L)) for _ in range(k)]
        d = rng.randint(0, L)
        out.append((strings, sigma, d))
    return out


WSM_EXAMPLES = [
    (("a", "b"), (1, 1), ((("a", "b"), (3,)), (("a",), (1,)), (("b",), (1,)))),
    (("a", "b"), (0, 0), ((("a", "b"), (3,)), (("a",), (1,)))),
    (("a",), (2,), ((("a",), (1, 4)),)),
]


def wsm_fixtures(seed=6, count=24):
    """(universe, demands, types): the worked examples, then random ones with
    at most six sets in total."""
    rng = random.Random(seed)
    out = list(WSM_EXAMPLES)
    while len(out) < count:
        k = rng.randint(1, 3)
        universe = tuple("abc"[:k])
        subsets = [tuple(e for b, e in enumerate(universe) if mask >> b & 1)
                   for mask in range(1, 1 << k)]
        chosen = rng.sample(subsets, rng.randint(1, min(3, len(subsets))))
        types = tuple((s, tuple(sorted(rng.randint(0, 5) for _ in range(rng.randint(1, 2)))))
                      for s in chosen)
        demands = tuple(rng.randint(0, 2) for _ in universe)
        out.append((universe, demands, types))
    return out


SCORE_RULES = {
    1: [(1,)],
    2: [(1, 0)],
    3: [(1, 0, 0), (2, 1, 0), (1, 1, 0)],
}


def bribery_fixtures(seed=7, count=24):
    """(candidates, target, voters, scores, alpha); voters are
    (order, multiplicity, costs). The first four are the worked examples."""
    out = [
        (("c", "d"), "c", [(("d", "c"), 1, {("c", "d"): 5})], (1, 0), Fraction(1, 2)),
        (("c", "d"), "c", [(("d", "c"), 2, {("c", "d"): 5})], (1, 0), Fraction(1, 2)),
        (("c", "d"), "c", [(("c", "d"), 1, {("c", "d"): 5})], (1, 0), Fraction(1, 2)),
        (("c",), "c", [(("c",), 2, None)], (1,), Fraction(1, 2)),
    ]
    rng = random.Random(seed)
    while len(out) < count:
        m = rng.randint(2, 3)
        candidates = tuple("cde"[:m])
        total = rng.randint(1, 3)
        voters = []
        while total:
            mult = rng.randint(1, total)
            total -= mult
            order = tuple(rng.sample(candidates, m))
            costs = None
            if rng.random() < 0.7:
                costs = {(a, b): rng.randint(1, 5)
                         for k, a in enumerate(candidates) for b in candidates[k + 1:]}
            voters.append((order, mult, costs))
        out.append((candidates, "c", voters, rng.choice(SCORE_RULES[m]),
                    rng.choice([Fraction(0), Fraction(1, 2), Fraction(1)])))
    return out


def huge_unit_fixtures(seed=8, count=12):
    """Huge instances where every multiplicity is one."""
    from combnfold.encoders import BrickType, HugeNFoldInstance

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        t = rng.randint(1, 2)
        r = rng.randint(1, 2)
        D = [[rng.randint(-1, 2) for _ in range(t)] for _ in range(r)]
        with_a = rng.random() < 0.5
        types, sums = [], [0] * t
        for _ in range(rng.randint(1, 3)):
            lower = [rng.randint(-1, 1) for _ in range(t)]
            upper = [l + rng.randint(0, 2) for l in lower]
            brick = [rng.randint(l, u) for l, u in zip(lower, upper)]
            sums = [s + v for s, v in zip(sums, brick)]
            terms = [rng.randint(-2, 3) for _ in range(t)]
            types.append(BrickType(lower, upper, 1, terms, (sum(brick),) if with_a else ()))
        b0 = [sum(d * s for d, s in zip(row, sums)) for row in D]
        if rng.random() < 0.2:
            b0[0] += rng.choice([-7, 7])
        out.append(HugeNFoldInstance(D, b0, types, ((1,) * t,) if with_a else ()))
    return out
