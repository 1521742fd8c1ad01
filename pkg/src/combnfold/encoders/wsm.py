"""Weighted Set Multicover.

Every element ``i`` of the universe must be covered at least ``d_i`` times
by sets picked from a family. Sets with equal content form a type; picking
``c`` sets of a type costs the sum of its ``c`` lightest weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

from ..core import Bimatrix, CombNFoldInstance, PiecewiseLinear, SeparableObjective, Zero
from ..errors import InstanceError
from ..transform import RelationalInstance
from .common import Decoder, assert_combinatorial_shape, check_cap

DEFAULT_CAP = 12


@dataclass(frozen=True)
class WsmInstance:
    universe: tuple
    demands: tuple
    types: tuple  # ((subset, weights), ...)

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "demands", tuple(int(v) for v in self.demands))
        rank = {e: k for k, e in enumerate(self.universe)}
        object.__setattr__(self, "types", tuple(
            (tuple(sorted(set(s), key=lambda e: rank.get(e, -1))), tuple(int(w) for w in ws))
            for s, ws in self.types))
        problems = []
        if len(self.demands) != len(self.universe):
            problems.append("need one demand per universe element")
        if any(d < 0 for d in self.demands):
            problems.append("demands must be non-negative")
        seen = set()
        for subset, weights in self.types:
            if any(e not in self.universe for e in subset):
                problems.append(f"set {subset!r} leaves the universe")
            if subset in seen:
                problems.append(f"set {subset!r} listed twice; merge its weights")
            seen.add(subset)
            if not weights:
                problems.append(f"set {subset!r} has no copies")
            if list(weights) != sorted(weights):
                problems.append(f"weights of {subset!r} must be sorted")
            if any(w < 0 for w in weights):
                problems.append("weights must be non-negative")
        if problems:
            raise InstanceError(problems)

    @property
    def k(self) -> int:
        return len(self.universe)

    def mask(self, subset) -> int:
        return sum(1 << self.universe.index(e) for e in subset)


@dataclass(frozen=True)
class Cover:
    picks: tuple  # ((subset, chosen weights), ...) for types used at least once
    cost: int


def encode_wsm(w: WsmInstance, cap: int = DEFAULT_CAP):
    """One brick per set type, ``t = 2^k`` columns indexed by bitmask,
    ``k`` global ``>=`` rows and a ``<=`` supply row per brick."""
    check_cap(w.k, cap, "universe too large for exact encoding")
    t = 1 << w.k
    D = [[(f >> i) & 1 for f in range(t)] for i in range(w.k)]
    lower, upper, terms, b_local = [], [], [], []
    for subset, weights in w.types:
        own = w.mask(subset)
        supply = len(weights)
        prefix = [0] + list(accumulate(weights))
        for f in range(t):
            lower.append(0)
            if f == own:
                upper.append(supply)
                terms.append(PiecewiseLinear(tuple(enumerate(prefix))))
            else:
                upper.append(0)
                terms.append(Zero())
        b_local.append(supply)
    base = CombNFoldInstance(Bimatrix(D), len(w.types), w.demands, b_local, lower, upper,
                             SeparableObjective(terms))
    assert_combinatorial_shape(base)
    rel = RelationalInstance(base, (">=",) * w.k, ("<=",) * len(w.types))

    def build(point):
        picks, cost = [], 0
        for i, (subset, weights) in enumerate(w.types):
            c = point[i * t + w.mask(subset)]
            if c:
                picks.append((subset, weights[:c]))
                cost += sum(weights[:c])
        return Cover(tuple(picks), cost)

    payload = {"masks": [w.mask(s) for s, _ in w.types]}
    return rel, Decoder("wsm", rel, payload, build)


def solve_wsm(w: WsmInstance, cfg=None, cap: int = DEFAULT_CAP):
    """Cheapest cover, or None when the family cannot meet the demands."""
    from ..solver import SolverConfig, solve_relational

    rel, decoder = encode_wsm(w, cap)
    report = solve_relational(rel, cfg or SolverConfig())
    if not report.is_optimal:
        return None
    return decoder(report.point)
