"""Swap Bribery: make ``target`` win by paying voters to reorder candidates.

Voters of one type share a preference order, a swap-cost table and a
multiplicity. Each type is a brick of ``|C|!`` columns counting how many of
its voters end up with each order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from ..core import Bimatrix, CombNFoldInstance, Linear, SeparableObjective
from ..errors import InstanceError
from ..transform import RelationalInstance
from .common import Decoder, assert_combinatorial_shape, check_cap

DEFAULT_CAP = 5
C1_CAP = 3


@dataclass(frozen=True)
class VoterType:
    order: tuple
    multiplicity: int = 1
    costs: Optional[Mapping] = None  # {(c, c'): cost}; None means unit costs

    def swap_cost(self, a, b) -> int:
        """Cost of swapping the adjacent pair ``a`` above ``b`` in this order."""
        if self.costs is None:
            return 1
        if (a, b) in self.costs:
            return self.costs[(a, b)]
        if (b, a) in self.costs:
            return self.costs[(b, a)]
        raise InstanceError(f"no swap cost for ({a!r}, {b!r})")

    def cost_to(self, order) -> int:
        """Sum of swap costs over the pairs whose relative order flips."""
        pos = {c: k for k, c in enumerate(order)}
        total = 0
        for a, b in itertools.combinations(self.order, 2):
            if pos[a] > pos[b]:
                total += self.swap_cost(a, b)
        return total


@dataclass(frozen=True)
class Copeland:
    """Copeland^alpha: a head-to-head win scores 1, a tie scores ``alpha``."""

    alpha: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if not 0 <= self.alpha <= 1:
            raise InstanceError("Copeland alpha must lie in [0, 1]")

    def winners(self, candidates, outcome) -> set:
        """Co-winners under ``outcome[(a, b)] in {"<", "=", ">"}`` for
        ``a`` listed before ``b``; ``">"`` means ``a`` beats ``b``."""
        score = {c: Fraction(0) for c in candidates}
        for (a, b), o in outcome.items():
            if o == ">":
                score[a] += 1
            elif o == "<":
                score[b] += 1
            else:
                score[a] += self.alpha
                score[b] += self.alpha
        best = max(score.values())
        return {c for c in candidates if score[c] == best}


@dataclass(frozen=True)
class BriberyInstance:
    candidates: tuple
    target: object
    voters: tuple
    scores: Optional[tuple] = None  # scoring vector for positional rules

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "voters", tuple(self.voters))
        problems = []
        if self.target not in self.candidates:
            problems.append("target is not a candidate")
        if len(set(self.candidates)) != len(self.candidates):
            problems.append("candidates must be distinct")
        for v in self.voters:
            if len(v.order) != len(self.candidates) or set(v.order) != set(self.candidates):
                problems.append(f"order {v.order!r} is not a ranking of all candidates")
            if v.multiplicity < 1:
                problems.append("voter multiplicities must be positive")
            if v.costs is not None and any(c < 0 for c in v.costs.values()):
                problems.append("swap costs must be non-negative")
        if self.scores is not None:
            s = tuple(int(v) for v in self.scores)
            object.__setattr__(self, "scores", s)
            if len(s) != len(self.candidates):
                problems.append("scoring vector needs one entry per position")
            elif any(a < b for a, b in zip(s, s[1:])) or min(s) < 0:
                problems.append("scoring vector must be non-increasing and non-negative")
            elif s[0] > len(s):
                problems.append("scoring protocol is not natural (s_1 > |C|)")
        if problems:
            raise InstanceError(problems)

    def orders(self) -> list:
        return list(itertools.permutations(self.candidates))


@dataclass(frozen=True)
class Bribe:
    moves: tuple  # ((voter type index, target order, count), ...)
    cost: int
    scenario: Optional[dict] = None


def _bricks(br: BriberyInstance, D, b0, relations):
    orders = br.orders()
    t = len(orders)
    lower, upper, terms, b_local = [], [], [], []
    for v in br.voters:
        for order in orders:
            lower.append(0)
            upper.append(v.multiplicity)
            terms.append(Linear(v.cost_to(order)))
        b_local.append(v.multiplicity)
    base = CombNFoldInstance(Bimatrix(D), len(br.voters), b0, b_local, lower, upper,
                             SeparableObjective(terms))
    assert_combinatorial_shape(base)
    rel = RelationalInstance(base, relations, None)

    def moves(point):
        out, cost = [], 0
        for i, v in enumerate(br.voters):
            for j, order in enumerate(orders):
                c = point[i * t + j]
                if c and order != v.order:
                    out.append((i, order, c))
                    cost += c * v.cost_to(order)
        return tuple(out), cost

    return rel, moves


def encode_bribery_scoring(br: BriberyInstance, cap: int = DEFAULT_CAP):
    """One ``<= 0`` row per rival ``c``: ``sum (s_j(c) - s_j(target)) x_j``."""
    if br.scores is None:
        raise InstanceError("scoring encoding needs a scoring vector")
    check_cap(len(br.candidates), cap, "too many candidates for exact encoding")
    orders = br.orders()
    rivals = [c for c in br.candidates if c != br.target]
    D = [[br.scores[o.index(c)] - br.scores[o.index(br.target)] for o in orders]
         for c in rivals] or [[0] * len(orders)]
    rel, moves = _bricks(br, D, [0] * len(D), ("<=",) * len(D))

    def build(point):
        m, cost = moves(point)
        return Bribe(m, cost)

    payload = {"orders": [list(o) for o in orders], "rivals": list(rivals)}
    return rel, Decoder("bribery-scoring", rel, payload, build)


def _pairs(br: BriberyInstance):
    return list(itertools.combinations(br.candidates, 2))


def winning_scenarios(br: BriberyInstance, rule: Copeland) -> list:
    """Head-to-head outcomes (over unordered pairs) in which the target is a
    co-winner."""
    pairs = _pairs(br)
    out = []
    for outcome in itertools.product("<=>", repeat=len(pairs)):
        scenario = dict(zip(pairs, outcome))
        if br.target in rule.winners(br.candidates, scenario):
            out.append(scenario)
    return out


def encode_bribery_c1(br: BriberyInstance, rule: Copeland = Copeland(), cap: int = C1_CAP):
    """One relational instance per winning scenario.

    Row for pair ``(a, b)``: ``sum (a above b) x - sum (b above a) x`` is
    ``> 0``, ``= 0`` or ``< 0``.
    """
    check_cap(len(br.candidates), cap, "too many candidates for scenario enumeration")
    orders = br.orders()
    pairs = _pairs(br)
    D = [[1 if o.index(a) < o.index(b) else -1 for o in orders] for a, b in pairs]
    schedule = []
    for scenario in winning_scenarios(br, rule):
        if pairs:
            relations = tuple(scenario[p] for p in pairs)
            rows = D
        else:
            relations, rows = ("=",), [[0] * len(orders)]
        rel, moves = _bricks(br, rows, [0] * len(rows), relations)

        def build(point, moves=moves, scenario=scenario):
            m, cost = moves(point)
            return Bribe(m, cost, scenario)

        payload = {"orders": [list(o) for o in orders],
                   "scenario": [[list(p), o] for p, o in scenario.items()]}
        schedule.append((scenario, rel, Decoder("bribery-c1", rel, payload, build)))
    return schedule


def solve_bribery(br: BriberyInstance, rule=None, cfg=None):
    """Cheapest bribe; ``rule`` None means the scoring vector, otherwise a
    :class:`Copeland` rule. Returns None if the target cannot win."""
    from ..solver import SolverConfig, solve_relational

    cfg = cfg or SolverConfig()
    if rule is None:
        rel, decoder = encode_bribery_scoring(br)
        report = solve_relational(rel, cfg)
        return decoder(report.point) if report.is_optimal else None
    best = None
    for _, rel, decoder in encode_bribery_c1(br, rule):
        report = solve_relational(rel, cfg)
        if report.is_optimal and (best is None or report.objective_value < best.cost):
            best = decoder(report.point)
    return best
