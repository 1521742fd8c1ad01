"""Huge n-fold IP: bricks come in types with (possibly enormous)
multiplicities, so the input is only linear in the number of types.

After shifting every lower bound to zero, each brick's possible contents
(its configurations) are enumerated. The encoding counts, per type, how
many bricks use each configuration; its global matrix is ``D C`` where the
columns of ``C`` are the configurations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from ..core import Bimatrix, CombNFoldInstance, Linear, SeparableObjective, Zero
from ..errors import InstanceError
from ..transform import RelationalInstance
from .common import Decoder, assert_combinatorial_shape, check_cap

DEFAULT_CAP = 4096


@dataclass(frozen=True)
class BrickType:
    """``multiplicity`` bricks sharing bounds, objective terms and local RHS.

    ``terms`` holds one univariate term per brick coordinate; ``b_local`` is
    the right-hand side of ``A c = b_local`` (empty when there is no ``A``).
    """

    lower: tuple
    upper: tuple
    multiplicity: int
    terms: Optional[tuple] = None
    b_local: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(int(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(int(v) for v in self.upper))
        object.__setattr__(self, "b_local", tuple(int(v) for v in self.b_local))
        terms = self.terms
        if terms is None:
            terms = (Zero(),) * len(self.lower)
        object.__setattr__(self, "terms", tuple(
            Linear(v) if isinstance(v, int) else v for v in terms))

    def cost(self, brick: Sequence[int]) -> int:
        return sum(f(v) for f, v in zip(self.terms, brick))


@dataclass(frozen=True)
class HugeNFoldInstance:
    D: tuple
    b0: tuple
    types: tuple
    A: tuple = ()  # s x t local matrix; empty means no local rows

    def __post_init__(self):
        object.__setattr__(self, "D", tuple(tuple(int(v) for v in row) for row in self.D))
        object.__setattr__(self, "A", tuple(tuple(int(v) for v in row) for row in self.A))
        object.__setattr__(self, "b0", tuple(int(v) for v in self.b0))
        object.__setattr__(self, "types", tuple(self.types))
        problems = []
        t = self.t
        if not self.D or any(len(row) != t for row in self.D):
            problems.append("D must be a non-empty rectangular matrix")
        if len(self.b0) != len(self.D):
            problems.append("need one global RHS entry per row of D")
        if any(len(row) != t for row in self.A):
            problems.append("A must have t columns")
        for k, ty in enumerate(self.types):
            if len(ty.lower) != t or len(ty.upper) != t or len(ty.terms) != t:
                problems.append(f"type {k} does not have t coordinates")
            elif any(l > u for l, u in zip(ty.lower, ty.upper)):
                problems.append(f"type {k}: lower exceeds upper")
            if ty.multiplicity < 1:
                problems.append(f"type {k}: multiplicity must be positive")
            if len(ty.b_local) != len(self.A):
                problems.append(f"type {k}: need one local RHS per row of A")
        if problems:
            raise InstanceError(problems)

    @property
    def t(self) -> int:
        return len(self.D[0]) if self.D else 0

    def widths(self) -> tuple:
        """``d_j``: the largest span of coordinate ``j`` over all types."""
        return tuple(max((ty.upper[j] - ty.lower[j] for ty in self.types), default=0)
                     for j in range(self.t))


@dataclass(frozen=True)
class SuccinctSolution:
    """``entries[k] = (type index, brick contents, how many bricks)``."""

    entries: tuple
    cost: int

    def expand(self, huge: HugeNFoldInstance) -> tuple:
        """Standard solution: bricks grouped by type, in entry order."""
        per_type = {k: [] for k in range(len(huge.types))}
        for k, brick, count in self.entries:
            per_type[k] += [brick] * count
        return tuple(tuple(v for brick in per_type[k] for v in brick)
                     for k in range(len(huge.types)))


def configurations(widths: Sequence[int]) -> list:
    return list(itertools.product(*(range(d + 1) for d in widths)))


def encode_huge_nfold(h: HugeNFoldInstance, cap: int = DEFAULT_CAP):
    """Shift to zero lower bounds, enumerate configurations, count them."""
    widths = h.widths()
    count = 1
    for d in widths:
        count *= d + 1
    check_cap(count, cap, "too many configurations for exact encoding")
    configs = configurations(widths)
    # Shifted global RHS: every brick of type k contributes D l^k.
    b0 = list(h.b0)
    for ty in h.types:
        for row_idx, row in enumerate(h.D):
            b0[row_idx] -= ty.multiplicity * sum(d * l for d, l in zip(row, ty.lower))
    D_hat = [[sum(d * c for d, c in zip(row, conf)) for conf in configs] for row in h.D]

    lower, upper, terms, b_local = [], [], [], []
    for ty in h.types:
        span = [u - l for l, u in zip(ty.lower, ty.upper)]
        rhs = [b - sum(a * l for a, l in zip(row, ty.lower)) for row, b in zip(h.A, ty.b_local)]
        for conf in configs:
            ok = all(c <= s for c, s in zip(conf, span)) and all(
                sum(a * c for a, c in zip(row, conf)) == b for row, b in zip(h.A, rhs))
            lower.append(0)
            upper.append(ty.multiplicity if ok else 0)
            if ok:
                terms.append(Linear(ty.cost(tuple(c + l for c, l in zip(conf, ty.lower)))))
            else:
                terms.append(Zero())
        b_local.append(ty.multiplicity)
    base = CombNFoldInstance(Bimatrix(D_hat), len(h.types), b0, b_local, lower, upper,
                             SeparableObjective(terms))
    assert_combinatorial_shape(base)
    rel = RelationalInstance(base, None, None)
    t_hat = len(configs)

    def build(point):
        entries, cost = [], 0
        for k, ty in enumerate(h.types):
            for j, conf in enumerate(configs):
                y = point[k * t_hat + j]
                if y:
                    brick = tuple(c + l for c, l in zip(conf, ty.lower))
                    entries.append((k, brick, y))
                    cost += y * ty.cost(brick)
        return SuccinctSolution(tuple(entries), cost)

    payload = {"configurations": [list(c) for c in configs]}
    return rel, Decoder("huge-nfold", rel, payload, build)


def standard_instance(h: HugeNFoldInstance) -> CombNFoldInstance:
    """The same problem written out brick by brick.

    Only defined when the local matrix is absent or the single all-ones row,
    since that is what a combinatorial n-fold brick can express. Without
    ``A`` the brick row is relaxed by a zero-cost slack column.
    """
    t = h.t
    if h.A and (len(h.A) != 1 or any(v != 1 for v in h.A[0])):
        raise InstanceError("only A = 1^T or no A can be written as a standard instance")
    lower, upper, terms, b_local = [], [], [], []
    for ty in h.types:
        for _ in range(ty.multiplicity):
            lower += list(ty.lower)
            upper += list(ty.upper)
            terms += list(ty.terms)
            if h.A:
                b_local.append(ty.b_local[0])
            else:
                # slack column absorbs whatever the brick sums to
                lower.append(-sum(ty.upper))
                upper.append(-sum(ty.lower))
                terms.append(Zero())
                b_local.append(0)
    D = [list(row) + ([] if h.A else [0]) for row in h.D]
    return CombNFoldInstance(Bimatrix(D), len(b_local), h.b0, b_local, lower, upper,
                             SeparableObjective(terms))


def solve_huge(h: HugeNFoldInstance, cfg=None, cap: int = DEFAULT_CAP):
    from ..solver import SolverConfig, solve_relational

    rel, decoder = encode_huge_nfold(h, cap)
    report = solve_relational(rel, cfg or SolverConfig())
    if not report.is_optimal:
        return None
    return decoder(report.point)
