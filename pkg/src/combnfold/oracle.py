"""Exhaustive ground truth for small instances.

Nothing here calls into the augmentation machinery, so these routines can
check it independently.
"""

from __future__ import annotations

import itertools
import os
from typing import Optional, Sequence

from .core import CombNFoldInstance, SolveReport, Status, evaluate_objective, is_feasible
from .errors import OracleTooLarge

DEFAULT_CAP = 10**7


def default_cap() -> int:
    return int(os.environ.get("NFOLD_ORACLE_CAP", DEFAULT_CAP))


def box_volume(lower: Sequence[int], upper: Sequence[int]) -> int:
    volume = 1
    for l, u in zip(lower, upper):
        volume *= max(0, u - l + 1)
    return volume


def _brick_candidates(inst: CombNFoldInstance, i: int, local_ok):
    t = inst.t
    ranges = [range(l, u + 1) for l, u in zip(inst.lower[i * t:(i + 1) * t],
                                              inst.upper[i * t:(i + 1) * t])]
    return [c for c in itertools.product(*ranges) if local_ok(i, sum(c))]


def _enumerate(inst: CombNFoldInstance, local_ok, global_ok, cap):
    cap = default_cap() if cap is None else cap
    if box_volume(inst.lower, inst.upper) > cap:
        raise OracleTooLarge("instance too large for oracle")
    # Lexicographic over the whole vector: bricks are filtered on their own
    # local row first, then combined in product order.
    per_brick = [_brick_candidates(inst, i, local_ok) for i in range(inst.n)]
    best = None
    best_value = None
    for combo in itertools.product(*per_brick):
        x = tuple(v for brick in combo for v in brick)
        if not global_ok(x):
            continue
        value = evaluate_objective(inst, x)
        if best is None or value < best_value:
            best, best_value = x, value
    if best is None:
        return SolveReport(Status.INFEASIBLE)
    return SolveReport(Status.OPTIMAL, best, best_value)


def brute_force_solve(inst: CombNFoldInstance, cap: Optional[int] = None) -> SolveReport:
    """Enumerate the box, keep feasible points, return the lexicographically
    first minimizer."""
    return _enumerate(inst,
                      lambda i, s: s == inst.b_local[i],
                      lambda x: is_feasible(inst, x),
                      cap)


def feasible_points(inst: CombNFoldInstance, cap: Optional[int] = None) -> list:
    cap = default_cap() if cap is None else cap
    if box_volume(inst.lower, inst.upper) > cap:
        raise OracleTooLarge("instance too large for oracle")
    ranges = [range(l, u + 1) for l, u in zip(inst.lower, inst.upper)]
    return [x for x in itertools.product(*ranges) if is_feasible(inst, x)]


_RELATIONS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    "=": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}


def holds(relation: str, lhs: int, rhs: int) -> bool:
    return _RELATIONS[relation](lhs, rhs)


def brute_force_relational(rel, cap: Optional[int] = None) -> SolveReport:
    """Same enumeration for an instance carrying inequality relations.

    Relations are checked directly rather than through the equality
    rewrites, keeping this usable as an oracle for those rewrites.
    """
    inst = rel.base

    def local_ok(i, s):
        return holds(rel.local_relations[i], s, inst.b_local[i])

    def global_ok(x):
        t = inst.t
        sums = [sum(x[j::t]) for j in range(t)]
        for row, b, relation in zip(inst.D, inst.b0, rel.global_relations):
            if not holds(relation, sum(d * s for d, s in zip(row, sums)), b):
                return False
        return all(l <= v <= u for v, l, u in zip(x, inst.lower, inst.upper))

    return _enumerate(inst, local_ok, global_ok, cap)


# -- Graver bases ------------------------------------------------------------


def conformal_leq(y: Sequence[int], x: Sequence[int]) -> bool:
    """``y`` is sign-compatible with ``x`` and ``|y_i| <= |x_i|``."""
    for a, b in zip(y, x):
        if a == 0:
            continue
        if (a > 0) != (b > 0) or b == 0 or abs(a) > abs(b):
            return False
    return True


def graver_of_ones(t: int) -> list:
    """Graver basis of the ``1 x t`` all-ones matrix: ``e_i - e_j``, ``i != j``."""
    if t < 2:
        raise ValueError("t must be at least 2")
    out = []
    for i in range(t):
        for j in range(t):
            if i != j:
                v = [0] * t
                v[i], v[j] = 1, -1
                out.append(tuple(v))
    return sorted(out)


def kernel_vectors(matrix: Sequence[Sequence[int]], radius: int):
    """Non-zero integer kernel vectors with all entries in ``[-radius, radius]``."""
    dim = len(matrix[0])
    for v in itertools.product(range(-radius, radius + 1), repeat=dim):
        if any(v) and all(sum(a * b for a, b in zip(row, v)) == 0 for row in matrix):
            yield v


def graver_brute_force(matrix: Sequence[Sequence[int]], radius: int,
                       max_points: int = 10**7) -> list:
    """Conformally minimal non-zero kernel vectors inside the radius box.

    Equals the Graver basis whenever every basis element fits the radius.
    """
    dim = len(matrix[0])
    if (2 * radius + 1) ** dim > max_points:
        raise OracleTooLarge("kernel enumeration too large")
    vectors = sorted(kernel_vectors(matrix, radius), key=lambda v: (sum(map(abs, v)), v))
    minimal = []
    for v in vectors:
        if not any(conformal_leq(g, v) for g in minimal):
            minimal.append(v)
    return sorted(minimal)


def nfold_matrix(D: Sequence[Sequence[int]], n: int) -> list:
    """Explicit ``(r + n) x (n t)`` matrix of the combinatorial n-fold product."""
    r, t = len(D), len(D[0])
    rows = [list(row) * n for row in D]
    for i in range(n):
        rows.append([1 if i * t <= k < (i + 1) * t else 0 for k in range(n * t)])
    return rows


def sign_compatible_decomposition(v: Sequence[int], basis: Sequence[Sequence[int]]):
    """Write ``v`` as a sign-compatible sum of basis elements, or return None.

    Greedy subtraction of conformally smaller elements; any conformal
    sub-element leaves a remainder that is still conformal to ``v``.
    """
    rest = tuple(v)
    parts = []
    while any(rest):
        for g in basis:
            if conformal_leq(g, rest):
                rest = tuple(a - b for a, b in zip(rest, g))
                parts.append(tuple(g))
                break
        else:
            return None
    return parts
