"""Rewrites that turn relaxed formulations into plain combinatorial n-fold IPs.

* :func:`equalize_local` / :func:`equalize_global` replace inequalities by
  equalities with slack columns while keeping the ``(D; 1^T)`` shape.
* :func:`lift_pre_nfold` pads blocks of unequal width into uniform bricks.
* :func:`tighten_box` shrinks the box around a continuous optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (
    Bimatrix,
    CombNFoldInstance,
    SeparableObjective,
    Zero,
    checked,
)
from .errors import InstanceError

_ALIASES = {
    "<": "<", "<=": "<=", "≤": "<=", "=": "=", "==": "=",
    ">=": ">=", "≥": ">=", ">": ">",
}


def normalize_relation(symbol: str) -> str:
    try:
        return _ALIASES[symbol.strip()]
    except KeyError:
        raise InstanceError(f"unknown relation {symbol!r}") from None


@dataclass(frozen=True)
class RelationalInstance:
    """A combinatorial n-fold instance whose rows may be inequalities.

    ``global_relations[k]`` relates row ``k`` of ``D * sum(bricks)`` to
    ``b0[k]``; ``local_relations[i]`` relates ``sum(brick i)`` to
    ``b_local[i]``.
    """

    base: CombNFoldInstance
    global_relations: tuple = None
    local_relations: tuple = None

    def __post_init__(self):
        g = self.global_relations or ("=",) * self.base.r
        loc = self.local_relations or ("=",) * self.base.n
        g = tuple(normalize_relation(s) for s in g)
        loc = tuple(normalize_relation(s) for s in loc)
        if len(g) != self.base.r:
            raise InstanceError("need one global relation per row of D")
        if len(loc) != self.base.n:
            raise InstanceError("need one local relation per brick")
        object.__setattr__(self, "global_relations", g)
        object.__setattr__(self, "local_relations", loc)

    @property
    def is_plain(self) -> bool:
        return all(s == "=" for s in self.global_relations + self.local_relations)


@dataclass(frozen=True)
class VariableMap:
    """Injective map from source flat indices to target flat indices."""

    forward: tuple
    target_size: int
    dummies: frozenset = field(default=frozenset())

    @classmethod
    def identity(cls, size: int) -> "VariableMap":
        return cls(tuple(range(size)), size, frozenset())

    @classmethod
    def build(cls, forward, target_size) -> "VariableMap":
        forward = tuple(forward)
        if len(set(forward)) != len(forward):
            raise ValueError("variable map must be injective")
        return cls(forward, target_size, frozenset(range(target_size)) - set(forward))

    def pull_back(self, x_target: Sequence[int]) -> tuple:
        return tuple(x_target[k] for k in self.forward)

    def then(self, other: "VariableMap") -> "VariableMap":
        """Apply ``self`` first, then ``other``."""
        return VariableMap.build((other.forward[k] for k in self.forward), other.target_size)


def _remap_bricks(n: int, t_old: int, t_new: int):
    return [i * t_new + j for i in range(n) for j in range(t_old)]


def _dx_range(inst: CombNFoldInstance, row) -> tuple[int, int]:
    """Min and max of ``row . sum(bricks)`` over the box."""
    lo = hi = 0
    t = inst.t
    for k, (l, u) in enumerate(zip(inst.lower, inst.upper)):
        d = row[k % t]
        lo += min(d * l, d * u)
        hi += max(d * l, d * u)
    return lo, hi


def _equalize_local(rel: RelationalInstance):
    inst = rel.base
    if any(s in ("<", ">") for s in rel.local_relations):
        raise InstanceError("strict local relations are not supported")
    n, t = inst.n, inst.t
    D = [list(row) + [0] for row in inst.D]
    lower, upper, terms = [], [], []
    for i in range(n):
        lo = inst.lower[i * t:(i + 1) * t]
        hi = inst.upper[i * t:(i + 1) * t]
        b = inst.b_local[i]
        relation = rel.local_relations[i]
        # slack = b - sum(brick) must range over everything the relation allows.
        if relation == "<=":
            s_lo, s_hi = 0, max(0, b - sum(lo))
        elif relation == ">=":
            s_lo, s_hi = min(0, b - sum(hi)), 0
        else:
            s_lo = s_hi = 0
        lower += list(lo) + [s_lo]
        upper += list(hi) + [s_hi]
        terms += list(inst.objective.terms[i * t:(i + 1) * t]) + [Zero()]
    target = CombNFoldInstance(Bimatrix(D), n, inst.b0, inst.b_local, lower, upper,
                               SeparableObjective(terms))
    vmap = VariableMap.build(_remap_bricks(n, t, t + 1), n * (t + 1))
    return RelationalInstance(target, rel.global_relations, None), vmap


def equalize_local(rel: RelationalInstance):
    """Turn brick relations into equalities with one slack column per brick."""
    if any(s != "=" for s in rel.global_relations):
        raise InstanceError("equalize_local expects equality global rows")
    out, vmap = _equalize_local(rel)
    return out.base, vmap


def _strict_to_weak(relation: str, b: int) -> tuple[str, int]:
    if relation == "<":
        return "<=", b - 1
    if relation == ">":
        return ">=", b + 1
    return relation, b


def _equalize_global(rel: RelationalInstance):
    inst = rel.base
    n, t, r = inst.n, inst.t, inst.r
    relations, b0 = [], []
    for relation, b in zip(rel.global_relations, inst.b0):
        relation, b = _strict_to_weak(relation, b)
        relations.append(relation)
        b0.append(b)
    slack_lo, slack_hi = [], []
    for relation, b, row in zip(relations, b0, inst.D):
        lo, hi = _dx_range(inst, row)
        # slack = b - (D x)_row
        if relation == "<=":
            slack_lo.append(0)
            slack_hi.append(max(0, b - lo))
        elif relation == ">=":
            slack_lo.append(min(0, b - hi))
            slack_hi.append(0)
        else:
            slack_lo.append(0)
            slack_hi.append(0)
    # The extra brick's own 1^T row is absorbed by a zero column z = -sum(slack).
    z_lo, z_hi = -sum(slack_hi), -sum(slack_lo)
    width = t + r + 1
    D = [list(row) + [1 if c == k else 0 for c in range(r)] + [0]
         for k, row in enumerate(inst.D)]
    lower, upper, terms = [], [], []
    for i in range(n):
        lower += list(inst.lower[i * t:(i + 1) * t]) + [0] * (r + 1)
        upper += list(inst.upper[i * t:(i + 1) * t]) + [0] * (r + 1)
        terms += list(inst.objective.terms[i * t:(i + 1) * t]) + [Zero()] * (r + 1)
    lower += [0] * t + slack_lo + [checked(z_lo)]
    upper += [0] * t + slack_hi + [checked(z_hi)]
    terms += [Zero()] * width
    target = CombNFoldInstance(Bimatrix(D), n + 1, b0, tuple(inst.b_local) + (0,),
                               lower, upper, SeparableObjective(terms))
    vmap = VariableMap.build(_remap_bricks(n, t, width), (n + 1) * width)
    return RelationalInstance(target, None, rel.local_relations + ("=",)), vmap


def equalize_global(rel: RelationalInstance):
    """Turn global relations into equalities using one extra slack brick."""
    if any(s != "=" for s in rel.local_relations):
        raise InstanceError("equalize_global expects equality local rows")
    out, vmap = _equalize_global(rel)
    return out.base, vmap


def drop_redundant_rows(rel: RelationalInstance) -> RelationalInstance:
    """Remove global inequality rows that every point of the box satisfies.

    Variables are untouched, so solutions transfer unchanged. Each dropped
    row saves one slack column and one signature dimension in the DP.
    """
    inst = rel.base
    keep = []
    for k, (relation, b, row) in enumerate(zip(rel.global_relations, inst.b0, inst.D)):
        relation, b = _strict_to_weak(relation, b)
        lo, hi = _dx_range(inst, row)
        implied = ((relation == "<=" and hi <= b) or (relation == ">=" and lo >= b)
                   or (relation == "=" and lo == hi == b))
        if not implied:
            keep.append(k)
    if len(keep) == inst.r or not keep:
        # A combinatorial n-fold needs at least one global row.
        keep = keep or [0]
        if len(keep) == inst.r:
            return rel
    D = [inst.D[k] for k in keep]
    base = inst.replace(bimatrix=Bimatrix(D), b0=tuple(inst.b0[k] for k in keep))
    return RelationalInstance(base, tuple(rel.global_relations[k] for k in keep),
                              rel.local_relations)


def equalize(rel: RelationalInstance):
    """Apply whichever of the two rewrites is needed; returns (instance, map)."""
    vmap = VariableMap.identity(rel.base.size)
    if any(s != "=" for s in rel.local_relations):
        rel, m = _equalize_local(rel)
        vmap = vmap.then(m)
    if any(s != "=" for s in rel.global_relations):
        rel, m = _equalize_global(rel)
        vmap = vmap.then(m)
    return rel.base, vmap


@dataclass(frozen=True)
class PreNFoldInstance:
    """Block-structured program with blocks of unequal width.

    ``blocks[tau]`` is the ``r x t_tau`` matrix of block ``tau``; the
    remaining vectors are indexed over the concatenated columns.
    """

    blocks: tuple
    b0: tuple
    b_local: tuple
    lower: tuple
    upper: tuple
    objective: SeparableObjective = None
    global_relations: tuple = None
    local_relations: tuple = None

    def __post_init__(self):
        blocks = tuple(tuple(tuple(int(v) for v in row) for row in blk) for blk in self.blocks)
        if len({len(blk) for blk in blocks}) > 1:
            raise InstanceError("all blocks must share the same row count")
        object.__setattr__(self, "blocks", blocks)
        total = sum(self.widths)
        for name in ("b0", "b_local", "lower", "upper"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        obj = self.objective
        if obj is None:
            obj = SeparableObjective.zero(total)
        elif not isinstance(obj, SeparableObjective):
            obj = SeparableObjective(obj)
        object.__setattr__(self, "objective", obj)

    @property
    def widths(self) -> tuple:
        return tuple(len(blk[0]) if blk and blk[0] else 0 for blk in self.blocks)

    @property
    def T(self) -> int:
        return len(self.blocks)


def lift_pre_nfold(p: PreNFoldInstance):
    """Pad every block to the full width; foreign positions become pinned dummies."""
    widths = p.widths
    T, t = p.T, sum(widths)
    r = len(p.blocks[0])
    D = [[v for blk in p.blocks for v in blk[row]] for row in range(r)]
    offsets = [sum(widths[:tau]) for tau in range(T)]
    lower, upper = [0] * (T * t), [0] * (T * t)
    terms = [Zero()] * (T * t)
    forward = []
    for tau in range(T):
        for j in range(widths[tau]):
            src = offsets[tau] + j
            dst = tau * t + offsets[tau] + j
            lower[dst] = p.lower[src]
            upper[dst] = p.upper[src]
            terms[dst] = p.objective.terms[src]
            forward.append(dst)
    base = CombNFoldInstance(Bimatrix(D), T, p.b0, p.b_local, lower, upper,
                             SeparableObjective(terms))
    rel = RelationalInstance(base, p.global_relations, p.local_relations)
    return rel, VariableMap.build(forward, T * t)


def tighten_box(inst: CombNFoldInstance, fractional_opt: Sequence, G: int) -> CombNFoldInstance:
    """Intersect the box with ``[floor(x) - n t G, ceil(x) + n t G]``.

    ``fractional_opt`` must be an optimum of the continuous relaxation.
    """
    radius = inst.n * inst.t * G
    lower, upper = [], []
    for v, l, u in zip(fractional_opt, inst.lower, inst.upper):
        v = Fraction(v)
        lower.append(max(math.floor(v) - radius, l))
        upper.append(min(math.ceil(v) + radius, u))
    return inst.replace(lower=tuple(lower), upper=tuple(upper))
