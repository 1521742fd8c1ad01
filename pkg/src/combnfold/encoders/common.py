"""Plumbing shared by the application encoders."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence

from ..core import CombNFoldInstance
from ..errors import CapExceeded, NFoldError
from ..transform import RelationalInstance


class DecodeError(NFoldError, ValueError):
    """The point handed to a decoder is not feasible for its encoding."""


@dataclass(frozen=True)
class Decoder:
    """Maps a solver point of ``encoding`` back to an application answer.

    ``payload`` is JSON-friendly data describing the layout; ``build`` turns
    a feasible point into the answer.
    """

    problem: str
    encoding: RelationalInstance
    payload: dict
    build: Callable[[Sequence[int]], Any]

    def __call__(self, point: Sequence[int]):
        return decode(self, point)


def decode(decoder: Decoder, point: Sequence[int]):
    from ..oracle import holds

    rel = decoder.encoding
    inst = rel.base
    point = tuple(point)
    if len(point) != inst.size:
        raise DecodeError("point has the wrong length for this encoding")
    if not _relational_feasible(rel, point, holds):
        raise DecodeError("point is not feasible for the encoded instance")
    return decoder.build(point)


def _relational_feasible(rel: RelationalInstance, x, holds) -> bool:
    inst = rel.base
    t = inst.t
    if not all(l <= v <= u for v, l, u in zip(x, inst.lower, inst.upper)):
        return False
    for i, (b, relation) in enumerate(zip(inst.b_local, rel.local_relations)):
        if not holds(relation, sum(x[i * t:(i + 1) * t]), b):
            return False
    sums = [sum(x[j::t]) for j in range(t)]
    return all(holds(relation, sum(d * s for d, s in zip(row, sums)), b)
               for row, b, relation in zip(inst.D, inst.b0, rel.global_relations))


def check_cap(amount: int, cap: int, message: str) -> None:
    if amount > cap:
        raise CapExceeded(message)


def assert_combinatorial_shape(inst: CombNFoldInstance) -> None:
    """Encoders only ever pin variables; the brick rows stay all-ones."""
    if len(inst.lower) != inst.n * inst.t or len(inst.b_local) != inst.n:
        raise AssertionError("encoding lost the combinatorial n-fold layout")
    if any(len(row) != inst.t for row in inst.D):
        raise AssertionError("encoding produced a ragged D")
