"""Instance model for combinatorial n-fold integer programs.

A combinatorial n-fold IP is

    min  sum_i sum_j f^i_j(x^i_j)
    s.t. D (x^1 + ... + x^n) = b0
         1^T x^i = b_local[i]            for every brick i
         lower <= x <= upper,  x integer

with ``D`` an ``r x t`` integer matrix. Variable ``(i, j)`` (0-based brick
``i``, position ``j``) lives at flat index ``i * t + j``.

All arithmetic is exact Python integer arithmetic, but every value that
leaves the signed 64-bit range raises :class:`ArithmeticOverflow` so that
results agree with fixed-width implementations.
"""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .errors import ArithmeticOverflow, InstanceError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def checked(value: int, what: str = "overflow") -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise ArithmeticOverflow(what)
    return value


def flat_index(i: int, j: int, t: int) -> int:
    return i * t + j


def brick_position(k: int, t: int) -> tuple[int, int]:
    return divmod(k, t)


# -- objective terms ---------------------------------------------------------


@dataclass(frozen=True)
class Zero:
    domain = None

    def __call__(self, v: int) -> int:
        return 0

    def to_json(self):
        return {"kind": "zero"}


@dataclass(frozen=True)
class Linear:
    coeff: int
    domain = None

    def __post_init__(self):
        if not isinstance(self.coeff, int) or isinstance(self.coeff, bool):
            raise InstanceError(f"linear coefficient must be an integer, got {self.coeff!r}")
        checked(self.coeff, "linear coefficient out of range")

    def __call__(self, v: int) -> int:
        return checked(self.coeff * v)

    def to_json(self):
        return {"kind": "linear", "coeff": self.coeff}


@dataclass(frozen=True)
class PiecewiseLinear:
    """Convex piecewise-linear function through integer breakpoints.

    Only defined on ``[points[0][0], points[-1][0]]``. Every segment must
    have an integral slope so that evaluation at integers stays integral.
    """

    points: tuple

    def __post_init__(self):
        pts = tuple((int(a), int(b)) for a, b in self.points)
        if not pts:
            raise InstanceError("piecewise-linear term needs at least one breakpoint")
        xs = [p[0] for p in pts]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise InstanceError("breakpoint abscissae must be strictly increasing")
        slopes = []
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if (y1 - y0) % (x1 - x0):
                raise InstanceError(f"segment [{x0}, {x1}] has a non-integral slope")
            slopes.append((y1 - y0) // (x1 - x0))
        if any(b < a for a, b in zip(slopes, slopes[1:])):
            raise InstanceError("piecewise-linear term is not convex")
        for a, b in pts:
            checked(a), checked(b)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_slopes", slopes)

    @property
    def domain(self) -> tuple[int, int]:
        return self.points[0][0], self.points[-1][0]

    @property
    def slopes(self) -> list[int]:
        return list(self._slopes)

    def __call__(self, v: int) -> int:
        lo, hi = self.domain
        if not lo <= v <= hi:
            raise ValueError(f"{v} outside piecewise-linear domain [{lo}, {hi}]")
        k = bisect.bisect_right(self._xs, v) - 1
        if k == len(self._slopes):
            return self.points[-1][1]
        x0, y0 = self.points[k]
        return checked(y0 + self._slopes[k] * (v - x0))

    @classmethod
    def from_function(cls, fn: Callable[[int], int], lo: int, hi: int) -> "PiecewiseLinear":
        return cls(tuple((v, fn(v)) for v in range(lo, hi + 1)))

    def to_json(self):
        return {"kind": "pwl", "points": [list(p) for p in self.points]}


@dataclass(frozen=True)
class CallableTerm:
    """Library-only extension: an arbitrary univariate evaluation oracle.

    The callable must be convex on the variable's box; this is not checked.
    Instances holding such terms cannot be serialized.
    """

    fn: Callable[[int], int]
    domain = None

    def __call__(self, v: int) -> int:
        return checked(int(self.fn(v)))

    def to_json(self):
        raise TypeError("callable objective terms are not serializable")


Term = Union[Zero, Linear, PiecewiseLinear, CallableTerm]


@dataclass(frozen=True)
class SeparableObjective:
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, k):
        return self.terms[k]

    def __call__(self, x: Sequence[int]) -> int:
        total = 0
        for term, v in zip(self.terms, x):
            total = checked(total + term(v))
        return total

    @property
    def is_zero(self) -> bool:
        return all(isinstance(f, Zero) or (isinstance(f, Linear) and f.coeff == 0)
                   for f in self.terms)

    @classmethod
    def zero(cls, size: int) -> "SeparableObjective":
        return cls((Zero(),) * size)

    @classmethod
    def linear(cls, coeffs: Sequence[int]) -> "SeparableObjective":
        return cls(tuple(Linear(int(c)) for c in coeffs))


# -- instance ----------------------------------------------------------------


@dataclass(frozen=True)
class Bimatrix:
    """The globally uniform block ``D``; the local block is always ``1^T``."""

    D: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.D)
        object.__setattr__(self, "D", rows)

    @property
    def r(self) -> int:
        return len(self.D)

    @property
    def t(self) -> int:
        return len(self.D[0]) if self.D else 0

    @property
    def max_abs(self) -> int:
        return max((abs(v) for row in self.D for v in row), default=0)

    def delta(self) -> int:
        return 1 + self.max_abs

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.D)

    def violations(self) -> list[str]:
        out = []
        if self.r < 1:
            out.append("D must have at least one row")
        if self.t < 1:
            out.append("D must have at least one column")
        if any(len(row) != self.t for row in self.D):
            out.append("D rows have unequal lengths")
        if any(not INT64_MIN <= v <= INT64_MAX for row in self.D for v in row):
            out.append("D entry outside 64-bit range")
        return out


def _as_tuple(values, size=None):
    if isinstance(values, int):
        if size is None:
            raise TypeError("cannot broadcast a scalar without a size")
        return (values,) * size
    return tuple(int(v) for v in values)


@dataclass(frozen=True)
class CombNFoldInstance:
    bimatrix: Bimatrix
    n: int
    b0: tuple
    b_local: tuple
    lower: tuple
    upper: tuple
    objective: SeparableObjective = None

    def __post_init__(self):
        if not isinstance(self.bimatrix, Bimatrix):
            object.__setattr__(self, "bimatrix", Bimatrix(self.bimatrix))
        size = self.n * self.bimatrix.t
        object.__setattr__(self, "b0", _as_tuple(self.b0))
        object.__setattr__(self, "b_local", _as_tuple(self.b_local))
        object.__setattr__(self, "lower", _as_tuple(self.lower, size))
        object.__setattr__(self, "upper", _as_tuple(self.upper, size))
        obj = self.objective
        if obj is None:
            obj = SeparableObjective.zero(size)
        elif not isinstance(obj, SeparableObjective):
            obj = SeparableObjective(obj)
        object.__setattr__(self, "objective", obj)

    @classmethod
    def build(cls, D, b0, b_local, lower, upper, objective=None) -> "CombNFoldInstance":
        """Convenience constructor; ``n`` is taken from ``b_local``.

        ``objective`` may be a :class:`SeparableObjective`, a sequence of
        terms, or a sequence of integers (read as linear coefficients).
        """
        b_local = _as_tuple(b_local)
        if objective is not None and not isinstance(objective, SeparableObjective):
            objective = list(objective)
            if all(isinstance(c, int) for c in objective):
                objective = SeparableObjective.linear(objective)
            else:
                objective = SeparableObjective(objective)
        return cls(Bimatrix(D), len(b_local), b0, b_local, lower, upper, objective)

    @property
    def D(self) -> tuple:
        return self.bimatrix.D

    @property
    def r(self) -> int:
        return self.bimatrix.r

    @property
    def t(self) -> int:
        return self.bimatrix.t

    @property
    def size(self) -> int:
        return self.n * self.t

    def brick(self, x: Sequence[int], i: int) -> tuple:
        return tuple(x[i * self.t:(i + 1) * self.t])

    def box_width(self) -> int:
        """``max_k (upper_k - lower_k)``, the infinity-norm of ``u - l``."""
        return max((u - l for l, u in zip(self.lower, self.upper)), default=0)

    def replace(self, **changes) -> "CombNFoldInstance":
        fields = dict(bimatrix=self.bimatrix, n=self.n, b0=self.b0, b_local=self.b_local,
                      lower=self.lower, upper=self.upper, objective=self.objective)
        fields.update(changes)
        return CombNFoldInstance(**fields)


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    ERROR = "error"


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    alpha: int
    drop: int
    objective: int


@dataclass
class SolveReport:
    status: Status
    point: Optional[tuple] = None
    objective_value: Optional[int] = None
    trace: list = field(default_factory=list)
    certified: bool = True
    message: str = ""

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def is_optimal(self) -> bool:
        return self.status == Status.OPTIMAL

    def to_json(self, include_trace: bool = True) -> dict:
        out = {
            "status": self.status.value,
            "objective": self.objective_value,
            "point": list(self.point) if self.point is not None else None,
            "certified": self.certified,
            "iterations": self.iterations,
            "message": self.message,
        }
        if include_trace:
            out["trace"] = [
                {"iteration": s.iteration, "alpha": s.alpha, "drop": s.drop,
                 "objective": s.objective}
                for s in self.trace
            ]
        return out


# -- operations --------------------------------------------------------------


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_instance(inst: CombNFoldInstance) -> ValidationResult:
    """Check every structural invariant; violations are returned, not raised."""
    out = list(inst.bimatrix.violations())
    if inst.n < 1:
        out.append("brick count n must be at least 1")
    size = inst.n * inst.t
    if len(inst.b0) != inst.r:
        out.append(f"RHS length mismatch: b0 has {len(inst.b0)} entries, D has {inst.r} rows")
    if len(inst.b_local) != inst.n:
        out.append(f"RHS length mismatch: b_local has {len(inst.b_local)} entries for n={inst.n}")
    if len(inst.lower) != size or len(inst.upper) != size:
        out.append(f"bound length mismatch: expected {size} entries")
    if len(inst.objective) != size:
        out.append(f"objective length mismatch: expected {size} terms")
    for name, vec in (("b0", inst.b0), ("b_local", inst.b_local),
                      ("lower", inst.lower), ("upper", inst.upper)):
        if any(not INT64_MIN <= v <= INT64_MAX for v in vec):
            out.append(f"{name} entry outside 64-bit range")
    bad = [k for k, (l, u) in enumerate(zip(inst.lower, inst.upper)) if l > u]
    if bad:
        out.append(f"lower exceeds upper at indices {bad}")
    for k, (term, l, u) in enumerate(zip(inst.objective, inst.lower, inst.upper)):
        dom = getattr(term, "domain", None)
        if dom is not None and l <= u and not (dom[0] <= l and u <= dom[1]):
            out.append(f"objective term {k} is undefined on part of [{l}, {u}]")
    return ValidationResult(tuple(out))


def check_instance(inst: CombNFoldInstance) -> CombNFoldInstance:
    result = validate_instance(inst)
    if not result.ok:
        raise InstanceError(result.violations)
    return inst


def evaluate_objective(inst: CombNFoldInstance, x: Sequence[int]) -> int:
    if len(x) != inst.size:
        raise ValueError(f"point has {len(x)} entries, instance has {inst.size} variables")
    return inst.objective(x)


def global_lhs(inst: CombNFoldInstance, x: Sequence[int]) -> tuple:
    """``D`` applied to the sum of all bricks of ``x``."""
    t = inst.t
    column_sums = [0] * t
    for k, v in enumerate(x):
        column_sums[k % t] += v
    return tuple(checked(sum(d * s for d, s in zip(row, column_sums))) for row in inst.D)


def is_feasible(inst: CombNFoldInstance, x: Sequence[int]) -> bool:
    if len(x) != inst.size:
        raise ValueError(f"point has {len(x)} entries, instance has {inst.size} variables")
    if any(v < l or v > u for v, l, u in zip(x, inst.lower, inst.upper)):
        return False
    t = inst.t
    for i, b in enumerate(inst.b_local):
        if sum(x[i * t:(i + 1) * t]) != b:
            return False
    return global_lhs(inst, x) == tuple(inst.b0)
