"""Graver-best augmentation: step-length sweep, augmentation loop, Phase I."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .augment import StepPair, dp_layer_size_bound, find_best_step
from .core import (
    Bimatrix,
    CombNFoldInstance,
    Linear,
    SeparableObjective,
    SolveReport,
    Status,
    TraceStep,
    Zero,
    check_instance,
    checked,
    evaluate_objective,
    is_feasible,
)
from .errors import BoundTooLarge, IterationLimit

log = logging.getLogger(__name__)

EXACT = "exact"
HEURISTIC = "heuristic"
FULL_SWEEP = "full"
POW2_REFINE = "pow2"

RelaxationOracle = Callable[[CombNFoldInstance], Sequence]


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs.

    mode : ``"exact"`` uses the Graver-complexity bound as DP radius and
        certifies optimality; ``"heuristic"`` uses the caller's ``G``.
    alpha_strategy : ``"full"`` tries every step length in
        ``[1, alpha_max]``; ``"pow2"`` tries powers of two and then line-searches
        along the best direction found. Both check ``alpha = 1``, so exact-mode
        termination is certified either way.
    """

    mode: str = EXACT
    G: Optional[int] = None
    max_iterations: Optional[int] = 100_000
    alpha_strategy: str = FULL_SWEEP
    trace_enabled: bool = True

    def __post_init__(self):
        if self.mode not in (EXACT, HEURISTIC):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.alpha_strategy not in (FULL_SWEEP, POW2_REFINE):
            raise ValueError(f"unknown alpha strategy {self.alpha_strategy!r}")
        if self.mode == HEURISTIC and (self.G is None or self.G < 1):
            raise ValueError("heuristic mode needs a radius G >= 1")

    @classmethod
    def heuristic(cls, G: int, **kw) -> "SolverConfig":
        return cls(mode=HEURISTIC, G=G, **kw)


def graver_complexity_bound(bm: Bimatrix) -> int:
    """``t^2 (2 r delta)^r`` with ``delta = 1 + max|D|``."""
    value = bm.t ** 2 * (2 * bm.r * bm.delta()) ** bm.r
    try:
        return checked(value)
    except OverflowError:
        raise BoundTooLarge("g(E) bound exceeds integer range") from None


def exact_radius(bm: Bimatrix) -> int:
    """Smallest proven bound on the Graver complexity we know of.

    ``g(E)`` is at most the largest l1-norm of a Graver element of ``D G``,
    ``G`` holding the ``t(t-1)`` vectors ``e_i - e_j`` as columns. Entries of
    ``D G`` are bounded by ``2 max|D|``, and a Graver element of an ``r``-row
    matrix with entries bounded by ``m`` has l1-norm at most ``(2 r m + 1)^r``
    (Eisenbrand, Hunkenschroeder and Klein). That bound does not grow with
    ``t``, so the smaller of the two is used.
    """
    g = graver_complexity_bound(bm)
    return min(g, (4 * bm.r * bm.max_abs + 1) ** bm.r)


def _reachable_radius(inst: CombNFoldInstance, G: int) -> int:
    """DP radius after clipping by what the box lets any step reach."""
    t = inst.t
    spans = [u - l for l, u in zip(inst.lower, inst.upper)]
    h_max = max(spans, default=0)
    beta_max = max((sum(spans[i * t:(i + 1) * t]) for i in range(inst.n)), default=0)
    sig_max = 0
    for row in inst.D:
        sig_max = max(sig_max, sum(abs(row[k % t]) * s for k, s in enumerate(spans)))
    sig_radius = -(-sig_max // (2 * inst.bimatrix.delta()))
    return max(1, min(G, max(h_max, beta_max, sig_radius)))


def radius_for(inst: CombNFoldInstance, cfg: SolverConfig) -> int:
    """DP radius for ``cfg``; raises :class:`BoundTooLarge` to refuse exact mode."""
    if cfg.mode == HEURISTIC:
        return cfg.G
    G = exact_radius(inst.bimatrix)
    # Exact mode must also fit the per-layer state bound, evaluated on the
    # radius the box actually permits.
    dp_layer_size_bound(inst.t, inst.r, inst.bimatrix.delta(), _reachable_radius(inst, G))
    return G


def _alpha_max(inst: CombNFoldInstance, G: int) -> int:
    return min(inst.n * inst.t * G, inst.box_width())


def graver_best_step(inst: CombNFoldInstance, x: Sequence[int], cfg: SolverConfig,
                     G: Optional[int] = None) -> Optional[StepPair]:
    """Best improving ``(alpha, h)`` over the configured step lengths, or None."""
    if G is None:
        G = radius_for(inst, cfg)
    if cfg.alpha_strategy == FULL_SWEEP:
        amax = _alpha_max(inst, G)
    else:
        # Powers of two are cheap enough to cover every step length the box
        # allows; on wide boxes this keeps the step count logarithmic.
        amax = inst.box_width()
    if amax < 1:
        return None
    results = {}

    def evaluate(alpha):
        if alpha not in results:
            res = find_best_step(inst, x, alpha, G)
            results[alpha] = res
        return results[alpha]

    if cfg.mode == EXACT:
        # With an exact radius the DP at alpha = 1 sees every Graver element,
        # and a point with no improving Graver element is optimal, so no
        # longer step can improve either.
        res = evaluate(1)
        if res is None or res[1] >= 0:
            return None
    best = None
    if cfg.alpha_strategy == FULL_SWEEP:
        candidates = range(1, amax + 1)
    else:
        candidates = [1 << e for e in range(amax.bit_length()) if (1 << e) <= amax]
    for alpha in candidates:
        res = evaluate(alpha)
        if res is not None and res[1] < 0 and (best is None or res[1] < best.weight):
            best = StepPair(alpha, res[0], res[1])

    if cfg.alpha_strategy == POW2_REFINE and best is not None:
        # Each probe's direction may extend further than the best probe's;
        # probes often agree on the direction, so search each one once.
        seen = set()
        for alpha, res in results.items():
            if res is None or res[1] >= 0:
                continue
            g = math.gcd(*res[0])
            direction = tuple(v // g for v in res[0])
            if direction in seen:
                continue
            seen.add(direction)
            cand = _line_search(inst, x, StepPair(alpha, res[0], res[1]))
            if cand.weight < best.weight:
                best = cand
    return best


def _line_search(inst: CombNFoldInstance, x: Sequence[int], best: StepPair) -> StepPair:
    """Best multiple of the primitive direction behind ``best`` (or ``best``
    itself if nothing beats it).

    A separable convex objective is convex along any line, so the first
    differences are non-decreasing in the multiplier and a binary search
    finds the minimum. No DP calls are needed.
    """
    g = math.gcd(*best.h)
    h = tuple(v // g for v in best.h)
    support = [k for k, v in enumerate(h) if v]
    terms = inst.objective.terms
    reach = min((inst.upper[k] - x[k]) // h[k] if h[k] > 0 else (x[k] - inst.lower[k]) // -h[k]
                for k in support)

    def phi(lam):
        return sum(terms[k](x[k] + lam * h[k]) - terms[k](x[k]) for k in support)

    lo, hi = 1, reach
    while lo < hi:
        mid = (lo + hi) // 2
        if phi(mid + 1) - phi(mid) < 0:
            lo = mid + 1
        else:
            hi = mid
    weight = phi(lo)
    if weight < best.weight:
        return StepPair(lo, h, weight)
    return best


def optimize(inst: CombNFoldInstance, x0: Sequence[int], cfg: SolverConfig = SolverConfig(),
             G: Optional[int] = None) -> SolveReport:
    """Graver-best augmentation from a feasible ``x0`` until no step improves."""
    x = tuple(x0)
    if not is_feasible(inst, x):
        raise ValueError("optimize needs a feasible starting point")
    if G is None:
        G = radius_for(inst, cfg)
    value = evaluate_objective(inst, x)
    trace = []
    certified = cfg.mode == EXACT
    if inst.objective.is_zero:
        return SolveReport(Status.OPTIMAL, x, value, trace, certified,
                           "constant objective; any feasible point is optimal")
    iteration = 0
    while True:
        step = graver_best_step(inst, x, cfg, G)
        if step is None:
            break
        iteration += 1
        if cfg.max_iterations is not None and iteration > cfg.max_iterations:
            report = SolveReport(Status.ERROR, x, value, trace, False,
                                 f"iteration cap {cfg.max_iterations} exceeded")
            raise IterationLimit(report.message, report)
        x = tuple(checked(xv + step.alpha * hv) for xv, hv in zip(x, step.h))
        new_value = evaluate_objective(inst, x)
        if new_value - value != step.weight:
            raise RuntimeError("DP weight disagrees with objective evaluation")
        trace.append(TraceStep(iteration, step.alpha, value - new_value, new_value))
        log.debug("iteration %d: alpha=%d drop=%d objective=%d",
                  iteration, step.alpha, value - new_value, new_value)
        value = new_value
    message = "" if certified else "heuristic local optimum"
    return SolveReport(Status.OPTIMAL, x, value, trace if cfg.trace_enabled else [],
                       certified, message)


def greedy_local_point(inst: CombNFoldInstance) -> Optional[list]:
    t = inst.t
    x = list(inst.lower)
    for i, b in enumerate(inst.b_local):
        lo = inst.lower[i * t:(i + 1) * t]
        hi = inst.upper[i * t:(i + 1) * t]
        if sum(lo) > b or sum(hi) < b:
            return None
        need = b - sum(lo)
        for j in range(t):
            raise_by = min(need, hi[j] - lo[j])
            x[i * t + j] += raise_by
            need -= raise_by
    return x


def phase_one_instance(inst: CombNFoldInstance, x0: Sequence[int]):
    """Auxiliary instance with ``D' = (D  I  -I  0)`` plus one slack brick.

    Returns ``(aux_instance, aux_start)``. Original bricks keep their box and
    pin the auxiliary columns to zero; the extra brick pins the original
    columns and carries the positive/negative residual parts ``p, q`` and a
    zero-column absorber ``z``. The objective is ``sum(p + q)``.
    """
    r, t, n = inst.r, inst.t, inst.n
    residual = [b - sum(d * s for d, s in zip(row, _column_sums(x0, t)))
                for b, row in zip(inst.b0, inst.D)]
    budget = checked(sum(abs(v) for v in residual))
    D_aux = [list(row) + [1 if c == k else 0 for c in range(r)]
             + [-1 if c == k else 0 for c in range(r)] + [0]
             for k, row in enumerate(inst.D)]
    width = t + 2 * r + 1
    lower, upper, terms, start = [], [], [], []
    for i in range(n):
        lower += list(inst.lower[i * t:(i + 1) * t]) + [0] * (2 * r + 1)
        upper += list(inst.upper[i * t:(i + 1) * t]) + [0] * (2 * r + 1)
        terms += [Zero()] * width
        start += list(x0[i * t:(i + 1) * t]) + [0] * (2 * r + 1)
    # p_k and q_k never need to exceed the start's residual part in row k;
    # rows that already hold get their auxiliaries pinned.
    lower += [0] * width
    upper += ([0] * t + [max(v, 0) for v in residual] + [max(-v, 0) for v in residual]
              + [budget])
    terms += [Zero()] * t + [Linear(1)] * (2 * r) + [Zero()]
    start += [0] * t + [max(v, 0) for v in residual] + [max(-v, 0) for v in residual] + [0]
    aux = CombNFoldInstance(Bimatrix(D_aux), n + 1, inst.b0,
                            tuple(inst.b_local) + (budget,), lower, upper,
                            SeparableObjective(terms))
    return aux, tuple(start)


def _column_sums(x, t):
    sums = [0] * t
    for k, v in enumerate(x):
        sums[k % t] += v
    return sums


def find_initial_feasible(inst: CombNFoldInstance,
                          cfg: SolverConfig = SolverConfig()) -> Optional[tuple]:
    """A feasible point of ``inst`` or None if the instance is infeasible.

    In heuristic mode None means only that Phase I stalled above zero.
    """
    x0 = greedy_local_point(inst)
    if x0 is None:
        return None
    if is_feasible(inst, x0):
        return tuple(x0)
    aux, start = phase_one_instance(inst, x0)
    report = optimize(aux, start, cfg)
    if report.objective_value != 0:
        return None
    width = inst.t + 2 * inst.r + 1
    x = []
    for i in range(inst.n):
        x += report.point[i * width:i * width + inst.t]
    x = tuple(x)
    assert is_feasible(inst, x)
    return x


def solve(inst: CombNFoldInstance, cfg: SolverConfig = SolverConfig(),
          relaxation_oracle: Optional[RelaxationOracle] = None) -> SolveReport:
    """Validate, optionally tighten the box, find a start, then augment."""
    from .transform import tighten_box

    check_instance(inst)
    G = radius_for(inst, cfg)
    if relaxation_oracle is not None:
        inst = tighten_box(inst, relaxation_oracle(inst), G)
        G = radius_for(inst, cfg)
    x0 = find_initial_feasible(inst, cfg)
    if x0 is None:
        certified = cfg.mode == EXACT
        msg = "" if certified else "Phase I stalled; infeasibility not certified"
        return SolveReport(Status.INFEASIBLE, certified=certified, message=msg)
    return optimize(inst, x0, cfg, G)


def iteration_sanity_cap(inst: CombNFoldInstance, f_start: int, f_opt: int) -> int:
    """Conservative step-count cap ``4 n t (1 + log2(1 + f0 - f*))``.

    The textbook bound for Graver-best augmentation is usually quoted as
    ``2n - 2 log M``, which parses either as ``(2n - 2) log M`` or as
    ``2n - 2 log M``; with ``n t`` variables this cap is above both readings.
    """
    return math.floor(4 * inst.n * inst.t * (1 + math.log2(1 + f_start - f_opt)))


def solve_relational(rel, cfg: SolverConfig = SolverConfig()) -> SolveReport:
    """Equalize a relational instance, solve it, and map the point back."""
    from .transform import drop_redundant_rows, equalize

    inst, vmap = equalize(drop_redundant_rows(rel))
    report = solve(inst, cfg)
    if report.point is not None:
        report.point = vmap.pull_back(report.point)
    return report
