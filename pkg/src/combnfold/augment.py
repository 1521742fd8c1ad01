"""Lightest-path dynamic program over the augmentation graph.

For a feasible point ``x`` and a step length ``alpha`` the layered DAG has
one layer per variable, in brick-major order. A vertex carries the proposed
step coordinate ``h``, the prefix sum ``beta`` of ``h`` inside the current
brick, and the signature ``sigma``, the prefix of ``D h`` over everything
processed so far. Leaving a brick requires ``beta == 0`` and reaching the
sink requires ``sigma == 0``, so every source-sink path spells a direction
``h`` in the kernel of the n-fold matrix with ``l <= x + alpha*h <= u``.

Vertices with the same ``(beta, sigma)`` in a layer have identical futures,
so only the lightest of them is kept; ``h`` is remembered on the back
pointer. States that can no longer return to ``beta == 0`` at the brick end
or to ``sigma == 0`` at the sink are never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import CombNFoldInstance, checked
from .errors import BoundTooLarge


@dataclass(frozen=True)
class StepPair:
    """An ``x``-feasible step: ``x + alpha * h`` is feasible."""

    alpha: int
    h: tuple
    weight: int


def dp_layer_size_bound(t: int, r: int, delta: int, G: int) -> int:
    """Upper bound ``(2G+1)^2 (1+4 delta G)^r`` on vertices per DP layer.

    ``t`` is accepted for symmetry with the other bounds; the per-layer count
    does not depend on it. Raises :class:`BoundTooLarge` past 64 bits.
    """
    if min(t, r, delta, G) < 1:
        raise ValueError("all arguments must be positive")
    value = (2 * G + 1) ** 2 * (1 + 4 * delta * G) ** r
    try:
        return checked(value)
    except OverflowError:
        raise BoundTooLarge("bound too large") from None


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def step_ranges(inst: CombNFoldInstance, x: Sequence[int], alpha: int, G: int):
    """Per-coordinate ``[lo, hi]`` of ``h`` keeping ``x + alpha*h`` in the box."""
    lo, hi = [], []
    for xv, l, u in zip(x, inst.lower, inst.upper):
        lo.append(max(-G, _ceil_div(l - xv, alpha)))
        hi.append(min(G, (u - xv) // alpha))
    return lo, hi


def find_best_step(inst: CombNFoldInstance, x: Sequence[int], alpha: int,
                   G: int) -> Optional[tuple[tuple, int]]:
    """Lightest source-sink path of the augmentation graph for ``(x, alpha)``.

    Returns ``(h, weight)`` with ``weight = f(x + alpha*h) - f(x)``. The zero
    direction is always a path, so ``None`` only signals an inconsistent
    input (for instance an infeasible ``x``). Callers treat ``weight >= 0``
    as "no augmenting step at this step length".
    """
    if alpha < 1 or G < 1:
        raise ValueError("alpha and G must be positive")
    n, t, r = inst.n, inst.t, inst.r
    size = n * t
    if len(x) != size:
        raise ValueError("point does not match instance dimensions")
    D = inst.D
    sig_cap = 2 * inst.bimatrix.delta() * G
    cols = [tuple(D[row][j] for row in range(r)) for j in range(t)]
    hlo, hhi = step_ranges(inst, x, alpha, G)
    if any(a > b for a, b in zip(hlo, hhi)):
        return None

    # Reachability windows: what the coordinates after k can still add.
    brest_lo = [0] * size
    brest_hi = [0] * size
    rem_lo = [None] * size
    rem_hi = [None] * size
    acc_lo = [0] * r
    acc_hi = [0] * r
    for k in range(size - 1, -1, -1):
        j = k % t
        if j == t - 1:
            brest_lo[k] = brest_hi[k] = 0
        else:
            brest_lo[k] = brest_lo[k + 1] + hlo[k + 1]
            brest_hi[k] = brest_hi[k + 1] + hhi[k + 1]
        rem_lo[k] = tuple(acc_lo)
        rem_hi[k] = tuple(acc_hi)
        col = cols[j]
        for row in range(r):
            a, b = col[row] * hlo[k], col[row] * hhi[k]
            acc_lo[row] += min(a, b)
            acc_hi[row] += max(a, b)

    objective = inst.objective.terms
    zero_sig = (0,) * r
    layer = {(0, zero_sig): 0}
    back = []

    for k in range(size):
        lo_k, hi_k = hlo[k], hhi[k]
        if lo_k == 0 and hi_k == 0:
            back.append(None)
            continue
        col = cols[k % t]
        b_lo = -brest_hi[k]
        b_hi = -brest_lo[k]
        s_lo = tuple(max(-sig_cap, -v) for v in rem_hi[k])
        s_hi = tuple(min(sig_cap, -v) for v in rem_lo[k])
        term = objective[k]
        base = term(x[k])
        xk = x[k]
        weights = {}
        nxt = {}
        ptr = {}
        for key, w in layer.items():
            beta, sig = key
            lo = max(lo_k, -G - beta, b_lo - beta)
            hi = min(hi_k, G - beta, b_hi - beta)
            if lo > hi:
                continue
            for row in range(r):
                c = col[row]
                s = sig[row]
                if c > 0:
                    lo = max(lo, _ceil_div(s_lo[row] - s, c))
                    hi = min(hi, (s_hi[row] - s) // c)
                elif c < 0:
                    lo = max(lo, _ceil_div(s - s_hi[row], -c))
                    hi = min(hi, (s - s_lo[row]) // -c)
                elif not s_lo[row] <= s <= s_hi[row]:
                    hi = lo - 1
                if lo > hi:
                    break
            if lo > hi:
                continue
            for h in range(lo, hi + 1):
                dw = weights.get(h)
                if dw is None:
                    dw = weights[h] = term(xk + alpha * h) - base
                nk = (beta + h, tuple(s + c * h for s, c in zip(sig, col)))
                nw = w + dw
                old = nxt.get(nk)
                if old is None or nw < old:
                    nxt[nk] = nw
                    ptr[nk] = (key, h)
        if k % t == t - 1:
            nxt = {key: w for key, w in nxt.items() if key[0] == 0}
        layer = nxt
        back.append(ptr)
        if not layer:
            return None

    final = (0, zero_sig)
    if final not in layer:
        return None
    weight = checked(layer[final])
    h = [0] * size
    key = final
    for k in range(size - 1, -1, -1):
        ptr = back[k]
        if ptr is None:
            continue
        key, h[k] = ptr[key]
    h = tuple(h)
    _verify_step(inst, x, alpha, h)
    return h, weight


def _verify_step(inst: CombNFoldInstance, x, alpha, h) -> None:
    t = inst.t
    for i in range(inst.n):
        if sum(h[i * t:(i + 1) * t]) != 0:
            raise RuntimeError(f"DP produced a step violating brick {i} sum")
    column_sums = [sum(h[j::t]) for j in range(t)]
    for row in inst.D:
        if sum(d * s for d, s in zip(row, column_sums)) != 0:
            raise RuntimeError("DP produced a step outside the kernel of D")
    for xv, hv, l, u in zip(x, h, inst.lower, inst.upper):
        if not l <= xv + alpha * hv <= u:
            raise RuntimeError("DP produced a step leaving the box")
