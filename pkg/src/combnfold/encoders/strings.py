"""delta-Multi Strings: find an output string within per-string distance
windows, and the Closest String family built on top of it.

The input is viewed column-wise. Each distinct input column ``e`` becomes a
brick whose variables count how many of its ``n_e`` copies receive each
solution column ``(e', f)``; only ``e' == e`` is left unpinned. Two global
rows per input string bound the total distance from below and above.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from ..core import Bimatrix, CombNFoldInstance, Linear, SeparableObjective, Zero
from ..errors import CapExceeded, InstanceError
from ..transform import RelationalInstance
from .common import Decoder, assert_combinatorial_shape, check_cap

WILDCARD = "*"
DEFAULT_CAP = 10_000
SCHEDULE_CAP = 10_000


@dataclass(frozen=True)
class MultiStringsInstance:
    """Succinct delta-Multi Strings input.

    column_types : ``((column, multiplicity), ...)`` with ``column`` a tuple
        of ``k`` symbols from ``alphabet`` or :data:`WILDCARD`.
    lower, upper : distance window ``[d_i, D_i]`` per input string.
    distance : ``{(output, input): cost}``; None means Hamming.
    positions : optional column positions per type, to rebuild the string.
    renames : optional per-position tuple translating normalized output
        symbols back to original characters.
    """

    k: int
    alphabet: tuple
    column_types: tuple
    lower: tuple
    upper: tuple
    distance: Optional[Mapping] = None
    minimize_sum: bool = False
    positions: Optional[tuple] = None
    renames: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "column_types",
                           tuple((tuple(col), int(m)) for col, m in self.column_types))
        object.__setattr__(self, "lower", tuple(int(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(int(v) for v in self.upper))
        problems = []
        if self.k < 1:
            problems.append("need at least one input string")
        if not self.alphabet:
            problems.append("alphabet is empty")
        if WILDCARD in self.alphabet:
            problems.append("the wildcard cannot be an output symbol")
        if len(self.lower) != self.k or len(self.upper) != self.k:
            problems.append("need one distance window per string")
        seen = set()
        for col, m in self.column_types:
            if len(col) != self.k:
                problems.append(f"column {col!r} does not have {self.k} entries")
            if m < 1:
                problems.append(f"column {col!r} has non-positive multiplicity")
            if col in seen:
                problems.append(f"column {col!r} listed twice")
            seen.add(col)
            for c in col:
                if c != WILDCARD and c not in self.alphabet:
                    problems.append(f"symbol {c!r} not in the alphabet")
        if self.distance is not None:
            for a in self.alphabet:
                for b in self.alphabet:
                    v = self.distance.get((a, b))
                    if not isinstance(v, int) or v < 0:
                        problems.append(f"distance ({a!r}, {b!r}) must be a non-negative integer")
        if problems:
            raise InstanceError(problems)

    @property
    def L(self) -> int:
        return sum(m for _, m in self.column_types)

    def delta(self, out, inp) -> int:
        if inp == WILDCARD:
            return 0
        if self.distance is None:
            return int(out != inp)
        return self.distance[(out, inp)]

    @classmethod
    def from_strings(cls, strings: Sequence[str], lower=None, upper=None, alphabet=None,
                     distance=None, minimize_sum=False) -> "MultiStringsInstance":
        strings = [tuple(s) for s in strings]
        _check_lengths(strings)
        k, L = len(strings), len(strings[0])
        if alphabet is None:
            alphabet = sorted({c for s in strings for c in s if c != WILDCARD})
        lower = _window(lower, k, 0)
        upper = _window(upper, k, L)
        order, positions = _aggregate([tuple(s[p] for s in strings) for p in range(L)])
        return cls(k, tuple(alphabet), tuple((col, len(positions[col])) for col in order),
                   lower, upper, distance, minimize_sum,
                   tuple(tuple(positions[col]) for col in order))


def _check_lengths(strings):
    if not strings:
        raise InstanceError("need at least one input string")
    if len({len(s) for s in strings}) != 1:
        raise InstanceError("input strings must share one length")
    if len(strings[0]) == 0:
        raise InstanceError("input strings must be non-empty")


def _window(value, k, default):
    if value is None:
        return (default,) * k
    if isinstance(value, int):
        return (value,) * k
    return tuple(value)


def _aggregate(columns):
    order, positions = [], {}
    for p, col in enumerate(columns):
        if col not in positions:
            positions[col] = []
            order.append(col)
        positions[col].append(p)
    return order, positions


def normalize_hamming(strings: Sequence[str], lower=None, upper=None, alphabet=None,
                      minimize_sum=False) -> MultiStringsInstance:
    """Rename every column's symbols by first-occurrence rank.

    The normalized alphabet is ``1..m`` with ``m = min(|alphabet|, k + 1)``;
    a symbol above the column's own rank count stands for some character the
    column does not contain. Hamming distances are preserved.
    """
    strings = [tuple(s) for s in strings]
    _check_lengths(strings)
    k, L = len(strings), len(strings[0])
    if alphabet is None:
        alphabet = sorted({c for s in strings for c in s if c != WILDCARD})
    alphabet = tuple(alphabet)
    m = min(len(alphabet), k + 1)
    columns, renames = [], []
    for p in range(L):
        ranks = {}
        for s in strings:
            c = s[p]
            if c != WILDCARD and c not in ranks:
                ranks[c] = len(ranks) + 1
        columns.append(tuple(WILDCARD if s[p] == WILDCARD else ranks[s[p]] for s in strings))
        fresh = next((c for c in alphabet if c not in ranks), None)
        by_rank = sorted(ranks, key=ranks.get)
        renames.append(tuple(by_rank[v - 1] if v <= len(by_rank) else fresh
                             for v in range(1, m + 1)))
    order, positions = _aggregate(columns)
    inst = MultiStringsInstance(
        k, tuple(range(1, m + 1)), tuple((col, len(positions[col])) for col in order),
        _window(lower, k, 0), _window(upper, k, L), None, minimize_sum,
        tuple(tuple(positions[col]) for col in order), tuple(renames))
    return inst


def _usable_symbols(ms: MultiStringsInstance, col) -> tuple:
    """Output symbols that are allowed under ``col``.

    With normalized data a rank above the column's count only exists when
    a fresh character is actually available; ``renames`` records that.
    """
    if ms.renames is None or ms.positions is None:
        return ms.alphabet
    p = ms.positions[[c for c, _ in ms.column_types].index(col)][0]
    return tuple(f for f, orig in zip(ms.alphabet, ms.renames[p]) if orig is not None)


@dataclass(frozen=True)
class MultiStringsSolution:
    counts: dict
    distances: tuple
    objective: int
    string: Optional[str] = None


def encode_multi_strings(ms: MultiStringsInstance, cap: int = DEFAULT_CAP):
    """Relational instance with one brick per input column type and
    ``r = 2k`` rows (``>= d_i`` then ``<= D_i``)."""
    symbols = tuple(ms.alphabet) + (WILDCARD,)
    width = len(symbols) ** ms.k * len(ms.alphabet)
    check_cap(width, cap, "alphabet/k too large for exact encoding")
    solution_types = [(e, f) for e in itertools.product(symbols, repeat=ms.k)
                      for f in ms.alphabet]
    index = {a: j for j, a in enumerate(solution_types)}
    costs = [[ms.delta(f, e[i]) for e, f in solution_types] for i in range(ms.k)]
    D = costs + [list(row) for row in costs]

    lower, upper, terms, b_local = [], [], [], []
    for col, mult in ms.column_types:
        usable = set(_usable_symbols(ms, col))
        hi = [0] * width
        for f in usable:
            hi[index[(col, f)]] = mult
        upper += hi
        lower += [0] * width
        for j, (e, f) in enumerate(solution_types):
            if hi[j] and ms.minimize_sum:
                terms.append(Linear(sum(costs[i][j] for i in range(ms.k))))
            else:
                terms.append(Zero())
        b_local.append(mult)

    base = CombNFoldInstance(Bimatrix(D), len(ms.column_types), ms.lower + ms.upper,
                             b_local, lower, upper, SeparableObjective(terms))
    assert_combinatorial_shape(base)
    rel = RelationalInstance(base, (">=",) * ms.k + ("<=",) * ms.k, None)

    def build(point):
        counts = {}
        for i, (col, _) in enumerate(ms.column_types):
            for j, (e, f) in enumerate(solution_types):
                v = point[i * width + index[(e, f)]] if e == col else 0
                if v:
                    counts[(col, f)] = v
        return _solution(ms, counts)

    payload = {"solution_types": [[list(e), f] for e, f in solution_types],
               "column_types": [[list(col), m] for col, m in ms.column_types]}
    return rel, Decoder("multi-strings", rel, payload, build)


def _solution(ms: MultiStringsInstance, counts: dict) -> MultiStringsSolution:
    dist = [0] * ms.k
    for (col, f), v in counts.items():
        for i in range(ms.k):
            dist[i] += ms.delta(f, col[i]) * v
    objective = sum(dist) if ms.minimize_sum else 0
    string = None
    if ms.positions is not None:
        out = [None] * ms.L
        for (col, _), where in zip(ms.column_types, ms.positions):
            chars = [f for f in ms.alphabet for _ in range(counts.get((col, f), 0))]
            for p, f in zip(where, chars):
                out[p] = ms.renames[p][ms.alphabet.index(f)] if ms.renames else f
        string = "".join(str(c) for c in out)
    return MultiStringsSolution(counts, tuple(dist), objective, string)


# -- presets -----------------------------------------------------------------


@dataclass(frozen=True)
class ScheduleMember:
    """One alternative of a schedule; feasible iff all its instances are.

    ``instances`` may be empty, meaning the alternative holds trivially.
    """

    label: tuple
    instances: tuple


@dataclass(frozen=True)
class StringSchedule:
    problem: str
    members: tuple
    length: int = 0
    alphabet: tuple = ()


PROBLEMS = ("closest", "farthest", "neighbor", "dss", "wildcards", "consensus",
            "closest-to-most", "hrc", "d-mismatch")


def _build(strings, lower, upper, alphabet, minimize_sum=False, normalize=True):
    if normalize:
        return normalize_hamming(strings, lower, upper, alphabet, minimize_sum)
    return MultiStringsInstance.from_strings(strings, lower, upper, alphabet, None, minimize_sum)


def _alphabet_of(strings, alphabet):
    if alphabet is not None:
        return tuple(alphabet)
    return tuple(sorted({c for s in strings for c in s if c != WILDCARD}))


def string_presets(problem: str, strings: Sequence[str] = (), d=None, *, alphabet=None,
                   normalize=True, good=(), d2=None, outliers=None, clusters=None,
                   reading="closest", schedule_cap=SCHEDULE_CAP):
    """Specialize delta-Multi Strings to a named Hamming problem.

    Returns a :class:`MultiStringsInstance` for the direct problems and a
    :class:`StringSchedule` for ``closest-to-most``, ``hrc`` and
    ``d-mismatch``.

    ``dss`` takes the bad strings in ``strings`` with radius ``d`` and the
    good strings in ``good`` with ``d2``; ``neighbor`` takes a list ``d``.
    """
    if problem not in PROBLEMS:
        raise InstanceError(f"unknown string problem {problem!r}")
    strings = list(strings)
    sigma = _alphabet_of(strings + list(good), alphabet)
    k = len(strings)
    L = len(strings[0]) if strings else 0
    if problem in ("closest", "wildcards"):
        return _build(strings, 0, d, sigma, normalize=normalize)
    if problem == "farthest":
        return _build(strings, d, L, sigma, normalize=normalize)
    if problem == "neighbor":
        return _build(strings, 0, list(d), sigma, normalize=normalize)
    if problem == "consensus":
        return _build(strings, 0, d, sigma, minimize_sum=True, normalize=normalize)
    if problem == "dss":
        good = list(good)
        everything = strings + good
        L = len(everything[0])
        lower = [0] * k + [L - d2] * len(good)
        upper = [d] * k + [L] * len(good)
        return _build(everything, lower, upper, sigma, normalize=normalize)
    if problem == "closest-to-most":
        size = min(outliers, k)
        subsets = list(itertools.combinations(range(k), size))
        check_cap(len(subsets), schedule_cap, "too many outlier sets")
        members = []
        for out in subsets:
            kept = [s for i, s in enumerate(strings) if i not in out]
            inst = (_build(kept, 0, d, sigma, normalize=normalize),) if kept else ()
            members.append(ScheduleMember(out, inst))
        return StringSchedule(problem, tuple(members), L, sigma)
    if problem == "hrc":
        members = []
        for blocks in _partitions(list(range(k)), clusters):
            if len(members) >= schedule_cap:
                raise CapExceeded("too many partitions")
            inst = tuple(_build([strings[i] for i in blk], 0, d, sigma, normalize=normalize)
                         for blk in blocks)
            members.append(ScheduleMember(tuple(tuple(b) for b in blocks), inst))
        return StringSchedule(problem, tuple(members), L, sigma)
    # d-mismatch: every window (p, L'); "closest" solves d_H <= d per window,
    # "farthest" solves d_H >= d.
    if reading not in ("closest", "farthest"):
        raise InstanceError("d-mismatch reading must be 'closest' or 'farthest'")
    windows = [(p, width) for width in range(1, L + 1) for p in range(L - width + 1)]
    check_cap(len(windows), schedule_cap, "too many windows")
    members = []
    for p, width in windows:
        cut = [s[p:p + width] for s in strings]
        if reading == "closest":
            inst = _build(cut, 0, d, sigma, normalize=normalize)
        else:
            inst = _build(cut, d, width, sigma, normalize=normalize)
        members.append(ScheduleMember((p, width), (inst,)))
    return StringSchedule(problem, tuple(members), L, sigma)


def _partitions(items, most):
    """Set partitions of ``items`` into at most ``most`` non-empty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest, most):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        if len(part) < most:
            yield [[first]] + part


def solve_multi_strings(ms: MultiStringsInstance, cfg=None, cap: int = DEFAULT_CAP):
    """Encode, solve and decode; None when no output string exists."""
    from ..solver import SolverConfig, solve_relational

    rel, decoder = encode_multi_strings(ms, cap)
    report = solve_relational(rel, cfg or SolverConfig())
    if not report.is_optimal:
        return None
    return decoder(report.point)


def solve_schedule(schedule: StringSchedule, cfg=None, cap: int = DEFAULT_CAP):
    """First member whose instances are all feasible, as ``(label, solutions)``.

    Filler output (for outlier-only members) is the first alphabet symbol
    repeated.
    """
    for member in schedule.members:
        solutions = []
        for inst in member.instances:
            sol = solve_multi_strings(inst, cfg, cap)
            if sol is None:
                break
            solutions.append(sol)
        else:
            if not member.instances:
                filler = str(schedule.alphabet[0]) * schedule.length
                solutions.append(MultiStringsSolution({}, (), 0, filler))
            return member.label, solutions
    return None
