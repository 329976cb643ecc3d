"""Eventually periodic partitions of the nonnegative integers.

A partition into ``h`` parts is stored as a finite prefix of labels for
``0, ..., L-1`` followed by a repeating pattern; ``n >= L`` gets label
``pattern[(n - L) % p]``.  Labels are 1-based so part ``j`` is ``W_j``.
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass, field
from functools import cached_property
from math import ceil
from typing import Optional

import numpy as np

from .config import MAX_PERIOD, MAX_PREFIX
from .errors import BadParam, SpecRejected, WrongArity, ZeroNotInW1

MINIMAL = "MINIMAL"
NOT_MINIMAL = "NOT-MINIMAL"

THM1_COUNTING = "THM1-COUNTING"
THM2_RUNS = "THM2-RUNS"
THMB_DICHOTOMY = "THMB-DICHOTOMY"
THME_RUNS = "THME-RUNS"


def _is_int(x):
    return isinstance(x, numbers.Integral) and not isinstance(x, bool)


def check_spec(h, prefix, period, pattern) -> list[str]:
    """Return the list of violated invariants (empty when valid)."""
    problems = []
    if not _is_int(h) or h < 2:
        problems.append(f"h must be an integer >= 2, got {h!r}")
        return problems
    if not _is_int(period) or period < 1:
        problems.append(f"period must be a positive integer, got {period!r}")
    elif period > MAX_PERIOD:
        problems.append(f"period {period} exceeds cap {MAX_PERIOD}")
    elif len(pattern) != period:
        problems.append(f"pattern has length {len(pattern)} but period is {period}")
    if len(prefix) > MAX_PREFIX:
        problems.append(f"prefix length {len(prefix)} exceeds cap {MAX_PREFIX}")
    for where, seq in (("prefix", prefix), ("pattern", pattern)):
        bad = sorted({x for x in seq if not _is_int(x) or not 1 <= x <= h}, key=str)
        if bad:
            problems.append(f"{where} has labels outside 1..{h}: {bad}")
    present = set(pattern)
    for j in range(1, h + 1):
        if j not in present:
            problems.append(f"part {j} absent from pattern")
    return problems


def validate_spec(h, prefix, period, pattern) -> None:
    """Raise :class:`SpecRejected` listing every violated invariant."""
    problems = check_spec(h, list(prefix), period, list(pattern))
    if problems:
        raise SpecRejected("; ".join(problems))


@dataclass(frozen=True)
class PartitionSpec:
    h: int
    prefix: tuple
    period: int
    pattern: tuple
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        validate_spec(self.h, self.prefix, self.period, self.pattern)
        object.__setattr__(self, "prefix", tuple(int(x) for x in self.prefix))
        object.__setattr__(self, "pattern", tuple(int(x) for x in self.pattern))

    @classmethod
    def periodic(cls, h, pattern, prefix=(), name=None):
        return cls(h, tuple(prefix), len(pattern), tuple(pattern), name=name)

    @property
    def L(self):
        return len(self.prefix)

    @property
    def label(self):
        if self.name:
            return self.name
        pre = "".join(map(str, self.prefix))
        pat = "".join(map(str, self.pattern)) if self.h < 10 else ",".join(map(str, self.pattern))
        return f"h{self.h}:{pre}|{pat}"

    def part_of(self, n):
        return part_of(self, n)

    # cumulative label counts; row j holds counts of label j
    @cached_property
    def _prefix_cum(self):
        return _cumulative(self.prefix, self.h)

    @cached_property
    def _pattern_cum(self):
        return _cumulative(self.pattern, self.h)

    @cached_property
    def _period_counts(self):
        return self._pattern_cum[:, -1].copy()

    def labels(self, n):
        """Labels of ``0, ..., n-1`` as an int array."""
        out = np.empty(n, dtype=np.int64)
        k = min(n, self.L)
        out[:k] = self.prefix[:k]
        if n > k:
            idx = np.arange(n - k) % self.period
            out[k:] = np.asarray(self.pattern, dtype=np.int64)[idx]
        return out

    def positions(self, j, T):
        """Sorted positions of ``W_j`` inside ``[0, T]``."""
        if T < 0:
            return []
        return np.flatnonzero(self.labels(T + 1) == j).tolist()

    def canonical(self) -> "PartitionSpec":
        """Same assignment function with minimal period and shortest prefix."""
        pattern = list(self.pattern)
        p = len(pattern)
        for d in range(1, p + 1):
            if p % d == 0 and pattern == pattern[:d] * (p // d):
                pattern = pattern[:d]
                break
        prefix = list(self.prefix)
        while prefix and prefix[-1] == pattern[-1]:
            pattern = [prefix.pop()] + pattern[:-1]
        return PartitionSpec(self.h, tuple(prefix), len(pattern), tuple(pattern), name=self.name)

    def key(self):
        c = self.canonical()
        return (c.h, c.prefix, c.pattern)

    def to_dict(self):
        return {"h": self.h, "prefix": list(self.prefix), "period": self.period,
                "pattern": list(self.pattern)}


def _cumulative(seq, h):
    arr = np.zeros((h + 1, len(seq) + 1), dtype=np.int64)
    if seq:
        onehot = np.zeros((h + 1, len(seq)), dtype=np.int64)
        onehot[np.asarray(seq), np.arange(len(seq))] = 1
        np.cumsum(onehot, axis=1, out=arr[:, 1:])
    return arr


def part_of(spec: PartitionSpec, n: int) -> int:
    L = spec.L
    if n < L:
        return spec.prefix[n]
    return spec.pattern[(n - L) % spec.period]


def counting(spec: PartitionSpec, j: int, x: int) -> int:
    """``|W_j ∩ [0, x]|`` in constant time past the prefix."""
    if x < 0:
        return 0
    L = spec.L
    if x < L:
        return int(spec._prefix_cum[j, x + 1])
    m = x - L + 1
    q, r = divmod(m, spec.period)
    return int(spec._prefix_cum[j, L] + q * spec._period_counts[j] + spec._pattern_cum[j, r])


# ---------------------------------------------------------------------------
# condition reports


@dataclass(frozen=True)
class ConditionReport:
    kind: str
    holds: bool
    witnesses: tuple
    periodic_proof: bool
    bound: int
    parts: tuple = ()
    modulus: Optional[int] = None
    residues: tuple = ()
    t_start: Optional[int] = None
    detail: str = ""

    def to_dict(self):
        return {
            "kind": self.kind,
            "holds": self.holds,
            "witnesses": list(self.witnesses),
            "periodic_proof": self.periodic_proof,
            "bound": self.bound,
            "parts": list(self.parts),
            "modulus": self.modulus,
            "residues": list(self.residues),
            "t_start": self.t_start,
            "detail": self.detail,
        }


def _thm1_holds_at(spec, t):
    x = spec.h * t - 1
    return all(counting(spec, j, x) == t for j in range(1, spec.h + 1))


def thm1_condition(spec: PartitionSpec, t_max: int) -> ConditionReport:
    """Find all ``t <= t_max`` with ``|W_j(ht-1)| = t`` for every ``j`` at once.

    Past the prefix, ``|W_j(ht-1)| - t`` shifts by ``(h*c_j - p)/gcd(h, p)`` when
    ``t`` grows by ``p/gcd(h, p)`` (``c_j`` = count of ``j`` per period). If
    every part is balanced (``h*c_j == p``) the condition is periodic in ``t``
    and one cycle decides it exactly; otherwise some part drifts and the
    condition holds for finitely many ``t`` only.
    """
    if t_max < 1:
        raise BadParam(f"t_max must be >= 1, got {t_max}")
    h, p = spec.h, spec.period
    witnesses = tuple(t for t in range(1, t_max + 1) if _thm1_holds_at(spec, t))

    t_start = max(1, ceil(spec.L / h))
    balanced = all(h * int(c) == p for c in spec._period_counts[1:])
    if not balanced:
        return ConditionReport(THM1_COUNTING, False, witnesses, False, t_max,
                               t_start=t_start,
                               detail="unbalanced period: condition holds for finitely many t")
    modulus = p // h
    residues = tuple(sorted(t % modulus for t in range(t_start, t_start + modulus)
                            if _thm1_holds_at(spec, t)))
    holds = bool(residues)
    return ConditionReport(
        THM1_COUNTING, holds, witnesses, holds, t_max,
        modulus=modulus, residues=residues, t_start=t_start,
        detail=("holds for every t >= t_start in the residue classes" if holds
                else "balanced period but no t in a full cycle qualifies"),
    )


def r_of(h: int) -> int:
    """Least integer exceeding ``log2(h)``, i.e. least ``r`` with ``2**r >= h + 1``."""
    if h < 1:
        raise BadParam(f"h must be positive, got {h}")
    return int(h).bit_length()


def run_condition(spec: PartitionSpec, j: int, r: int, x_max: Optional[int] = None):
    """Least ``b`` with ``{b, ..., b+r-1}`` inside ``W_j`` (and ``b+r-1 <= x_max``).

    Returns None when there is no such run. The least run start is always
    below ``L + p`` (a later start can be shifted back one period), and a run
    of length ``L + p`` would swallow a whole period, so the search is finite.
    """
    if r < 1:
        raise BadParam(f"run length must be >= 1, got {r}")
    L, p = spec.L, spec.period
    if r >= L + p:
        return None
    labels = spec.labels(L + p + r - 1)
    run = 0
    for n, lab in enumerate(labels.tolist()):
        run = run + 1 if lab == j else 0
        if run >= r:
            b = n - r + 1
            if x_max is not None and n > x_max:
                return None
            return b
    return None


def _runs_report(spec, kind, parts):
    r = r_of(spec.h)
    starts = [run_condition(spec, j, r) for j in parts]
    missing = [j for j, b in zip(parts, starts) if b is None]
    return ConditionReport(
        kind, not missing, tuple(b for b in starts if b is not None), True, r,
        parts=tuple(j for j, b in zip(parts, starts) if b is not None),
        detail=(f"runs of length {r} present" if not missing
                else f"no run of length {r} in parts {missing}"),
    )


def thm2_condition(spec: PartitionSpec) -> ConditionReport:
    """0 in W_1, and W_2..W_h each contain ``r_of(h)`` consecutive integers."""
    if part_of(spec, 0) != 1:
        raise ZeroNotInW1(f"0 lies in W_{part_of(spec, 0)}")
    return _runs_report(spec, THM2_RUNS, tuple(range(2, spec.h + 1)))


def thmE_condition(spec: PartitionSpec) -> ConditionReport:
    """Every part contains ``r_of(h)`` consecutive integers."""
    return _runs_report(spec, THME_RUNS, tuple(range(1, spec.h + 1)))


def thmB_condition(spec: PartitionSpec) -> ConditionReport:
    if spec.h != 2:
        raise WrongArity(f"the two-part dichotomy needs h = 2, got {spec.h}")
    if part_of(spec, 0) != 1:
        raise ZeroNotInW1(f"0 lies in W_{part_of(spec, 0)}")
    w1_pair = run_condition(spec, 1, 2)
    w2_pair = run_condition(spec, 2, 2)
    holds = w1_pair is None or w2_pair is not None
    found = [(j, b) for j, b in ((1, w1_pair), (2, w2_pair)) if b is not None]
    return ConditionReport(
        THMB_DICHOTOMY, holds, tuple(b for _, b in found), True, 2,
        parts=tuple(j for j, _ in found),
        detail=MINIMAL if holds else NOT_MINIMAL,
    )


def thmB_predict(spec: PartitionSpec) -> str:
    """MINIMAL iff W_1 has no consecutive pair or W_2 has one."""
    return MINIMAL if thmB_condition(spec).holds else NOT_MINIMAL


# ---------------------------------------------------------------------------
# built-in constructions


def nathanson(h: int) -> PartitionSpec:
    if h < 2:
        raise BadParam(f"nathanson needs h >= 2, got {h}")
    return PartitionSpec.periodic(h, range(1, h + 1), name=f"nathanson:{h}")


def ling_tang(i: int) -> PartitionSpec:
    if not 0 <= i <= 5:
        raise BadParam(f"ling_tang needs i in 0..5, got {i}")
    pattern = [0] * 6
    for offsets, part in (((0, 1), 1), ((2, 4), 2), ((3, 5), 3)):
        for o in offsets:
            pattern[(i + o) % 6] = part
    return PartitionSpec.periodic(3, pattern, name=f"ling_tang:{i}")


def sun(h: int, t: int) -> PartitionSpec:
    if h < 2 or t < 1:
        raise BadParam(f"sun needs h >= 2 and t >= 1, got h={h}, t={t}")
    pattern = [j + 1 for j in range(h) for _ in range(t)]
    return PartitionSpec.periodic(h, pattern, name=f"sun:{h}:{t}")


BUILTINS = {"nathanson": (nathanson, 1), "ling_tang": (ling_tang, 1), "sun": (sun, 2)}


def builtin(name: str, *params: int) -> PartitionSpec:
    try:
        ctor, arity = BUILTINS[name]
    except KeyError:
        raise BadParam(f"unknown builtin {name!r}; expected one of {sorted(BUILTINS)}") from None
    if len(params) != arity:
        raise BadParam(f"{name} takes {arity} parameter(s), got {len(params)}")
    return ctor(*params)


def parse_builtin(text: str) -> PartitionSpec:
    """Parse ``"nathanson:h"``, ``"ling_tang:i"`` or ``"sun:h:t"``."""
    name, *rest = text.split(":")
    try:
        params = [int(x) for x in rest]
    except ValueError:
        raise BadParam(f"non-integer parameter in {text!r}") from None
    return builtin(name, *params)


def spec_from_dict(data) -> PartitionSpec:
    try:
        h = data["h"]
        pattern = data["pattern"]
    except (KeyError, TypeError):
        raise SpecRejected("spec document needs fields 'h' and 'pattern'") from None
    prefix = data.get("prefix", [])
    period = data.get("period", len(pattern))
    return PartitionSpec(h, tuple(prefix), period, tuple(pattern), name=data.get("name"))


def load_spec(path) -> PartitionSpec:
    with open(path) as fh:
        return spec_from_dict(json.load(fh))


def dump_spec(spec: PartitionSpec, path=None) -> str:
    text = json.dumps(spec.to_dict(), sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def resolve_spec(source: str) -> PartitionSpec:
    """Builtin name string or path to a JSON spec file."""
    head = source.split(":", 1)[0]
    if head in BUILTINS:
        return parse_builtin(source)
    spec = load_spec(source)
    if spec.name is None:
        object.__setattr__(spec, "name", source)
    return spec

