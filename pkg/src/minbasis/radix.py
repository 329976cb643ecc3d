"""Binary supports, the sets A(W_j), and power-of-two decompositions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import SUBSET_CAP
from .errors import CapExceeded, EmptySupport, Infeasible, NonPositive, PreconditionViolated
from .partition import PartitionSpec, part_of


def pack_support(positions: Sequence[int]) -> int:
    """Sum of ``2**f`` over a set of distinct bit positions."""
    positions = list(positions)
    if not positions:
        raise EmptySupport("support must be nonempty")
    if len(set(positions)) != len(positions) or min(positions) < 0:
        raise ValueError(f"positions must be distinct and nonnegative: {positions}")
    return sum(1 << f for f in positions)


def support_of(n: int) -> tuple:
    """Positions of the 1-bits of ``n``, ascending."""
    if n < 1:
        raise NonPositive(f"support is defined for n >= 1, got {n}")
    out = []
    k = 0
    while n:
        if n & 1:
            out.append(k)
        n >>= 1
        k += 1
    return tuple(out)


def classify_element(spec: PartitionSpec, n: int) -> Optional[int]:
    """Part ``j`` with ``n`` in ``A(W_j)``, or None when the support straddles parts."""
    parts = {part_of(spec, k) for k in support_of(n)}
    return parts.pop() if len(parts) == 1 else None


def subset_sums(positions: Sequence[int]) -> np.ndarray:
    """All nonzero sums of distinct powers ``2**f`` for ``f`` in ``positions``, ascending."""
    vals = np.zeros(1, dtype=np.int64)
    for f in positions:
        if f > 62:
            raise CapExceeded(f"bit position {f} does not fit in 64-bit words")
        vals = np.concatenate([vals, vals + (1 << f)])
    vals.sort()
    return vals[1:]


def enumerate_part_elements(spec: PartitionSpec, j: int, T: int,
                            subset_cap: int = SUBSET_CAP) -> list:
    """Elements of ``A(W_j)`` whose support lies in ``[0, T]``, ascending."""
    positions = spec.positions(j, T)
    if len(positions) > subset_cap:
        raise CapExceeded(f"|W_{j} ∩ [0,{T}]| = {len(positions)} exceeds subset cap {subset_cap}")
    return subset_sums(positions).tolist()


# ---------------------------------------------------------------------------
# decomposition of powers of two


@dataclass(frozen=True)
class Decomposition:
    """Disjoint index sets picking terms that add up to each target power.

    ``sets[i]`` and ``leftover`` hold 1-based indices into ``terms``.
    """

    targets: tuple
    terms: tuple
    sets: tuple
    leftover: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "sets", tuple(tuple(sorted(J)) for J in self.sets))
        if self.leftover is None:
            used = {k for J in self.sets for k in J}
            rest = tuple(k for k in range(1, len(self.terms) + 1) if k not in used)
        else:
            rest = tuple(sorted(self.leftover))
        object.__setattr__(self, "leftover", rest)

    def to_dict(self):
        return {"targets": list(self.targets), "terms": list(self.terms),
                "sets": [list(J) for J in self.sets], "leftover": list(self.leftover)}


def _check_lemma2_input(targets, terms):
    if not targets:
        raise PreconditionViolated("at least one target is required")
    if any(b <= a for a, b in zip(targets, targets[1:])) or targets[0] < 0:
        raise PreconditionViolated(f"targets must be strictly increasing and nonnegative: {list(targets)}")
    top = targets[-1]
    bad = [x for x in terms if not 0 <= x <= top]
    if bad:
        raise PreconditionViolated(f"terms must lie in [0, {top}], got {bad}")
    mod = 1 << (top + 1)
    lhs = sum(1 << w for w in targets) % mod
    rhs = sum(1 << x for x in terms) % mod
    if lhs != rhs:
        raise PreconditionViolated(
            f"sum of 2^targets = {lhs} but sum of 2^terms ≡ {rhs} (mod 2^{top + 1})")


def lemma2_decompose(targets: Sequence[int], terms: Sequence[int]) -> Decomposition:
    """Split the terms into disjoint groups, group ``i`` summing to ``2**targets[i]``.

    Requires ``sum 2**w ≡ sum 2**x (mod 2**(w_s + 1))`` with every ``x <= w_s``.
    Targets are served in increasing order from a carry forest over the
    terms: two nodes of equal value ``2**k`` merge into one of value
    ``2**(k+1)``, lowest value first and, within a value, lowest smallest
    index first. A node reaching ``2**w_i`` is handed to target ``i``.
    """
    targets = tuple(int(w) for w in targets)
    terms = tuple(int(x) for x in terms)
    _check_lemma2_input(targets, terms)

    # level -> list of (smallest index, leaves); kept sorted by smallest index
    levels: dict = {}
    for idx, x in enumerate(terms, start=1):
        levels.setdefault(x, []).append((idx, (idx,)))

    sets = []
    for w in targets:
        while not levels.get(w):
            lower = [k for k, nodes in levels.items() if k < w and len(nodes) >= 2]
            if not lower:
                raise Infeasible(f"no node reaches 2^{w}; decomposition invariant broken")
            k = min(lower)
            (i1, l1), (i2, l2) = levels[k][0], levels[k][1]
            del levels[k][:2]
            merged = (min(i1, i2), tuple(sorted(l1 + l2)))
            bucket = levels.setdefault(k + 1, [])
            bucket.append(merged)
            bucket.sort()
        _, leaves = levels[w].pop(0)
        sets.append(leaves)

    d = Decomposition(targets, terms, tuple(sets))
    if not verify_decomposition(d):
        raise Infeasible("constructed decomposition failed verification")
    return d


def verify_decomposition(d: Decomposition) -> bool:
    """Check every decomposition invariant in exact arithmetic."""
    t = len(d.terms)
    if len(d.sets) != len(d.targets) or not d.targets:
        return False
    seen = set()
    for w, J in zip(d.targets, d.sets):
        if not J or any(not 1 <= k <= t for k in J) or seen.intersection(J) or len(set(J)) != len(J):
            return False
        seen.update(J)
        if sum(1 << d.terms[k - 1] for k in J) != 1 << w:
            return False
    expected_rest = tuple(k for k in range(1, t + 1) if k not in seen)
    if tuple(d.leftover) != expected_rest:
        return False
    mod = 1 << (max(d.targets) + 1)
    return sum(1 << d.terms[k - 1] for k in d.leftover) % mod == 0
