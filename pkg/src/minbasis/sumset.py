"""Exact h-fold sumsets over integer windows ``[0, N]``.

Membership arrays are plain numpy bool vectors. The kernel is shift-or
over the (sparse) element list: ``S_{k+1}[n] = OR_a S_k[n - a]``.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

import numpy as np

from .config import SUBSET_CAP, window_cap
from .errors import CapExceeded, MinbasisError
from .partition import PartitionSpec
from .radix import enumerate_part_elements

MAGIC = b"MBWS"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIQ")


@dataclass(eq=False)
class WindowSet:
    N: int
    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=bool)
        if self.bits.shape != (self.N + 1,):
            raise ValueError(f"bit array must have length N+1 = {self.N + 1}, got {self.bits.shape}")

    @classmethod
    def from_members(cls, members, N):
        bits = np.zeros(N + 1, dtype=bool)
        members = np.asarray(list(members), dtype=np.int64)
        bits[members[(members >= 0) & (members <= N)]] = True
        return cls(N, bits)

    def members(self) -> list:
        return np.flatnonzero(self.bits).tolist()

    def __contains__(self, n):
        return 0 <= n <= self.N and bool(self.bits[n])

    def __eq__(self, other):
        if not isinstance(other, WindowSet):
            return NotImplemented
        return self.N == other.N and np.array_equal(self.bits, other.bits)

    def __len__(self):
        return int(self.bits.sum())


def _check_window(N, cap):
    cap = window_cap() if cap is None else cap
    if N > cap:
        raise CapExceeded(f"window bound N = {N} exceeds window cap {cap}")


def basis_elements(spec: PartitionSpec, T: int, subset_cap: int = SUBSET_CAP) -> list:
    """Ascending elements of ``A = ∪ A(W_j)`` with support inside ``[0, T]``."""
    out = []
    for j in range(1, spec.h + 1):
        out.extend(enumerate_part_elements(spec, j, T, subset_cap))
    out.sort()
    return out


def build_basis_window(spec: PartitionSpec, T: int, cap: Optional[int] = None,
                       subset_cap: int = SUBSET_CAP):
    """Elements of A with support in ``[0, T]`` plus their window, ``N = 2**(T+1) - 1``.

    Every element of A that is at most N has its support in ``[0, T]``, so
    the window holds A ∩ [0, N] exactly.
    """
    N = (1 << (T + 1)) - 1
    _check_window(N, cap)
    elements = basis_elements(spec, T, subset_cap)
    return elements, WindowSet.from_members(elements, N)


def _shift_or(prev, elements, N):
    acc = np.zeros(N + 1, dtype=bool)
    for a in elements:
        if a > N:
            break
        acc[a:] |= prev[: N + 1 - a]
    return acc


def _chunks(seq, k):
    k = max(1, min(k, len(seq)))
    size = -(-len(seq) // k)
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def h_fold_sumset(elements: Sequence[int], h: int, N: int, workers: int = 1,
                  cap: Optional[int] = None) -> WindowSet:
    """``hA ∩ [0, N]`` for ``A = elements``, exact.

    With ``workers > 1`` each step splits the elements across threads; the
    partial arrays are OR-ed, so the result does not depend on the split.
    """
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    _check_window(N, cap)
    elements = sorted(int(a) for a in elements)
    if elements and elements[0] < 1:
        raise ValueError("sumset elements must be positive")
    elements = [a for a in elements if a <= N]
    cur = WindowSet.from_members(elements, N).bits
    if workers <= 1 or len(elements) < 2:
        for _ in range(h - 1):
            cur = _shift_or(cur, elements, N)
        return WindowSet(N, cur)
    parts = _chunks(elements, workers)
    with ThreadPoolExecutor(max_workers=len(parts)) as pool:
        for _ in range(h - 1):
            prev = cur
            partials = list(pool.map(lambda chunk: _shift_or(prev, chunk, N), parts))
            cur = np.logical_or.reduce(partials)
    return WindowSet(N, cur)


def gaps(window: WindowSet, lo: int, hi: int) -> list:
    """Integers in ``[lo, hi]`` missing from the window."""
    if not 0 <= lo <= hi <= window.N:
        raise ValueError(f"need 0 <= lo <= hi <= N, got lo={lo}, hi={hi}, N={window.N}")
    return (np.flatnonzero(~window.bits[lo:hi + 1]) + lo).tolist()


def coverage_threshold(window: WindowSet) -> Optional[int]:
    """Least ``n0`` with ``[n0, N]`` inside the window; None if ``N`` is missing."""
    missing = np.flatnonzero(~window.bits)
    if missing.size == 0:
        return 0
    last = int(missing[-1])
    return None if last == window.N else last + 1


# ---------------------------------------------------------------------------
# ordered representation counts


def representation_counts(elements: Sequence[int], h: int, N: int,
                          cap: Optional[int] = None) -> list:
    """``R[k][n]`` = number of ordered k-tuples from ``elements`` summing to ``n``.

    Returns ``[R_0, ..., R_h]`` as int64 arrays over ``[0, N]``; ``R_0`` is
    the indicator of 0.
    """
    _check_window(N, cap)
    elements = [int(a) for a in sorted(elements) if a <= N]
    R = [np.zeros(N + 1, dtype=np.int64)]
    R[0][0] = 1
    for _ in range(h):
        prev = R[-1]
        nxt = np.zeros(N + 1, dtype=np.int64)
        for a in elements:
            nxt[a:] += prev[: N + 1 - a]
        R.append(nxt)
    if h >= 1 and R[h].max(initial=0) < 0:
        raise MinbasisError("representation count overflow")
    return R


def avoiding_counts(R: list, a: int, h: int) -> np.ndarray:
    """Ordered h-tuples avoiding the element ``a``, by inclusion-exclusion on copies of ``a``."""
    N = R[0].shape[0] - 1
    out = R[h].copy()
    for k in range(1, h + 1):
        shift = k * a
        if shift > N:
            break
        term = comb(h, k) * R[h - k][: N + 1 - shift]
        if k % 2:
            out[shift:] -= term
        else:
            out[shift:] += term
    return out


# ---------------------------------------------------------------------------
# window dumps: 16-byte header then little-endian packed bits


def dump_window(window: WindowSet, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, window.N))
        fh.write(np.packbits(window.bits, bitorder="little").tobytes())


def load_window(path) -> WindowSet:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise ValueError("truncated window file")
    magic, version, N = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported window format version {version}")
    payload = np.frombuffer(raw, dtype=np.uint8, offset=_HEADER.size)
    nbytes = (N + 1 + 7) // 8
    if payload.size != nbytes:
        raise ValueError(f"expected {nbytes} payload bytes, found {payload.size}")
    bits = np.unpackbits(payload, bitorder="little")[: N + 1].astype(bool)
    return WindowSet(N, bits)
