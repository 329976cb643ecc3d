"""E_a windows, witness construction and element-by-element minimality evidence.

For ``a`` in ``A(W_i)`` the witness is ``n_T = a + sum of 2**w`` over
``w in [0, T]`` outside ``W_i``; it lies in ``E_a = hA \\ h(A \\ {a})`` under
the hypotheses checked by :func:`witness`.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .config import SUBSET_CAP
from .errors import (ConditionUnavailable, NotABasisElement, PreconditionViolated,
                     TTooSmall, ZeroNotInW1)
from .partition import (PartitionSpec, counting, part_of, r_of, run_condition,
                        thm1_condition, thm2_condition)
from .radix import classify_element, support_of
from .sumset import (WindowSet, _check_window, avoiding_counts, basis_elements, build_basis_window,
                     coverage_threshold, h_fold_sumset, representation_counts)

THM1 = "THM1"
THM2 = "THM2"

THEOREM_PROVEN = "THEOREM-PROVEN"
EMPIRICAL_SUPPORTED = "EMPIRICAL-SUPPORTED"
REFUTED_IN_WINDOW = "REFUTED-IN-WINDOW"


def _part_or_raise(spec, a):
    if a < 1:
        raise NotABasisElement(f"{a} is not a positive integer")
    i = classify_element(spec, a)
    if i is None:
        raise NotABasisElement(f"support {list(support_of(a))} of {a} straddles several parts")
    return i


# ---------------------------------------------------------------------------
# E_a


def e_a_from_elements(elements: Sequence[int], a: int, h: int, N: int, workers: int = 1,
                      cap: Optional[int] = None) -> list:
    """``(hA \\ h(A \\ {a})) ∩ [0, N]`` from two shift-or windows."""
    full = h_fold_sumset(elements, h, N, workers, cap)
    rest = h_fold_sumset([x for x in elements if x != a], h, N, workers, cap)
    return np.flatnonzero(full.bits & ~rest.bits).tolist()


def e_a_window(spec: PartitionSpec, a: int, h: int, T: int, workers: int = 1,
               cap: Optional[int] = None) -> list:
    _part_or_raise(spec, a)
    elements, window = build_basis_window(spec, T, cap)
    return e_a_from_elements(elements, a, h, window.N, workers, cap)


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class WitnessRecord:
    a: int
    part: int
    T: int
    n_T: int
    in_hA: bool
    in_hA_minus_a: bool
    verified: bool
    mode: Optional[str] = None

    def to_dict(self):
        return asdict(self)


def thm1_step(spec: PartitionSpec, min_k: int) -> Optional[int]:
    """Least ``t`` with ``t*h > min_k`` and ``|W_j(ht-1)| = t`` for all ``j``.

    Returns None unless the counting condition is proven to hold infinitely often.
    """
    h = spec.h
    report = thm1_condition(spec, 1)
    if not report.periodic_proof:
        return None
    t = min_k // h + 1
    limit = max(t, report.t_start) + report.modulus
    while t <= limit:
        if all(counting(spec, j, h * t - 1) == t for j in range(1, h + 1)):
            return t
        t += 1
    raise AssertionError("periodic counting condition has no qualifying t in a full cycle")


def _witness_sum(spec, i, T):
    return sum(1 << w for w in range(T + 1) if part_of(spec, w) != i)


def check_witness_hypotheses(spec: PartitionSpec, a: int, T: int, mode: str) -> int:
    """Raise unless ``T`` is admissible for ``a`` under ``mode``; return the part of ``a``."""
    i = _part_or_raise(spec, a)
    if (1 << T) <= a:
        raise TTooSmall(f"2^{T} <= a = {a}")
    if mode == THM1:
        t_next = thm1_step(spec, min(support_of(a)))
        if t_next is None:
            raise ConditionUnavailable("counting condition is not proven to hold infinitely often")
        # the low block [0, t'h - 1] must sit inside [0, T]
        if T < t_next * spec.h - 1:
            raise TTooSmall(f"T = {T} is below t'h - 1 = {t_next * spec.h - 1} (t' = {t_next})")
    elif mode == THM2:
        if part_of(spec, 0) != 1:
            raise ConditionUnavailable("run witness needs 0 in W_1")
        r = r_of(spec.h)
        missing = [j for j in range(2, spec.h + 1) if run_condition(spec, j, r) is None]
        if missing:
            raise ConditionUnavailable(f"parts {missing} have no run of length {r}")
        short = [j for j in range(2, spec.h + 1)
                 if j != i and run_condition(spec, j, r, x_max=T) is None]
        if short:
            raise ConditionUnavailable(f"parts {short} have no run of length {r} inside [0, {T}]")
    else:
        raise ValueError(f"unknown witness mode {mode!r}")
    return i


def witness(spec: PartitionSpec, a: int, T: int, mode: str) -> int:
    """``a`` plus every power ``2**w``, ``w <= T``, outside the part holding ``a``."""
    i = check_witness_hypotheses(spec, a, T, mode)
    return a + _witness_sum(spec, i, T)


def is_admissible(spec, a, T, mode) -> bool:
    try:
        check_witness_hypotheses(spec, a, T, mode)
    except (TTooSmall, ConditionUnavailable):
        return False
    return True


def _in_h_fold(elements, h, n):
    """Whether ``n`` is a sum of exactly ``h`` entries of ``elements``."""
    elems = [x for x in elements if x <= n]
    if h == 1:
        return n in set(elems)
    if not elems:
        return False
    inner = h_fold_sumset(elems, h - 1, n, cap=n).bits
    arr = np.asarray(elems, dtype=np.int64)
    return bool(inner[n - arr].any())


def witness_membership(elements: Sequence[int], a: int, h: int, n: int):
    """Return ``(n in hA, n in h(A \\ {a}))``; elements must contain A ∩ [1, n]."""
    in_full = _in_h_fold(elements, h, n)
    in_rest = in_full and _in_h_fold([x for x in elements if x != a], h, n)
    return in_full, in_rest


def verify_witness(spec: PartitionSpec, a: int, h: int, n_T: int, T: int,
                   mode: Optional[str] = None, cap: Optional[int] = None) -> WitnessRecord:
    """Decide exactly whether ``n_T`` lies in ``E_a``."""
    i = _part_or_raise(spec, a)
    if n_T > 1 << (T + 2):
        raise PreconditionViolated(f"n_T = {n_T} exceeds 2^{T + 2}")
    bound = max(n_T, (1 << (T + 1)) - 1)
    _check_window(bound, cap)
    top = bound.bit_length() - 1
    elements = [x for x in basis_elements(spec, top, max(SUBSET_CAP, top + 1)) if x <= bound]
    in_full, in_rest = witness_membership(elements, a, h, n_T)
    return WitnessRecord(a, i, T, n_T, in_full, in_rest, in_full and not in_rest, mode)


# ---------------------------------------------------------------------------
# removability scan


@dataclass(frozen=True)
class ElementResult:
    a: int
    part: int
    verdict: str
    e_a_size: int
    e_a_in_tail: int
    e_a_min: Optional[int]
    e_a_max: Optional[int]
    witnesses: tuple = ()

    def to_dict(self):
        d = asdict(self)
        d["witnesses"] = [w.to_dict() for w in self.witnesses]
        return d


@dataclass(frozen=True)
class MinimalityReport:
    spec: str
    partition: dict
    h: int
    T: int
    N: int
    a_max: int
    coverage_threshold: Optional[int]
    tail_start: int
    certificates: tuple
    results: tuple
    verdict: str
    witness_mode: Optional[str] = None
    notes: tuple = field(default=())

    @property
    def removable(self):
        return [r.a for r in self.results if r.verdict == REFUTED_IN_WINDOW]

    @property
    def unverified_witnesses(self):
        return [(w.a, w.T) for r in self.results for w in r.witnesses if not w.verified]

    def to_dict(self):
        return {
            "spec": self.spec,
            "partition": self.partition,
            "h": self.h,
            "T": self.T,
            "N": self.N,
            "a_max": self.a_max,
            "coverage_threshold": self.coverage_threshold,
            "tail_start": self.tail_start,
            "certificates": [c.to_dict() for c in self.certificates],
            "results": [r.to_dict() for r in self.results],
            "verdict": self.verdict,
            "witness_mode": self.witness_mode,
            "notes": list(self.notes),
        }


def theorem_certificates(spec: PartitionSpec, h: int, t_max: int = 64):
    """Condition reports that certify minimality: the counting condition and the run condition."""
    if h != spec.h:
        return ()
    certs = []
    thm1 = thm1_condition(spec, t_max)
    if thm1.periodic_proof:
        certs.append(thm1)
    try:
        thm2 = thm2_condition(spec)
    except ZeroNotInW1:
        thm2 = None
    if thm2 is not None and thm2.holds:
        certs.append(thm2)
    return tuple(certs)


def _witness_records(spec, a, h, T, mode, hA_bits, avoid, N, limit):
    out = []
    for Tw in range(T - 1, -1, -1):
        if len(out) >= limit or (1 << Tw) <= a:
            break
        if not is_admissible(spec, a, Tw, mode):
            continue
        n = witness(spec, a, Tw, mode)
        if n > N:
            continue
        in_full = bool(hA_bits[n])
        in_rest = bool(avoid[n] > 0)
        out.append(WitnessRecord(a, classify_element(spec, a), Tw, n, in_full, in_rest,
                                 in_full and not in_rest, mode))
    return tuple(out)


def removability_scan(spec: PartitionSpec, h: int, T: int, a_max: int, workers: int = 1,
                      cap: Optional[int] = None, witness_limit: int = 2,
                      t_max: int = 64) -> MinimalityReport:
    """Look for elements ``a <= a_max`` of A whose ``E_a`` dies out inside the window.

    ``a`` is flagged REFUTED-IN-WINDOW when ``E_a`` has no element in the
    tail ``[tail_start, N]``, where ``tail_start`` is the larger of the
    coverage threshold and ``2**max(L, T + 1 - p)`` for the canonical prefix
    length ``L`` and period ``p``: the top ``p`` bit levels, which see every
    part. An ``E_a`` that stops before the tail is finite as far as the
    window shows; a nonempty tail is support for infinitude.

    ``E_a`` membership comes from ordered representation counts: ``n`` is in
    ``h(A \\ {a})`` iff the count of h-tuples avoiding ``a`` is positive.
    """
    elements, window = build_basis_window(spec, T, cap)
    N = window.N
    R = representation_counts(elements, h, N, cap)
    hA_bits = R[h] > 0
    n0 = coverage_threshold(WindowSet(N, hA_bits))
    canon = spec.canonical()
    tail_start = max(0 if n0 is None else n0, 1 << max(canon.L, T + 1 - canon.period))

    certs = theorem_certificates(spec, h, t_max)
    kinds = {c.kind for c in certs}
    mode = THM1 if "THM1-COUNTING" in kinds else THM2 if "THM2-RUNS" in kinds else None
    candidates = [x for x in elements if x <= a_max]

    def one(a):
        avoid = avoiding_counts(R, a, h)
        e_bits = hA_bits & (avoid == 0)
        members = np.flatnonzero(e_bits)
        in_tail = int(e_bits[tail_start:].sum())
        wit = _witness_records(spec, a, h, T, mode, hA_bits, avoid, N, witness_limit) if mode else ()
        if in_tail == 0:
            verdict = REFUTED_IN_WINDOW
        elif certs:
            verdict = THEOREM_PROVEN
        else:
            verdict = EMPIRICAL_SUPPORTED
        return ElementResult(a, classify_element(spec, a), verdict, int(members.size), in_tail,
                             int(members[0]) if members.size else None,
                             int(members[-1]) if members.size else None, wit)

    if workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, candidates))
    else:
        results = [one(a) for a in candidates]

    verdicts = {r.verdict for r in results}
    if REFUTED_IN_WINDOW in verdicts:
        overall = REFUTED_IN_WINDOW
    elif certs:
        overall = THEOREM_PROVEN
    else:
        overall = EMPIRICAL_SUPPORTED
    notes = [f"REFUTED-IN-WINDOW means E_a is empty on [{tail_start}, {N}]; "
             "window-relative evidence, not a disproof"]
    if n0 is None:
        notes.append("hA does not cover the top of the window")
    return MinimalityReport(spec.label, spec.to_dict(), h, T, N, a_max, n0, tail_start, certs,
                            tuple(results), overall, mode, tuple(notes))


def witness_suite(spec: PartitionSpec, h: int, Ts: Sequence[int], a_max: int,
                  modes: Sequence[str] = (THM1, THM2), workers: int = 1,
                  cap: Optional[int] = None) -> list:
    """Verify the witness for every ``a <= a_max`` in A and every admissible ``T``.

    Returns the records sorted by ``(a, T, mode)``; inadmissible pairs are skipped.
    """
    top = max(a_max.bit_length(), 1)
    elements = [x for x in basis_elements(spec, top) if x <= a_max]
    jobs = [(a, T, mode) for a in elements for T in Ts for mode in modes
            if is_admissible(spec, a, T, mode)]

    def one(job):
        a, T, mode = job
        return verify_witness(spec, a, h, witness(spec, a, T, mode), T, mode, cap)

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, jobs))
    else:
        records = [one(job) for job in jobs]
    return sorted(records, key=lambda r: (r.a, r.T, r.mode))
