"""Sweeps over small periodic partitions, cross-tabulating conditions and window verdicts."""

from __future__ import annotations

import itertools
import json
import os
from math import comb
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .config import ENUM_CAP
from .errors import BadParam, SpaceTooLarge
from .minimality import REFUTED_IN_WINDOW, removability_scan
from .report import envelope, to_json
from .partition import (MINIMAL, PartitionSpec, part_of, thm1_condition, thm2_condition,
                        thmB_predict, thmE_condition)


DEFAULT_A_MAX = 255


def surjection_count(p: int, h: int) -> int:
    """Number of maps from ``p`` slots onto ``h`` labels."""
    return sum((-1) ** k * comb(h, k) * (h - k) ** p for k in range(h + 1))


def _first_occurrence_normal(seq):
    relabel = {}
    for x in seq:
        relabel.setdefault(x, len(relabel) + 1)
    return tuple(relabel[x] for x in seq)


def enumerate_periodic_specs(h: int, p: int, prefix_len: int = 0, enum_cap: int = ENUM_CAP,
                             quotient_labels: bool = False) -> Iterator[PartitionSpec]:
    """Every valid spec with exactly this period and prefix length, in lexicographic order.

    With ``quotient_labels`` only one representative per relabeling class is
    kept (labels numbered by first appearance).
    """
    if h < 2:
        raise BadParam(f"h must be >= 2, got {h}")
    if p < 1 or prefix_len < 0:
        raise BadParam(f"need p >= 1 and prefix_len >= 0, got p={p}, prefix_len={prefix_len}")
    if prefix_len > 4:
        raise BadParam(f"prefix_len is limited to 4, got {prefix_len}")
    size = h ** (p + prefix_len)
    if size > enum_cap:
        raise SpaceTooLarge(f"{h}^{p + prefix_len} = {size} candidate labelings exceed cap {enum_cap}")
    if p < h:
        return
    labels = range(1, h + 1)
    seen = set()
    for prefix in itertools.product(labels, repeat=prefix_len):
        for pattern in itertools.product(labels, repeat=p):
            if len(set(pattern)) < h:
                continue
            if quotient_labels and _first_occurrence_normal(prefix + pattern) != prefix + pattern:
                continue
            spec = PartitionSpec(h, prefix, p, pattern)
            key = spec.key()
            if key in seen:
                continue
            seen.add(key)
            yield spec


def zero_in_first(spec: PartitionSpec) -> PartitionSpec:
    """Swap labels so that 0 lies in W_1; identity when it already does."""
    z = part_of(spec, 0)
    if z == 1:
        return spec
    swap = {1: z, z: 1}

    def f(seq):
        return tuple(swap.get(x, x) for x in seq)

    return PartitionSpec(spec.h, f(spec.prefix), spec.period, f(spec.pattern), name=spec.name)


@dataclass(frozen=True)
class ClassificationRow:
    spec: str
    partition: dict
    key: str
    holds_thm1: bool
    thm1_witnesses: tuple
    holds_thm2: bool
    holds_thmE: bool
    thmB_prediction: Optional[str]
    relabeled: bool
    coverage_threshold: Optional[int]
    removable: tuple
    T: int
    N: int
    a_max: int
    predicted_minimal: bool
    anomaly: bool

    def to_dict(self):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["thm1_witnesses"] = list(self.thm1_witnesses)
        d["removable"] = list(self.removable)
        return d


def spec_key(spec: PartitionSpec) -> str:
    h, prefix, pattern = spec.key()
    return f"{h}:{''.join(map(str, prefix)) if h < 10 else ','.join(map(str, prefix))}|" \
           f"{''.join(map(str, pattern)) if h < 10 else ','.join(map(str, pattern))}"


def classify_spec(spec: PartitionSpec, h: int, T: int, a_max: Optional[int] = None,
                  t_max: int = 64) -> ClassificationRow:
    named = zero_in_first(spec)
    thm1 = thm1_condition(spec, t_max)
    holds_thm2 = thm2_condition(named).holds
    holds_thmE = thmE_condition(spec).holds
    pred = thmB_predict(named) if spec.h == 2 else None
    report = removability_scan(spec, h, T, DEFAULT_A_MAX if a_max is None else a_max,
                               witness_limit=0, t_max=t_max)
    removable = tuple(r.a for r in report.results if r.verdict == REFUTED_IN_WINDOW)
    predicted = h == spec.h and (thm1.periodic_proof or holds_thm2 or holds_thmE or pred == MINIMAL)
    return ClassificationRow(
        spec=spec.label, partition=spec.to_dict(), key=spec_key(spec),
        holds_thm1=thm1.periodic_proof, thm1_witnesses=thm1.witnesses,
        holds_thm2=holds_thm2, holds_thmE=holds_thmE, thmB_prediction=pred,
        relabeled=named is not spec, coverage_threshold=report.coverage_threshold,
        removable=removable, T=T, N=report.N, a_max=report.a_max,
        predicted_minimal=predicted, anomaly=predicted and bool(removable),
    )


def classify_partitions(specs: Iterable[PartitionSpec], h: int, T: int,
                        a_max: Optional[int] = None, workers: int = 1,
                        t_max: int = 64) -> list:
    """One row per spec, rows sorted by spec key."""
    specs = list(specs)

    def one(s):
        return classify_spec(s, h, T, a_max, t_max)

    if workers > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, specs))
    else:
        rows = [one(s) for s in specs]
    return sorted(rows, key=lambda r: r.key)


def sweep_specs(h: int, periods: Iterable[int], prefix_lens: Iterable[int],
                enum_cap: int = ENUM_CAP, quotient_labels: bool = False) -> list:
    """Union over periods and prefix lengths, deduplicated as assignment functions."""
    seen = set()
    out = []
    for L in prefix_lens:
        for p in periods:
            for spec in enumerate_periodic_specs(h, p, L, enum_cap, quotient_labels):
                key = spec.key()
                if key not in seen:
                    seen.add(key)
                    out.append(spec)
    return sorted(out, key=spec_key)


def run_sweep(specs: list, h: int, T: int, out_path=None, a_max: Optional[int] = None,
              workers: int = 1, resume: bool = False, checkpoint_every: int = 1000,
              t_max: int = 64):
    """Classify ``specs`` writing one JSON line per row, checkpointing as it goes.

    Returns ``(new rows, records kept from a previous run)``. With ``resume``
    the rows already present in ``out_path`` are kept and their specs skipped.
    """
    done = {}
    if resume and out_path and os.path.exists(out_path):
        with open(out_path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    rec = json.loads(line)
                    done[rec["key"]] = rec
    todo = [s for s in specs if spec_key(s) not in done]
    rows = []
    mode = "a" if resume else "w"
    fh = open(out_path, mode) if out_path else None
    try:
        for start in range(0, len(todo), checkpoint_every):
            batch = classify_partitions(todo[start:start + checkpoint_every], h, T, a_max,
                                        workers, t_max)
            rows.extend(batch)
            if fh:
                for row in batch:
                    fh.write(to_json(envelope("classification", row.to_dict())) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
    finally:
        if fh:
            fh.close()
    return rows, list(done.values())
