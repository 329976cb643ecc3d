"""Command line entry point: ``minbasis <command> [options]``.

Exit status: 0 on success, 2 when a check fails, 1 on usage or config errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import minimality as mn
from .config import ENUM_CAP, window_cap
from .errors import MinbasisError, ZeroNotInW1
from .partition import (part_of, r_of, resolve_spec, run_condition,
                        thm1_condition, thm2_condition, thmB_condition, thmE_condition)
from .radix import lemma2_decompose, verify_decomposition
from .report import emit_report, envelope
from .search import run_sweep, sweep_specs
from .sumset import (build_basis_window, coverage_threshold, dump_window, gaps,
                     h_fold_sumset, load_window)

COMMANDS = ("check-basis", "check-conditions", "check-minimal", "witness", "decompose",
            "sweep", "gen")

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default; 2 is reserved for failed checks
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    spec: Optional[str] = None
    h: Optional[int] = None
    T: Optional[int] = None
    a: Optional[int] = None
    a_max: int = 64
    t_max: int = 40
    mode: Optional[str] = None
    targets: list = field(default_factory=list)
    terms: list = field(default_factory=list)
    periods: list = field(default_factory=lambda: [2, 3, 4])
    prefix_lens: list = field(default_factory=lambda: [0])
    quotient_labels: bool = False
    resume: bool = False
    expect_threshold: Optional[int] = None
    cache: Optional[str] = None
    format: str = "json"
    window_cap: int = field(default_factory=window_cap)
    enum_cap: int = ENUM_CAP
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    output: Optional[str] = None

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.window_cap <= 0 or self.enum_cap <= 0:
            raise UsageError("caps must be positive")
        if self.format not in ("json", "text"):
            raise UsageError(f"--format must be json or text, got {self.format!r}")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        needs_spec = {"check-basis", "check-conditions", "check-minimal", "witness", "gen"}
        if self.command in needs_spec and not self.spec:
            raise UsageError(f"{self.command} needs --spec (builtin like nathanson:2 or a JSON file)")
        if self.command in {"check-basis", "check-minimal", "witness", "sweep"} and self.T is None:
            raise UsageError(f"{self.command} needs --T")
        if self.T is not None:
            if self.T < 0:
                raise UsageError("--T must be >= 0")
            N = (1 << (self.T + 1)) - 1
            if N > self.window_cap:
                raise UsageError(f"--T {self.T} gives window N = {N}, above the window cap "
                                 f"{self.window_cap} (raise --window-cap or MINBASIS_WINDOW_CAP)")
        if self.command == "witness" and self.a is None:
            raise UsageError("witness needs --a")
        if self.command == "decompose" and not self.targets:
            raise UsageError("decompose needs --targets")
        if self.command == "sweep" and self.h is None:
            raise UsageError("sweep needs --h")
        if self.mode is not None and self.mode not in (mn.THM1, mn.THM2):
            raise UsageError(f"--mode must be THM1 or THM2, got {self.mode!r}")


# ---------------------------------------------------------------------------
# commands; each returns (exit status, document)


def _spec_and_h(cfg):
    spec = resolve_spec(cfg.spec)
    return spec, cfg.h if cfg.h is not None else spec.h


def _cache_path(cfg, spec, h):
    if not cfg.cache:
        return None
    os.makedirs(cfg.cache, exist_ok=True)
    safe = spec.label.replace("/", "_").replace(":", "_").replace("|", "_")
    return os.path.join(cfg.cache, f"{safe}_h{h}_T{cfg.T}.mbws")


def cmd_check_basis(cfg):
    spec, h = _spec_and_h(cfg)
    elements, window = build_basis_window(spec, cfg.T, cfg.window_cap)
    cached = _cache_path(cfg, spec, h)
    sums = None
    if cached and os.path.exists(cached):
        sums = load_window(cached)
        if sums.N != window.N:
            sums = None
    if sums is None:
        sums = h_fold_sumset(elements, h, window.N, cfg.workers, cfg.window_cap)
        if cached:
            dump_window(sums, cached)
    n0 = coverage_threshold(sums)
    missing = gaps(sums, 0, window.N)
    failed = n0 is None or (cfg.expect_threshold is not None and n0 > cfg.expect_threshold)
    doc = envelope("basis", {
        "spec": spec.label, "partition": spec.to_dict(), "h": h, "T": cfg.T, "N": window.N,
        "element_count": len(elements), "coverage_threshold": n0, "gaps": missing,
        "expected_threshold": cfg.expect_threshold, "status": "FAIL" if failed else "PASS",
    })
    return (EXIT_FAIL if failed else EXIT_OK), doc


def cmd_check_conditions(cfg):
    spec, h = _spec_and_h(cfg)
    conditions, notes = [], []
    thm1 = thm1_condition(spec, cfg.t_max)
    conditions.append(thm1)
    try:
        thm2 = thm2_condition(spec)
        conditions.append(thm2)
    except ZeroNotInW1 as exc:
        thm2 = None
        notes.append(f"run condition check skipped: {exc}")
    thmE = thmE_condition(spec)
    conditions.append(thmE)
    thmB = None
    if spec.h == 2:
        try:
            thmB = thmB_condition(spec)
            conditions.append(thmB)
        except ZeroNotInW1 as exc:
            notes.append(f"two-part dichotomy skipped: {exc}")
    r = r_of(spec.h)
    runs = [{"part": j, "run_start": run_condition(spec, j, r)} for j in range(1, spec.h + 1)]
    certified = (thm1.periodic_proof or (thm2 is not None and thm2.holds) or thmE.holds
                 or (thmB is not None and thmB.holds))
    doc = envelope("conditions", {
        "spec": spec.label, "partition": spec.to_dict(), "h": spec.h, "r": r,
        "zero_part": part_of(spec, 0), "t_max": cfg.t_max,
        "conditions": [c.to_dict() for c in conditions], "runs": runs,
        "thmB_prediction": None if thmB is None else thmB.detail,
        "notes": notes, "status": "PASS" if certified else "FAIL",
    })
    return (EXIT_OK if certified else EXIT_FAIL), doc


def cmd_check_minimal(cfg):
    spec, h = _spec_and_h(cfg)
    report = mn.removability_scan(spec, h, cfg.T, cfg.a_max, cfg.workers, cfg.window_cap,
                                  t_max=max(cfg.t_max, 1))
    doc = envelope("minimality", report.to_dict())
    failed = report.verdict == mn.REFUTED_IN_WINDOW or bool(report.unverified_witnesses)
    return (EXIT_FAIL if failed else EXIT_OK), doc


def _auto_mode(spec, a, T):
    for mode in (mn.THM1, mn.THM2):
        if mn.is_admissible(spec, a, T, mode):
            return mode
    return mn.THM1


def cmd_witness(cfg):
    spec, h = _spec_and_h(cfg)
    mode = cfg.mode or _auto_mode(spec, cfg.a, cfg.T)
    n_T = mn.witness(spec, cfg.a, cfg.T, mode)
    rec = mn.verify_witness(spec, cfg.a, h, n_T, cfg.T, mode, cfg.window_cap)
    doc = envelope("witness", {"spec": spec.label, "h": h, **rec.to_dict()})
    return (EXIT_OK if rec.verified else EXIT_FAIL), doc


def cmd_decompose(cfg):
    d = lemma2_decompose(cfg.targets, cfg.terms)
    ok = verify_decomposition(d)
    doc = envelope("decomposition", {**d.to_dict(), "verified": ok})
    return (EXIT_OK if ok else EXIT_FAIL), doc


def cmd_sweep(cfg):
    specs = sweep_specs(cfg.h, cfg.periods, cfg.prefix_lens, cfg.enum_cap, cfg.quotient_labels)
    rows, kept = run_sweep(specs, cfg.h, cfg.T, cfg.output, cfg.a_max, cfg.workers, cfg.resume,
                           t_max=cfg.t_max)
    docs = [envelope("classification", r.to_dict()) for r in rows]
    anomalies = [d for d in docs + kept if d.get("anomaly")]
    return (EXIT_FAIL if anomalies else EXIT_OK), docs


def cmd_gen(cfg):
    spec = resolve_spec(cfg.spec)
    doc = spec.to_dict()
    doc["name"] = spec.label
    return EXIT_OK, doc


DISPATCH = {
    "check-basis": cmd_check_basis,
    "check-conditions": cmd_check_conditions,
    "check-minimal": cmd_check_minimal,
    "witness": cmd_witness,
    "decompose": cmd_decompose,
    "sweep": cmd_sweep,
    "gen": cmd_gen,
}


def run(cfg: RunConfig):
    """Execute one command; returns ``(exit status, serialized report)``."""
    try:
        cfg.validate()
        status, doc = DISPATCH[cfg.command](cfg)
    except (UsageError, MinbasisError, OSError, json.JSONDecodeError) as exc:
        return EXIT_USAGE, f"error: {exc}\n"
    if cfg.command == "gen":
        return status, json.dumps(doc, sort_keys=True) + "\n"
    return status, emit_report(doc, cfg.format)


# ---------------------------------------------------------------------------
# argument parsing


def _int_list(text):
    try:
        return [int(x) for x in str(text).replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _range_list(text):
    out = []
    for part in str(text).split(","):
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file of option defaults; flags override it")
    common.add_argument("--format", choices=["json", "text"])
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--workers", type=int)
    common.add_argument("--window-cap", type=lambda s: int(s, 0), dest="window_cap")
    common.add_argument("--enum-cap", type=lambda s: int(s, 0), dest="enum_cap")

    parser = _Parser(prog="minbasis",
                     description="Additive bases built from binary digit supports.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("check-basis", "h-fold sumset window, gaps and coverage threshold")
    p.add_argument("--spec"); p.add_argument("--h", type=int); p.add_argument("--T", type=int)
    p.add_argument("--expect-threshold", type=int, dest="expect_threshold")
    p.add_argument("--cache", help="directory for cached sumset windows")

    p = add("check-conditions", "sufficient conditions for minimality of a partition")
    p.add_argument("--spec"); p.add_argument("--t-max", type=int, dest="t_max")

    p = add("check-minimal", "removability scan over small basis elements")
    p.add_argument("--spec"); p.add_argument("--h", type=int); p.add_argument("--T", type=int)
    p.add_argument("--a-max", type=int, dest="a_max"); p.add_argument("--t-max", type=int, dest="t_max")

    p = add("witness", "build and verify the witness n_T for one element")
    p.add_argument("--spec"); p.add_argument("--h", type=int); p.add_argument("--T", type=int)
    p.add_argument("--a", type=int); p.add_argument("--mode", choices=[mn.THM1, mn.THM2])

    p = add("decompose", "split terms 2^x into groups summing to each 2^w")
    p.add_argument("--targets", type=_int_list); p.add_argument("--terms", type=_int_list)

    p = add("sweep", "classify all small periodic partitions")
    p.add_argument("--h", type=int); p.add_argument("--T", type=int)
    p.add_argument("--periods", type=_range_list, help="e.g. 2-6 or 2,3,5")
    p.add_argument("--prefix-lens", type=_range_list, dest="prefix_lens", help="e.g. 0-2")
    p.add_argument("--a-max", type=int, dest="a_max"); p.add_argument("--t-max", type=int, dest="t_max")
    p.add_argument("--quotient-labels", action="store_true", default=None, dest="quotient_labels")
    p.add_argument("--resume", action="store_true", default=None)

    p = add("gen", "print a builtin partition as a spec file")
    p.add_argument("--spec")
    return parser


def config_from_args(argv=None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    values = {}
    if args.get("config"):
        with open(args["config"]) as fh:
            values.update({k.replace("-", "_"): v for k, v in json.load(fh).items()})
    values.update({k: v for k, v in args.items() if v is not None and k != "config"})
    command = values.pop("command")
    known = set(RunConfig.__dataclass_fields__) - {"command"}
    unknown = sorted(set(values) - known)
    if unknown:
        raise UsageError(f"unknown config keys: {unknown}")
    return RunConfig(command, **values)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except (UsageError, OSError, json.JSONDecodeError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    status, text = run(cfg)
    if status == EXIT_USAGE:
        sys.stderr.write(text)
        return status
    if cfg.output and cfg.command != "sweep":
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
