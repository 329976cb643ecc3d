"""Serialization of reports: stable JSON (schema ``minbasis/1``) or text tables."""

from __future__ import annotations

import json

SCHEMA = "minbasis/1"


def _plain(obj):
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return obj


def envelope(kind: str, payload: dict) -> dict:
    return {"schema": SCHEMA, "kind": kind, **payload}


def to_json(doc) -> str:
    return json.dumps(doc, sort_keys=True)


def emit_report(report, fmt: str = "json") -> str:
    """Serialize a report document, or a list of row documents (one JSON object per line)."""
    if fmt not in ("json", "text"):
        raise ValueError(f"format must be json or text, got {fmt!r}")
    if isinstance(report, (list, tuple)):
        rows = [_plain(r) for r in report]
        if fmt == "json":
            return "".join(to_json(r) + "\n" for r in rows)
        return render_rows(rows)
    doc = _plain(report)
    if fmt == "json":
        return to_json(doc) + "\n"
    renderer = _TEXT.get(doc.get("kind"), _render_generic)
    return renderer(doc)


def parse_report(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) == 1:
        return json.loads(lines[0])
    return [json.loads(ln) for ln in lines]


# ---------------------------------------------------------------------------
# text rendering


def _table(headers, rows):
    cells = [[str(h) for h in headers]] + [["" if c is None else str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _short(seq, n=12):
    seq = list(seq)
    body = ", ".join(map(str, seq[:n]))
    return f"[{body}{', ...' if len(seq) > n else ''}]"


def gaps_line(gaps, lo, hi):
    if not gaps:
        return f"no gaps in [{lo},{hi}]"
    return f"{len(gaps)} gaps in [{lo},{hi}]: {_short(gaps)}"


def _render_basis(doc):
    out = [
        f"spec        {doc['spec']}",
        f"order h     {doc['h']}",
        f"window      T={doc['T']}  N={doc['N']}  |A ∩ [0,N]|={doc['element_count']}",
        f"threshold   {doc['coverage_threshold'] if doc['coverage_threshold'] is not None else 'ABSENT'}",
        gaps_line(doc["gaps"], 0, doc["N"]),
    ]
    n0 = doc["coverage_threshold"]
    if n0 is not None and n0 > 0:
        out.append(gaps_line([g for g in doc["gaps"] if g >= n0], n0, doc["N"]))
    out.append(f"status      {doc['status']}")
    return "\n".join(out) + "\n"


def _render_conditions(doc):
    rows = []
    for c in doc["conditions"]:
        rows.append([c["kind"], c["holds"], c["periodic_proof"], _short(c["witnesses"], 8),
                     c.get("detail", "")])
    out = [f"spec {doc['spec']}  (h={doc['h']}, r_of(h)={doc['r']})",
           _table(["condition", "holds", "exact", "witnesses", "detail"], rows)]
    runs = [[r["part"], r["run_start"]] for r in doc["runs"]]
    out.append(_table(["part", f"run of {doc['r']} starts at"], runs))
    for note in doc.get("notes", []):
        out.append(f"note: {note}")
    out.append(f"status {doc['status']}")
    return "\n".join(out) + "\n"


def _render_minimal(doc):
    rows = []
    for r in doc["results"]:
        wit = ", ".join(f"T={w['T']}:{'ok' if w['verified'] else 'FAIL'}" for w in r["witnesses"])
        rows.append([r["a"], r["part"], r["verdict"], r["e_a_size"], r["e_a_in_tail"],
                     r["e_a_max"], wit])
    head = [
        f"spec {doc['spec']}  h={doc['h']}  T={doc['T']}  N={doc['N']}  a_max={doc['a_max']}",
        f"coverage threshold {doc['coverage_threshold']}  tail [{doc['tail_start']},{doc['N']}]",
        "certificates: " + (", ".join(c["kind"] for c in doc["certificates"]) or "none"),
    ]
    body = _table(["a", "part", "verdict", "|E_a|", "in tail", "max E_a", "witnesses"], rows)
    tail = [f"verdict {doc['verdict']}"] + [f"note: {n}" for n in doc.get("notes", [])]
    return "\n".join(head + [body] + tail) + "\n"


def _render_witness(doc):
    keys = ["spec", "mode", "a", "part", "T", "n_T", "in_hA", "in_hA_minus_a", "verified"]
    return "\n".join(f"{k:<14}{doc[k]}" for k in keys) + "\n"


def _render_decompose(doc):
    rows = [[f"J_{i}", f"2^{w}", "{" + ",".join(map(str, J)) + "}"]
            for i, (w, J) in enumerate(zip(doc["targets"], doc["sets"]), start=1)]
    out = [f"terms {doc['terms']}", _table(["set", "target", "indices"], rows),
           "leftover {" + ",".join(map(str, doc["leftover"])) + "}",
           f"verified {doc['verified']}"]
    return "\n".join(out) + "\n"


def render_rows(rows):
    table = []
    for r in rows:
        table.append([r["key"], r["holds_thm1"], r["holds_thm2"], r["holds_thmE"],
                      r["thmB_prediction"] or "-", r["coverage_threshold"],
                      _short(r["removable"], 4), "ANOMALY" if r["anomaly"] else ""])
    return _table(["spec", "thm1", "thm2", "thmE", "thmB", "n0", "removable", ""], table) + "\n"


def _render_generic(doc):
    return "\n".join(f"{k}: {v}" for k, v in sorted(doc.items())) + "\n"


_TEXT = {
    "basis": _render_basis,
    "conditions": _render_conditions,
    "minimality": _render_minimal,
    "witness": _render_witness,
    "decomposition": _render_decompose,
}
