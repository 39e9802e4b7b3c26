"""Flat CSV / JSON output of run reports."""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Dict, List, Sequence

from ..algorithms import RunReport

COLUMNS = (
    "algorithm",
    "K",
    "epsilon",
    "T",
    "seed",
    "fvalue",
    "relative_performance",
    "oracle_queries",
    "peak_elements",
    "peak_candidates",
    "passes",
    "wall_time_ms",
    "summary_size",
    "items_processed",
    "resets",
    "threshold_drops",
    "params",
)

_CORE = {"K", "epsilon", "T"}


def record(r: RunReport, include_timing: bool = False) -> Dict[str, Any]:
    c = r.counters
    extra = {k: v for k, v in sorted(r.config.items()) if k not in _CORE}
    return {
        "algorithm": r.algorithm,
        "K": r.K,
        "epsilon": r.config.get("epsilon"),
        "T": r.config.get("T"),
        "seed": r.seed,
        "fvalue": r.fvalue,
        "relative_performance": r.relative_performance,
        "oracle_queries": c.oracle_queries,
        "peak_elements": c.peak_elements,
        "peak_candidates": c.peak_candidates,
        "passes": c.passes,
        "wall_time_ms": r.wall_time * 1000.0 if include_timing else None,
        "summary_size": len(r.summary),
        "items_processed": c.items_processed,
        "resets": c.resets,
        "threshold_drops": c.threshold_drops,
        "params": json.dumps(extra, sort_keys=True) if extra else "",
    }


def _row_key(rec: Dict[str, Any]):
    def k(v):
        return (v is None, "" if v is None else v if isinstance(v, str) else float(v))

    return (rec["algorithm"], k(rec["K"]), k(rec["epsilon"]), k(rec["T"]), rec["params"], k(rec["seed"]))


def records(reports: Sequence[RunReport], include_timing: bool = False) -> List[Dict[str, Any]]:
    recs = [record(r, include_timing) for r in reports]
    recs.sort(key=_row_key)
    return recs


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(reports: Sequence[RunReport], fmt: str = "csv", include_timing: bool = False) -> str:
    """Serialise reports; wall time is left blank unless ``include_timing``.

    Leaving timing out makes repeated runs byte-identical.
    """
    if not reports:
        raise ValueError("no reports to emit")
    recs = records(reports, include_timing)
    if fmt == "json":
        return json.dumps(recs, indent=1) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for rec in recs:
        w.writerow([_cell(rec[c]) for c in COLUMNS])
    return buf.getvalue()


def emit_report(reports: Sequence[RunReport], fmt: str, path, include_timing: bool = False) -> str:
    text = render(reports, fmt, include_timing)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text
