"""Verification records and their CSV/JSON serialization."""
from __future__ import annotations

import csv
import io
import json
import math
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

FIXED_COLUMNS = ("check_id", "paper_eq", "metric", "threshold", "pass", "runtime_ms")


class ReportWriteError(OSError):
    """The report destination could not be written."""


@dataclass
class Record:
    check_id: str
    paper_eq: str
    metric: float
    threshold: float
    runtime_ms: int = 0
    parameters: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        # nan never passes
        return bool(self.metric <= self.threshold)

    def as_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "paper_eq": self.paper_eq,
            "metric": self.metric,
            "threshold": self.threshold,
            "pass": self.passed,
            "runtime_ms": self.runtime_ms,
            "parameters": dict(self.parameters),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Record":
        return cls(d["check_id"], d["paper_eq"], float(d["metric"]), float(d["threshold"]),
                   int(d["runtime_ms"]), dict(d.get("parameters", {})))


def _flatten(params: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in params.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, complex):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return str(v)


def _json_value(v):
    if isinstance(v, complex):
        return repr(v)
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in sorted(v.items())}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


@dataclass
class VerificationReport:
    records: list[Record] = field(default_factory=list)

    def add(self, check_id, paper_eq, metric, threshold, *, runtime_ms=0, **parameters) -> Record:
        for label in (check_id, paper_eq):
            if not str(label).isprintable():
                raise ValueError(f"record labels must be printable, got {label!r}")
        rec = Record(check_id, paper_eq, float(metric), float(threshold), int(runtime_ms), parameters)
        self.records.append(rec)
        return rec

    @contextmanager
    def timed(self, check_id, paper_eq, threshold, **parameters):
        """Context yielding a dict; set ``["metric"]`` inside, the record is added on exit."""
        slot = {"metric": math.nan}
        t0 = time.perf_counter()
        yield slot
        ms = int(round((time.perf_counter() - t0) * 1000))
        self.add(check_id, paper_eq, slot["metric"], threshold, runtime_ms=ms, **parameters)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.records)

    def columns(self) -> list[str]:
        keys = set()
        for r in self.records:
            keys.update(_flatten(r.parameters))
        return list(FIXED_COLUMNS) + sorted(keys)

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = self.columns()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.records:
            d = r.as_dict()
            flat = _flatten(r.parameters)
            w.writerow([_cell(d[c]) if c in FIXED_COLUMNS else _cell(flat.get(c, "")) for c in cols])
        return buf.getvalue()

    def to_json(self) -> str:
        recs = []
        for r in self.records:
            d = r.as_dict()
            d["parameters"] = _json_value(d["parameters"])
            recs.append(d)
        return json.dumps({"records": recs}, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls([Record.from_dict(d) for d in json.loads(text)["records"]])


def emit(report: VerificationReport, fmt: str = "json", destination=None) -> None:
    """Write ``report`` as ``csv`` or ``json`` to a path, or to stdout when ``destination`` is None or ``-``."""
    if fmt == "csv":
        text = report.to_csv()
    elif fmt == "json":
        text = report.to_json()
    else:
        raise ValueError(f"unknown report format {fmt!r}; expected csv or json")
    if destination is None or str(destination) == "-":
        sys.stdout.write(text)
        return
    path = Path(destination)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
