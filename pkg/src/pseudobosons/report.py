"""Machine-readable verification reports.

Reports are byte-deterministic: keys keep insertion order, floats are
written with 17 significant digits, complex numbers as ``[re, im]``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Any

import numpy as np

SCHEMA = "pseudoboson-report/1"
VERSION = "0.1.0"

PASS, FAIL, INFO = "pass", "fail", "info"


@dataclass
class Check:
    name: str
    tag: str
    status: str
    values: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def bound(cls, name: str, tag: str, residual: float, tol: float, **values) -> "Check":
        """Pass when ``residual <= tol``."""
        ok = bool(np.isfinite(residual) and residual <= tol)
        return cls(name, tag, PASS if ok else FAIL, {"residual": residual, "tol": tol, **values})

    @classmethod
    def flag(cls, name: str, tag: str, ok: bool, **values) -> "Check":
        return cls(name, tag, PASS if ok else FAIL, values)

    @classmethod
    def info(cls, name: str, tag: str, **values) -> "Check":
        return cls(name, tag, INFO, values)

    def to_dict(self) -> dict:
        return {"name": self.name, "tag": self.tag, "status": self.status, "values": self.values}


@dataclass
class Report:
    command: str
    config: dict
    checks: list[Check] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    wall_time_ms: float | None = None
    tables: dict[str, tuple[list[str], np.ndarray]] = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 2

    def to_dict(self) -> dict:
        out = {
            "schema": SCHEMA,
            "version": VERSION,
            "command": self.command,
            "config": self.config,
            "status": PASS if self.passed else FAIL,
            "checks": [c.to_dict() for c in self.checks],
            "data": self.data,
        }
        if self.wall_time_ms is not None:
            out["wall_time_ms"] = self.wall_time_ms
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict()) + "\n"

    def to_csv(self) -> str:
        """Summary rows, then every labelled matrix as a bordered grid."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "tag", "status", "residual"])
        for c in self.checks:
            r = c.values.get("residual")
            w.writerow([c.name, c.tag, c.status, "" if r is None else format_float(r)])
        for name, (labels, matrix) in self.tables.items():
            w.writerow([])
            w.writerow([name] + list(labels))
            for lab, row in zip(labels, matrix):
                w.writerow([lab] + [format_complex(v) for v in row])
        return buf.getvalue()


def format_float(v: float) -> str:
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    s = format(v, ".17g")
    if all(ch not in s for ch in ".eEn"):
        s += ".0"
    return s


def format_complex(v: complex) -> str:
    v = complex(v)
    sign = "-" if math.copysign(1.0, v.imag) < 0 else "+"
    return f"{format_float(v.real)}{sign}{format_float(abs(v.imag))}j"


def _json_value(obj: Any) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        # JSON has no NaN; keep the file parseable
        return format_float(v) if math.isfinite(v) else json.dumps(format_float(v))
    if isinstance(obj, (complex, np.complexfloating)):
        return _json_value([complex(obj).real, complex(obj).imag])
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _json_value(obj.tolist())
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in obj) + "]"
    if hasattr(obj, "to_json"):
        return _json_value(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return _json_value(obj)


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
