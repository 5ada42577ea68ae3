"""Report rendering: JSON for machines, aligned text for people."""

from __future__ import annotations

import json

from .evaluator import Report, jsonable

__all__ = ["emit_report"]


def emit_report(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_json(), indent=2, ensure_ascii=False) + "\n").encode()
    if fmt == "text":
        return _text(report).encode()
    raise ValueError(f"unknown format {fmt!r}")


def _fmt_value(v) -> str:
    v = jsonable(v)
    if isinstance(v, dict):
        return ", ".join(f"{k}={val}" for k, val in v.items())
    return str(v)


def _text(report: Report) -> str:
    lines = [f"{report.script}  ({report.engine})"]
    for r in report.results:
        mark = {"ok": "ok  ", "fail": "FAIL", "error": "ERR "}[r.status]
        lines.append(f"{mark} #{r.stmt:<4} line {r.line:<4} {r.kind:<13} {_fmt_value(r.value)}")
        for t in r.trace:
            lines.append(f"        {t}")
    lines.append(f"summary: pass={report.passed} fail={report.failed} error={report.errored}")
    return "\n".join(lines) + "\n"
