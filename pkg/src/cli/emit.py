"""Rendering of reports as text or JSON."""

import json
from typing import Any

from cli.report import Report

TEXT = "text"
JSON = "json"


def _scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if value is None:
        return "-"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_scalar(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_scalar(v)}" for k, v in sorted(value.items())) + "}"
    return str(value)


def _block(title: str, items) -> list:
    lines = [f"{title}:"]
    if not items:
        lines.append("  (none)")
    for item in items:
        lines.append("  " + "  ".join(f"{k}={_scalar(v)}" for k, v in sorted(item.items())))
    return lines


def emit(report: Report, output_format: str = TEXT) -> str:
    """Text for humans, or JSON with sorted keys so identical runs print identical bytes."""
    data = report.as_dict()
    if output_format == JSON:
        return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)
    if output_format != TEXT:
        raise ValueError(f"[CLI] unknown output format '{output_format}'")
    verdict = {True: "PASS", False: "FAIL"}.get(data["verdict"], "DONE")
    lines = [f"{data['command']}: {verdict}"]
    if data["window"] is not None:
        lines.append(f"window {data['window']}")
    lines += _block("entries", data["entries"])
    lines += _block("certificates", data["certificates"])
    return "\n".join(lines)
