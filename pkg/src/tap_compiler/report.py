"""
key=value run reports
"""

import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

logger = logging.getLogger(__name__)


def _format_value(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (list, tuple)):
        return ",".join(_format_value(v) for v in value)
    if value is None:
        return "none"
    return str(value)


def format_report(entries: Dict[str, Any]) -> str:
    """One 'key=value' line per entry, in insertion order."""
    lines = []
    for key, value in entries.items():
        if any(c.isspace() or c == "=" for c in key):
            raise ValueError(f"Report key '{key}' may not contain whitespace or '='")
        lines.append(f"{key}={_format_value(value)}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Dict[str, str]:
    entries = {}
    for line in text.splitlines():
        if line.strip():
            key, _, value = line.partition("=")
            entries[key] = value
    return entries


def write_report(entries: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(format_report(entries))
    logger.info(f"Report written to {path}")
    return path
