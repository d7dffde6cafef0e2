"""Output formats: ``#``-headed CSV and JSON reports.

Every file carries the run configuration and a format version. Only the
``# created:`` line (or ``created`` key) varies between identical runs.
"""

from __future__ import annotations

import datetime as _dt
import json

import numpy as np

FORMAT_VERSION = "kitaev-mzm/1"


def fmt(x):
    """Lossless text for one CSV cell."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _now():
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def config_json(config):
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def render_csv(columns, rows, config, meta=None, timestamp=None):
    """CSV text with a ``#`` header; ``meta`` adds ``# key: value`` lines."""
    lines = [
        f"# format: {FORMAT_VERSION}",
        f"# config: {config_json(config)}",
        f"# created: {timestamp or _now()}",
    ]
    lines += [f"# {k}: {v}" for k, v in (meta or {}).items()]
    lines.append(",".join(columns))
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def render_json(payload, config, timestamp=None):
    doc = {
        "format": FORMAT_VERSION,
        "config": config,
        "created": timestamp or _now(),
        **payload,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_csv_header(text):
    """Parse the ``# key: value`` header of a CSV produced by ``render_csv``."""
    meta = {}
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        key, _, value = line[1:].strip().partition(": ")
        meta[key] = json.loads(value) if key == "config" else value
    return meta


def read_csv_rows(text):
    body = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = body[0].split(",")
    return header, [ln.split(",") for ln in body[1:]]


def strip_timestamp(text):
    return "\n".join(
        ln for ln in text.splitlines()
        if not ln.startswith("# created:") and not ln.lstrip().startswith('"created"')
    )


def write_text(path, text):
    if path in (None, "-"):
        import sys

        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
