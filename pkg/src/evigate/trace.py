"""Byte-stable JSON and TSV rendering for traces and sweep tables."""

from __future__ import annotations

import json
import math
from typing import Any, Iterable, Mapping, Sequence

PRECISION = 6


def fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x!r}")
    s = f"{x:.{PRECISION}f}"
    return "0.000000" if s == "-0.000000" else s


def dumps(obj: Any) -> str:
    """JSON with insertion-ordered keys and every float at fixed precision."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, Mapping):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def weights_label(weights: Sequence[float]) -> str:
    return "(" + ",".join(f"{w:.2f}" for w in weights) + ")"


SWEEP_COLUMNS = (
    "question", "weights", "retrieval_pct", "n", "mean_rel", "mean_mue",
    "max_sim", "max_rel", "anchor_ok", "phrase_ok", "gate",
)


def _tsv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, (list, tuple)):
        return weights_label(value)
    return str(value).replace("\t", " ").replace("\n", " ")


def sweep_tsv(rows: Iterable[Mapping[str, Any]]) -> str:
    rows = list(rows)
    columns = list(SWEEP_COLUMNS)
    if any("error" in r for r in rows):
        columns.append("error")
    lines = ["\t".join(columns)]
    for row in rows:
        lines.append("\t".join(_tsv_cell(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def sweep_json(rows: Iterable[Mapping[str, Any]]) -> str:
    rows = list(rows)
    if not rows:
        return "[]\n"
    return "[\n" + ",\n".join("  " + dumps(r) for r in rows) + "\n]\n"
