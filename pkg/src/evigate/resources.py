"""Access to the word lists bundled with the package."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path


def parse_list(text: str) -> tuple[str, ...]:
    """One entry per line; blank lines and ``#`` comments are skipped."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return tuple(out)


@lru_cache(maxsize=None)
def bundled_list(name: str) -> tuple[str, ...]:
    text = resources.files("evigate").joinpath("data", name).read_text(encoding="utf-8")
    return parse_list(text)


def read_list(path: str | Path) -> tuple[str, ...]:
    return parse_list(Path(path).read_text(encoding="utf-8"))
