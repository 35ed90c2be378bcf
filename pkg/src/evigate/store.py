"""On-disk bundle: everything ``query`` needs, written once by ``ingest``.

A bundle is a directory holding ``index.bin`` (the vector index),
``units.jsonl`` (the corpus), ``config.ini`` (the run configuration) and
``manifest.json``. Custom word lists are copied in so a bundle is
self-contained.
"""

from __future__ import annotations

import json
import shutil
from dataclasses import replace
from pathlib import Path

from .config import dump_config, load_config, parse_config
from .corpus import Corpus, EvidenceUnit
from .errors import EvigateError
from .index import load_index, save_index
from .pipeline import Engine

BUNDLE_FORMAT = "evigate-bundle"
BUNDLE_VERSION = 1
_LISTS = ("stopwords", "scaffold", "phrases")


def save_bundle(engine: Engine, path: str | Path) -> Path:
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    config = engine.config
    for name in _LISTS:
        src = getattr(config, name)
        if src is not None:
            dest = root / f"{name}.txt"
            if Path(src).resolve() != dest.resolve():
                shutil.copyfile(src, dest)
            config = replace(config, **{name: dest.name})
    save_index(engine.index, root / "index.bin")
    with open(root / "units.jsonl", "w", encoding="utf-8") as fh:
        for unit in engine.corpus:
            fh.write(json.dumps(unit.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
    (root / "config.ini").write_text(dump_config(config), encoding="utf-8")
    manifest = {
        "format": BUNDLE_FORMAT,
        "version": BUNDLE_VERSION,
        "units": len(engine.corpus),
        "dimension": engine.index.dimension,
        "embedding_mode": config.provider.mode,
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return root


def load_units(path: str | Path) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return Corpus.from_units(EvidenceUnit.from_dict(json.loads(line)) for line in fh if line.strip())


def load_bundle(path: str | Path, config_file: str | Path | None = None, **overrides) -> Engine:
    """Open a bundle; ``config_file`` and keyword overrides take precedence
    over the stored configuration, key by key."""
    root = Path(path)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise EvigateError(f"{root} is not an index bundle (no manifest.json)")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("format") != BUNDLE_FORMAT or manifest.get("version") != BUNDLE_VERSION:
        raise EvigateError(f"unsupported bundle format in {root}")
    config = load_config(root / "config.ini")
    for name in _LISTS:
        value = getattr(config, name)
        if value is not None and not Path(value).is_absolute():
            config = replace(config, **{name: str(root / value)})
    if config_file is not None:
        config = config.override(**parse_config(Path(config_file).read_text(encoding="utf-8")))
    config = config.override(**overrides)
    corpus = load_units(root / "units.jsonl")
    index = load_index(root / "index.bin")
    if len(index) != len(corpus):
        raise EvigateError(f"index has {len(index)} entries but corpus has {len(corpus)} units")
    return Engine(corpus, index, config)
