"""Command-line interface.

``query``, ``explain`` and ``sweep`` run in-process against a bundle given
with ``--index``, or act as thin clients of a running service when
``--server`` is given.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

import httpx

from .config import load_config
from .corpus import load_corpus
from .errors import EvigateError
from .pipeline import Engine
from .resources import read_list
from .select import MueWeights
from .store import load_bundle, save_bundle
from .trace import dumps, fmt_float, sweep_json, sweep_tsv

log = logging.getLogger("evigate")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("configuration (each flag overrides one config key)")
    g.add_argument("--config", type=Path, help="flat key = value config file")
    g.add_argument("--weights", help="lambda,mu,nu for CI, Sim, Rel (must sum to 1)")
    g.add_argument("--top-k", type=int)
    g.add_argument("--gamma", type=float)
    g.add_argument("--delta-dup", type=float)
    g.add_argument("--cand-k", type=int)
    g.add_argument("--k-min", type=int)
    g.add_argument("--tau-rel", type=float)
    g.add_argument("--tau-sim", type=float)
    g.add_argument("--mean-rel-min", type=float)
    g.add_argument("--mean-mue-min", type=float)
    g.add_argument("--phrase-anchoring", action=argparse.BooleanOptionalAction, default=None)
    g.add_argument("--fuzzy", action=argparse.BooleanOptionalAction, default=None)
    g.add_argument("--fuzzy-threshold", type=float)
    g.add_argument("--stopwords", type=Path)
    g.add_argument("--scaffold", type=Path)
    g.add_argument("--phrases", type=Path)
    g.add_argument("--embedding-mode", choices=["local_hash", "remote"])
    g.add_argument("--dimension", type=int)
    g.add_argument("--endpoint", help="remote embedding service URL")
    g.add_argument("--answer-mode", choices=["extractive", "generator"])
    g.add_argument("--generator-endpoint")


_FLAG_KEYS = (
    "top_k", "gamma", "delta_dup", "cand_k", "k_min", "tau_rel", "tau_sim", "mean_rel_min",
    "mean_mue_min", "phrase_anchoring", "fuzzy", "fuzzy_threshold", "dimension", "endpoint",
    "answer_mode", "generator_endpoint",
)


def _overrides(args: argparse.Namespace) -> dict:
    out = {k: getattr(args, k) for k in _FLAG_KEYS}
    out["embedding_mode"] = args.embedding_mode
    for name in ("stopwords", "scaffold", "phrases"):
        value = getattr(args, name)
        out[name] = str(value.resolve()) if value is not None else None
    if args.weights:
        w = MueWeights.parse(args.weights)
        out.update({"lambda": w.lam, "mu": w.mu, "nu": w.nu})
    return out


def _engine(args: argparse.Namespace) -> Engine:
    if args.index is None:
        raise EvigateError("--index is required unless --server is given")
    return load_bundle(args.index, args.config, **_overrides(args))


def _post(server: str, path: str, payload: dict) -> dict:
    try:
        resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=60.0)
    except httpx.TransportError as exc:
        raise EvigateError(f"cannot reach {server}: {exc}") from exc
    if resp.status_code >= 400:
        raise EvigateError(f"server error {resp.status_code}: {resp.text}")
    return resp.json()


def _render_outcome(d: dict) -> str:
    lines = [f"gate: {d['gate']}" + (f" ({', '.join(d['reasons'])})" if d["reasons"] else "")]
    lines.append(
        f"n={d['n']} mean_rel={fmt_float(d['mean_rel'])} mean_mue={fmt_float(d['mean_mue'])} "
        f"max_sim={fmt_float(d['max_sim'])} max_rel={fmt_float(d['max_rel'])} "
        f"anchor_ok={d['anchor_ok']} phrase_ok={d['phrase_ok']}"
    )
    lines.append("evidence:")
    for e in d["evidence"]:
        lines.append(
            f"  [{e['doc']}:{e['ordinal']}] sim={fmt_float(e['sim'])} rel={fmt_float(e['rel'])} "
            f"ci={fmt_float(e['ci'])} mue={fmt_float(e['mue'])}  {e['text']}"
        )
    if "answer" in d:
        lines.append("answer:")
        lines.append(d["answer"])
    else:
        lines.append("no answer: the evidence gate did not pass")
    return "\n".join(lines) + "\n"


def _render_explain(d: dict) -> str:
    lines = [f"question: {d['question']}",
             f"terms: {' '.join(d['terms']) or '-'}",
             f"matched phrases: {', '.join(d['matched_phrases']) or '-'}",
             "",
             "unit_id\tdoc:ordinal\tsim\trel\tci\tmue\tselected\ttext"]
    for c in d["candidates"]:
        lines.append("\t".join([
            str(c["unit_id"]), f"{c['doc']}:{c['ordinal']}", fmt_float(c["sim"]), fmt_float(c["rel"]),
            fmt_float(c["ci"]), fmt_float(c["mue"]), "*" if c["selected"] else "", c["text"],
        ]))
    lines += ["", "step\tunit_id\tadjusted\tmax_sim_to_selected\tsuppressed"]
    for s in d["steps"]:
        lines.append(f"{s['step']}\t{s['unit_id']}\t{fmt_float(s['adjusted'])}\t"
                     f"{fmt_float(s['max_sim_to_selected'])}\t{','.join(map(str, s['suppressed'])) or '-'}")
    lines += ["", f"exhausted: {str(d['exhausted']).lower()}",
              f"gate: {d['gate']}" + (f" ({', '.join(d['reasons'])})" if d["reasons"] else "")]
    return "\n".join(lines) + "\n"


def read_grid(path: str | Path) -> list[MueWeights]:
    return [MueWeights.parse(line) for line in read_list(path)]


def cmd_ingest(args) -> int:
    config = load_config(args.config, **_overrides(args))
    corpus = load_corpus(args.docs, args.records or (), args.text_field)
    engine = Engine.build(corpus, config)
    root = save_bundle(engine, args.out)
    print(f"ingested {len(corpus)} units from {len(corpus.doc_index)} documents into {root}")
    return 0


def cmd_query(args) -> int:
    if args.server:
        d = _post(args.server, "/query", {"q": args.q})
    else:
        d = _engine(args).query(args.q).to_dict()
    sys.stdout.write(dumps(d) + "\n" if args.json else _render_outcome(d))
    return 0


def cmd_explain(args) -> int:
    if args.server:
        d = _post(args.server, "/explain", {"q": args.q})
        engine = None
    else:
        engine = _engine(args)
        d = engine.explain(args.q)
    if args.json:
        sys.stdout.write(dumps(d) + "\n")
    else:
        sys.stdout.write(_render_explain(d))
    if args.idf:
        if engine is None:
            raise EvigateError("--idf needs a local --index")
        sys.stdout.write("\nterm\tdf\tidf\n")
        for term, df, idf in engine.stats.table():
            sys.stdout.write(f"{term}\t{df}\t{fmt_float(idf)}\n")
    return 0


def cmd_sweep(args) -> int:
    questions = list(read_list(args.questions))
    grid = read_grid(args.grid) if args.grid else [MueWeights()]
    if args.server:
        rows = _post(args.server, "/sweep", {"questions": questions,
                                             "grid": [list(w.as_tuple()) for w in grid]})["rows"]
    else:
        rows = _engine(args).sweep(questions, grid)
    text = sweep_json(rows) if args.format == "json" else sweep_tsv(rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        if args.json_out:
            Path(args.json_out).write_text(sweep_json(rows), encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(_engine(args)), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evigate", description="Gated evidence selection for question answering.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build an index bundle from documents and records")
    p.add_argument("--docs", type=Path, help="directory of .txt documents")
    p.add_argument("--records", type=Path, action="append", help="JSON-Lines records file (repeatable)")
    p.add_argument("--text-field", default="text")
    p.add_argument("--out", type=Path, required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_ingest)

    for name, func, help_ in (("query", cmd_query, "answer a question or abstain"),
                              ("explain", cmd_explain, "show per-candidate signals and selection steps")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--index", type=Path)
        p.add_argument("--server", help="base URL of a running service")
        p.add_argument("--q", required=True)
        p.add_argument("--json", action="store_true")
        if name == "explain":
            p.add_argument("--idf", action="store_true", help="also dump the df/idf table")
        _add_config_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("sweep", help="run a question set across MUE weight settings")
    p.add_argument("--index", type=Path)
    p.add_argument("--server")
    p.add_argument("--questions", type=Path, required=True)
    p.add_argument("--grid", type=Path, help="one lambda,mu,nu triple per line")
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.add_argument("--out", type=Path)
    p.add_argument("--json-out", type=Path, help="with --out, also write the JSON table here")
    _add_config_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="serve a bundle over HTTP")
    p.add_argument("--index", type=Path, required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    _add_config_flags(p)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except EvigateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
