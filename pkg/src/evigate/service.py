"""HTTP service around a loaded bundle.

Run with ``evigate serve --index <bundle>`` or point uvicorn at
``evigate.service:app_from_env`` with ``EVIGATE_INDEX`` set.
"""

from __future__ import annotations

import os
from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .embed import LocalHashEmbedder
from .errors import ConfigError, EvigateError, GeneratorUnavailable, RemoteUnavailable
from .pipeline import Engine
from .select import MueWeights


class QueryRequest(BaseModel):
    q: str = Field(min_length=1)
    answer: bool = True


class EvidenceItem(BaseModel):
    doc: str
    ordinal: int
    text: str
    sim: float
    rel: float
    ci: float
    mue: float


class TraceResponse(BaseModel):
    question: str
    weights: list[float]
    n: int
    mean_rel: float
    mean_mue: float
    max_sim: float
    max_rel: float
    retrieval_pct: int
    anchor_ok: int
    phrase_ok: int
    gate: Literal["PASS", "FAIL"]
    reasons: list[str]
    evidence: list[EvidenceItem]
    answer: str | None = None


class ExplainRequest(BaseModel):
    q: str = Field(min_length=1)


class SweepRequest(BaseModel):
    questions: list[str]
    grid: list[tuple[float, float, float]] = [(0.5, 0.3, 0.2)]


class SweepRow(BaseModel):
    question: str
    weights: list[float]
    retrieval_pct: int | None = None
    n: int | None = None
    mean_rel: float | None = None
    mean_mue: float | None = None
    max_sim: float | None = None
    max_rel: float | None = None
    anchor_ok: int | None = None
    phrase_ok: int | None = None
    gate: str
    error: str | None = None


class SweepResponse(BaseModel):
    rows: list[SweepRow]


class EmbedRequest(BaseModel):
    texts: list[str]


class EmbedResponse(BaseModel):
    vectors: list[list[float]]


class HealthResponse(BaseModel):
    status: str
    units: int
    dimension: int


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="evigate", version="0.1.0")
    # serves the remote-embedding wire format from the local hash provider
    hasher = LocalHashEmbedder(engine.index.dimension)

    @app.get("/health", response_model=HealthResponse)
    def health():
        return {"status": "ok", "units": len(engine.corpus), "dimension": engine.index.dimension}

    @app.post("/query", response_model=TraceResponse, response_model_exclude_none=True)
    def query(req: QueryRequest):
        try:
            return engine.query(req.q, answer=req.answer).to_dict()
        except (RemoteUnavailable, GeneratorUnavailable) as exc:
            raise HTTPException(status_code=503, detail=str(exc))

    @app.post("/explain")
    def explain(req: ExplainRequest):
        try:
            return engine.explain(req.q)
        except RemoteUnavailable as exc:
            raise HTTPException(status_code=503, detail=str(exc))

    @app.post("/sweep", response_model=SweepResponse, response_model_exclude_none=True)
    def sweep(req: SweepRequest):
        try:
            grid = [MueWeights(*w) for w in req.grid]
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"rows": engine.sweep(req.questions, grid)}

    @app.post("/embed", response_model=EmbedResponse)
    def embed(req: EmbedRequest):
        return {"vectors": [v.tolist() for v in hasher.embed_many(req.texts)]}

    @app.exception_handler(EvigateError)
    def _evigate_error(request, exc: EvigateError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=400, content={"detail": str(exc)})

    return app


def app_from_env() -> FastAPI:
    from .store import load_bundle

    path = os.environ.get("EVIGATE_INDEX")
    if not path:
        raise RuntimeError("set EVIGATE_INDEX to a bundle directory")
    return create_app(load_bundle(path))
