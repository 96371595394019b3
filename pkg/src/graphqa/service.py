"""Minimal long-running query endpoint over a loaded engine.

One POST route answers questions (with optional per-request threshold
overrides); a health route reports corpus statistics. Handlers never
mutate shared state, so requests may run concurrently.
"""

from __future__ import annotations

import logging
import uuid

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .answering import PipelineConfig
from .engine import Engine
from .quasigraph import Thresholds

logger = logging.getLogger(__name__)


class AskRequest(BaseModel):
    question: str = Field(min_length=1)
    base_threshold: float | None = Field(default=None, ge=0.0, le=1.0)
    pred_align_threshold: float | None = Field(default=None, ge=0.0, le=1.0)


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="graphqa")

    @app.exception_handler(Exception)
    async def internal_error(request: Request, exc: Exception) -> JSONResponse:
        error_id = uuid.uuid4().hex
        logger.exception("request failed (error id %s)", error_id)
        return JSONResponse(status_code=500, content={"error_id": error_id})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "corpus": engine.stats()}

    @app.post("/ask")
    def ask(request: AskRequest) -> dict:
        if not request.question.strip():
            raise HTTPException(status_code=422, detail="question must be non-empty")
        config = engine.config
        if request.base_threshold is not None or request.pred_align_threshold is not None:
            config = PipelineConfig(
                thresholds=Thresholds(
                    base=(
                        request.base_threshold
                        if request.base_threshold is not None
                        else config.thresholds.base
                    ),
                    predicate_alignment=(
                        request.pred_align_threshold
                        if request.pred_align_threshold is not None
                        else config.thresholds.predicate_alignment
                    ),
                ),
                top_docs=config.top_docs,
                top_gst=config.top_gst,
            )
        return engine.ask(request.question, config).record()

    return app
