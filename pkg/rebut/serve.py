"""Batch HTTP endpoint

``POST /v1/rebuttal`` with ``{"text": ..., "approach": "sm" | "fc", "k": n}``
answers with a recommendation, ``GET /v1/health`` lists the artifact hashes
the engine was loaded from.
"""
import logging
from contextlib import asynccontextmanager
from typing import Literal, Optional, Union

from fastapi import FastAPI, HTTPException, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from rebut.config import PipelineConfig
from rebut.engine import ArtifactsMissing, Engine

log = logging.getLogger(__name__)


class RebuttalRequest(BaseModel):
    text: str
    approach: Literal["sm", "fc"] = "fc"
    k: Optional[int] = Field(default=None, ge=1)


def create_app(source: Union[PipelineConfig, Engine]) -> FastAPI:
    """the FastAPI application over an engine, or over the engine loaded
    from a config

    If the artifacts are missing the app still starts and answers 503.
    """
    engine: Optional[Engine] = None
    missing = ""
    if isinstance(source, Engine):
        engine = source
    else:
        try:
            engine = Engine.load(source)
        except ArtifactsMissing as e:
            missing = str(e)
            log.error("Serving without artifacts: %s", e)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if engine is not None:
            engine.connect()
        yield
        if engine is not None:
            engine.disconnect()

    app = FastAPI(title="rebut", lifespan=lifespan)

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": jsonable_encoder(exc.errors())})

    def require() -> Engine:
        if engine is None:
            raise HTTPException(status_code=503, detail=missing or "Artifacts missing")
        return engine

    @app.get("/v1/health")
    def health():
        e = require()
        return {"status": "ok", "artifacts": e.hashes}

    @app.post("/v1/rebuttal")
    def rebuttal(request: RebuttalRequest):
        if not request.text.strip():
            raise HTTPException(status_code=400, detail="text must not be empty")
        e = require()
        return e.recommend(request.text, request.approach, request.k)

    return app
