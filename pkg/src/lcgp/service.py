"""HTTP service exposing the parametrization/pushforward/regression pipeline.

Run with ``uvicorn lcgp.service:app`` or via ``lcgp serve``.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, pipeline
from .gp import FactorizationError
from .groebner import PairBudgetExceeded
from .schemas import (
    FitRequest,
    FitResponse,
    ParametrizeRequest,
    ParametrizeResponse,
    ProblemSpec,
    PredictResponse,
    PushforwardRequest,
    PushforwardResponse,
)

app = FastAPI(title="lcgp", version=__version__)

# ValueError covers ParseError, RingError, KernelError, OreError, and the
# pipeline's own validation errors; subclasses resolve to this handler.
@app.exception_handler(ValueError)
async def _client_error(request: Request, exc: ValueError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(PairBudgetExceeded)
async def _budget(request: Request, exc: PairBudgetExceeded):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(FactorizationError)
async def _factorization(request: Request, exc: FactorizationError):
    return JSONResponse(status_code=409, content={"detail": str(exc)})


@app.get("/health")
async def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/parametrize", response_model=ParametrizeResponse)
async def parametrize(req: ParametrizeRequest) -> ParametrizeResponse:
    return pipeline.parametrize_response(req.ring, req.matrix, req.order)


@app.post("/pushforward", response_model=PushforwardResponse)
async def pushforward(req: PushforwardRequest) -> PushforwardResponse:
    return pipeline.pushforward_response(
        req.ring, req.matrix, req.kernel, req.order, req.shift_step
    )


@app.post("/predict", response_model=PredictResponse)
async def predict(problem: ProblemSpec) -> PredictResponse:
    return pipeline.predict_response(problem)


@app.post("/fit", response_model=FitResponse)
async def fit(req: FitRequest) -> FitResponse:
    return pipeline.fit_response(req)
