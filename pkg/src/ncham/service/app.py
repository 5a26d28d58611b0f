"""FastAPI surface for the kernel; one endpoint per operation."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from ..specio import SpecError
from ..superalgebra import AlgebraError
from ..symplectic import SymplecticError
from . import handlers
from . import models as m

app = FastAPI(
    title="ncham",
    description="Noncommutative Hamiltonian mechanics on finite-dimensional superalgebras",
    version="0.1.0",
)


@app.exception_handler(SpecError)
async def spec_error_handler(request, exc: SpecError):
    return JSONResponse(status_code=422,
                        content={"error": "spec", "location": exc.location,
                                 "message": str(exc)})


@app.exception_handler(AlgebraError)
async def algebra_error_handler(request, exc: AlgebraError):
    return JSONResponse(status_code=422, content={"error": "algebra", "message": str(exc)})


@app.get("/healthz")
def healthz():
    return {"status": "ok"}


@app.post("/verify-algebra", response_model=m.VerifyAlgebraResponse)
def verify_algebra(req: m.VerifyAlgebraRequest):
    return handlers.verify_algebra(req)


@app.post("/sder-basis", response_model=m.SderBasisResponse)
def sder_basis(req: m.SderBasisRequest):
    return handlers.sder_basis_info(req)


@app.post("/check-symplectic", response_model=m.SymplecticResponse)
def check_symplectic(req: m.CheckSymplecticRequest):
    return handlers.check_symplectic(req)


@app.post("/pb", response_model=m.PoissonResponse)
def poisson(req: m.PoissonRequest):
    try:
        return handlers.poisson(req)
    except SymplecticError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/evolve", response_model=m.EvolveResponse)
def evolve(req: m.EvolveRequest):
    return handlers.evolve(req)


@app.post("/tensor-check", response_model=m.TensorCheckResponse)
def tensor_check(req: m.TensorCheckRequest):
    return handlers.tensor_check(req)


@app.post("/action-check", response_model=m.ActionCheckResponse)
def action_check(req: m.ActionCheckRequest):
    return handlers.action_check(req)


@app.post("/h2", response_model=m.H2Response)
def h2(req: m.H2Request):
    return handlers.h2(req)


@app.post("/noether-check", response_model=m.NoetherResponse)
def noether(req: m.NoetherRequest):
    return handlers.noether(req)


@app.post("/suite", response_model=m.SuiteResponse)
def suite(req: m.SuiteRequest):
    return handlers.suite(req)
