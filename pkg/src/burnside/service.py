"""HTTP facade over the job layer.

Every endpoint is a POST taking one request object; responses are the job
dicts unchanged.  Domain errors (bad specs, cap overruns, closure
violations) come back as 400 with the exception class name and its witness
message; a verification that runs to completion but fails reports 200 with
ok false, so the transport only signals problems with the request itself.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import jobs
from .arith import parse_p
from .errors import BurnsideError


class JobRequest(BaseModel):
    group: str | dict | None = None
    functor: str | dict = "trivial"
    p: str | None = None
    partial: str | dict | None = None
    x: int | dict | None = None
    y: int | dict | None = None
    cap_order: int | None = None
    cap_rank: int | None = None
    groups: list[str | dict] | None = None
    functors: list[str | dict] | None = None
    primes: list[str] | None = None


def _context(req: JobRequest):
    if req.group is None:
        raise ValueError("no group given")
    functor = jobs.resolve_functor(req.group, req.functor, req.cap_order)
    ps = jobs.resolve_partial(functor, req.partial) if req.partial is not None else None
    return functor, ps


def create_app() -> FastAPI:
    app = FastAPI(title="burnside", docs_url=None, redoc_url=None)

    @app.exception_handler(BurnsideError)
    @app.exception_handler(ValueError)
    @app.exception_handler(KeyError)
    async def _domain_error(request: Request, exc: Exception):
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.post("/basis")
    async def basis(req: JobRequest):
        functor, ps = _context(req)
        return jobs.run_basis(functor, ps)

    @app.post("/marks")
    async def marks(req: JobRequest):
        functor, ps = _context(req)
        return jobs.run_marks(functor, ps)

    @app.post("/multiply")
    async def multiply(req: JobRequest):
        functor, ps = _context(req)
        if req.x is None or req.y is None:
            raise ValueError("multiply needs two elements x and y")
        return jobs.run_multiply(functor, req.x, req.y, ps)

    @app.post("/verify")
    async def verify(req: JobRequest):
        functor, ps = _context(req)
        return jobs.run_verify(functor, parse_p(req.p or "inf"), ps)

    @app.post("/idempotents")
    async def idempotents(req: JobRequest):
        functor, ps = _context(req)
        p = parse_p(req.p) if req.p is not None else None
        if ps is not None and p is not None:
            raise ValueError("partial idempotents are rational; drop the prime")
        return jobs.run_idempotents(functor, p, ps)

    @app.post("/units")
    async def units(req: JobRequest):
        functor, _ = _context(req)
        return jobs.run_units(functor, req.cap_rank)

    @app.post("/partial")
    async def partial(req: JobRequest):
        functor, ps = _context(req)
        if ps is None:
            raise ValueError("the partial command needs a --partial spec")
        return jobs.run_partial(functor, ps)

    @app.post("/verify_all")
    async def verify_all(req: JobRequest):
        return jobs.run_verify_all(req.groups, req.functors, req.primes)

    return app


app = create_app()
