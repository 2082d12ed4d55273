import os
import time
import asyncio
import logging
from typing import Any, Dict

from fastapi import FastAPI, Body, Query
from fastapi.responses import JSONResponse
from fastapi.middleware.cors import CORSMiddleware

from isoquot_config import (
    ISOQUOT_HOST, ISOQUOT_PORT, ISOQUOT_VERIFY_CONFIG, get_t0_sequence, get_threads, ground_types, log_ground_types,
    setup_logging,
)
from isoquot_errors import IsoQuotError
from exactnum import format_rational
from queries import HANDLERS, InvariantQuery, evaluate_query
from verification import SUITES, run_suites

setup_logging()
logger = logging.getLogger("isoquot")
log_ground_types()

"""
HTTP front end for the isoquot engines.

Endpoints:
  GET  /health          liveness
  GET  /api/status      version, configuration, supported query kinds
  POST /api/invariant   {"kind": "a-sympl", "N": 4, "g": 1, "d": 1, "m1": 3, "m2": 0}
  GET  /api/euler       ?N=4&r=2&dmax=3[&topological=true&g=0]
  POST /api/verify      {"suite": "grw"}

Run:
  pip install -r requirements.txt
  uvicorn app:app --port 8000
"""

VERSION = "0.3.0"

app = FastAPI(title="isoquot")
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# one heavy computation at a time; worker processes are configured separately
compute_lock = asyncio.Lock()


def _error_response(e: Exception) -> JSONResponse:
    if isinstance(e, IsoQuotError):
        return JSONResponse(status_code=422, content={"success": False, "error": e.to_dict()})
    logger.exception(f"Unexpected error: {e}")
    return JSONResponse(status_code=500, content={"success": False, "error": str(e)})


async def _run(fn, *args):
    async with compute_lock:
        return await asyncio.to_thread(fn, *args)


@app.get("/health")
async def health():
    return {"ok": True}


@app.get("/api/status")
async def get_status():
    return {
        "timestamp": time.time(),
        "version": VERSION,
        "config": {
            "threads": get_threads(),
            "ground_types": ground_types(),
            "t0_sequence": [format_rational(t) for t in get_t0_sequence()],
            "verify_config": os.getenv("ISOQUOT_VERIFY_CONFIG", ISOQUOT_VERIFY_CONFIG),
            "host": ISOQUOT_HOST,
            "port": ISOQUOT_PORT,
        },
        "query_kinds": sorted(HANDLERS),
        "suites": sorted(SUITES),
    }


@app.post("/api/invariant")
async def api_invariant(payload: Dict[str, Any] = Body(...)):
    try:
        query = InvariantQuery.from_dict(payload)
        result = await _run(evaluate_query, query)
        return {"success": True, **result.to_dict()}
    except Exception as e:
        return _error_response(e)


@app.get("/api/euler")
async def api_euler(N: int = Query(...), r: int = Query(2), dmax: int = Query(...),
                    topological: bool = Query(False), g: int = Query(0), family: str = Query("symplectic")):
    try:
        params = {"N": N, "r": r, "dmax": dmax, "g": g, "family": family}
        if topological:
            params["topological"] = True
        result = await _run(evaluate_query, InvariantQuery("euler", params))
        return {"success": True, **result.to_dict()}
    except Exception as e:
        return _error_response(e)


@app.post("/api/verify")
async def api_verify(payload: Dict[str, Any] = Body(default={})):
    try:
        suite = str(payload.get("suite", "all"))
        report = await _run(run_suites, suite)
        return {"success": report["passed"], **report}
    except Exception as e:
        return _error_response(e)


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host=ISOQUOT_HOST, port=ISOQUOT_PORT)
