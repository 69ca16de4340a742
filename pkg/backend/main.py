"""
backend/main.py

This module implements the FastAPI service for the cylnogo verifier. It provides endpoints for:
- Inspecting the effective configuration (GET /api/env)
- Listing the verification registry (GET /api/checks)
- Running checks and returning the json report (POST /api/verify)
- Computing Poisson brackets of classical expressions (POST /api/bracket)
- Quantizing classical expressions in a configured scheme (POST /api/quantize)

Configuration comes from the environment (a .env file is honoured) through cylnogo.config.
Run from the repository root with: uvicorn backend.main:app
"""

import logging
from typing import Dict, List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from cylnogo import __version__, config
from cylnogo.checks import REGISTRY, run_checks_async, select
from cylnogo.classical import poisson_bracket
from cylnogo.errors import CylnogoError
from cylnogo.parsing import parse
from cylnogo.quantization import build_scheme, extend_with
from cylnogo.reporting import build_report

# Configure logging
logging.basicConfig(level=getattr(logging, config.LOG_LEVEL, logging.INFO))
logger = logging.getLogger(__name__)

app = FastAPI(title="cylnogo", version=__version__)

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=config.ALLOWED_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


class VerifyRequest(BaseModel):
    only: Optional[List[str]] = None
    jobs: Optional[int] = None


class BracketRequest(BaseModel):
    left: str
    right: str


class QuantizeRequest(BaseModel):
    expression: str
    scheme: str = "type-i"
    bindings: Dict[str, str] = {}
    rules: List[str] = []


def _fail(endpoint: str, e: Exception) -> HTTPException:
    if isinstance(e, CylnogoError):
        logger.error(f"Rejected request to {endpoint}: {str(e)}")
        return HTTPException(status_code=400, detail=str(e))
    logger.error(f"Error in {endpoint} endpoint: {str(e)}")
    return HTTPException(status_code=500, detail=str(e))


@app.get("/api/env")
async def get_env():
    """Effective configuration of the service."""
    try:
        manifest = config.load_manifest()
    except Exception as e:
        raise _fail("env", e)
    return {
        "manifest": config.manifest_path(),
        "manifest_version": manifest.version,
        "seed": manifest.seed,
        "log_level": config.LOG_LEVEL,
        "jobs": config.default_jobs(),
        "version": __version__,
    }


@app.get("/api/checks")
async def list_checks():
    return [
        {"name": check.name, "expected": check.expected.value, "paper_anchor": check.anchor}
        for check in (REGISTRY[name] for name in sorted(REGISTRY))
    ]


@app.post("/api/verify")
async def verify(request: VerifyRequest):
    """Runs the selected checks (all by default) and returns the report document."""
    try:
        logger.info(f"Verify request for {request.only or 'all checks'}")
        select(request.only)
        manifest = config.load_manifest()
        results = await run_checks_async(request.only, request.jobs or config.default_jobs(), manifest)
        return build_report(manifest.version, results).dict(by_alias=True)
    except Exception as e:
        raise _fail("verify", e)


@app.post("/api/bracket")
async def bracket(request: BracketRequest):
    try:
        value = poisson_bracket(parse(request.left), parse(request.right))
        return {"bracket": value.to_text(), "trig": value.to_trig_text()}
    except Exception as e:
        raise _fail("bracket", e)


@app.post("/api/quantize")
async def quantize(request: QuantizeRequest):
    """Q(expression) in the requested scheme, after installing the listed rules."""
    try:
        scheme = extend_with(build_scheme(request.scheme, config.parse_bindings(request.bindings)), request.rules)
        return {"scheme": scheme.name, "operator": scheme.quantize(parse(request.expression)).to_text()}
    except Exception as e:
        raise _fail("quantize", e)


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host=config.API_HOST, port=config.API_PORT)
