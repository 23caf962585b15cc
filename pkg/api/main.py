from datetime import datetime
import logging
from typing import Dict, List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from config import Config, setup_logging
from engine.codec import DerivationModel, derivation_model
from engine.workbench import MODES, workbench
from lang.errors import CONFIG_ERRORS
from usage_ops.semiring import get_semiring

logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="Usage Checker",
    description="Typechecking and metatheory for a semiring-annotated linear lambda calculus",
    version="1.0.0"
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Pydantic models
class CheckRequest(BaseModel):
    source: str
    mode: Optional[str] = "infer"
    semiring: Optional[str] = None


class StanzaResult(BaseModel):
    judgment: str
    stanza: str
    success: bool
    derivation: Optional[DerivationModel] = None
    error: Optional[str] = None
    kind: Optional[str] = None


class CheckResponse(BaseModel):
    success: bool
    semiring: str
    results: List[StanzaResult]
    processing_time: Optional[str] = None


class LawsResponse(BaseModel):
    success: bool
    semiring: str
    violations: List[str]


class SystemStatus(BaseModel):
    status: str
    default_semiring: str
    semirings: Dict[str, str]
    timestamp: str


@app.on_event("startup")
async def startup_event():
    """Configure logging and report configuration problems."""
    setup_logging()
    if not Config.validate():
        logger.warning("Some LR_* environment variables are invalid; defaults may not apply.")


@app.get("/")
async def root():
    """Root endpoint with service information."""
    return {
        "message": "Usage Checker API",
        "version": "1.0.0",
        "status": "running",
        "endpoints": {
            "check": "/check - Check the judgments of a judgment file",
            "laws": "/laws/{semiring} - Audit an instance's semiring laws",
            "status": "/status - Configured default and known instances"
        }
    }


@app.post("/check", response_model=CheckResponse)
async def check(request: CheckRequest):
    start_time = datetime.now()
    mode = (request.mode or "infer").lower()
    if mode not in MODES:
        raise HTTPException(status_code=400, detail=f"mode must be one of {', '.join(MODES)}")
    try:
        result = workbench.check(request.source, mode, request.semiring)
    except CONFIG_ERRORS as e:
        raise HTTPException(status_code=400, detail=str(e))

    sr = get_semiring(result["semiring"])
    results = [
        StanzaResult(
            judgment=r["judgment"],
            stanza=r["stanza"],
            success=r["success"],
            derivation=derivation_model(sr, r["derivation"]) if r.get("derivation") is not None else None,
            error=r.get("error"),
            kind=r.get("kind"),
        )
        for r in result["results"]
    ]
    processing_time = (datetime.now() - start_time).total_seconds()
    return CheckResponse(success=result["success"], semiring=result["semiring"], results=results,
                         processing_time=f"{processing_time:.2f}s")


@app.get("/laws/{semiring}", response_model=LawsResponse)
async def laws(semiring: str, budget: Optional[int] = None):
    if budget is not None and budget < 1:
        raise HTTPException(status_code=400, detail="budget must be at least 1")
    try:
        return LawsResponse(**workbench.laws(semiring, budget))
    except CONFIG_ERRORS as e:
        raise HTTPException(status_code=404, detail=str(e))


@app.get("/status", response_model=SystemStatus)
async def get_status():
    """Configured default semiring and the known instances."""
    info = workbench.status()
    return SystemStatus(
        status="healthy",
        default_semiring=info["default_semiring"],
        semirings=info["semirings"],
        timestamp=datetime.now().isoformat()
    )
