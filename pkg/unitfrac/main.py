"""
unitfrac HTTP service
Solve, verify and inspect decompositions of 4/n over FastAPI
"""

import logging
from contextlib import asynccontextmanager
from typing import Any, Dict, List, Optional

from fastapi import FastAPI, HTTPException, Path, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .config import PipelineConfig, load_config
from .core import canonicalize, verify_triple
from .exceptions import ConditionViolationError, ResourceLimitError
from .golden import golden_suite
from .identities import classify, families_table, residue_atlas
from .oracle import enumerate_all
from .parametric import iter_parametric
from .pipeline import solve
from .schemas import (
    FamilyMatch,
    GoldenReport,
    ParametricWitness,
    ResidueClassification,
    SolveResult,
    VerifyReport,
    VerifyRequest,
)

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# Largest n the CPU-bound endpoints accept
MAX_SERVICE_N = 10**12

# Base configuration, read once at startup
base_config: Optional[PipelineConfig] = None


def get_config() -> PipelineConfig:
    global base_config
    if base_config is None:
        base_config = load_config()
    return base_config


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Load the pipeline configuration on startup
    """
    cfg = get_config()
    logger.info(f"unitfrac service starting with methods {cfg.methods}")
    yield
    logger.info("unitfrac service stopped")


app = FastAPI(
    title="unitfrac",
    description="Exact decompositions of 4/n into three unit fractions",
    version=__version__,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.get("/solve/{n}", response_model=SolveResult)
def solve_endpoint(
    n: int = Path(..., ge=2, le=MAX_SERVICE_N, description="Denominator of 4/n"),
    methods: Optional[str] = Query(None, description="Comma-separated stage order"),
    r1_max: Optional[int] = Query(None, ge=1, le=1000, description="Largest split multiplier"),
    w5_max: Optional[int] = Query(None, ge=0, le=10000),
    u5_max: Optional[int] = Query(None, ge=1, le=10000),
):
    """
    First verified decomposition over the configured stages, plus the
    report of every stage that ran
    """
    overrides: Dict[str, Any] = {"r1_max": r1_max, "w5_max": w5_max, "u5_max": u5_max}
    if methods:
        overrides["methods"] = [m.strip() for m in methods.split(",") if m.strip()]
    try:
        cfg = PipelineConfig(**{**get_config().model_dump(), **{k: v for k, v in overrides.items() if v is not None}})
    except ValueError as e:
        raise HTTPException(status_code=422, detail=f"Invalid configuration: {str(e)}")
    try:
        result = solve(n, cfg)
        logger.info(f"Solve n={n}: {result.decomposition.method_tag if result.decomposition else 'not found'}")
        return result
    except Exception as e:
        logger.error(f"Solve error for n={n}: {e}")
        raise HTTPException(status_code=500, detail=f"Solve failed: {str(e)}")


@app.post("/verify", response_model=VerifyReport)
async def verify_endpoint(request: VerifyRequest):
    """
    Exact check of 4/n = 1/x + 1/y + 1/z
    """
    n, x, y, z = request.n, request.x, request.y, request.z
    return VerifyReport(
        n=n,
        triple=canonicalize((x, y, z)),
        valid=verify_triple(n, (x, y, z)),
        lhs=str(n * (x * y + y * z + z * x)),
        rhs=str(4 * x * y * z),
    )


@app.get("/oracle/{n}")
def oracle_endpoint(
    n: int = Path(..., ge=2, le=100000, description="Denominator of 4/n"),
    max_solutions: Optional[int] = Query(None, ge=1, description="Stop after this many solutions"),
    count_only: bool = Query(False, description="Return the count without the triples"),
):
    """
    Every canonical solution by brute force
    """
    try:
        result = enumerate_all(n, max_solutions=max_solutions)
        if count_only:
            return {"n": n, "count": len(result.solutions), "exhausted": result.exhausted}
        return result
    except ResourceLimitError as e:
        logger.warning(f"Oracle hit a resource limit for n={n}: {e}")
        raise HTTPException(status_code=503, detail=f"Resource limit: {str(e)}")
    except Exception as e:
        logger.error(f"Oracle error for n={n}: {e}")
        raise HTTPException(status_code=500, detail=f"Oracle failed: {str(e)}")


@app.get("/parametric/{p}", response_model=List[ParametricWitness])
def parametric_endpoint(
    p: int = Path(..., ge=5, le=MAX_SERVICE_N, description="p = 1 (mod 4)"),
    w5_max: int = Query(1000, ge=0, le=10000),
    u5_max: int = Query(1000, ge=1, le=10000),
    first: bool = Query(False, description="Return at most one witness"),
):
    """
    (w5, u5) witnesses in (w5, u5) order
    """
    try:
        witnesses = []
        for witness in iter_parametric(p, w5_max, u5_max):
            witnesses.append(witness)
            if first:
                break
        logger.info(f"Parametric p={p} returned {len(witnesses)} witnesses")
        return witnesses
    except ConditionViolationError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Parametric error for p={p}: {e}")
        raise HTTPException(status_code=500, detail=f"Parametric search failed: {str(e)}")


@app.get("/families")
async def families_endpoint():
    """
    Every identity family with its condition and triple
    """
    return [
        {"id": fid, "condition": condition, "triple": formula, "derivation": derivation}
        for fid, condition, formula, derivation in families_table()
    ]


@app.get("/classify/{n}", response_model=List[FamilyMatch])
def classify_endpoint(n: int = Path(..., ge=2, le=MAX_SERVICE_N)):
    """
    Families whose condition n satisfies
    """
    try:
        return classify(n, factor_budget=get_config().factor_budget)
    except Exception as e:
        logger.error(f"Classify error for n={n}: {e}")
        raise HTTPException(status_code=500, detail=f"Classification failed: {str(e)}")


@app.get("/atlas/{modulus}", response_model=List[ResidueClassification])
async def atlas_endpoint(
    modulus: int = Path(..., description="120 or 840"),
    exceptions_only: bool = Query(False, description="Only residues left open"),
):
    """
    Residue classification mod 120 or 840
    """
    if modulus not in (120, 840):
        raise HTTPException(status_code=400, detail="modulus must be 120 or 840")
    classes = residue_atlas(modulus)
    if exceptions_only:
        classes = [c for c in classes if c.family is None]
    return classes


@app.get("/golden", response_model=GoldenReport)
def golden_endpoint():
    """
    The twelve worked decompositions, verified and replayed
    """
    return golden_suite()


@app.get("/health")
async def health_check():
    """
    Health check with version and configuration summary
    """
    try:
        cfg = get_config()
        return {
            "status": "healthy",
            "version": __version__,
            "config": {"methods": cfg.methods, "r1_max": cfg.r1_max, "parallelism": cfg.parallelism},
            "service": "unitfrac",
        }
    except Exception as e:
        logger.error(f"Health check failed: {e}")
        return JSONResponse(
            status_code=503,
            content={"status": "unhealthy", "error": str(e), "service": "unitfrac"},
        )
