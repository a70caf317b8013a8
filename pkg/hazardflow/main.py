"""Main module for the application."""

import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from hazardflow import __version__
from hazardflow.routers import analysis
from hazardflow.settings import LOG_FORMAT, get_settings

settings = get_settings()

# Logging configuration
logging.basicConfig(level=settings.log_level.upper(), format=LOG_FORMAT)

logger = logging.getLogger(__name__)

app = FastAPI(
    title="hazardflow",
    description="Hazard-target system modeling and accident analysis",
    version=__version__,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.get("/health", tags=["Health"])
async def health_check():
    """Health check."""
    logger.info("Health check")
    return {"status": "healthy"}


app.include_router(analysis.router)
