"""API endpoints for model analysis."""

import logging
from typing import Any, Callable, TypeVar

from fastapi import APIRouter, Depends, HTTPException, Query

from hazardflow.dsl import format_canonical
from hazardflow.errors import AnalysisError, UnknownIdError
from hazardflow.schemas.analysis import (
    ALL_TIERS,
    ClassifyRequest,
    CrossLevelMap,
    EmitOptions,
    EventTrace,
    ModelSource,
    PropagateRequest,
    Rankdir,
    SystemState,
    ValidationReport,
)
from hazardflow.schemas.model import Model, Tier
from hazardflow.services.export import export_document
from hazardflow.services.flowgraph import (
    FlowGraph,
    build_flow_graph,
    contributors,
    cross_level_map,
    direct_causes,
    enumerate_paths,
    propagate,
    root_causes,
)
from hazardflow.services.report import emit_report_markdown
from hazardflow.services.risk import classify_state, trace_event
from hazardflow.services.validation import check_source
from hazardflow.services.visualization import emit_dot_control, emit_dot_flow
from hazardflow.settings import Settings, get_settings
from hazardflow.utils.ids import sorted_ids

logger = logging.getLogger(__name__)

router = APIRouter(
    prefix="/api",
    tags=["Analysis"],
)

T = TypeVar("T")
_TIER_NAMES = {tier.name.lower(): tier for tier in Tier}


def _load(body: ModelSource, validated: bool = True) -> tuple[Model, ValidationReport]:
    """Parse (and by default require a validated) model, or fail with 422."""
    model, report = check_source(body.source)
    if model is None or (validated and report.error_count):
        logger.warning("Rejected model with %d errors", report.error_count)
        raise HTTPException(
            status_code=422,
            detail={
                "message": f"model has {report.error_count} errors",
                "diagnostics": [item.model_dump(mode="json") for item in report.diagnostics],
            },
        )
    return model, report


def _graph(body: ModelSource) -> FlowGraph:
    model, report = _load(body)
    return build_flow_graph(model, report)


def _query(call: Callable[..., T], *args: Any, **kwargs: Any) -> T:
    """Run an analysis query, mapping AnalysisError to an HTTP error."""
    try:
        return call(*args, **kwargs)
    except AnalysisError as error:
        logger.error("Query failed: %s", error)
        raise HTTPException(
            status_code=404 if isinstance(error, UnknownIdError) else 422,
            detail={"code": error.code, "message": error.message},
        ) from None


def _ids(text: str | None) -> list[str]:
    return [item.strip() for item in (text or "").split(",") if item.strip()]


@router.post("/check", response_model=ValidationReport)
async def check_model(body: ModelSource):
    """Parse and validate a model.

    Args:
        body (ModelSource): `.hts` source

    Returns:
        ValidationReport: Parse and validation diagnostics
    """
    _, report = check_source(body.source)
    return report


@router.post("/format")
async def format_model(body: ModelSource):
    """Canonical form of a model."""
    model, _ = _load(body, validated=False)
    return {"source": format_canonical(model)}


@router.post("/graph/dot")
async def graph_dot(
    body: ModelSource,
    tiers: str | None = Query(None, description="Comma-separated tiers, e.g. micro,risk"),
    highlight: str | None = Query(None, description="Comma-separated ids to highlight"),
    rankdir: Rankdir | None = Query(None),
    settings: Settings = Depends(get_settings),
):
    """Event-flow diagram as DOT.

    Args:
        body (ModelSource): `.hts` source
        tiers (str, optional): Tiers to include. Defaults to every tier.
        highlight (str, optional): Ids to highlight. Defaults to none.
        rankdir (Rankdir, optional): Layout direction. Defaults to the configured one.

    Returns:
        dict: {"dot": text}
    """
    names = _ids(tiers)
    unknown = [name for name in names if name.lower() not in _TIER_NAMES]
    if unknown:
        raise HTTPException(status_code=422, detail=f"unknown tiers: {', '.join(unknown)}")
    options = EmitOptions(
        tiers=frozenset(_TIER_NAMES[name.lower()] for name in names) or ALL_TIERS,
        highlight=frozenset(_ids(highlight)),
        rankdir=rankdir or settings.rankdir,
    )
    return {"dot": emit_dot_flow(_graph(body), options)}


@router.post("/control/dot")
async def control_dot(body: ModelSource):
    """Safety control structure as DOT."""
    model, _ = _load(body)
    return {"dot": emit_dot_control(model)}


@router.post("/export")
async def export_model(body: ModelSource):
    """Model, diagnostics and no analyses as one JSON document."""
    model, report = _load(body, validated=False)
    return export_document(model, report.diagnostics)


@router.post("/report")
async def report_markdown(body: ModelSource):
    """Markdown accident report."""
    model, report = _load(body)
    return {"markdown": emit_report_markdown(model, build_flow_graph(model, report))}


@router.post("/causes")
async def node_causes(
    body: ModelSource,
    node: str = Query(...),
    transitive: bool = Query(False),
    roots: bool = Query(False),
):
    """Direct causes of a node, all contributors, or root causes only.

    Args:
        body (ModelSource): `.hts` source
        node (str): Event or risk id
        transitive (bool, optional): Return all contributors. Defaults to False.
        roots (bool, optional): Return root causes. Defaults to False.

    Returns:
        dict: {"node": id, "causes": [ids]}
    """
    graph = _graph(body)
    if roots:
        found = _query(root_causes, graph, node)
    elif transitive:
        found = _query(contributors, graph, node)
    else:
        found = _query(direct_causes, graph, node)
    return {"node": node, "causes": sorted_ids(found)}


@router.post("/paths")
async def node_paths(
    body: ModelSource,
    from_id: str = Query(...),
    to_id: str = Query(...),
    settings: Settings = Depends(get_settings),
):
    """Simple cause paths between two nodes, capped by configuration."""
    paths = _query(enumerate_paths, _graph(body), from_id, to_id, cap=settings.path_cap)
    return {"paths": paths}


@router.post("/propagate")
async def propagate_seed(body: PropagateRequest):
    """Nodes activated by a seed."""
    return {"active": sorted_ids(_query(propagate, _graph(body), body.seed))}


@router.post("/classify", response_model=SystemState)
async def classify(body: ClassifyRequest):
    """Risk state for a set of violated constraints."""
    model, _ = _load(body)
    return _query(classify_state, model, body.violated)


@router.post("/map", response_model=CrossLevelMap)
async def macro_map(body: ModelSource, macro: str = Query(...)):
    """Meso and micro events caused directly by a macro event."""
    return _query(cross_level_map, _graph(body), macro)


@router.post("/trace", response_model=EventTrace)
async def event_trace(body: ModelSource, event: str = Query(...)):
    """Constraint, loops and controllers behind an adverse event."""
    model, _ = _load(body)
    return _query(trace_event, model, event)
