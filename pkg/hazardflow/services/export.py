""" JSON export of a model and its analysis results. """

import json
from typing import Any, Iterable, Mapping

from pydantic import BaseModel

from hazardflow.schemas.analysis import EmitOptions
from hazardflow.schemas.diagnostics import Diagnostic
from hazardflow.schemas.model import Model
from hazardflow.services.flowgraph import FlowGraph
from hazardflow.utils.ids import sorted_ids

_COLLECTIONS = (
    ("entities", "entities"),
    ("interactions", "interactions"),
    ("risks", "risks"),
    ("constraints", "constraints"),
    ("events", "events"),
    ("causes", "cause_decls"),
    ("controllers", "controllers"),
    ("loops", "loops"),
    ("recommendations", "recommendations"),
)


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, (set, frozenset)):
        return sorted_ids(value)
    if isinstance(value, Mapping):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def export_document(
    model: Model,
    diagnostics: Iterable[Diagnostic] = (),
    analyses: Mapping[str, Any] | None = None,
) -> dict[str, Any]:
    """The export as a plain dictionary, keys in document order."""
    document: dict[str, Any] = {"name": model.name}
    for key, attribute in _COLLECTIONS:
        document[key] = [item.model_dump(mode="json") for item in getattr(model, attribute)]
    document["diagnostics"] = [item.model_dump(mode="json") for item in diagnostics]
    document["analyses"] = _plain(dict(analyses or {}))
    return document


def emit_json(
    model: Model,
    diagnostics: Iterable[Diagnostic] = (),
    analyses: Mapping[str, Any] | None = None,
) -> str:
    """Serialize a model, its diagnostics and analysis results as one JSON document.

    Arrays follow the model's id order, so the output is byte-identical for
    equal inputs. Set-valued analyses are written as id-sorted arrays and
    severities and tiers by name.

    Args:
    - model (Model): Model
    - diagnostics (Iterable[Diagnostic]): Findings to include
    - analyses (Mapping[str, Any] | None): Named analysis results

    Returns:
    - str: Indented JSON ending with a newline
    """
    document = export_document(model, diagnostics, analyses)
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def read_json(text: str) -> Model:
    """Rebuild a model from an :func:`emit_json` document."""
    document = json.loads(text)
    fields = {attribute: document.get(key, []) for key, attribute in _COLLECTIONS}
    return Model(name=document["name"], **fields)


def emit_graph_json(graph: FlowGraph, options: EmitOptions | None = None) -> str:
    """Event-flow graph as JSON: nodes with tier, label and gate, then edges.

    Applies the same tier filter as the DOT emitter.
    """
    options = options or EmitOptions()
    shown = [node for node in graph.nodes if graph.tier(node) in options.tiers]
    kept = set(shown)
    document = {
        "name": graph.model.name,
        "nodes": [
            {
                "id": node,
                "tier": graph.tier(node).label,
                "label": graph.label(node),
                "gate": graph.gate_of[node].value if node in graph.gate_of else None,
            }
            for node in shown
        ],
        "edges": [
            [source, target]
            for source, target in graph.edges
            if source in kept and target in kept
        ],
    }
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"
