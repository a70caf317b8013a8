""" Markdown accident report. """

import logging

from hazardflow.schemas.model import Model, RecommendationCategory, Tier
from hazardflow.services.flowgraph import (
    FlowGraph,
    cross_level_map,
    direct_causes,
    root_causes,
)
from hazardflow.services.lookup import resolve
from hazardflow.utils.ids import sorted_ids

logger = logging.getLogger(__name__)

NONE_RECORDED = "None recorded."

CATEGORY_TITLES = {
    RecommendationCategory.LEGISLATIVE: "Legislative",
    RecommendationCategory.GOVERNMENT: "Government",
    RecommendationCategory.CORPORATE: "Corporate",
    RecommendationCategory.INTERMEDIARY: "Intermediary",
    RecommendationCategory.SOCIAL_MEDIA: "Social organizations and media",
    RecommendationCategory.TECHNICAL: "Technical",
}


def _cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def _ids(identifiers) -> str:
    return ", ".join(sorted_ids(identifiers)) or "-"


def _summary(model: Model, graph: FlowGraph) -> list[str]:
    lines = ["## Summary", ""]
    if model.risks:
        lines += ["| Risk | Severity | Subject | Description |", "| --- | --- | --- | --- |"]
        for risk in model.risks:
            lines.append(
                f"| {risk.id} | {risk.severity.label} | {risk.subject} | {_cell(risk.text)} |"
            )
    else:
        lines.append("No risks declared.")
    counts = {tier: 0 for tier in Tier}
    for node in graph.nodes:
        counts[graph.tier(node)] += 1
    lines += [
        "",
        f"{len(model.events)} adverse events (macro {counts[Tier.MACRO]}, "
        f"meso {counts[Tier.MESO]}, micro {counts[Tier.MICRO]}), "
        f"{len(model.constraints)} safety constraints, {len(model.loops)} control loops.",
        "",
    ]
    return lines


def _event_flow(model: Model, graph: FlowGraph) -> list[str]:
    lines = ["## Event Flow", ""]
    if not model.risks:
        lines += [NONE_RECORDED, ""]
    for risk in model.risks:
        heading = f"### {risk.id}: {risk.text}" if risk.text else f"### {risk.id}"
        lines += [heading, ""]
        gate = graph.gate_of.get(risk.id)
        if gate is None:
            lines += ["No cause declaration.", ""]
            continue
        lines += [f"Caused by ({gate.value.lower()}):", ""]
        for cause in sorted_ids(direct_causes(graph, risk.id)):
            text = graph.label(cause)
            lines.append(f"- {cause}: {text}" if text else f"- {cause}")
        lines += ["", "Root causes:", ""]
        for tier in sorted(Tier, reverse=True):
            roots = root_causes(graph, risk.id, tiers={tier})
            if roots:
                lines.append(f"- {tier.label}: {_ids(roots)}")
        lines.append("")
    return lines


def _cross_level(graph: FlowGraph) -> list[str]:
    lines = ["## Cross-Level Table", ""]
    macro = [node for node in graph.nodes if graph.tier(node) == Tier.MACRO]
    if not macro:
        return lines + ["No macro-level events.", ""]
    lines += ["| Macro event | Meso events | Micro events |", "| --- | --- | --- |"]
    for node in macro:
        mapping = cross_level_map(graph, node)
        lines.append(f"| {node} | {_ids(mapping.meso)} | {_ids(mapping.micro)} |")
    return lines + [""]


def _recommendations(model: Model) -> list[str]:
    lines = ["## Recommendations", ""]
    for category, title in CATEGORY_TITLES.items():
        lines += [f"### {title}", ""]
        items = [item for item in model.recommendations if item.category == category]
        if not items:
            lines += [NONE_RECORDED, ""]
            continue
        for item in items:
            reference = resolve(model, item.for_controller)
            if reference is None:
                lines.append(f"- **{item.for_controller}**: {item.text}")
                continue
            controller = reference.element
            lines.append(
                f"- **{controller.id}** ({controller.tier.label}, {controller.domain.value}): "
                f"{item.text}"
            )
        lines.append("")
    return lines


def emit_report_markdown(model: Model, graph: FlowGraph) -> str:
    """Accident report in markdown.

    Sections, in order: Summary, Event Flow (direct and root causes of each
    risk), Cross-Level Table (each macro event with the meso and micro events it
    causes) and Recommendations in their six fixed categories.

    Args:
    - model (Model): Validated model
    - graph (FlowGraph): Graph built from the model

    Returns:
    - str: Markdown text ending with a single newline
    """
    lines = [f"# Accident analysis: {model.name}", ""]
    lines += _summary(model, graph)
    lines += _event_flow(model, graph)
    lines += _cross_level(graph)
    lines += _recommendations(model)
    logger.info("Rendered report for %s", model.name)
    return "\n".join(lines).rstrip("\n") + "\n"
