"""DOT emitters for the event-flow diagram and the safety control structure."""

import logging

from hazardflow.schemas.analysis import EmitOptions
from hazardflow.schemas.model import Domain, Model, SystemRole, Tier
from hazardflow.services.flowgraph import FlowGraph
from hazardflow.utils.ids import dot_name, gvquote, id_key

logger = logging.getLogger(__name__)

HIGHLIGHT = 'style=filled, fillcolor="#ffd7d7"'
_TIER_ORDER = (Tier.MACRO, Tier.MESO, Tier.MICRO, Tier.RISK)


def _label(identifier: str, text: str, extra: str = "") -> str:
    head = f"{identifier} ({extra})" if extra else identifier
    return gvquote(f"{head}\n{text}" if text else head)


def emit_dot_flow(graph: FlowGraph, options: EmitOptions | None = None) -> str:
    """Event-flow diagram as a DOT digraph.

    Nodes are clustered by tier (Macro, Meso, Micro, Risk) and emitted in id
    order. Edges with an endpoint in a filtered-out tier are dropped.

    Args:
    - graph (FlowGraph): Built graph
    - options (EmitOptions | None): Tier filter, highlighted ids and layout direction

    Returns:
    - str: DOT text ending with a newline
    """
    options = options or EmitOptions()
    lines = [
        "digraph event_flow {",
        f"  rankdir={options.rankdir.value};",
        '  node [shape=box, fontname="Helvetica"];',
    ]
    for tier in _TIER_ORDER:
        if tier not in options.tiers:
            continue
        lines.append(f"  subgraph cluster_{tier.name.lower()} {{")
        lines.append(f"    label={gvquote(tier.label)};")
        for node in graph.nodes:
            if graph.tier(node) != tier:
                continue
            gate = graph.gate_of.get(node)
            attributes = [f"label={_label(node, graph.label(node), gate.value.lower() if gate else '')}"]
            if tier == Tier.RISK:
                attributes.append("shape=ellipse")
            if node in options.highlight:
                attributes.append(HIGHLIGHT)
            lines.append(f"    {dot_name(node)} [{', '.join(attributes)}];")
        lines.append("  }")
    for source, target in graph.edges:
        if graph.tier(source) in options.tiers and graph.tier(target) in options.tiers:
            lines.append(f"  {dot_name(source)} -> {dot_name(target)};")
    lines.append("}")
    logger.debug("Emitted event-flow DOT with %d lines", len(lines))
    return "\n".join(lines) + "\n"


def emit_dot_control(model: Model) -> str:
    """Safety control structure as a DOT digraph.

    Controllers are clustered by tier and split by domain, social before
    technical. Entities and interactions form the controlled-system cluster;
    every loop is an edge from its controller to its controlled subject.
    """
    lines = [
        "digraph control_structure {",
        "  rankdir=TB;",
        '  node [shape=box, fontname="Helvetica"];',
    ]
    for tier in _TIER_ORDER[:-1]:
        name = tier.name.lower()
        lines.append(f"  subgraph cluster_{name} {{")
        lines.append(f"    label={gvquote(tier.label)};")
        for domain in (Domain.SOCIAL, Domain.TECHNICAL):
            lines.append(f"    subgraph cluster_{name}_{domain.value.lower()} {{")
            lines.append(f"      label={gvquote(domain.value)};")
            for controller in model.controllers:
                if controller.tier == tier and controller.domain == domain:
                    lines.append(
                        f"      {dot_name(controller.id)} "
                        f"[label={_label(controller.id, controller.label)}];"
                    )
            lines.append("    }")
        lines.append("  }")
    lines.append("  subgraph cluster_controlled {")
    lines.append(f"    label={gvquote('Controlled system')};")
    for item in model.entities:
        shape = "octagon" if item.role == SystemRole.HAZARD else "ellipse"
        lines.append(f"    {dot_name(item.id)} [label={_label(item.id, item.label)}, shape={shape}];")
    for interaction in model.interactions:
        lines.append(
            f"    {dot_name(interaction.id)} "
            f"[label={_label(interaction.id, interaction.label)}, shape=diamond];"
        )
    lines.append("  }")
    for loop in sorted(model.loops, key=lambda item: id_key(item.id)):
        lines.append(
            f"  {dot_name(loop.controller)} -> {dot_name(loop.controls)} "
            f"[label={gvquote(loop.id)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
