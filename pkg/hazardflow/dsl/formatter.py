"""Canonical `.hts` formatting."""

from hazardflow.dsl.lexer import quote
from hazardflow.dsl.parser import (
    CATEGORIES,
    CONSTRAINT_KINDS,
    DOMAINS,
    GATES,
    LEVELS,
    SEVERITIES,
)
from hazardflow.schemas.model import Model, SystemRole

INDENT = "  "


def _keyword(table: dict, value) -> str:
    return next(word for word, member in table.items() if member == value)


def _label(text: str) -> str:
    return f" {quote(text)}" if text else ""


def format_canonical(model: Model) -> str:
    """Render a model as canonical `.hts` text.

    Declarations are grouped as entities, interactions, risks, constraints,
    events, causes, controllers, loops, recommendations, each in id order; one
    declaration per line, two-space indent, LF endings and a trailing newline.
    Comments are not preserved.

    Args:
    - model (Model): Structurally valid model

    Returns:
    - str: `.hts` source
    """
    lines = [f"system {model.name} {{"]
    for entity in model.entities:
        role = "hazard" if entity.role == SystemRole.HAZARD else "target"
        line = f"{role} {entity.id}{_label(entity.label)}"
        if entity.parent:
            line += f" part_of {entity.parent}"
        if entity.outside:
            line += f" outside {entity.outside}"
        lines.append(INDENT + line)
    for interaction in model.interactions:
        lines.append(
            f"{INDENT}interaction {interaction.id} between "
            f"{', '.join(interaction.participants)}{_label(interaction.label)}"
        )
    for risk in model.risks:
        lines.append(
            f"{INDENT}risk {risk.id} kind {_keyword(SEVERITIES, risk.severity)} "
            f"on {risk.subject}{_label(risk.text)}"
        )
    for constraint in model.constraints:
        lines.append(
            f"{INDENT}constraint {constraint.id} "
            f"kind {_keyword(CONSTRAINT_KINDS, constraint.kind)} "
            f"level {_keyword(LEVELS, constraint.tier)} "
            f"on {constraint.subject} {quote(constraint.text)}"
        )
    for event in model.events:
        lines.append(f"{INDENT}event {event.id} violates {event.violates}{_label(event.text)}")
    for decl in model.cause_decls:
        lines.append(
            f"{INDENT}causes {decl.target} <- {_keyword(GATES, decl.gate)}"
            f"({', '.join(decl.sources)})"
        )
    for controller in model.controllers:
        lines.append(
            f"{INDENT}controller {controller.id} level {_keyword(LEVELS, controller.tier)} "
            f"domain {_keyword(DOMAINS, controller.domain)}{_label(controller.label)}"
        )
    for loop in model.loops:
        parts = [f"controller {loop.controller};", f"controls {loop.controls};"]
        if loop.actuator is not None:
            parts.append(f"actuator {quote(loop.actuator)};")
        if loop.sensor is not None:
            parts.append(f"sensor {quote(loop.sensor)};")
        parts.append(f"enforces {', '.join(loop.enforces)};")
        lines.append(f"{INDENT}loop {loop.id} {{ {' '.join(parts)} }}")
    for item in model.recommendations:
        lines.append(
            f"{INDENT}recommend for {item.for_controller} "
            f"category {_keyword(CATEGORIES, item.category)} {quote(item.text)}"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
