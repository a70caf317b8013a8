""" Semantic validation passes over a parsed model. """

import logging
from collections import defaultdict
from typing import Callable

import networkx as nx

from hazardflow.dsl import parse
from hazardflow.errors import AnalysisError
from hazardflow.schemas.analysis import ValidationReport
from hazardflow.schemas.diagnostics import Diagnostic, SourceSpan
from hazardflow.schemas.model import (
    ConstraintKind,
    ElementCategory,
    Model,
)
from hazardflow.services.lookup import entity, node_tier, resolve, within
from hazardflow.utils.ids import id_key

logger = logging.getLogger(__name__)

_NODE = (ElementCategory.EVENT, ElementCategory.RISK)
_SUBJECT = (ElementCategory.ENTITY, ElementCategory.INTERACTION)


def _noun(categories: tuple[ElementCategory, ...]) -> str:
    return " or ".join(category.value for category in categories)


def _reference(
    model: Model,
    owner: str,
    identifier: str,
    allowed: tuple[ElementCategory, ...],
    span: SourceSpan | None,
) -> list[Diagnostic]:
    reference = resolve(model, identifier)
    if reference is None:
        return [Diagnostic.of("V101", span, owner=owner, ident=identifier)]
    if reference.category not in allowed:
        return [
            Diagnostic.of(
                "V103",
                span,
                owner=owner,
                ident=identifier,
                found=reference.category.value,
                expected=_noun(allowed),
            )
        ]
    return []


def _on_parent_cycle(model: Model, identifier: str) -> bool:
    seen: set[str] = set()
    current = entity(model, identifier)
    while current is not None and current.parent is not None:
        if current.parent == identifier:
            return True
        if current.parent in seen:
            return False
        seen.add(current.parent)
        current = entity(model, current.parent)
    return False


def covers(model: Model, controls: str, subject: str) -> bool:
    """Whether a loop controlling ``controls`` may enforce a constraint on ``subject``.

    The subject must be the controlled element itself, an entity in its
    part_of subtree, or an interaction whose participants all lie in that subtree.
    """
    if subject == controls:
        return True
    controlled = resolve(model, controls)
    target = resolve(model, subject)
    if controlled is None or target is None or controlled.category != ElementCategory.ENTITY:
        return False
    if target.category == ElementCategory.ENTITY:
        return within(model, subject, controls)
    if target.category == ElementCategory.INTERACTION:
        return all(within(model, item, controls) for item in target.element.participants)
    return False


def check_references(model: Model) -> list[Diagnostic]:
    """Report dangling (V101) and miscategorized (V103) references, loop subject
    mismatches (V102) and cyclic part_of chains (V104).

    Args:
    - model (Model): Model

    Returns:
    - list[Diagnostic]: Findings
    """
    findings: list[Diagnostic] = []
    for item in model.entities:
        owner = f"entity {item.id}"
        if item.parent is not None:
            found = _reference(model, owner, item.parent, (ElementCategory.ENTITY,), item.span)
            findings.extend(found)
            parent = resolve(model, item.parent)
            if not found and parent.element.role != item.role:
                findings.append(
                    Diagnostic.of(
                        "V103",
                        item.span,
                        owner=owner,
                        ident=item.parent,
                        found=f"{parent.element.role.value.lower()} entity",
                        expected=f"{item.role.value.lower()} entity",
                    )
                )
            if _on_parent_cycle(model, item.id):
                findings.append(Diagnostic.of("V104", item.span, ident=item.id))
        if item.outside is not None:
            findings.extend(
                _reference(model, owner, item.outside, (ElementCategory.ENTITY,), item.span)
            )
    for interaction in model.interactions:
        for participant in interaction.participants:
            findings.extend(
                _reference(
                    model,
                    f"interaction {interaction.id}",
                    participant,
                    (ElementCategory.ENTITY,),
                    interaction.span,
                )
            )
    for constraint in model.constraints:
        if constraint.kind == ConstraintKind.INTERACTION:
            allowed = (ElementCategory.INTERACTION,)
        elif constraint.kind == ConstraintKind.SUBSYSTEM:
            allowed = (ElementCategory.ENTITY,)
        else:
            allowed = _SUBJECT
        findings.extend(
            _reference(
                model, f"constraint {constraint.id}", constraint.subject, allowed, constraint.span
            )
        )
    for event in model.events:
        findings.extend(
            _reference(
                model,
                f"event {event.id}",
                event.violates,
                (ElementCategory.CONSTRAINT,),
                event.span,
            )
        )
    for risk in model.risks:
        findings.extend(
            _reference(model, f"risk {risk.id}", risk.subject, _SUBJECT, risk.span)
        )
    for decl in model.cause_decls:
        owner = f"causes {decl.target}"
        findings.extend(_reference(model, owner, decl.target, _NODE, decl.span))
        for source in decl.sources:
            findings.extend(_reference(model, owner, source, _NODE, decl.span))
    for loop in model.loops:
        owner = f"loop {loop.id}"
        findings.extend(
            _reference(model, owner, loop.controller, (ElementCategory.CONTROLLER,), loop.span)
        )
        controls_found = _reference(model, owner, loop.controls, _SUBJECT, loop.span)
        findings.extend(controls_found)
        for constraint_id in loop.enforces:
            found = _reference(
                model, owner, constraint_id, (ElementCategory.CONSTRAINT,), loop.span
            )
            findings.extend(found)
            if found or controls_found:
                continue
            subject = resolve(model, constraint_id).element.subject
            if not covers(model, loop.controls, subject):
                findings.append(
                    Diagnostic.of(
                        "V102",
                        loop.span,
                        loop=loop.id,
                        constraint=constraint_id,
                        subject=subject,
                        controls=loop.controls,
                    )
                )
    for item in model.recommendations:
        findings.extend(
            _reference(
                model,
                "recommendation",
                item.for_controller,
                (ElementCategory.CONTROLLER,),
                item.span,
            )
        )
    return findings


def check_event_constraint_bijection(model: Model) -> list[Diagnostic]:
    """Report constraints violated by more than one event (V110) and
    constraints without an event (V111)."""
    findings: list[Diagnostic] = []
    by_constraint: dict[str, list] = defaultdict(list)
    for event in model.events:
        by_constraint[event.violates].append(event)
    for constraint_id, events in by_constraint.items():
        first = events[0]
        for other in events[1:]:
            findings.append(
                Diagnostic.of(
                    "V110",
                    other.span,
                    first=first.id,
                    second=other.id,
                    constraint=constraint_id,
                )
            )
    for constraint in model.constraints:
        if constraint.id not in by_constraint:
            findings.append(
                Diagnostic.of("V111", constraint.span, constraint=constraint.id)
            )
    return findings


def check_tier_monotonicity(model: Model) -> list[Diagnostic]:
    """Report cause edges whose source sits on a lower tier than its target (V120).

    Edges with an unresolvable endpoint are left to the reference pass.
    """
    findings: list[Diagnostic] = []
    for decl in model.cause_decls:
        try:
            target_tier = node_tier(model, decl.target)
        except AnalysisError:
            continue
        for source in decl.sources:
            try:
                source_tier = node_tier(model, source)
            except AnalysisError:
                continue
            if source_tier < target_tier:
                findings.append(
                    Diagnostic.of(
                        "V120",
                        decl.span,
                        source=source,
                        source_tier=source_tier.label,
                        target=decl.target,
                        target_tier=target_tier.label,
                    )
                )
    return findings


def check_acyclicity(model: Model) -> list[Diagnostic]:
    """Report one representative cycle of the cause relation (V130)."""
    graph = nx.DiGraph()
    edges = sorted(
        ((source, decl.target) for decl in model.cause_decls for source in decl.sources),
        key=lambda edge: (id_key(edge[0]), id_key(edge[1])),
    )
    graph.add_nodes_from(sorted({node for edge in edges for node in edge}, key=id_key))
    graph.add_edges_from(edges)
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return []
    nodes = [cycle[0][0]] + [target for _, target in cycle]
    decl = model.cause_of(cycle[0][1])
    return [
        Diagnostic.of(
            "V130", decl.span if decl else None, cycle=" -> ".join(nodes)
        )
    ]


def check_enforcement_coverage(model: Model) -> list[Diagnostic]:
    """Report subsystem and interaction constraints no loop enforces (V140)."""
    enforced = {item for loop in model.loops for item in loop.enforces}
    return [
        Diagnostic.of("V140", constraint.span, constraint=constraint.id)
        for constraint in model.constraints
        if constraint.kind in (ConstraintKind.SUBSYSTEM, ConstraintKind.INTERACTION)
        and constraint.id not in enforced
    ]


def check_risk_causes(model: Model) -> list[Diagnostic]:
    """Report risks without a cause declaration (V141)."""
    return [
        Diagnostic.of("V141", risk.span, risk=risk.id)
        for risk in model.risks
        if model.cause_of(risk.id) is None
    ]


PASSES: dict[str, Callable[[Model], list[Diagnostic]]] = {
    "references": check_references,
    "bijection": check_event_constraint_bijection,
    "monotonicity": check_tier_monotonicity,
    "acyclicity": check_acyclicity,
    "enforcement": check_enforcement_coverage,
    "risk_causes": check_risk_causes,
}


def validate(model: Model) -> ValidationReport:
    """Run every validation pass.

    Passes are independent of each other; the report lists their findings in
    pass order, each pass ordered by source position.

    Args:
    - model (Model): Parsed model

    Returns:
    - ValidationReport: Diagnostics and per-pass counts
    """
    diagnostics: list[Diagnostic] = []
    pass_results: dict[str, int] = {}
    for name, check in PASSES.items():
        findings = sorted(check(model), key=lambda item: item.span.byte_start)
        logger.debug("Validation pass %s: %d findings", name, len(findings))
        pass_results[name] = len(findings)
        diagnostics.extend(findings)
    report = ValidationReport(diagnostics=diagnostics, pass_results=pass_results)
    logger.info(
        "Validated %s: %d errors, %d warnings",
        model.name,
        report.error_count,
        report.warning_count,
    )
    return report


def check_source(source: str) -> tuple[Model | None, ValidationReport]:
    """Parse and validate `.hts` text.

    Args:
    - source (str): `.hts` text

    Returns:
    - tuple[Model | None, ValidationReport]: The model (None when parsing
      failed) and every parse and validation diagnostic
    """
    model, parse_diagnostics = parse(source)
    if model is None:
        return None, ValidationReport(
            diagnostics=parse_diagnostics,
            pass_results={"parse": len(parse_diagnostics)},
        )
    report = validate(model)
    if parse_diagnostics:
        report = ValidationReport(
            diagnostics=[*parse_diagnostics, *report.diagnostics],
            pass_results={"parse": len(parse_diagnostics), **report.pass_results},
        )
    return model, report
