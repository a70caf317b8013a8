""" Risk-state classification and constraint back-tracing. """

import logging
from typing import Iterable

from hazardflow.errors import NotAConstraintError, UnknownIdError
from hazardflow.schemas.analysis import EventTrace, SystemState
from hazardflow.schemas.model import (
    ConstraintKind,
    ElementCategory,
    Entity,
    Interaction,
    Model,
    SafetyConstraint,
    Severity,
    SystemRole,
)
from hazardflow.services.lookup import ancestors, descendants, entity, resolve
from hazardflow.utils.ids import id_key, sorted_ids

logger = logging.getLogger(__name__)


def _violated_constraints(model: Model, violated: Iterable[str]) -> list[SafetyConstraint]:
    constraints = []
    for identifier in sorted_ids(set(violated)):
        reference = resolve(model, identifier)
        if reference is None:
            raise UnknownIdError(f"unknown id '{identifier}'")
        if reference.category != ElementCategory.CONSTRAINT:
            raise NotAConstraintError(
                f"'{identifier}' is a {reference.category.value}, not a constraint"
            )
        constraints.append(reference.element)
    return constraints


def _interaction(model: Model, identifier: str) -> Interaction | None:
    reference = resolve(model, identifier)
    if reference is None or reference.category != ElementCategory.INTERACTION:
        return None
    return reference.element


def _targets(model: Model, interaction: Interaction) -> list[Entity]:
    found = [entity(model, item) for item in interaction.participants]
    return [item for item in found if item is not None and item.role == SystemRole.TARGET]


def is_external(model: Model, target: str, hazard: str) -> bool:
    """Whether a target lies outside a hazard's boundary.

    True when the target or an entity below it declares ``outside`` the hazard
    or one of the hazard's ancestors.
    """
    scope = {hazard, *ancestors(model, hazard)}
    for identifier in {target, *descendants(model, target)}:
        item = entity(model, identifier)
        if item is not None and item.outside in scope:
            return True
    return False


def _hazard_state(
    model: Model, hazard: Entity, violated: set[str], interactions: list[SafetyConstraint]
) -> tuple[Severity, list[str]]:
    subsystem = {
        constraint.id
        for constraint in model.constraints
        if constraint.kind == ConstraintKind.SUBSYSTEM and constraint.subject == hazard.id
    }
    hit = subsystem & violated
    if not hit:
        return Severity.SAFE, []
    if hit != subsystem:
        return Severity.NEAR_MISS, []

    scope = {hazard.id, *ancestors(model, hazard.id)}
    drivers: list[str] = []
    external = False
    for constraint in interactions:
        interaction = _interaction(model, constraint.subject)
        if interaction is None or not scope & set(interaction.participants):
            continue
        targets = _targets(model, interaction)
        if not targets:
            continue
        drivers.append(constraint.id)
        external = external or any(is_external(model, item.id, hazard.id) for item in targets)
    if not drivers:
        return Severity.INCIDENT, []
    return (Severity.MAJOR_ACCIDENT if external else Severity.ACCIDENT), drivers


def classify_state(model: Model, violated: Iterable[str]) -> SystemState:
    """Classify the risk state of every hazard entity.

    A hazard is Safe while none of its subsystem constraints is violated,
    NearMiss when some are, and Incident when all are. An incident escalates to
    Accident when an interaction constraint linking the hazard (or an ancestor)
    to a target is violated too, and to MajorAccident when such a target lies
    outside the hazard's boundary.

    Args:
    - model (Model): Validated model
    - violated (Iterable[str]): Violated constraint ids

    Returns:
    - SystemState: Per-hazard and overall severity
    """
    constraints = _violated_constraints(model, violated)
    violated_ids = {constraint.id for constraint in constraints}
    interactions = [
        constraint for constraint in constraints if constraint.kind == ConstraintKind.INTERACTION
    ]
    per_hazard: dict[str, Severity] = {}
    escalated_by: dict[str, list[str]] = {}
    for item in model.entities:
        if item.role != SystemRole.HAZARD:
            continue
        severity, drivers = _hazard_state(model, item, violated_ids, interactions)
        per_hazard[item.id] = severity
        if drivers:
            escalated_by[item.id] = drivers
    overall = max(per_hazard.values(), default=Severity.SAFE)
    logger.info("Classified %d violated constraints as %s", len(violated_ids), overall.label)
    return SystemState(
        overall=overall,
        per_hazard=per_hazard,
        violated=sorted_ids(violated_ids),
        escalated_by=escalated_by,
    )


def trace_event(model: Model, event_id: str) -> EventTrace:
    """Trace an adverse event back to its constraint, enforcing loops and controllers.

    Args:
    - model (Model): Validated model
    - event_id (str): Event id

    Returns:
    - EventTrace: Constraint, loops in id order and their distinct controllers
    """
    reference = resolve(model, event_id)
    if reference is None or reference.category != ElementCategory.EVENT:
        raise UnknownIdError(f"no event '{event_id}'")
    event = reference.element
    constraint = resolve(model, event.violates).element
    loops = [loop for loop in model.loops if constraint.id in loop.enforces]
    controller_ids = sorted({loop.controller for loop in loops}, key=id_key)
    return EventTrace(
        event=event,
        constraint=constraint,
        loops=loops,
        controllers=[resolve(model, item).element for item in controller_ids],
    )
