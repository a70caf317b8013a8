""" Identity and tier resolution over a model. """

from hazardflow.errors import NotANodeError, UnknownIdError
from hazardflow.schemas.model import (
    AdverseEvent,
    ElementCategory,
    Entity,
    Model,
    Reference,
    Tier,
)
from hazardflow.utils.ids import sorted_ids


def resolve(model: Model, identifier: str) -> Reference | None:
    """Get the element bearing an id.

    Args:
    - model (Model): Model
    - identifier (str): Element id

    Returns:
    - Reference | None: Category and element, or None if no element bears the id
    """
    return model.index.get(identifier)


def node_tier(model: Model, identifier: str) -> Tier:
    """Get the tier of an event or risk node.

    Args:
    - model (Model): Model
    - identifier (str): Event or risk id

    Returns:
    - Tier: Risk for risks; the violated constraint's tier for events
    """
    reference = resolve(model, identifier)
    if reference is None:
        raise UnknownIdError(f"unknown id '{identifier}'")
    if reference.category == ElementCategory.RISK:
        return Tier.RISK
    if reference.category != ElementCategory.EVENT:
        raise NotANodeError(f"'{identifier}' is a {reference.category.value}, not an event or risk")
    return event_tier(model, reference.element)


def event_tier(model: Model, event: AdverseEvent) -> Tier:
    """Tier of an event, taken from the constraint it violates."""
    constraint = resolve(model, event.violates)
    if constraint is None or constraint.category != ElementCategory.CONSTRAINT:
        raise UnknownIdError(f"event {event.id} violates unknown constraint '{event.violates}'")
    return constraint.element.tier


def entity(model: Model, identifier: str) -> Entity | None:
    """Get an entity by id, or None if the id is not an entity."""
    reference = resolve(model, identifier)
    if reference is None or reference.category != ElementCategory.ENTITY:
        return None
    return reference.element


def ancestors(model: Model, identifier: str) -> list[str]:
    """Entity ids on the part_of chain above an entity, nearest first.

    Stops at a dangling parent or a cycle.
    """
    chain: list[str] = []
    current = entity(model, identifier)
    while current is not None and current.parent is not None:
        if current.parent in chain or current.parent == identifier:
            break
        chain.append(current.parent)
        current = entity(model, current.parent)
    return chain


def descendants(model: Model, identifier: str) -> set[str]:
    """Entity ids whose part_of chain passes through an entity."""
    return {
        item.id
        for item in model.entities
        if item.id != identifier and identifier in ancestors(model, item.id)
    }


def within(model: Model, identifier: str, root: str) -> bool:
    """Whether an entity is the root or lies in its subtree."""
    return identifier == root or root in ancestors(model, identifier)


def elements_by_category(model: Model) -> dict[ElementCategory, list[str]]:
    """Declared ids grouped by category, each group in id order."""
    grouped: dict[ElementCategory, list[str]] = {category: [] for category in ElementCategory}
    for identifier, reference in model.index.items():
        grouped[reference.category].append(identifier)
    return {category: sorted_ids(ids) for category, ids in grouped.items()}
