""" Immutable typed representation of a hazard-target system model. """

from enum import Enum, IntEnum
from functools import cached_property
from typing import Annotated, Any, NamedTuple

from pydantic import (
    BaseModel,
    BeforeValidator,
    Field,
    PlainSerializer,
    field_validator,
    model_validator,
)

from hazardflow.schemas.diagnostics import SourceSpan
from hazardflow.utils.ids import id_key


class Tier(IntEnum):
    """Hierarchical level of a node. Risks sit below every event tier."""

    RISK = 0
    MICRO = 1
    MESO = 2
    MACRO = 3

    @property
    def label(self) -> str:
        """Display name, e.g. ``Micro``."""
        return self.name.title()


class Severity(IntEnum):
    """Risk-state ladder."""

    SAFE = 0
    NEAR_MISS = 1
    INCIDENT = 2
    ACCIDENT = 3
    MAJOR_ACCIDENT = 4

    @property
    def label(self) -> str:
        """Display name, e.g. ``NearMiss``."""
        return "".join(part.title() for part in self.name.split("_"))


def _by_label(enum_cls):
    def parse(value: Any):
        if isinstance(value, str):
            for member in enum_cls:
                if value in (member.label, member.name):
                    return member
        return value

    return parse


TierField = Annotated[
    Tier,
    BeforeValidator(_by_label(Tier)),
    PlainSerializer(lambda tier: tier.label, return_type=str, when_used="json"),
]
SeverityField = Annotated[
    Severity,
    BeforeValidator(_by_label(Severity)),
    PlainSerializer(lambda level: level.label, return_type=str, when_used="json"),
]


class SystemRole(str, Enum):
    """Role of an entity in the hazard-target system."""

    HAZARD = "Hazard"
    TARGET = "Target"


class ConstraintKind(str, Enum):
    """Safety constraint taxonomy."""

    SUBSYSTEM = "Subsystem"
    INTERACTION = "Interaction"
    CONTROL = "Control"


class Gate(str, Enum):
    """How the sources of a cause declaration combine."""

    ALL = "All"
    ANY = "Any"


class Domain(str, Enum):
    """Controller domain in the sociotechnical control structure."""

    SOCIAL = "Social"
    TECHNICAL = "Technical"


class RecommendationCategory(str, Enum):
    """Recommendation groups, in reporting order."""

    LEGISLATIVE = "Legislative"
    GOVERNMENT = "Government"
    CORPORATE = "Corporate"
    INTERMEDIARY = "Intermediary"
    SOCIAL_MEDIA = "SocialMedia"
    TECHNICAL = "Technical"


class ElementCategory(str, Enum):
    """Category of an element that carries an id."""

    ENTITY = "entity"
    INTERACTION = "interaction"
    CONSTRAINT = "constraint"
    EVENT = "event"
    RISK = "risk"
    CONTROLLER = "controller"
    LOOP = "loop"


class Element(BaseModel):
    """Base for model elements. The span is location only, never identity."""

    span: SourceSpan | None = Field(default=None, exclude=True, repr=False)

    class Config:
        """Config."""

        frozen = True


def _distinct(values: tuple[str, ...], what: str) -> tuple[str, ...]:
    if len(set(values)) != len(values):
        raise ValueError(f"{what} must be pairwise distinct")
    return values


class Entity(Element):
    """Hazard or target (sub)system."""

    id: str
    role: SystemRole
    label: str = ""
    parent: str | None = None
    outside: str | None = None


class Interaction(Element):
    """Interaction among two or more entities."""

    id: str
    participants: tuple[str, ...]
    label: str = ""

    @field_validator("participants")
    @classmethod
    def check_participants(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        """At least two distinct participants."""
        if len(value) < 2:
            raise ValueError("an interaction needs at least two participants")
        return _distinct(value, "participants")


class SafetyConstraint(Element):
    """Safety constraint SC_{i.j}."""

    id: str
    kind: ConstraintKind
    tier: TierField
    subject: str
    text: str

    @field_validator("tier")
    @classmethod
    def check_tier(cls, value: Tier) -> Tier:
        """Constraints live on an event tier."""
        if value == Tier.RISK:
            raise ValueError("a constraint tier must be micro, meso or macro")
        return value


class AdverseEvent(Element):
    """Adverse event E_{i.j}: the realized violation of one constraint."""

    id: str
    violates: str
    text: str = ""


class Risk(Element):
    """Realized or potential risk state (near miss, incident, accident)."""

    id: str
    severity: SeverityField
    subject: str
    text: str = ""

    @field_validator("severity")
    @classmethod
    def check_severity(cls, value: Severity) -> Severity:
        """A risk is never Safe."""
        if value == Severity.SAFE:
            raise ValueError("a risk severity cannot be Safe")
        return value


class CauseDecl(Element):
    """``target <- gate(sources...)``."""

    target: str
    gate: Gate
    sources: tuple[str, ...]

    @field_validator("sources")
    @classmethod
    def check_sources(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        """Non-empty, distinct, stored in id order."""
        if not value:
            raise ValueError("a cause declaration needs at least one source")
        return tuple(sorted(_distinct(value, "sources"), key=id_key))


class Controller(Element):
    """Controller in the three-tier safety control structure."""

    id: str
    tier: TierField
    domain: Domain
    label: str = ""

    @field_validator("tier")
    @classmethod
    def check_tier(cls, value: Tier) -> Tier:
        """Controllers live on an event tier."""
        if value == Tier.RISK:
            raise ValueError("a controller tier must be micro, meso or macro")
        return value


class ControlLoop(Element):
    """Safety control loop: controller acting on a controlled subject."""

    id: str
    controller: str
    controls: str
    actuator: str | None = None
    sensor: str | None = None
    enforces: tuple[str, ...]

    @field_validator("enforces")
    @classmethod
    def check_enforces(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        """Non-empty, distinct, stored in id order."""
        if not value:
            raise ValueError("a loop must enforce at least one constraint")
        return tuple(sorted(_distinct(value, "enforces"), key=id_key))


class Recommendation(Element):
    """Improvement measure attributed to a controller."""

    for_controller: str
    text: str
    category: RecommendationCategory


class Reference(NamedTuple):
    """Result of resolving an id."""

    category: ElementCategory
    element: Element


_ID_COLLECTIONS = {
    "entities": ElementCategory.ENTITY,
    "interactions": ElementCategory.INTERACTION,
    "constraints": ElementCategory.CONSTRAINT,
    "events": ElementCategory.EVENT,
    "risks": ElementCategory.RISK,
    "controllers": ElementCategory.CONTROLLER,
    "loops": ElementCategory.LOOP,
}


class Model(BaseModel):
    """One hazard-target system analysis.

    Collections are normalized to id order at construction so that two models
    built from the same declarations in any order are structurally equal.
    """

    name: str
    entities: tuple[Entity, ...] = ()
    interactions: tuple[Interaction, ...] = ()
    constraints: tuple[SafetyConstraint, ...] = ()
    events: tuple[AdverseEvent, ...] = ()
    risks: tuple[Risk, ...] = ()
    cause_decls: tuple[CauseDecl, ...] = ()
    controllers: tuple[Controller, ...] = ()
    loops: tuple[ControlLoop, ...] = ()
    recommendations: tuple[Recommendation, ...] = ()

    class Config:
        """Config."""

        frozen = True

    @field_validator(*_ID_COLLECTIONS)
    @classmethod
    def sort_by_id(cls, value: tuple) -> tuple:
        """Store id-bearing collections in id order."""
        return tuple(sorted(value, key=lambda element: id_key(element.id)))

    @field_validator("cause_decls")
    @classmethod
    def sort_causes(cls, value: tuple[CauseDecl, ...]) -> tuple[CauseDecl, ...]:
        """Store cause declarations in target order."""
        return tuple(sorted(value, key=lambda decl: id_key(decl.target)))

    @field_validator("recommendations")
    @classmethod
    def sort_recommendations(
        cls, value: tuple[Recommendation, ...]
    ) -> tuple[Recommendation, ...]:
        """Group recommendations by controller, keeping declaration order within one."""
        return tuple(sorted(value, key=lambda item: id_key(item.for_controller)))

    @model_validator(mode="after")
    def check_identity(self) -> "Model":
        """Ids are globally unique; each target has at most one cause declaration."""
        seen: set[str] = set()
        for attribute in _ID_COLLECTIONS:
            for element in getattr(self, attribute):
                if element.id in seen:
                    raise ValueError(f"duplicate id '{element.id}'")
                seen.add(element.id)
        targets = [decl.target for decl in self.cause_decls]
        if len(set(targets)) != len(targets):
            raise ValueError("at most one cause declaration per target")
        return self

    @cached_property
    def index(self) -> dict[str, Reference]:
        """Id to element map."""
        return {
            element.id: Reference(category, element)
            for attribute, category in _ID_COLLECTIONS.items()
            for element in getattr(self, attribute)
        }

    @cached_property
    def causes_by_target(self) -> dict[str, CauseDecl]:
        """Target id to its cause declaration."""
        return {decl.target: decl for decl in self.cause_decls}

    def cause_of(self, target: str) -> CauseDecl | None:
        """Cause declaration for a target, if any."""
        return self.causes_by_target.get(target)


def structurally_equal(left: Model, right: Model) -> bool:
    """Compare two models ignoring source spans."""
    return left.model_dump() == right.model_dump()
