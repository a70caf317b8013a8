""" Pydantic schemas for analysis results and request bodies. """

from enum import Enum

from pydantic import BaseModel, Field, computed_field, field_validator

from hazardflow.errors import DiagnosticSeverity
from hazardflow.schemas.diagnostics import Diagnostic
from hazardflow.schemas.model import (
    AdverseEvent,
    ControlLoop,
    Controller,
    SafetyConstraint,
    SeverityField,
    Tier,
    TierField,
)


class ValidationReport(BaseModel):
    """Diagnostics of all validation passes."""

    diagnostics: list[Diagnostic] = []
    pass_results: dict[str, int] = {}

    @computed_field
    @property
    def error_count(self) -> int:
        """Number of Error diagnostics."""
        return sum(1 for item in self.diagnostics if item.severity == DiagnosticSeverity.ERROR)

    @computed_field
    @property
    def warning_count(self) -> int:
        """Number of Warning diagnostics."""
        return sum(
            1 for item in self.diagnostics if item.severity == DiagnosticSeverity.WARNING
        )

    @property
    def validated(self) -> bool:
        """A model with zero Error diagnostics is admissible to the flow graph."""
        return self.error_count == 0


class SystemState(BaseModel):
    """Risk state of the hazard-target system for a set of violated constraints."""

    overall: SeverityField
    per_hazard: dict[str, SeverityField]
    violated: list[str]
    escalated_by: dict[str, list[str]] = {}

    class Config:
        """Config."""

        frozen = True


class CrossLevelMap(BaseModel):
    """Direct successors of a macro event, bucketed by tier."""

    macro_event: str
    meso: list[str]
    micro: list[str]
    macro: list[str] = []
    risk: list[str] = []

    class Config:
        """Config."""

        frozen = True


class EventTrace(BaseModel):
    """Back-trace of an adverse event to its constraint, loops and controllers."""

    event: AdverseEvent
    constraint: SafetyConstraint
    loops: list[ControlLoop]
    controllers: list[Controller]

    class Config:
        """Config."""

        frozen = True


class Rankdir(str, Enum):
    """DOT layout direction."""

    TOP_TO_BOTTOM = "TB"
    LEFT_TO_RIGHT = "LR"


ALL_TIERS = frozenset(Tier)


class EmitOptions(BaseModel):
    """Options for the event-flow DOT emitter."""

    tiers: frozenset[TierField] = Field(default=ALL_TIERS)
    highlight: frozenset[str] = frozenset()
    rankdir: Rankdir = Rankdir.TOP_TO_BOTTOM

    class Config:
        """Config."""

        frozen = True

    @field_validator("tiers")
    @classmethod
    def check_tiers(cls, value: frozenset[Tier]) -> frozenset[Tier]:
        """At least one tier is emitted."""
        if not value:
            raise ValueError("tiers must not be empty")
        return value


class ModelSource(BaseModel):
    """Request body carrying `.hts` source text."""

    source: str


class PropagateRequest(ModelSource):
    """Request body for propagation."""

    seed: list[str] = []


class ClassifyRequest(ModelSource):
    """Request body for risk-state classification."""

    violated: list[str] = []
