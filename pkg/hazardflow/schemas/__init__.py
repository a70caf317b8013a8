""" This module contains the schemas for the model IR and analysis results. """

from .analysis import (
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
from .diagnostics import Diagnostic, SourceSpan
from .model import (
    AdverseEvent,
    CauseDecl,
    ConstraintKind,
    ControlLoop,
    Controller,
    Domain,
    Element,
    ElementCategory,
    Entity,
    Gate,
    Interaction,
    Model,
    Recommendation,
    RecommendationCategory,
    Reference,
    Risk,
    SafetyConstraint,
    Severity,
    SystemRole,
    Tier,
    structurally_equal,
)
