"""Diagnostic code registry and analysis exceptions."""

from dataclasses import dataclass
from enum import Enum


class DiagnosticSeverity(str, Enum):
    """Severity of a diagnostic."""

    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class DiagnosticCode:
    """A registered diagnostic code."""

    code: str
    severity: DiagnosticSeverity
    text: str
    doc: str = ""

    def format(self, **kwargs) -> str:
        """Render the message template."""
        try:
            return self.text.format(**kwargs)
        except KeyError as key_error:
            raise KeyError(
                f"missing text key '{key_error.args[0]}' for {self.code}"
            ) from None


REGISTRY: dict[str, DiagnosticCode] = {}


def _add(code: DiagnosticCode) -> None:
    if code.code in REGISTRY:
        raise ValueError(f"duplicate diagnostic code {code.code}")
    REGISTRY[code.code] = code


def lookup(code: str) -> DiagnosticCode:
    """Get a registered diagnostic code."""
    try:
        return REGISTRY[code]
    except KeyError:
        raise KeyError(f"unknown diagnostic code: {code}") from None


_E = DiagnosticSeverity.ERROR
_W = DiagnosticSeverity.WARNING

# Parse codes, P0xx
_add(DiagnosticCode("P001", _E, "unexpected {found}, expected {expected}",
                    "A token does not fit the grammar at this position."))
_add(DiagnosticCode("P002", _E, "unterminated string",
                    "A string literal is missing its closing quote before the line ends."))
_add(DiagnosticCode("P003", _E, "duplicate declaration of '{ident}'",
                    "An id is declared twice, a target has two causes, or a list repeats an id."))
_add(DiagnosticCode("P004", _E, "unknown keyword '{word}'",
                    "A word is not a declaration keyword or not a value of the expected enumeration. "
                    "Also raised for a UTF-8 byte-order mark."))

# Validation codes, V1xx
_add(DiagnosticCode("V101", _E, "{owner}: unknown id '{ident}'",
                    "A reference does not resolve to any declared element."))
_add(DiagnosticCode("V102", _E, "loop {loop} enforces {constraint} on {subject} but controls {controls}",
                    "A loop enforces a constraint whose subject lies outside its controlled subject."))
_add(DiagnosticCode("V103", _E, "{owner}: '{ident}' is a {found}, expected {expected}",
                    "A reference resolves to an element of the wrong category."))
_add(DiagnosticCode("V104", _E, "entity {ident}: part_of chain is cyclic",
                    "Following part_of from this entity returns to it."))
_add(DiagnosticCode("V110", _E, "events {first} and {second} both violate {constraint}",
                    "Each violated constraint has exactly one adverse event."))
_add(DiagnosticCode("V111", _W, "constraint {constraint} has no adverse event",
                    "A satisfied constraint; legal, but surfaced."))
_add(DiagnosticCode("V120", _E, "upward cause edge {source} ({source_tier}) -> {target} ({target_tier})",
                    "A lower-tier node may not cause a higher-tier node."))
_add(DiagnosticCode("V130", _E, "cause cycle {cycle}",
                    "The cause relation must be acyclic."))
_add(DiagnosticCode("V140", _W, "constraint {constraint} is not enforced by any loop",
                    "Subsystem and interaction constraints are enforced by safety control loops."))
_add(DiagnosticCode("V141", _W, "risk {risk} has no cause declaration",
                    "Every analyzed risk is expected to have causes."))


class AnalysisError(Exception):
    """Base error for analysis queries."""

    code = "ANALYSIS_ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class UnknownIdError(AnalysisError):
    """An id does not resolve."""

    code = "UNKNOWN_ID"


class NotANodeError(AnalysisError):
    """An id resolves, but not to an event or a risk."""

    code = "NOT_A_NODE"


class NotValidatedError(AnalysisError):
    """A model with Error diagnostics was handed to the graph builder."""

    code = "NOT_VALIDATED"


class PathLimitError(AnalysisError):
    """Path enumeration exceeded the configured cap."""

    code = "PATH_LIMIT"


class NotMacroError(AnalysisError):
    """A cross-level map was requested for a non-macro event."""

    code = "NOT_MACRO"


class NotAConstraintError(AnalysisError):
    """An id in a violated set is not a safety constraint."""

    code = "NOT_A_CONSTRAINT"
