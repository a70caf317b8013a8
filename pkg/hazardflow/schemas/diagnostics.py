""" Pydantic schemas for source spans and diagnostics. """

from pydantic import BaseModel

from hazardflow.errors import DiagnosticSeverity, lookup


class SourceSpan(BaseModel):
    """Byte range of a source slice, with the 1-based position of its first byte."""

    byte_start: int
    byte_end: int
    line: int
    column: int

    class Config:
        """Config."""

        frozen = True

    @classmethod
    def unknown(cls) -> "SourceSpan":
        """Span used for elements that were not parsed from source."""
        return cls(byte_start=0, byte_end=0, line=1, column=1)

    def excerpt(self, source: str) -> str:
        """Source text covered by the span."""
        data = source.encode("utf-8")
        return data[self.byte_start : self.byte_end].decode("utf-8", errors="replace")


class Diagnostic(BaseModel):
    """Coded finding produced by the parser or the validator."""

    code: str
    severity: DiagnosticSeverity
    message: str
    span: SourceSpan

    class Config:
        """Config."""

        frozen = True

    @classmethod
    def of(cls, code: str, span: SourceSpan | None, **kwargs) -> "Diagnostic":
        """Build a diagnostic from the registry.

        Args:
        - code (str): Registered diagnostic code
        - span (SourceSpan | None): Location; unknown when the element has no span
        - kwargs: Message template values

        Returns:
        - Diagnostic: The finding
        """
        entry = lookup(code)
        return cls(
            code=code,
            severity=entry.severity,
            message=entry.format(**kwargs),
            span=span or SourceSpan.unknown(),
        )

    @property
    def is_error(self) -> bool:
        """Whether the finding has Error severity."""
        return self.severity == DiagnosticSeverity.ERROR

    def render(self, filename: str) -> str:
        """One-line form: ``CODE severity file:line:col message``."""
        return (
            f"{self.code} {self.severity.value} "
            f"{filename}:{self.span.line}:{self.span.column} {self.message}"
        )
