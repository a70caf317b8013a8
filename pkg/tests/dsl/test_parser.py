"""Tests for the parser."""

import pytest

from hazardflow.dsl import parse
from hazardflow.schemas.model import ConstraintKind, Severity, SystemRole, Tier
from tests.conftest import read_fixture


def codes(source: str) -> list[str]:
    return [item.code for item in parse(source)[1]]


def test_corpus_counts(corpus):
    """Test the declarations of the case study."""
    assert [risk.id for risk in corpus.risks] == ["R1", "R2", "R3", "R4"]
    assert [risk.severity for risk in corpus.risks] == [
        Severity.NEAR_MISS,
        Severity.INCIDENT,
        Severity.ACCIDENT,
        Severity.MAJOR_ACCIDENT,
    ]
    for tier, prefix, count in ((Tier.MICRO, "1", 14), (Tier.MESO, "2", 31), (Tier.MACRO, "3", 24)):
        constraints = [item.id for item in corpus.constraints if item.tier == tier]
        assert constraints == [f"SC{prefix}.{number}" for number in range(1, count + 1)]
        events = [item.id for item in corpus.events if item.violates in constraints]
        assert events == [f"E{prefix}.{number}" for number in range(1, count + 1)]


def test_corpus_entities(corpus):
    """Test the hazard-target system of the case study."""
    roles = {item.id: item.role for item in corpus.entities}
    assert roles == {
        "HS": SystemRole.HAZARD,
        "HS1": SystemRole.HAZARD,
        "HS2": SystemRole.HAZARD,
        "HS3": SystemRole.HAZARD,
        "TS": SystemRole.TARGET,
        "TS1": SystemRole.TARGET,
        "TS2": SystemRole.TARGET,
    }
    ts2 = next(item for item in corpus.entities if item.id == "TS2")
    assert (ts2.parent, ts2.outside) == ("TS", "HS")
    micro_kinds = {item.id: item.kind for item in corpus.constraints if item.tier == Tier.MICRO}
    assert [key for key, kind in micro_kinds.items() if kind == ConstraintKind.SUBSYSTEM] == [
        "SC1.1",
        "SC1.2",
        "SC1.3",
        "SC1.4",
    ]
    assert [key for key, kind in micro_kinds.items() if kind == ConstraintKind.INTERACTION] == [
        "SC1.9",
        "SC1.11",
        "SC1.14",
    ]


def test_single_hazard():
    """Test a one-declaration model."""
    model, diagnostics = parse("system s { hazard HS1 }")
    assert diagnostics == []
    assert model.name == "s"
    assert len(model.entities) == 1
    assert model.entities[0].role == SystemRole.HAZARD
    assert model.entities[0].label == ""


def test_missing_cause_sources():
    """Test a forced syntax error inside a cause declaration."""
    source = "system s { causes R1 <- }"
    model, diagnostics = parse(source)
    assert model is None
    assert [item.code for item in diagnostics] == ["P001"]
    assert diagnostics[0].span.excerpt(source) == "}"
    assert diagnostics[0].message == "unexpected '}', expected 'all' or 'any'"


@pytest.mark.parametrize(
    "fixture, code, excerpt",
    [
        ("unexpected_token.hts", "P001", "}"),
        ("unterminated_string.hts", "P002", '"hazard'),
        ("duplicate_id.hts", "P003", "H1"),
        ("unknown_keyword.hts", "P004", "hazzard"),
    ],
)
def test_parse_diagnostics(fixture, code, excerpt):
    """Test that each parse fixture reports exactly its code at the offending token."""
    source = read_fixture(fixture)
    model, diagnostics = parse(source)
    assert model is None
    assert [item.code for item in diagnostics] == [code]
    assert excerpt in diagnostics[0].span.excerpt(source)


def test_error_recovery():
    """Test that independent errors are all reported in one pass."""
    source = """system s {
  hazard H1 "ok"
  risk R1 kind huge on H1
  constraint SC1 kind control level micro on H1
  event E1 violates
  hazard H2 "ok"
}
"""
    model, diagnostics = parse(source)
    assert model is None
    assert [item.code for item in diagnostics] == ["P004", "P001", "P001"]
    assert [item.span.line for item in diagnostics] == [3, 5, 6]


def test_recovery_skips_broken_loop_body():
    """Test that recovery inside a loop block resumes after its closing brace."""
    source = """system s {
  loop L1 { controller C1; oops; enforces SC1; }
  hazard H1 "after"
  hazard H1 "again"
}
"""
    assert codes(source) == ["P001", "P003"]


def test_recovery_past_stray_closing_brace():
    """Test that a loop missing its opening brace does not end the system early."""
    source = """system s {
  loop L1 controller C1; controls H1; enforces SC1; }
  hazard H1 "a"
  hazard H1 "b"
  risk R1 kind huge on H1
}
"""
    model, diagnostics = parse(source)
    assert model is None
    assert [item.code for item in diagnostics] == ["P001", "P001", "P001", "P003", "P004"]
    assert diagnostics[2].message == "unexpected '}', expected a declaration"
    assert [item.span.line for item in diagnostics[2:]] == [2, 4, 5]


def test_interaction_kind_is_not_a_resync_point():
    """Test that recovery does not restart at an `interaction` constraint kind."""
    source = """system s {
  constraint kind interaction level micro on I1 "x"
  hazard H1 "a"
  hazard H1 "b"
}
"""
    assert codes(source) == ["P001", "P003"]


def test_duplicate_cause_declaration():
    """Test that a second cause declaration for one target is rejected."""
    source = """system s {
  causes R1 <- all(E1)
  causes R1 <- any(E2)
}
"""
    assert codes(source) == ["P003"]


def test_repeated_list_items():
    """Test that ids repeated inside a list are rejected."""
    assert codes("system s { causes R1 <- all(E1, E1) }") == ["P003"]
    assert codes("system s { interaction I1 between H1, H1 }") == ["P003"]


def test_keyword_is_not_an_identifier():
    """Test that a keyword cannot name an element."""
    model, diagnostics = parse("system s { hazard on }")
    assert model is None
    assert diagnostics[0].message == "unexpected 'on', expected identifier"


def test_unknown_enum_value():
    """Test an unknown value of an enumeration."""
    model, diagnostics = parse("system s { controller C1 level mega domain social }")
    assert model is None
    assert diagnostics[0].code == "P004"
    assert diagnostics[0].message == "unknown keyword 'mega'"


def test_byte_order_mark():
    """Test that a byte-order mark is rejected."""
    model, diagnostics = parse("\ufeffsystem s {}")
    assert model is None
    assert [item.code for item in diagnostics] == ["P004"]


def test_trailing_input():
    """Test content after the closing brace."""
    model, diagnostics = parse("system s {} hazard H1")
    assert model is None
    assert diagnostics[0].message == "unexpected 'hazard', expected end of input"


def test_empty_source():
    """Test a source without a system declaration."""
    model, diagnostics = parse("")
    assert model is None
    assert diagnostics[0].message == "unexpected end of input, expected 'system'"


def test_loop_and_recommendation(micro_slice):
    """Test the optional parts of a loop and a recommendation."""
    first, second = micro_slice.loops[:2]
    assert (first.actuator, first.sensor) == ("handling", "inspection")
    assert (second.actuator, second.sensor) == (None, None)
    assert second.enforces == ("SC1.1", "SC1.2", "SC1.4", "SC1.6")
    assert [item.for_controller for item in micro_slice.recommendations] == ["C_law", "C_ruihai"]


def test_declaration_spans(slice_source, micro_slice):
    """Test that element spans cover their declaration."""
    loop = micro_slice.loops[2]
    assert loop.span.excerpt(slice_source) == (
        "loop L3 { controller C_ruihai; controls I3; enforces SC1.14; }"
    )
    assert micro_slice.events[-1].span.excerpt(slice_source) == "event E3.4 violates SC3.4"


def test_parse_is_deterministic(corpus_source):
    """Test that identical source gives identical results."""
    assert parse(corpus_source) == parse(corpus_source)
