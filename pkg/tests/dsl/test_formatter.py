"""Tests for canonical formatting."""

from hazardflow.dsl import format_canonical, parse
from hazardflow.schemas.model import structurally_equal
from tests.conftest import load_model


def test_single_hazard():
    """Test the canonical form of a one-entity model."""
    model = load_model('system s { hazard HS1 "containers" }')
    assert format_canonical(model) == 'system s {\n  hazard HS1 "containers"\n}\n'


def test_canonical_fixture_is_a_fixed_point(slice_source, micro_slice):
    """Test that a file already in canonical form is reproduced byte for byte."""
    assert format_canonical(micro_slice) == slice_source


def test_corpus_round_trip(corpus):
    """Test that parsing the canonical text gives a structurally equal model."""
    text = format_canonical(corpus)
    again = load_model(text)
    assert structurally_equal(again, corpus)
    assert format_canonical(again) == text


def test_declaration_order_is_normalized():
    """Test that declaration order does not change the canonical text."""
    first = load_model(
        """system s {
  event E1.10 violates SC1.10
  hazard H1
  constraint SC1.10 kind control level micro on H1 "ten"
  constraint SC1.2 kind control level micro on H1 "two"
  event E1.2 violates SC1.2
}"""
    )
    second = load_model(
        """system s {
  hazard H1
  constraint SC1.2 kind control level micro on H1 "two"
  constraint SC1.10 kind control level micro on H1 "ten"
  event E1.2 violates SC1.2
  event E1.10 violates SC1.10
}"""
    )
    assert format_canonical(first) == format_canonical(second)
    assert format_canonical(first).splitlines()[1:6] == [
        "  hazard H1",
        '  constraint SC1.2 kind control level micro on H1 "two"',
        '  constraint SC1.10 kind control level micro on H1 "ten"',
        "  event E1.2 violates SC1.2",
        "  event E1.10 violates SC1.10",
    ]


def test_comments_are_dropped():
    """Test that comments do not survive formatting."""
    model = load_model("# header\nsystem s {\n  # inside\n  hazard H1\n}\n")
    assert format_canonical(model) == "system s {\n  hazard H1\n}\n"


def test_escaped_text_round_trip():
    """Test labels holding quotes, backslashes and newlines."""
    model = load_model(r'system s { hazard H1 "a \"quoted\" \\ path\nnext" }')
    assert model.entities[0].label == 'a "quoted" \\ path\nnext'
    text = format_canonical(model)
    assert parse(text)[0].entities[0].label == model.entities[0].label
