"""Recursive-descent parser for the `.hts` modeling language."""

import logging

from hazardflow.dsl.lexer import LexProblem, Token, TokenKind, tokenize, unquote
from hazardflow.schemas.diagnostics import Diagnostic, SourceSpan
from hazardflow.schemas.model import (
    AdverseEvent,
    CauseDecl,
    ConstraintKind,
    ControlLoop,
    Controller,
    Domain,
    Entity,
    Gate,
    Interaction,
    Model,
    Recommendation,
    RecommendationCategory,
    Risk,
    SafetyConstraint,
    Severity,
    SystemRole,
    Tier,
)

logger = logging.getLogger(__name__)

ITEM_KEYWORDS = frozenset(
    {
        "hazard",
        "target",
        "interaction",
        "risk",
        "constraint",
        "event",
        "causes",
        "controller",
        "loop",
        "recommend",
    }
)

ROLES = {"hazard": SystemRole.HAZARD, "target": SystemRole.TARGET}
SEVERITIES = {
    "near_miss": Severity.NEAR_MISS,
    "incident": Severity.INCIDENT,
    "accident": Severity.ACCIDENT,
    "major_accident": Severity.MAJOR_ACCIDENT,
}
CONSTRAINT_KINDS = {
    "subsystem": ConstraintKind.SUBSYSTEM,
    "interaction": ConstraintKind.INTERACTION,
    "control": ConstraintKind.CONTROL,
}
LEVELS = {"micro": Tier.MICRO, "meso": Tier.MESO, "macro": Tier.MACRO}
GATES = {"all": Gate.ALL, "any": Gate.ANY}
DOMAINS = {"social": Domain.SOCIAL, "technical": Domain.TECHNICAL}
CATEGORIES = {
    "legislative": RecommendationCategory.LEGISLATIVE,
    "government": RecommendationCategory.GOVERNMENT,
    "corporate": RecommendationCategory.CORPORATE,
    "intermediary": RecommendationCategory.INTERMEDIARY,
    "social_media": RecommendationCategory.SOCIAL_MEDIA,
    "technical": RecommendationCategory.TECHNICAL,
}

_LEX_CODES = {
    LexProblem.UNTERMINATED_STRING: "P002",
    LexProblem.BYTE_ORDER_MARK: "P004",
    LexProblem.UNKNOWN_CHARACTER: "P001",
}


class _Abort(Exception):
    """Unwinds the current declaration after its diagnostic was recorded."""


def _describe(token: Token) -> str:
    if token.kind == TokenKind.EOF:
        return "end of input"
    if token.kind == TokenKind.STRING:
        return "string"
    return f"'{token.text}'"


def _join(start: SourceSpan, end: SourceSpan) -> SourceSpan:
    return SourceSpan(
        byte_start=start.byte_start,
        byte_end=end.byte_end,
        line=start.line,
        column=start.column,
    )


class Parser:
    """Parses one source text into a Model and diagnostics.

    Errors inside a declaration are recorded and parsing resumes at the next
    declaration keyword, so one pass reports every independent error.
    """

    def __init__(self, source: str):
        self.source = source
        self.tokens = [
            token for token in tokenize(source) if token.kind != TokenKind.COMMENT
        ]
        self.pos = 0
        self.depth = 0
        self.stopped_at_brace = False
        self.diagnostics: list[Diagnostic] = []
        self.declared: dict[str, SourceSpan] = {}
        self.caused: set[str] = set()
        self.items: dict[str, list] = {
            "entities": [],
            "interactions": [],
            "risks": [],
            "constraints": [],
            "events": [],
            "cause_decls": [],
            "controllers": [],
            "loops": [],
            "recommendations": [],
        }

    # --- token helpers

    @property
    def current(self) -> Token:
        """Token under the cursor."""
        return self.tokens[self.pos]

    def advance(self) -> Token:
        """Consume the current token."""
        token = self.current
        if token.kind != TokenKind.EOF:
            self.pos += 1
        return token

    def fail(self, expected: str) -> None:
        """Record an unexpected-token diagnostic and abort the declaration."""
        token = self.current
        if token.kind != TokenKind.ERROR:
            # error tokens were reported when the source was scanned
            self.diagnostics.append(
                Diagnostic.of("P001", token.span, found=_describe(token), expected=expected)
            )
        raise _Abort()

    def expect_word(self, *words: str) -> Token:
        """Consume a keyword spelled as one of ``words``."""
        if not self.current.is_word(*words):
            self.fail(" or ".join(f"'{word}'" for word in words))
        return self.advance()

    def expect_punct(self, text: str) -> Token:
        """Consume a punctuation token."""
        if not self.current.is_punct(text):
            self.fail(f"'{text}'")
        token = self.advance()
        if text == "{":
            self.depth += 1
        elif text == "}":
            self.depth -= 1
        return token

    def expect_ident(self) -> Token:
        """Consume an identifier."""
        if self.current.kind != TokenKind.IDENT:
            self.fail("identifier")
        return self.advance()

    def expect_string(self) -> Token:
        """Consume a string literal."""
        if self.current.kind != TokenKind.STRING:
            self.fail("string")
        return self.advance()

    def optional_string(self) -> str:
        """Consume a string literal if present."""
        if self.current.kind == TokenKind.STRING:
            return unquote(self.advance().text)
        if self.current.kind == TokenKind.ERROR:
            self.fail("string")
        return ""

    def expect_value(self, table: dict, expected: str):
        """Consume a word naming a member of an enumeration table."""
        token = self.current
        if token.kind not in (TokenKind.KEYWORD, TokenKind.IDENT):
            self.fail(expected)
        if token.text not in table:
            self.diagnostics.append(Diagnostic.of("P004", token.span, word=token.text))
            raise _Abort()
        self.advance()
        return table[token.text]

    def ident_list(self, minimum: int = 1) -> list[Token]:
        """``IDENT ("," IDENT)*`` with at least ``minimum`` items; repeats are P003."""
        items = [self.expect_ident()]
        while self.current.is_punct(",") or len(items) < minimum:
            self.expect_punct(",")
            items.append(self.expect_ident())
        self.report_repeats(items)
        return items

    def report_repeats(self, tokens: list[Token]) -> None:
        """Report ids repeated within one list."""
        seen: set[str] = set()
        for token in tokens:
            if token.text in seen:
                self.diagnostics.append(Diagnostic.of("P003", token.span, ident=token.text))
            seen.add(token.text)

    def declare(self, token: Token) -> None:
        """Register a declared id, reporting duplicates as P003."""
        if token.text in self.declared:
            self.diagnostics.append(Diagnostic.of("P003", token.span, ident=token.text))
        else:
            self.declared[token.text] = token.span

    def span_from(self, start: Token) -> SourceSpan:
        """Span from ``start`` to the last consumed token."""
        return _join(start.span, self.tokens[max(self.pos - 1, 0)].span)

    # --- grammar

    def parse(self) -> Model | None:
        """Parse the whole source.

        Returns:
        - Model | None: The model, or None when any Error diagnostic was recorded
        """
        for token in self.tokens:
            if token.kind == TokenKind.ERROR:
                code = _LEX_CODES[token.problem]
                if code == "P001":
                    diagnostic = Diagnostic.of(
                        code, token.span, found=f"character {token.text!r}", expected="a token"
                    )
                elif code == "P004":
                    diagnostic = Diagnostic.of(code, token.span, word="\\ufeff (byte-order mark)")
                else:
                    diagnostic = Diagnostic.of(code, token.span)
                self.diagnostics.append(diagnostic)

        # a leading byte-order mark is reported above and otherwise ignored
        if self.current.problem == LexProblem.BYTE_ORDER_MARK:
            self.advance()

        name = None
        try:
            self.expect_word("system")
            name = self.expect_ident().text
            self.expect_punct("{")
        except _Abort:
            return self.finish(None)

        while self.current.kind != TokenKind.EOF:
            if self.current.is_punct("}"):
                # a brace reached by recovery closes the system only when nothing follows
                if not self.stopped_at_brace or self.tokens[self.pos + 1].kind == TokenKind.EOF:
                    break
                token = self.advance()
                self.diagnostics.append(
                    Diagnostic.of("P001", token.span, found="'}'", expected="a declaration")
                )
                continue
            start = self.pos
            self.stopped_at_brace = False
            try:
                self.item()
            except _Abort:
                self.recover(start)
        try:
            self.expect_punct("}")
            if self.current.kind != TokenKind.EOF:
                self.fail("end of input")
        except _Abort:
            pass
        return self.finish(name)

    def recover(self, start: int) -> None:
        """Skip to the next declaration boundary at the system's brace depth."""
        if self.pos == start and self.advance().is_punct("{"):
            self.depth += 1
        while self.current.kind != TokenKind.EOF:
            token = self.current
            if self.depth == 1 and self.at_item_start():
                return
            if token.is_punct("{"):
                self.depth += 1
            elif token.is_punct("}"):
                if self.depth <= 1:
                    self.stopped_at_brace = True
                    return
                self.depth -= 1
            self.advance()

    def at_item_start(self) -> bool:
        """Whether the current token opens a declaration.

        ``interaction`` is also a constraint kind; after ``kind`` it is a value.
        """
        token = self.current
        if token.kind != TokenKind.KEYWORD or token.text not in ITEM_KEYWORDS:
            return False
        return not (self.pos and self.tokens[self.pos - 1].is_word("kind"))

    def finish(self, name: str | None) -> Model | None:
        """Build the model when no Error diagnostic was recorded."""
        self.diagnostics.sort(key=lambda item: (item.span.byte_start, item.code))
        if name is None or any(item.is_error for item in self.diagnostics):
            logger.info("Parse failed with %d diagnostics", len(self.diagnostics))
            return None
        model = Model(name=name, **self.items)
        logger.info(
            "Parsed system %s: %d declarations", name, sum(map(len, self.items.values()))
        )
        return model

    def item(self) -> None:
        """Dispatch one declaration."""
        token = self.current
        if token.kind == TokenKind.KEYWORD and token.text in ITEM_KEYWORDS:
            getattr(self, f"item_{token.text}")()
            return
        if token.kind in (TokenKind.KEYWORD, TokenKind.IDENT):
            self.diagnostics.append(Diagnostic.of("P004", token.span, word=token.text))
            raise _Abort()
        self.fail("a declaration")

    def item_hazard(self) -> None:
        """``("hazard" | "target") IDENT STRING? ("part_of" IDENT)? ("outside" IDENT)?``"""
        start = self.current
        role = ROLES[self.advance().text]
        ident = self.expect_ident()
        label = self.optional_string()
        parent = outside = None
        if self.current.is_word("part_of"):
            self.advance()
            parent = self.expect_ident().text
        if self.current.is_word("outside"):
            self.advance()
            outside = self.expect_ident().text
        self.declare(ident)
        self.items["entities"].append(
            Entity(
                id=ident.text,
                role=role,
                label=label,
                parent=parent,
                outside=outside,
                span=self.span_from(start),
            )
        )

    item_target = item_hazard

    def item_interaction(self) -> None:
        """``"interaction" IDENT "between" IDENT ("," IDENT)+ STRING?``"""
        start = self.advance()
        ident = self.expect_ident()
        self.expect_word("between")
        participants = self.ident_list(minimum=2)
        label = self.optional_string()
        self.declare(ident)
        if len({token.text for token in participants}) == len(participants):
            self.items["interactions"].append(
                Interaction(
                    id=ident.text,
                    participants=tuple(token.text for token in participants),
                    label=label,
                    span=self.span_from(start),
                )
            )

    def item_risk(self) -> None:
        """``"risk" IDENT "kind" SEVERITY "on" IDENT STRING?``"""
        start = self.advance()
        ident = self.expect_ident()
        self.expect_word("kind")
        severity = self.expect_value(SEVERITIES, "a risk kind")
        self.expect_word("on")
        subject = self.expect_ident().text
        text = self.optional_string()
        self.declare(ident)
        self.items["risks"].append(
            Risk(
                id=ident.text,
                severity=severity,
                subject=subject,
                text=text,
                span=self.span_from(start),
            )
        )

    def item_constraint(self) -> None:
        """``"constraint" IDENT "kind" KIND "level" LEVEL "on" IDENT STRING``"""
        start = self.advance()
        ident = self.expect_ident()
        self.expect_word("kind")
        kind = self.expect_value(CONSTRAINT_KINDS, "a constraint kind")
        self.expect_word("level")
        tier = self.expect_value(LEVELS, "a level")
        self.expect_word("on")
        subject = self.expect_ident().text
        text = unquote(self.expect_string().text)
        self.declare(ident)
        self.items["constraints"].append(
            SafetyConstraint(
                id=ident.text,
                kind=kind,
                tier=tier,
                subject=subject,
                text=text,
                span=self.span_from(start),
            )
        )

    def item_event(self) -> None:
        """``"event" IDENT "violates" IDENT STRING?``"""
        start = self.advance()
        ident = self.expect_ident()
        self.expect_word("violates")
        violates = self.expect_ident().text
        text = self.optional_string()
        self.declare(ident)
        self.items["events"].append(
            AdverseEvent(
                id=ident.text, violates=violates, text=text, span=self.span_from(start)
            )
        )

    def item_causes(self) -> None:
        """``"causes" IDENT "<-" ("all" | "any") "(" IDENT ("," IDENT)* ")"``"""
        start = self.advance()
        target = self.expect_ident()
        if self.current.kind != TokenKind.ARROW:
            self.fail("'<-'")
        self.advance()
        gate = self.expect_value(GATES, "'all' or 'any'")
        self.expect_punct("(")
        sources = self.ident_list()
        self.expect_punct(")")
        if target.text in self.caused:
            self.diagnostics.append(Diagnostic.of("P003", target.span, ident=target.text))
            return
        self.caused.add(target.text)
        if len({token.text for token in sources}) == len(sources):
            self.items["cause_decls"].append(
                CauseDecl(
                    target=target.text,
                    gate=gate,
                    sources=tuple(token.text for token in sources),
                    span=self.span_from(start),
                )
            )

    def item_controller(self) -> None:
        """``"controller" IDENT "level" LEVEL "domain" DOMAIN STRING?``"""
        start = self.advance()
        ident = self.expect_ident()
        self.expect_word("level")
        tier = self.expect_value(LEVELS, "a level")
        self.expect_word("domain")
        domain = self.expect_value(DOMAINS, "a domain")
        label = self.optional_string()
        self.declare(ident)
        self.items["controllers"].append(
            Controller(
                id=ident.text,
                tier=tier,
                domain=domain,
                label=label,
                span=self.span_from(start),
            )
        )

    def item_loop(self) -> None:
        """``"loop" IDENT "{" controller; controls; actuator?; sensor?; enforces ";"? "}"``"""
        start = self.advance()
        ident = self.expect_ident()
        self.expect_punct("{")
        self.expect_word("controller")
        controller = self.expect_ident().text
        self.expect_punct(";")
        self.expect_word("controls")
        controls = self.expect_ident().text
        self.expect_punct(";")
        actuator = sensor = None
        if self.current.is_word("actuator"):
            self.advance()
            actuator = unquote(self.expect_string().text)
            self.expect_punct(";")
        if self.current.is_word("sensor"):
            self.advance()
            sensor = unquote(self.expect_string().text)
            self.expect_punct(";")
        self.expect_word("enforces")
        enforces = self.ident_list()
        if self.current.is_punct(";"):
            self.advance()
        self.expect_punct("}")
        self.declare(ident)
        if len({token.text for token in enforces}) == len(enforces):
            self.items["loops"].append(
                ControlLoop(
                    id=ident.text,
                    controller=controller,
                    controls=controls,
                    actuator=actuator,
                    sensor=sensor,
                    enforces=tuple(token.text for token in enforces),
                    span=self.span_from(start),
                )
            )

    def item_recommend(self) -> None:
        """``"recommend" "for" IDENT "category" CATEGORY STRING``"""
        start = self.advance()
        self.expect_word("for")
        controller = self.expect_ident().text
        self.expect_word("category")
        category = self.expect_value(CATEGORIES, "a recommendation category")
        text = unquote(self.expect_string().text)
        self.items["recommendations"].append(
            Recommendation(
                for_controller=controller,
                text=text,
                category=category,
                span=self.span_from(start),
            )
        )


def parse(source: str) -> tuple[Model | None, list[Diagnostic]]:
    """Parse `.hts` source.

    Args:
    - source (str): Source text

    Returns:
    - tuple[Model | None, list[Diagnostic]]: The model (None on any Error) and
      the diagnostics ordered by position
    """
    parser = Parser(source)
    model = parser.parse()
    return model, parser.diagnostics
