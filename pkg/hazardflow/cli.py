"""Command-line front end: ``python -m hazardflow <command> FILE ...``.

Exit codes: 0 success, 1 Error diagnostics or a failed query, 2 usage error or
unreadable input, 3 an internal limit such as the path cap.
"""

import argparse
import logging
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from typing import Callable, Literal, TextIO

from pydantic import BaseModel, Field, ValidationError

from hazardflow import __version__
from hazardflow.dsl import format_canonical
from hazardflow.errors import AnalysisError, PathLimitError
from hazardflow.schemas.analysis import ALL_TIERS, EmitOptions, Rankdir, ValidationReport
from hazardflow.schemas.model import Model, Tier
from hazardflow.services.export import emit_graph_json, emit_json
from hazardflow.services.flowgraph import (
    DEFAULT_PATH_CAP,
    FlowGraph,
    build_flow_graph,
    contributors,
    cross_level_map,
    direct_causes,
    enumerate_paths,
    propagate,
    root_causes,
)
from hazardflow.services.report import emit_report_markdown
from hazardflow.services.risk import classify_state, trace_event
from hazardflow.services.validation import check_source
from hazardflow.services.visualization import emit_dot_control, emit_dot_flow
from hazardflow.settings import LOG_FORMAT
from hazardflow.utils.ids import sorted_ids

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERRORS = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3

_HANDLER_NAME = "hazardflow-cli"
_TIER_NAMES = {tier.name.lower(): tier for tier in Tier}


class CliConfig(BaseModel):
    """One invocation, built from argv only."""

    command: str
    path: Path
    output: Path | None = None
    format: Literal["dot", "json"] = "dot"
    tiers: frozenset[Tier] = ALL_TIERS
    highlight: frozenset[str] = frozenset()
    rankdir: Rankdir = Rankdir.TOP_TO_BOTTOM
    node: str | None = None
    transitive: bool = False
    roots: bool = False
    from_id: str | None = None
    to_id: str | None = None
    cap: int = Field(default=DEFAULT_PATH_CAP, gt=0)
    macro: str | None = None
    event: str | None = None
    seed: list[str] = []
    violated: list[str] = []
    json_output: bool = False
    verbose: bool = False

    class Config:
        """Config."""

        frozen = True
        extra = "ignore"


def _id_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _tier_list(text: str) -> frozenset[Tier]:
    tiers = set()
    for name in _id_list(text):
        if name.lower() not in _TIER_NAMES:
            raise argparse.ArgumentTypeError(
                f"unknown tier '{name}' (choose from {', '.join(_TIER_NAMES)})"
            )
        tiers.add(_TIER_NAMES[name.lower()])
    if not tiers:
        raise argparse.ArgumentTypeError("at least one tier is required")
    return frozenset(tiers)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per analysis."""
    parser = argparse.ArgumentParser(
        prog="hazardflow",
        description="Hazard-target system models: check, analyze and report.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text, description=help_text)
        sub.add_argument("path", metavar="FILE", help="`.hts` model")
        return sub

    check = command("check", "parse and validate, print diagnostics")
    check.add_argument("--json", dest="json_output", action="store_true", help="JSON report")

    graph = command("graph", "event-flow graph as DOT or JSON")
    graph.add_argument("--format", choices=("dot", "json"), default="dot")
    graph.add_argument("--tiers", type=_tier_list, default=ALL_TIERS, help="e.g. micro,risk")
    graph.add_argument("--highlight", type=_id_list, default=[], help="ids to fill")
    graph.add_argument(
        "--rankdir", type=Rankdir, default=Rankdir.TOP_TO_BOTTOM, metavar="TB|LR"
    )
    graph.add_argument("-o", "--output", type=Path)

    paths = command("paths", "simple cause paths between two nodes")
    paths.add_argument("--from", dest="from_id", required=True)
    paths.add_argument("--to", dest="to_id", required=True)
    paths.add_argument("--cap", type=int, default=DEFAULT_PATH_CAP)

    causes = command("causes", "causes of a node")
    causes.add_argument("--node", required=True)
    scope = causes.add_mutually_exclusive_group()
    scope.add_argument("--transitive", action="store_true", help="all contributors")
    scope.add_argument("--roots", action="store_true", help="root causes only")

    cross = command("map", "cross-level map of a macro event")
    cross.add_argument("--macro", required=True)

    classify = command("classify", "risk state for a set of violated constraints")
    classify.add_argument("--violated", type=_id_list, default=[])

    spread = command("propagate", "gated activation from seed nodes")
    spread.add_argument("--seed", type=_id_list, default=[])

    report = command("report", "markdown accident report")
    report.add_argument("-o", "--output", type=Path)

    command("fmt", "print the canonical form of a model")

    trace = command("trace", "constraint, loops and controllers behind an event")
    trace.add_argument("--event", required=True)

    control = command("control", "safety control structure as DOT")
    control.add_argument("-o", "--output", type=Path)

    export = command("json", "model export as JSON")
    export.add_argument("-o", "--output", type=Path)
    return parser


def configure_logging(verbose: bool, stream: TextIO) -> None:
    """Send package logs to ``stream``; standard output stays machine-clean."""
    package_logger = logging.getLogger("hazardflow")
    for handler in list(package_logger.handlers):
        if handler.get_name() == _HANDLER_NAME:
            package_logger.removeHandler(handler)
    handler = logging.StreamHandler(stream)
    handler.set_name(_HANDLER_NAME)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    package_logger.addHandler(handler)
    package_logger.setLevel(logging.INFO if verbose else logging.WARNING)


class _Session:
    """A parsed and validated input plus the streams of one invocation."""

    def __init__(
        self,
        config: CliConfig,
        model: Model | None,
        report: ValidationReport,
        out: TextIO,
        err: TextIO,
    ):
        self.config = config
        self.model = model
        self.report = report
        self.out = out
        self.err = err

    def print_diagnostics(self, stream: TextIO) -> None:
        for diagnostic in self.report.diagnostics:
            print(diagnostic.render(str(self.config.path)), file=stream)
        print(
            f"{self.report.error_count} errors, {self.report.warning_count} warnings",
            file=stream,
        )

    def emit(self, text: str) -> None:
        if self.config.output is None:
            self.out.write(text)
            return
        self.config.output.write_text(text, encoding="utf-8")
        logger.info("Wrote %s", self.config.output)

    def graph(self) -> FlowGraph:
        return build_flow_graph(self.model, self.report)


def _check(session: _Session) -> int:
    if session.config.json_output:
        session.out.write(session.report.model_dump_json(indent=2) + "\n")
    else:
        session.print_diagnostics(session.out)
    return EXIT_ERRORS if session.report.error_count else EXIT_OK


def _graph(session: _Session) -> int:
    config = session.config
    options = EmitOptions(tiers=config.tiers, highlight=config.highlight, rankdir=config.rankdir)
    graph = session.graph()
    if config.format == "json":
        session.emit(emit_graph_json(graph, options))
    else:
        session.emit(emit_dot_flow(graph, options))
    return EXIT_OK


def _paths(session: _Session) -> int:
    config = session.config
    for path in enumerate_paths(session.graph(), config.from_id, config.to_id, cap=config.cap):
        print(" -> ".join(path), file=session.out)
    return EXIT_OK


def _causes(session: _Session) -> int:
    config = session.config
    graph = session.graph()
    if config.transitive:
        found = contributors(graph, config.node)
    elif config.roots:
        found = root_causes(graph, config.node)
    else:
        found = direct_causes(graph, config.node)
    for node in sorted_ids(found):
        print(node, file=session.out)
    return EXIT_OK


def _map(session: _Session) -> int:
    mapping = cross_level_map(session.graph(), session.config.macro)
    print(f"Meso: {', '.join(mapping.meso)}", file=session.out)
    print(f"Micro: {', '.join(mapping.micro)}", file=session.out)
    if mapping.macro:
        print(f"Macro: {', '.join(mapping.macro)}", file=session.out)
    if mapping.risk:
        print(f"Risk: {', '.join(mapping.risk)}", file=session.out)
    return EXIT_OK


def _classify(session: _Session) -> int:
    state = classify_state(session.model, session.config.violated)
    for hazard in sorted_ids(state.per_hazard):
        line = f"{hazard}: {state.per_hazard[hazard].label}"
        if hazard in state.escalated_by:
            line += f" (escalated by {', '.join(state.escalated_by[hazard])})"
        print(line, file=session.out)
    print(f"Overall: {state.overall.label}", file=session.out)
    return EXIT_OK


def _propagate(session: _Session) -> int:
    for node in sorted_ids(propagate(session.graph(), session.config.seed)):
        print(node, file=session.out)
    return EXIT_OK


def _report(session: _Session) -> int:
    session.emit(emit_report_markdown(session.model, session.graph()))
    return EXIT_OK


def _fmt(session: _Session) -> int:
    session.emit(format_canonical(session.model))
    return EXIT_OK


def _trace(session: _Session) -> int:
    trace = trace_event(session.model, session.config.event)
    out = session.out
    print(f"Event: {trace.event.id} {trace.event.text}".rstrip(), file=out)
    print(
        f"Constraint: {trace.constraint.id} ({trace.constraint.kind.value}, "
        f"{trace.constraint.tier.label}) {trace.constraint.text}",
        file=out,
    )
    if not trace.loops:
        print("Loops: none", file=out)
    for loop in trace.loops:
        print(f"Loop: {loop.id} controls {loop.controls}", file=out)
    for controller in trace.controllers:
        print(
            f"Controller: {controller.id} ({controller.tier.label}, {controller.domain.value}) "
            f"{controller.label}".rstrip(),
            file=out,
        )
    return EXIT_OK


def _control(session: _Session) -> int:
    session.emit(emit_dot_control(session.model))
    return EXIT_OK


def _json(session: _Session) -> int:
    session.emit(emit_json(session.model, session.report.diagnostics))
    return EXIT_OK


_COMMANDS: dict[str, Callable[[_Session], int]] = {
    "check": _check,
    "graph": _graph,
    "paths": _paths,
    "causes": _causes,
    "map": _map,
    "classify": _classify,
    "propagate": _propagate,
    "report": _report,
    "fmt": _fmt,
    "trace": _trace,
    "control": _control,
    "json": _json,
}
# commands that only need a parsed model, not a validated one
_PARSE_ONLY = {"check", "fmt", "json"}


def run(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    """Run one CLI invocation.

    Args:
    - argv (list[str] | None): Arguments without the program name; ``sys.argv[1:]`` when None
    - out (TextIO | None): Standard output
    - err (TextIO | None): Error stream

    Returns:
    - int: Exit code
    """
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        # argparse prints usage, help and version on the process streams
        with redirect_stdout(out), redirect_stderr(err):
            namespace = build_parser().parse_args(argv)
    except SystemExit as exit_:
        return EXIT_OK if exit_.code in (0, None) else EXIT_USAGE
    try:
        config = CliConfig.model_validate(vars(namespace))
    except ValidationError as error:
        print(f"error: {error}", file=err)
        return EXIT_USAGE
    configure_logging(config.verbose, err)

    try:
        source = config.path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as error:
        print(f"error: cannot read {config.path}: {error}", file=err)
        return EXIT_USAGE

    model, report = check_source(source)
    session = _Session(config, model, report, out, err)
    if config.command != "check":
        if model is None or (report.error_count and config.command not in _PARSE_ONLY):
            session.print_diagnostics(err)
            return EXIT_ERRORS
    try:
        return _COMMANDS[config.command](session)
    except PathLimitError as error:
        print(str(error), file=err)
        return EXIT_LIMIT
    except AnalysisError as error:
        print(str(error), file=err)
        return EXIT_ERRORS
    except OSError as error:
        print(f"error: cannot write {config.output}: {error}", file=err)
        return EXIT_USAGE


def main() -> None:
    """Console entry point."""
    sys.exit(run())
