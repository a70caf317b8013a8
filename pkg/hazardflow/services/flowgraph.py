""" Event-flow graph over adverse events and risks, and its queries. """

import logging
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from hazardflow.errors import (
    NotANodeError,
    NotMacroError,
    NotValidatedError,
    PathLimitError,
    UnknownIdError,
)
from hazardflow.schemas.analysis import CrossLevelMap, ValidationReport
from hazardflow.schemas.model import Gate, Model, Tier
from hazardflow.services.lookup import event_tier, resolve
from hazardflow.services.validation import validate
from hazardflow.utils.ids import id_key, sorted_ids

logger = logging.getLogger(__name__)

DEFAULT_PATH_CAP = 10000


@dataclass(frozen=True, eq=False)
class FlowGraph:
    """Immutable event-flow DAG.

    Nodes are event and risk ids carrying ``tier`` and ``label`` attributes;
    an edge ``source -> target`` exists for every source of the target's
    cause declaration.
    """

    model: Model
    dag: nx.DiGraph = field(repr=False)
    gate_of: dict[str, Gate] = field(repr=False)

    def tier(self, node: str) -> Tier:
        """Tier of a node."""
        return self.dag.nodes[node]["tier"]

    def label(self, node: str) -> str:
        """Free text of a node."""
        return self.dag.nodes[node]["label"]

    @property
    def nodes(self) -> list[str]:
        """Node ids in id order."""
        return sorted_ids(self.dag.nodes)

    @property
    def edges(self) -> list[tuple[str, str]]:
        """Edges in (source, target) id order."""
        return sorted(self.dag.edges, key=lambda edge: (id_key(edge[0]), id_key(edge[1])))


def build_flow_graph(model: Model, report: ValidationReport | None = None) -> FlowGraph:
    """Build the event-flow graph of a validated model.

    Args:
    - model (Model): Model
    - report (ValidationReport | None): Validation report of the model, computed when omitted

    Returns:
    - FlowGraph: The graph
    """
    report = report if report is not None else validate(model)
    if not report.validated:
        logger.error("Refusing to build a graph for %s: %d errors", model.name, report.error_count)
        raise NotValidatedError(
            f"model {model.name} has {report.error_count} validation errors"
        )
    dag = nx.DiGraph(name=model.name)
    nodes = [
        (event.id, {"tier": event_tier(model, event), "label": event.text})
        for event in model.events
    ] + [(risk.id, {"tier": Tier.RISK, "label": risk.text}) for risk in model.risks]
    dag.add_nodes_from(sorted(nodes, key=lambda node: id_key(node[0])))
    for decl in model.cause_decls:
        dag.add_edges_from((source, decl.target) for source in decl.sources)
    gate_of = {decl.target: decl.gate for decl in model.cause_decls}
    logger.info(
        "Built flow graph %s: %d nodes, %d edges",
        model.name,
        dag.number_of_nodes(),
        dag.number_of_edges(),
    )
    return FlowGraph(model=model, dag=nx.freeze(dag), gate_of=gate_of)


def _require(graph: FlowGraph, node: str) -> None:
    if node in graph.dag:
        return
    reference = resolve(graph.model, node)
    if reference is None:
        raise UnknownIdError(f"unknown id '{node}'")
    raise NotANodeError(f"'{node}' is a {reference.category.value}, not an event or risk")


def _filter(graph: FlowGraph, nodes: Iterable[str], tiers: Iterable[Tier] | None) -> set[str]:
    if tiers is None:
        return set(nodes)
    allowed = set(tiers)
    return {node for node in nodes if graph.tier(node) in allowed}


def direct_causes(graph: FlowGraph, node: str, tiers: Iterable[Tier] | None = None) -> set[str]:
    """Sources of a node's cause declaration, optionally restricted to some tiers."""
    _require(graph, node)
    return _filter(graph, graph.dag.predecessors(node), tiers)


def contributors(graph: FlowGraph, node: str, tiers: Iterable[Tier] | None = None) -> set[str]:
    """Every node with a directed path to ``node``, excluding the node itself."""
    _require(graph, node)
    return _filter(graph, nx.ancestors(graph.dag, node), tiers)


def root_causes(graph: FlowGraph, node: str, tiers: Iterable[Tier] | None = None) -> set[str]:
    """Contributors that have no causes of their own."""
    _require(graph, node)
    roots = (item for item in nx.ancestors(graph.dag, node) if graph.dag.in_degree(item) == 0)
    return _filter(graph, roots, tiers)


def enumerate_paths(
    graph: FlowGraph, from_id: str, to_id: str, cap: int = DEFAULT_PATH_CAP
) -> list[list[str]]:
    """All simple directed paths between two nodes.

    Args:
    - graph (FlowGraph): Graph
    - from_id (str): First node of every path
    - to_id (str): Last node of every path
    - cap (int): Largest number of paths returned before PathLimitError

    Returns:
    - list[list[str]]: Paths ordered by their id sequences; ``[[from_id]]`` when both ids match
    """
    _require(graph, from_id)
    _require(graph, to_id)
    if from_id == to_id:
        return [[from_id]]
    paths: list[list[str]] = []
    for path in nx.all_simple_paths(graph.dag, from_id, to_id):
        paths.append(path)
        if len(paths) > cap:
            logger.error("Path enumeration %s -> %s exceeded cap %d", from_id, to_id, cap)
            raise PathLimitError(f"more than {cap} paths from {from_id} to {to_id}")
    return sorted(paths, key=lambda path: [id_key(node) for node in path])


def topological_order(graph: FlowGraph) -> list[str]:
    """Causes before effects; ties broken by id."""
    return list(nx.lexicographical_topological_sort(graph.dag, key=id_key))


def layers(graph: FlowGraph) -> list[tuple[Tier, list[str]]]:
    """Nodes grouped by tier, highest tier first, each group in id order."""
    return [
        (tier, [node for node in graph.nodes if graph.tier(node) == tier])
        for tier in sorted(Tier, reverse=True)
    ]


def propagate(graph: FlowGraph, seed: Iterable[str]) -> set[str]:
    """Least fixed point of gated activation from a seed.

    A node is active when seeded, when its gate is All and every direct cause
    is active, or when its gate is Any and some direct cause is active. Nodes
    without a cause declaration become active only through the seed.

    Args:
    - graph (FlowGraph): Graph
    - seed (Iterable[str]): Initially active node ids

    Returns:
    - set[str]: Active node ids
    """
    seeded = set(seed)
    active = set(seeded)
    for node in sorted_ids(seeded):
        _require(graph, node)
    for node in topological_order(graph):
        if node in active or node not in graph.gate_of:
            continue
        causes = [source in active for source in graph.dag.predecessors(node)]
        fired = all(causes) if graph.gate_of[node] == Gate.ALL else any(causes)
        if fired:
            active.add(node)
    logger.debug("Propagated %d seeds to %d active nodes", len(seeded), len(active))
    return active


def cross_level_map(graph: FlowGraph, macro_event: str) -> CrossLevelMap:
    """Direct successors of a macro-tier event, bucketed by tier."""
    _require(graph, macro_event)
    if graph.tier(macro_event) != Tier.MACRO:
        raise NotMacroError(
            f"{macro_event} is a {graph.tier(macro_event).label} node, not a macro event"
        )
    buckets: dict[Tier, list[str]] = {tier: [] for tier in Tier}
    for successor in sorted_ids(graph.dag.successors(macro_event)):
        buckets[graph.tier(successor)].append(successor)
    return CrossLevelMap(
        macro_event=macro_event,
        macro=buckets[Tier.MACRO],
        meso=buckets[Tier.MESO],
        micro=buckets[Tier.MICRO],
        risk=buckets[Tier.RISK],
    )

