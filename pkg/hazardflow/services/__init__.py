""" Analysis services over hazard-target system models. """

from .export import emit_graph_json, emit_json, read_json
from .flowgraph import (
    DEFAULT_PATH_CAP,
    FlowGraph,
    build_flow_graph,
    contributors,
    cross_level_map,
    direct_causes,
    enumerate_paths,
    layers,
    propagate,
    root_causes,
    topological_order,
)
from .report import emit_report_markdown
from .risk import classify_state, trace_event
from .validation import check_source, validate
from .visualization import emit_dot_control, emit_dot_flow
