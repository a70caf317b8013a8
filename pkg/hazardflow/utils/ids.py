"""Identifier helpers."""

import re

_CHUNK = re.compile(r"(\d+)")
_DOT_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
DOT_KEYWORDS = frozenset({"node", "edge", "graph", "digraph", "subgraph", "strict"})


def id_key(identifier: str) -> tuple:
    """Natural sort key for dotted identifiers.

    Splits on "." and on digit runs so that ``E1.2`` sorts before ``E1.10``
    and ``SC2.9`` before ``SC2.31``.

    Args:
    - identifier (str): Element id

    Returns:
    - tuple: Sort key
    """
    key = []
    for segment in identifier.split("."):
        for chunk in _CHUNK.split(segment):
            if not chunk:
                continue
            key.append((0, int(chunk), "") if chunk.isdigit() else (1, 0, chunk))
        key.append((-1, 0, ""))
    return tuple(key)


def sorted_ids(identifiers) -> list[str]:
    """Sort ids with the natural key."""
    return sorted(identifiers, key=id_key)


def gvquote(text: str) -> str:
    """DOT string literal."""
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def dot_name(identifier: str) -> str:
    """DOT node name for an id.

    Plain ids stay bare; dotted ids and DOT keywords (in any case) are quoted,
    so two distinct ids never share a node name.
    """
    if _DOT_ID.fullmatch(identifier) and identifier.lower() not in DOT_KEYWORDS:
        return identifier
    return gvquote(identifier)
