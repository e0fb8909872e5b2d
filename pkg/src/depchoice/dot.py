"""Hasse diagrams as Graphviz DOT text and plain JSON."""
from __future__ import annotations

from typing import Collection, Sequence

from .order import CapExceeded, FinitePoset, element_name

DEFAULT_RENDER_CAP = 2000


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    P: FinitePoset,
    names: Sequence[str] | None = None,
    fixed: Collection[int] = (),
    title: str = "hasse",
    cap: int = DEFAULT_RENDER_CAP,
) -> str:
    """Cover relation drawn bottom to top; ``fixed`` nodes are drawn bold and shaded."""
    if P.n > cap:
        raise CapExceeded(f"{P.n} elements exceeds the render cap of {cap}")
    names = list(names) if names is not None else [element_name(x) for x in P.elements]
    fixed = set(fixed)
    lines = [f"digraph {_quote(title)} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for i in range(P.n):
        style = ", style=\"bold,filled\", fillcolor=lightgrey, shape=box" if i in fixed else ""
        lines.append(f"  n{i} [label={_quote(names[i])}{style}];")
    for lo, hi in sorted(P.covers()):
        lines.append(f"  n{lo} -> n{hi} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_json(P: FinitePoset, names: Sequence[str] | None = None, fixed: Collection[int] | None = None) -> dict:
    names = list(names) if names is not None else [element_name(x) for x in P.elements]
    out = {
        "elements": names,
        "covers": [[lo, hi] for lo, hi in sorted(P.covers())],
    }
    if fixed is not None:
        out["fixed"] = sorted(fixed)
    return out
