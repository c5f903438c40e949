"""Generalized line graphs over shared-face dimension bands, and their
deterministic DOT export.

Hyperedges become nodes; an edge joins (h,k) whenever the dimension of their
shared face lies in the requested band.  All hyperedges are drawn, including
ones isolated at the requested level, so successive graphs of one scenario
stay visually comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidBand
from .model import IntersectionMatrix, LineGraph


def generalized_line_graph(m: IntersectionMatrix, p_lo: int, p_hi: int) -> LineGraph:
    """Edge (h,k) iff p_lo <= p_hk <= p_hi (inclusive band)."""
    if p_lo < 0 or p_lo > p_hi:
        raise InvalidBand(f"band {p_lo}:{p_hi} must satisfy 0 <= lo <= hi")
    edges = set()
    n = m.size
    for h in range(n):
        for k in range(h + 1, n):
            if p_lo <= m.dims[h][k] <= p_hi:
                edges.add((m.ids[h], m.ids[k]))
    return LineGraph(m.ids, frozenset(edges), (p_lo, p_hi))


def threshold_line_graph(m: IntersectionMatrix, p_star: int) -> LineGraph:
    """Edge (h,k) iff p_hk >= p_star; the band (p_star, P) graph."""
    if p_star < 0:
        raise InvalidBand(f"minimum dimension {p_star} must be >= 0")
    hi = max(m.max_shared_face, p_star)
    return generalized_line_graph(m, p_star, hi)


@dataclass(frozen=True)
class RenderOptions:
    """Knobs for DOT export; layout is left to the renderer."""

    name: str = "linegraph"
    label: str | None = None


def export_dot(g: LineGraph, style: RenderOptions = RenderOptions()) -> str:
    """Deterministic DOT document: nodes in input order, edges lexicographic,
    band recorded in the graph label.  Same graph in, same bytes out."""
    lo, hi = g.band
    label = style.label if style.label is not None else (
        f"shared-face dimension band {lo}..{hi}"
    )
    lines = [f'graph "{style.name}" {{']
    lines.append(f'  label="{label}";')
    for node in g.nodes:
        lines.append(f'  "{node}";')
    for h, k in g.sorted_edges():
        lines.append(f'  "{h}" -- "{k}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
