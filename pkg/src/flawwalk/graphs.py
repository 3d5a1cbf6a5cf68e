"""Flaw-level graph structures: causality digraph, its undirected
restriction, and responsibility digraphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Set

from .problem import FlawOrder

FlawId = int


@dataclass
class CausalityDigraph:
    """Directed relation on flaws: f -> g when addressing f can make g
    appear (or keep f itself present)."""

    flaw_count: int
    arcs: Dict[FlawId, Set[FlawId]] = field(default_factory=dict)

    def successors(self, f: FlawId) -> Set[FlawId]:
        return self.arcs.get(f, set())

    def add(self, f: FlawId, g: FlawId) -> None:
        self.arcs.setdefault(f, set()).add(g)

    def has_arc(self, f: FlawId, g: FlawId) -> bool:
        return g in self.arcs.get(f, ())

    def arc_list(self) -> list[tuple[FlawId, FlawId]]:
        return [(f, g) for f, gs in self.arcs.items() for g in gs]


@dataclass
class FlawGraphG:
    """Undirected graph with an edge {f, g} exactly when both f -> g and
    g -> f are causality arcs; self-loops are dropped."""

    flaw_count: int
    adj: Dict[FlawId, Set[FlawId]] = field(default_factory=dict)

    def neighbors(self, f: FlawId) -> Set[FlawId]:
        return self.adj.get(f, set())

    def has_edge(self, f: FlawId, g: FlawId) -> bool:
        return g in self.adj.get(f, ())

    def edges(self) -> Set[FrozenSet[FlawId]]:
        return {frozenset((f, g)) for f, gs in self.adj.items() for g in gs}


def build_g(c: CausalityDigraph) -> FlawGraphG:
    """Symmetric intersection of the causality arcs, without self-loops."""
    g = FlawGraphG(c.flaw_count)
    for f, succ in c.arcs.items():
        for t in succ:
            if t != f and c.has_arc(t, f):
                g.adj.setdefault(f, set()).add(t)
                g.adj.setdefault(t, set()).add(f)
    return g


@dataclass
class ResponsibilityDigraph:
    """A rewiring of the causality digraph against a fixed flaw order.

    Must contain every forward arc and self-loop of the causality digraph
    it is declared against; a backward arc may be dropped only if every
    in-neighbor of its source also points at its target.  Validated by
    structure.validate_responsibility.
    """

    arcs: Dict[FlawId, Set[FlawId]]
    base_order: FlawOrder

    def successors(self, f: FlawId) -> Set[FlawId]:
        return self.arcs.get(f, set())

    def has_arc(self, f: FlawId, g: FlawId) -> bool:
        return g in self.arcs.get(f, ())


def responsibility_from_causality(c: CausalityDigraph,
                                  base_order: FlawOrder | None = None) -> ResponsibilityDigraph:
    """The trivial responsibility digraph: the causality digraph itself."""
    return ResponsibilityDigraph(
        arcs={f: set(gs) for f, gs in c.arcs.items()},
        base_order=base_order if base_order is not None else FlawOrder(),
    )
