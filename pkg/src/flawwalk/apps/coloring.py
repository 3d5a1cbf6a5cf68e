"""Proper vertex coloring with q >= max_degree + 1 colors.

States are arbitrary q-colorings.  There is one flaw per (edge, color)
pair, present when both endpoints carry that color.  Addressing a flaw
recolors the higher-id endpoint with a color currently absent from its
neighborhood, so a step never creates a new monochromatic edge: the
declared causal neighborhoods are empty.
"""

from __future__ import annotations

import math
import struct
from typing import List, Optional, Set, Tuple

from ..conditions import ConditionProfile, FlawClassSummary
from ..problem import Problem
from .graph import SimpleGraph


class ProperColoringProblem(Problem):
    def __init__(self, graph: SimpleGraph, q: int):
        delta = graph.max_degree()
        if q <= delta:
            raise ValueError(f"need q >= max degree + 1 = {delta + 1}, got {q}")
        self.graph = graph
        self.q = q
        self._adj = graph.adjacency
        self._edges = list(graph.edges)
        self._edge_index = {e: i for i, e in enumerate(self._edges)}
        self.flaw_count = len(self._edges) * q
        self.initial_state = (0,) * graph.n
        self.log2_state_space = graph.n * math.log2(q) if graph.n else 0.0

    def edge_color_of(self, flaw: int) -> Tuple[Tuple[int, int], int]:
        return self._edges[flaw // self.q], flaw % self.q

    def flaw_label(self, flaw: int) -> str:
        (u, v), c = self.edge_color_of(flaw)
        return f"edge({u + 1},{v + 1})=color{c + 1}"

    def flaws_present(self, state: Tuple[int, ...]) -> Set[int]:
        out: Set[int] = set()
        for i, (u, v) in enumerate(self._edges):
            if state[u] == state[v]:
                out.add(i * self.q + state[u])
        return out

    def _available_colors(self, v: int, state: Tuple[int, ...]) -> List[int]:
        used = {state[w] for w in self._adj[v]}
        return [c for c in range(self.q) if c not in used]

    def action_count(self, flaw: int, state: Tuple[int, ...]) -> int:
        (u, v), _ = self.edge_color_of(flaw)
        return len(self._available_colors(max(u, v), state))

    def amenability(self, flaw: int) -> int:
        return self.q - self.graph.max_degree()

    def apply_action(self, flaw: int, state: Tuple[int, ...], k: int) -> Tuple[int, ...]:
        (u, v), _ = self.edge_color_of(flaw)
        w = max(u, v)
        colors = self._available_colors(w, state)
        out = list(state)
        out[w] = colors[k]
        return tuple(out)

    def neighborhood(self, flaw: int) -> Set[int]:
        return set()

    def in_neighborhood(self, flaw: int, other: int) -> bool:
        return False

    def condition_profile(self) -> ConditionProfile:
        return ConditionProfile(classes=(
            FlawClassSummary(
                name="edge-color",
                amenability=self.q - self.graph.max_degree(),
                inv_amenability_sum=0.0,
                neighborhood_bound=0,
                clique_sizes=(),
            ),
        ))

    def state_bytes(self, state: Tuple[int, ...]) -> bytes:
        return struct.pack(f"<I{self.graph.n}I", self.graph.n, *state)

    def validate_solution(self, state: Tuple[int, ...]) -> Optional[str]:
        for u, v in self._edges:
            if state[u] == state[v]:
                return f"edge ({u + 1},{v + 1}) is monochromatic"
        return None


def delta_plus_one_instance(graph: SimpleGraph, q: int) -> ProperColoringProblem:
    return ProperColoringProblem(graph, q)
