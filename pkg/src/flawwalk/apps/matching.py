"""Perfect matchings of a complete edge-colored graph with all-distinct
edge colors.

States are perfect matchings of K_{2n}, stored as partner arrays.  A flaw
is an unordered pair of vertex-disjoint same-colored edges; it is present
when the matching contains both.  Addressing a flaw rewires its four
vertices with two drawn auxiliary matching edges, giving exactly
(2n-4)*(2n-6) distinct successor matchings.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from ..conditions import ConditionProfile, FlawClassSummary
from ..problem import Problem

Edge = Tuple[int, int]  # sorted vertex pair


@dataclass(frozen=True)
class EdgeColoredComplete:
    """Complete graph on an even vertex count with a total edge coloring."""

    vertices: int
    color: Mapping[Edge, int]

    def __post_init__(self):
        if self.vertices % 2:
            raise ValueError("vertex count must be even")
        want = self.vertices * (self.vertices - 1) // 2
        if len(self.color) != want:
            raise ValueError(
                f"coloring must cover all {want} edges, got {len(self.color)}")
        for (u, v) in self.color:
            if not (0 <= u < v < self.vertices):
                raise ValueError(f"bad edge ({u}, {v})")

    def edge_color(self, u: int, v: int) -> int:
        return self.color[(min(u, v), max(u, v))]

    def max_multiplicity(self) -> int:
        counts: Dict[int, int] = {}
        for c in self.color.values():
            counts[c] = counts.get(c, 0) + 1
        return max(counts.values(), default=0)


def _double_factorial_log2(m: int) -> float:
    return sum(math.log2(k) for k in range(1, m + 1, 2))


class RainbowMatchingProblem(Problem):
    def __init__(self, graph: EdgeColoredComplete):
        self.graph = graph
        self.vertices = graph.vertices

        by_color: Dict[int, List[Edge]] = {}
        for e, c in graph.color.items():
            by_color.setdefault(c, []).append(e)
        pairs: List[Tuple[Edge, Edge]] = []
        for c in sorted(by_color):
            edges = sorted(by_color[c])
            for a in range(len(edges)):
                for b in range(a + 1, len(edges)):
                    e1, e2 = edges[a], edges[b]
                    if not (set(e1) & set(e2)):
                        pairs.append((e1, e2))
        if self.vertices < 8 and pairs:
            raise ValueError(
                "need at least 8 vertices for the rewiring actions when "
                "same-colored disjoint edge pairs exist")
        self._pairs = pairs
        self._pair_index = {p: i for i, p in enumerate(pairs)}
        self.flaw_count = len(pairs)
        self.q = graph.max_multiplicity()

        n2 = self.vertices
        self.initial_state = tuple(v ^ 1 for v in range(n2))  # (0,1),(2,3),...
        self.log2_state_space = _double_factorial_log2(n2 - 1)

    # flaw id <-> edge pair

    def edges_of(self, flaw: int) -> Tuple[Edge, Edge]:
        return self._pairs[flaw]

    def flaw_of_edges(self, e1: Edge, e2: Edge) -> int:
        key = (min(e1, e2), max(e1, e2))
        return self._pair_index[key]

    def flaw_label(self, flaw: int) -> str:
        (a, b), (c, d) = self._pairs[flaw]
        return f"edges({a + 1},{b + 1})~({c + 1},{d + 1})"

    def flaw_vertices(self, flaw: int) -> Tuple[int, int, int, int]:
        """The four flaw vertices ordered v1 > v2, v3 > v4, v1 > v3."""
        e1, e2 = self._pairs[flaw]
        first = e1 if max(e1) > max(e2) else e2
        second = e2 if first is e1 else e1
        v1, v2 = max(first), min(first)
        v3, v4 = max(second), min(second)
        return v1, v2, v3, v4

    # the problem interface

    def flaws_present(self, state: Tuple[int, ...]) -> Set[int]:
        by_color: Dict[int, List[Edge]] = {}
        for u in range(0, self.vertices):
            v = state[u]
            if u < v:
                by_color.setdefault(self.graph.edge_color(u, v), []).append((u, v))
        out: Set[int] = set()
        for edges in by_color.values():
            if len(edges) < 2:
                continue
            edges.sort()
            for a in range(len(edges)):
                for b in range(a + 1, len(edges)):
                    out.add(self._pair_index[(edges[a], edges[b])])
        return out

    def action_count(self, flaw: int, state) -> int:
        m = self.vertices
        return (m - 4) * (m - 6)

    def amenability(self, flaw: int) -> int:
        m = self.vertices
        return (m - 4) * (m - 6)

    def apply_action(self, flaw: int, state: Tuple[int, ...], k: int) -> Tuple[int, ...]:
        m = self.vertices
        if not (0 <= k < (m - 4) * (m - 6)):
            raise IndexError(f"action index {k} out of range")
        v1, v2, v3, v4 = self.flaw_vertices(flaw)
        flawset = {v1, v2, v3, v4}
        avail1 = [u for u in range(m) if u not in flawset]
        u1 = avail1[k // (m - 6)]
        u2 = state[u1]
        avail2 = [u for u in avail1 if u != u1 and u != u2]
        u3 = avail2[k % (m - 6)]
        u4 = state[u3]
        partner = list(state)
        for a, b in ((v1, u1), (v2, u2), (v3, u3), (v4, u4)):
            partner[a] = b
            partner[b] = a
        return tuple(partner)

    def _touches_exactly_one(self, edge: Edge, flawset: Set[int]) -> bool:
        return (edge[0] in flawset) != (edge[1] in flawset)

    def neighborhood(self, flaw: int) -> Set[int]:
        v1, v2, v3, v4 = self.flaw_vertices(flaw)
        flawset = {v1, v2, v3, v4}
        out: Set[int] = set()
        for g, (e1, e2) in enumerate(self._pairs):
            if (self._touches_exactly_one(e1, flawset)
                    or self._touches_exactly_one(e2, flawset)):
                out.add(g)
        return out

    def in_neighborhood(self, flaw: int, other: int) -> bool:
        v1, v2, v3, v4 = self.flaw_vertices(flaw)
        flawset = {v1, v2, v3, v4}
        e1, e2 = self._pairs[other]
        return (self._touches_exactly_one(e1, flawset)
                or self._touches_exactly_one(e2, flawset))

    def condition_profile(self) -> ConditionProfile:
        m, q = self.vertices, self.q
        a = (m - 4) * (m - 6)
        nbr = 4 * (m - 4) * max(q - 1, 0)
        return ConditionProfile(classes=(
            FlawClassSummary(
                name="edge-pair",
                amenability=a,
                inv_amenability_sum=nbr / a,
                neighborhood_bound=nbr,
                clique_sizes=None,
            ),
        ))

    def state_bytes(self, state: Tuple[int, ...]) -> bytes:
        return struct.pack(f"<I{self.vertices}I", self.vertices, *state)

    def validate_solution(self, state: Tuple[int, ...]) -> Optional[str]:
        m = self.vertices
        if len(state) != m:
            return "wrong partner array length"
        for u in range(m):
            v = state[u]
            if not (0 <= v < m) or v == u or state[v] != u:
                return f"not a perfect matching at vertex {u + 1}"
        seen: Dict[int, Edge] = {}
        for u in range(m):
            v = state[u]
            if u < v:
                c = self.graph.edge_color(u, v)
                if c in seen:
                    fu, fv = seen[c]
                    return (f"edges ({fu + 1},{fv + 1}) and ({u + 1},{v + 1}) "
                            f"share color {c}")
                seen[c] = (u, v)
        return None


def rainbow_matching_instance(graph: EdgeColoredComplete) -> RainbowMatchingProblem:
    return RainbowMatchingProblem(graph)
