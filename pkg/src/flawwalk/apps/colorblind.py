"""Edge 6-colorings whose sorted per-vertex color counts separate all
neighbors.

The palette of a vertex is its 6-vector of incident color counts sorted
non-decreasingly.  A coloring is a solution when every edge has endpoints
with different palettes; endpoints of unequal degree always do, so only
equal-degree edges generate flaws.

Each equal-degree edge (u, v), u < v, owns a block of flaw ids.  Within
the block, a present state is classified in two levels: by the coloring of
u's other incident edges (the class), then by the full coloring of v's
incident edges (the subclass).  The flaw index is the lexicographic rank
of v's color vector among the subclasses of its class, which makes the
index plus the successor state enough to reconstruct the predecessor.
Blocks are sized by the worst-case subclass count

    f(d) = 6! * max multinomial(d; d1..d6),

and ids are computed lazily; the block contents are never materialized.
Actions for a flaw of edge (u, v) are all 6^d recolorings of v's star.
"""

from __future__ import annotations

import bisect
import itertools
import math
import struct
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..conditions import ConditionProfile, FlawClassSummary
from ..problem import Problem
from .graph import SimpleGraph

COLORS = 6
MAX_FLAW_IDS = 1 << 63

Palette = Tuple[int, ...]  # non-decreasing 6-tuple summing to the degree


def palette_of_counts(counts: Sequence[int]) -> Palette:
    if len(counts) != COLORS:
        raise ValueError(f"need {COLORS} counts")
    return tuple(sorted(counts))


def _partitions_at_most(total: int, parts: int, cap: Optional[int] = None):
    if parts == 1:
        if cap is None or total <= cap:
            yield (total,)
        return
    hi = total if cap is None else min(total, cap)
    for first in range(hi, -1, -1):
        rest_cap = first
        if first * parts < total:
            break
        for rest in _partitions_at_most(total - first, parts - 1, rest_cap):
            yield (first,) + rest


def _multinomial(total: int, parts: Sequence[int]) -> int:
    out = math.factorial(total)
    for p in parts:
        out //= math.factorial(p)
    return out


@lru_cache(maxsize=None)
def max_class_count(d: int) -> int:
    """f(d): worst-case number of subclasses for an equal-degree-d edge."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    best = max(_multinomial(d, parts)
               for parts in _partitions_at_most(d, COLORS))
    return best * math.factorial(COLORS)


@lru_cache(maxsize=None)
def _arrangements(target: Palette) -> Tuple[Tuple[int, ...], ...]:
    """Distinct assignments of a sorted count multiset onto the 6 colors."""
    return tuple(sorted(set(itertools.permutations(target))))


class ColorBlindProblem(Problem):
    def __init__(self, graph: SimpleGraph):
        self.graph = graph
        deg = graph.degrees()
        adj = graph.adjacency
        for u, v in graph.edges:
            if deg[u] == 1 and deg[v] == 1:
                raise ValueError(
                    f"component ({u + 1},{v + 1}) is a single edge; its "
                    f"endpoints can never get distinct palettes")
        self._deg = deg
        self._edges = list(graph.edges)
        self._edge_index = {e: i for i, e in enumerate(self._edges)}
        # star[v]: v's incident edge ids, sorted by neighbor id
        self._star: List[List[int]] = [
            [self._edge_index[(min(v, w), max(v, w))] for w in sorted(adj[v])]
            for v in range(graph.n)
        ]
        self._flaw_edges = [i for i, (u, v) in enumerate(self._edges)
                            if deg[u] == deg[v]]
        self._block_base: Dict[int, int] = {}
        total = 0
        for i in self._flaw_edges:
            u, v = self._edges[i]
            self._block_base[i] = total
            total += max_class_count(deg[u])
            if total >= MAX_FLAW_IDS:
                raise ValueError(
                    f"flaw ids for degree {deg[u]} overflow 63 bits")
        self.flaw_count = total
        self._block_order = sorted((b, i) for i, b in self._block_base.items())

        self.initial_state = (0,) * len(self._edges)
        self.log2_state_space = len(self._edges) * math.log2(COLORS)

    # palettes

    def color_counts(self, state: Tuple[int, ...], v: int) -> List[int]:
        counts = [0] * COLORS
        for e in self._star[v]:
            counts[state[e]] += 1
        return counts

    def palette(self, state: Tuple[int, ...], v: int) -> Palette:
        return palette_of_counts(self.color_counts(state, v))

    # flaw id <-> (edge, class index)

    def block_of(self, flaw: int) -> Tuple[int, int]:
        """(edge id, index within the edge's block)."""
        if not (0 <= flaw < self.flaw_count):
            raise IndexError(f"flaw id {flaw} out of range")
        pos = bisect.bisect_right(self._block_order, (flaw, math.inf)) - 1
        base, edge = self._block_order[pos]
        return edge, flaw - base

    def flaw_label(self, flaw: int) -> str:
        edge, i = self.block_of(flaw)
        u, v = self._edges[edge]
        return f"edge({u + 1},{v + 1})#class{i}"

    def _class_rank(self, fixed_u: Tuple[int, ...], t0: int,
                    chi: Sequence[int]) -> int:
        """Lexicographic rank of v's color vector among the vectors that
        produce equal palettes, given u's other edge colors.

        fixed_u: color counts over u's star minus the shared edge;
        t0: position of the shared edge in v's star order;
        chi: v's current color vector in star order.
        """
        d = len(chi)
        rank = 0
        prefix = [0] * COLORS
        for p in range(d):
            for c in range(chi[p]):
                rank += self._completions(fixed_u, t0, chi, p, c, prefix)
            prefix[chi[p]] += 1
        return rank

    def _completions(self, fixed_u: Tuple[int, ...], t0: int,
                     chi: Sequence[int], p: int, c: int,
                     prefix: List[int]) -> int:
        d = len(chi)
        pc = list(prefix)
        pc[c] += 1
        remaining = d - p - 1
        if t0 <= p:
            c0 = chi[t0] if t0 < p else c
            return self._count_tails(fixed_u, c0, pc, remaining, reserve_c0=False)
        total = 0
        for c0 in range(COLORS):
            total += self._count_tails(fixed_u, c0, pc, remaining, reserve_c0=True)
        return total

    def _count_tails(self, fixed_u: Tuple[int, ...], c0: int, pc: List[int],
                     remaining: int, reserve_c0: bool) -> int:
        """Tail completions whose final counts match u's palette with the
        shared edge colored c0; with reserve_c0, one tail slot is pinned
        to c0 (the shared edge itself sits in the tail)."""
        target_counts = list(fixed_u)
        target_counts[c0] += 1
        target = palette_of_counts(target_counts)
        free = remaining - 1 if reserve_c0 else remaining
        if free < 0:
            return 0
        total = 0
        for b in _arrangements(target):
            need = [b[i] - pc[i] for i in range(COLORS)]
            if reserve_c0:
                need[c0] -= 1
            if any(x < 0 for x in need) or sum(need) != free:
                continue
            total += _multinomial(free, need)
        return total

    def _flaw_at_edge(self, state: Tuple[int, ...], edge: int) -> Optional[int]:
        u, v = self._edges[edge]
        cu = self.color_counts(state, u)
        cv = self.color_counts(state, v)
        if palette_of_counts(cu) != palette_of_counts(cv):
            return None
        shared = self._edge_index[(u, v)]
        fixed_u = list(cu)
        fixed_u[state[shared]] -= 1
        star_v = self._star[v]
        t0 = star_v.index(shared)
        chi = [state[e] for e in star_v]
        rank = self._class_rank(tuple(fixed_u), t0, chi)
        cap = max_class_count(self._deg[u])
        if rank >= cap:
            raise AssertionError(
                f"class rank {rank} exceeds block capacity {cap} at edge "
                f"({u + 1},{v + 1})")
        return self._block_base[edge] + rank

    # the problem interface

    def flaws_present(self, state: Tuple[int, ...]) -> Set[int]:
        out: Set[int] = set()
        for edge in self._flaw_edges:
            flaw = self._flaw_at_edge(state, edge)
            if flaw is not None:
                out.add(flaw)
        return out

    def action_count(self, flaw: int, state) -> int:
        edge, _ = self.block_of(flaw)
        _, v = self._edges[edge]
        return COLORS ** self._deg[v]

    def amenability(self, flaw: int) -> int:
        edge, _ = self.block_of(flaw)
        _, v = self._edges[edge]
        return COLORS ** self._deg[v]

    def apply_action(self, flaw: int, state: Tuple[int, ...], k: int) -> Tuple[int, ...]:
        edge, _ = self.block_of(flaw)
        _, v = self._edges[edge]
        star = self._star[v]
        if not (0 <= k < COLORS ** len(star)):
            raise IndexError(f"action index {k} out of range")
        out = list(state)
        for pos in range(len(star) - 1, -1, -1):
            out[star[pos]] = k % COLORS
            k //= COLORS
        return tuple(out)

    def edge_ball(self, edge: int) -> Set[int]:
        """Edges adjacent to v's star (including the star itself and u's)."""
        u, v = self._edges[edge]
        out: Set[int] = set()
        for e in self._star[v]:
            x, y = self._edges[e]
            out.update(self._star[x])
            out.update(self._star[y])
        return out

    def neighborhood(self, flaw: int) -> Set[int]:
        edge, _ = self.block_of(flaw)
        out: Set[int] = set()
        for e in self.edge_ball(edge):
            base = self._block_base.get(e)
            if base is not None:
                x, y = self._edges[e]
                out.update(range(base, base + max_class_count(self._deg[x])))
        return out

    def in_neighborhood(self, flaw: int, other: int) -> bool:
        edge, _ = self.block_of(flaw)
        other_edge, _ = self.block_of(other)
        return other_edge in self.edge_ball(edge)

    def condition_profile(self) -> ConditionProfile:
        delta = self.graph.max_degree()
        small = self.graph.min_degree()
        bound = (1572.0 * delta * delta / small ** 2.5) if small > 0 else math.inf
        classes = []
        for d in sorted({self._deg[self._edges[i][0]] for i in self._flaw_edges}):
            classes.append(FlawClassSummary(
                name=f"equal-degree-{d}",
                amenability=COLORS ** d,
                inv_amenability_sum=bound,
                neighborhood_bound=delta * delta * max_class_count(delta),
                clique_sizes=None,
            ))
        return ConditionProfile(classes=tuple(classes))

    def state_bytes(self, state: Tuple[int, ...]) -> bytes:
        m = len(self._edges)
        return struct.pack(f"<I{m}B", m, *state)

    def validate_solution(self, state: Tuple[int, ...]) -> Optional[str]:
        for u, v in self._edges:
            if self.palette(state, u) == self.palette(state, v):
                return (f"edge ({u + 1},{v + 1}) has equal endpoint palettes "
                        f"{self.palette(state, u)}")
        return None


def colorblind_instance(graph: SimpleGraph) -> ColorBlindProblem:
    return ColorBlindProblem(graph)
