"""Transversals with pairwise-distinct colors in a colored square matrix.

States are permutations pi of [n] (pi[row] = selected column).  A flaw is
an unordered pair of same-colored cells in distinct rows and columns; it
is present when the permutation selects both cells.  Addressing a flaw
exchanges the columns of its two rows with those of two other rows picked
by the drawn action, which gives exactly n*(n-1) distinct successor
permutations per flawed state.
"""

from __future__ import annotations

import bisect
import math
import struct
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..conditions import ConditionProfile, FlawClassSummary
from ..problem import Problem

Quad = Tuple[int, int, int, int]  # (row1, col1, row2, col2) with row1 < row2


@dataclass(frozen=True)
class ColorMatrix:
    """n x n matrix of integer color ids."""

    n: int
    cells: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ColorMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        return cls(n=n, cells=tuple(tuple(r) for r in rows))

    def color(self, i: int, j: int) -> int:
        return self.cells[i][j]

    def max_multiplicity(self) -> int:
        counts: Dict[int, int] = {}
        for row in self.cells:
            for c in row:
                counts[c] = counts.get(c, 0) + 1
        return max(counts.values(), default=0)


class _ColorBlock:
    """Per-color bookkeeping: the color's cells and its valid cell pairs
    (distinct rows and columns), with dense local pair ranks.  Pair lists
    are built lazily; the count comes from a closed form so instances with
    many colors stay cheap to construct."""

    __slots__ = ("cells", "cell_index", "valid_count", "_pairs", "_pair_rank")

    def __init__(self, cells: List[Tuple[int, int]]):
        self.cells = cells
        self.cell_index = {cell: i for i, cell in enumerate(cells)}
        rows: Dict[int, int] = {}
        cols: Dict[int, int] = {}
        for r, c in cells:
            rows[r] = rows.get(r, 0) + 1
            cols[c] = cols.get(c, 0) + 1
        m = len(cells)
        self.valid_count = (m * (m - 1) // 2
                            - sum(k * (k - 1) // 2 for k in rows.values())
                            - sum(k * (k - 1) // 2 for k in cols.values()))
        self._pairs: Optional[List[Tuple[int, int]]] = None
        self._pair_rank: Optional[Dict[Tuple[int, int], int]] = None

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        if self._pairs is None:
            cells = self.cells
            out = []
            for a in range(len(cells)):
                for b in range(a + 1, len(cells)):
                    if cells[a][0] != cells[b][0] and cells[a][1] != cells[b][1]:
                        out.append((a, b))
            assert len(out) == self.valid_count
            self._pairs = out
        return self._pairs

    @property
    def pair_rank(self) -> Dict[Tuple[int, int], int]:
        if self._pair_rank is None:
            self._pair_rank = {p: r for r, p in enumerate(self.pairs)}
        return self._pair_rank


class LatinProblem(Problem):
    def __init__(self, matrix: ColorMatrix):
        n = matrix.n
        if n < 4:
            raise ValueError(
                f"need n >= 4 (column exchange needs two auxiliary rows), got {n}")
        self.matrix = matrix
        self.n = n

        by_color: Dict[int, List[Tuple[int, int]]] = {}
        for i in range(n):
            for j in range(n):
                by_color.setdefault(matrix.color(i, j), []).append((i, j))
        self._colors = sorted(by_color)
        self._blocks = {c: _ColorBlock(by_color[c]) for c in self._colors}
        self._base: Dict[int, int] = {}
        total = 0
        for c in self._colors:
            self._base[c] = total
            total += self._blocks[c].valid_count
        self.flaw_count = total
        self._color_of_base = sorted((b, c) for c, b in self._base.items())

        self.delta = matrix.max_multiplicity()
        self.initial_state = tuple(range(n))
        self.log2_state_space = math.lgamma(n + 1) / math.log(2)

    # flaw id <-> cell quadruple

    def quad_of(self, flaw: int) -> Quad:
        if not (0 <= flaw < self.flaw_count):
            raise IndexError(f"flaw id {flaw} out of range")
        pos = bisect.bisect_right(self._color_of_base, (flaw, math.inf)) - 1
        base, color = self._color_of_base[pos]
        block = self._blocks[color]
        a, b = block.pairs[flaw - base]
        (i, j), (ip, jp) = block.cells[a], block.cells[b]
        return (i, j, ip, jp)

    def flaw_of_cells(self, cell1: Tuple[int, int], cell2: Tuple[int, int]) -> int:
        color = self.matrix.color(*cell1)
        if self.matrix.color(*cell2) != color:
            raise ValueError("cells have different colors")
        block = self._blocks[color]
        a, b = block.cell_index[cell1], block.cell_index[cell2]
        if a > b:
            a, b = b, a
        rank = block.pair_rank.get((a, b))
        if rank is None:
            raise ValueError("cells share a row or column; not a flaw")
        return self._base[color] + rank

    def flaw_label(self, flaw: int) -> str:
        i, j, ip, jp = self.quad_of(flaw)
        return f"cells({i + 1},{j + 1})~({ip + 1},{jp + 1})"

    # the problem interface

    def flaws_present(self, state: Tuple[int, ...]) -> Set[int]:
        by_color: Dict[int, List[Tuple[int, int]]] = {}
        for i, j in enumerate(state):
            by_color.setdefault(self.matrix.color(i, j), []).append((i, j))
        out: Set[int] = set()
        for color, cells in by_color.items():
            if len(cells) < 2:
                continue
            for a in range(len(cells)):
                for b in range(a + 1, len(cells)):
                    out.add(self.flaw_of_cells(cells[a], cells[b]))
        return out

    def action_count(self, flaw: int, state) -> int:
        return self.n * (self.n - 1)

    def amenability(self, flaw: int) -> int:
        return self.n * (self.n - 1)

    def apply_action(self, flaw: int, state: Tuple[int, ...], k: int) -> Tuple[int, ...]:
        """Exchange columns between the flaw's rows and two drawn rows.

        The drawn pair (alpha, alpha') ranges over all ordered pairs of
        distinct rows.  When a drawn row coincides with a flaw row the
        four column assignments are resolved so that the result is always
        a permutation and all n*(n-1) outcomes stay pairwise distinct and
        backwards reconstructible.
        """
        n = self.n
        if not (0 <= k < n * (n - 1)):
            raise IndexError(f"action index {k} out of range")
        i, j, ip, jp = self.quad_of(flaw)
        alpha = k // (n - 1)
        r = k % (n - 1)
        alpha_p = r if r < alpha else r + 1
        rho = list(state)
        if alpha == ip and alpha_p not in (i, ip):
            # Drawn row equals the flaw's second row: rotate columns
            # i <- ip <- alpha_p <- i.
            rho[i], rho[ip], rho[alpha_p] = state[ip], state[alpha_p], state[i]
        elif alpha_p == i and alpha not in (i, ip):
            # Mirrored collision: rotate ip <- i <- alpha <- ip.
            rho[ip], rho[i], rho[alpha] = state[i], state[alpha], state[ip]
        else:
            beta, beta_p = state[alpha], state[alpha_p]
            rho[i], rho[ip] = beta, beta_p
            rho[alpha], rho[alpha_p] = state[i], state[ip]
        return tuple(rho)

    def neighborhood(self, flaw: int) -> Set[int]:
        i, j, ip, jp = self.quad_of(flaw)
        out: Set[int] = set()
        for clique in self._neighbor_cliques(i, j, ip, jp):
            out.update(clique)
        return out

    def in_neighborhood(self, flaw: int, other: int) -> bool:
        i, j, ip, jp = self.quad_of(flaw)
        p, q, pp, qp = self.quad_of(other)
        return bool({i, ip} & {p, pp}) or bool({j, jp} & {q, qp})

    def adjacent_in_g(self, f: int, g: int) -> bool:
        return f != g and self.in_neighborhood(f, g)

    def _flaws_with_cell_in_row(self, row: int) -> Set[int]:
        out: Set[int] = set()
        for col in range(self.n):
            cell = (row, col)
            block = self._blocks[self.matrix.color(row, col)]
            a = block.cell_index[cell]
            base = self._base[self.matrix.color(row, col)]
            for r, (x, y) in enumerate(block.pairs):
                if x == a or y == a:
                    out.add(base + r)
        return out

    def _flaws_with_cell_in_col(self, col: int) -> Set[int]:
        out: Set[int] = set()
        for row in range(self.n):
            cell = (row, col)
            block = self._blocks[self.matrix.color(row, col)]
            a = block.cell_index[cell]
            base = self._base[self.matrix.color(row, col)]
            for r, (x, y) in enumerate(block.pairs):
                if x == a or y == a:
                    out.add(base + r)
        return out

    def _neighbor_cliques(self, i: int, j: int, ip: int, jp: int) -> List[Set[int]]:
        """Flaws sharing row i, row ip, column j, column jp: four cliques
        covering the whole neighborhood (made disjoint in declared order)."""
        groups = [self._flaws_with_cell_in_row(i),
                  self._flaws_with_cell_in_row(ip),
                  self._flaws_with_cell_in_col(j),
                  self._flaws_with_cell_in_col(jp)]
        seen: Set[int] = set()
        cliques = []
        for grp in groups:
            fresh = grp - seen
            seen |= grp
            cliques.append(fresh)
        return cliques

    def neighborhood_clique_cover(self, flaw: int) -> List[List[int]]:
        i, j, ip, jp = self.quad_of(flaw)
        return [sorted(c) for c in self._neighbor_cliques(i, j, ip, jp)]

    def condition_profile(self) -> ConditionProfile:
        n, delta = self.n, self.delta
        clique = n * max(delta - 1, 0)
        a = n * (n - 1)
        return ConditionProfile(classes=(
            FlawClassSummary(
                name="cell-pair",
                amenability=a,
                inv_amenability_sum=4.0 * clique / a,
                neighborhood_bound=4 * clique,
                clique_sizes=(clique,) * 4,
            ),
        ))

    def initial_independent_bound(self) -> int:
        # Pairwise non-adjacent flaws occupy disjoint row pairs.
        return self.n // 2

    def default_uniform_mu(self) -> float:
        return 1.0 / (3.0 * self.n * max(self.delta - 1, 1))

    def state_bytes(self, state: Tuple[int, ...]) -> bytes:
        return struct.pack(f"<I{self.n}I", self.n, *state)

    def validate_solution(self, state: Tuple[int, ...]) -> Optional[str]:
        if sorted(state) != list(range(self.n)):
            return "state is not a permutation"
        seen: Dict[int, int] = {}
        for i, j in enumerate(state):
            c = self.matrix.color(i, j)
            if c in seen:
                return (f"rows {seen[c] + 1} and {i + 1} select cells of the "
                        f"same color {c}")
            seen[c] = i
        return None


def latin_instance(matrix: ColorMatrix) -> LatinProblem:
    return LatinProblem(matrix)
