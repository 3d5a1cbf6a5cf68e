"""Instance file formats and seeded generators.

Formats (1-indexed vertices, whitespace-separated decimal integers):

  latin      line 1: n, then n lines of n color ids;
  matching   line 1: the vertex count 2n, then one line "u v c" for every
             unordered vertex pair;
  graph      line 1: "V E", then E lines "u v"  (used by the coloring and
             palette apps).
"""

from __future__ import annotations

import math
from typing import List, Tuple

from ..rng import CounterRng
from .colorblind import ColorBlindProblem
from .coloring import ProperColoringProblem
from .graph import SimpleGraph
from .latin import ColorMatrix, LatinProblem
from .matching import EdgeColoredComplete, RainbowMatchingProblem


class InstanceFormatError(ValueError):
    pass


def _int_tokens(text: str) -> List[List[int]]:
    rows = []
    for line_no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            rows.append([int(tok) for tok in stripped.split()])
        except ValueError:
            raise InstanceFormatError(f"line {line_no}: non-integer token") from None
    return rows


# latin

def parse_latin(text: str) -> ColorMatrix:
    rows = _int_tokens(text)
    if not rows or len(rows[0]) != 1:
        raise InstanceFormatError("first line must be the matrix size")
    n = rows[0][0]
    body = rows[1:]
    if len(body) != n or any(len(r) != n for r in body):
        raise InstanceFormatError(f"expected {n} rows of {n} colors")
    return ColorMatrix.from_rows(body)


def write_latin(matrix: ColorMatrix) -> str:
    lines = [str(matrix.n)]
    lines += [" ".join(str(c) for c in row) for row in matrix.cells]
    return "\n".join(lines) + "\n"


def generate_latin(n: int, delta: int, seed: int) -> ColorMatrix:
    """Matrix in which every color appears at most delta times: round-robin
    color fill, then a seeded shuffle of the cells."""
    if n < 1:
        raise ValueError("n must be positive")
    if delta < 1:
        raise ValueError("color multiplicity bound must be at least 1")
    cells = n * n
    colors = []
    c = 0
    while len(colors) < cells:
        colors.extend([c] * min(delta, cells - len(colors)))
        c += 1
    rng = CounterRng(seed)
    rng.shuffle(colors)
    rows = [colors[i * n:(i + 1) * n] for i in range(n)]
    matrix = ColorMatrix.from_rows(rows)
    if matrix.max_multiplicity() > delta:
        raise AssertionError("generated matrix exceeds the multiplicity bound")
    return matrix


# matching

def parse_matching(text: str) -> EdgeColoredComplete:
    rows = _int_tokens(text)
    if not rows or len(rows[0]) != 1:
        raise InstanceFormatError("first line must be the vertex count")
    m = rows[0][0]
    color = {}
    for row in rows[1:]:
        if len(row) != 3:
            raise InstanceFormatError("edge lines must be 'u v c'")
        u, v, c = row
        if not (1 <= u <= m and 1 <= v <= m) or u == v:
            raise InstanceFormatError(f"bad edge ({u}, {v})")
        key = (min(u, v) - 1, max(u, v) - 1)
        if key in color:
            raise InstanceFormatError(f"duplicate edge ({u}, {v})")
        color[key] = c
    return EdgeColoredComplete(vertices=m, color=color)


def write_matching(graph: EdgeColoredComplete) -> str:
    lines = [str(graph.vertices)]
    for (u, v) in sorted(graph.color):
        lines.append(f"{u + 1} {v + 1} {graph.color[(u, v)]}")
    return "\n".join(lines) + "\n"


def generate_matching(vertices: int, q: int, seed: int, *,
                      enforce_bound: bool = True) -> EdgeColoredComplete:
    """Complete-graph coloring in which every color is used at most q
    times.  By default requires q strictly below n/(2e), the regime where
    the per-flaw neighborhood sums stay below 1/e; structural fixtures may
    opt out."""
    if vertices % 2 or vertices < 6:
        raise ValueError("vertex count must be even and at least 6")
    if q < 1:
        raise ValueError("q must be at least 1")
    n = vertices // 2
    if enforce_bound and q * 2 * math.e >= n:
        raise ValueError(
            f"per-color multiplicity {q} is not below n/(2e) = {n / (2 * math.e):.2f}")
    edges = [(u, v) for u in range(vertices) for v in range(u + 1, vertices)]
    colors = []
    c = 0
    while len(colors) < len(edges):
        colors.extend([c] * min(q, len(edges) - len(colors)))
        c += 1
    rng = CounterRng(seed)
    rng.shuffle(colors)
    graph = EdgeColoredComplete(vertices=vertices,
                                color=dict(zip(edges, colors)))
    if graph.max_multiplicity() > q:
        raise AssertionError("generated coloring exceeds the multiplicity bound")
    return graph


# simple graphs

def parse_graph(text: str) -> SimpleGraph:
    rows = _int_tokens(text)
    if not rows or len(rows[0]) != 2:
        raise InstanceFormatError("first line must be 'V E'")
    n, m = rows[0]
    body = rows[1:]
    if len(body) != m:
        raise InstanceFormatError(f"expected {m} edge lines, got {len(body)}")
    edges = []
    for row in body:
        if len(row) != 2:
            raise InstanceFormatError("edge lines must be 'u v'")
        u, v = row
        if not (1 <= u <= n and 1 <= v <= n):
            raise InstanceFormatError(f"edge ({u}, {v}) out of range")
        edges.append((u - 1, v - 1))
    return SimpleGraph.from_edges(n, edges)


def write_graph(graph: SimpleGraph) -> str:
    lines = [f"{graph.n} {len(graph.edges)}"]
    lines += [f"{u + 1} {v + 1}" for u, v in graph.edges]
    return "\n".join(lines) + "\n"


def generate_graph(n: int, edge_count: int, seed: int) -> SimpleGraph:
    """Uniform random simple graph with the requested number of edges."""
    if n < 2:
        raise ValueError("need at least two vertices")
    all_edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if edge_count > len(all_edges):
        raise ValueError(f"at most {len(all_edges)} edges possible")
    rng = CounterRng(seed)
    rng.shuffle(all_edges)
    return SimpleGraph.from_edges(n, all_edges[:edge_count])
