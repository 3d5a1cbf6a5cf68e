"""Shared fixtures: tabulated toy instances, small app instances, and
state-space enumerators for exhaustive checks."""

from __future__ import annotations

import itertools
import random
from typing import Dict, List, Optional, Sequence, Set, Tuple

import pytest

from flawwalk import ExplicitProblem
from flawwalk.apps import (
    ColorMatrix,
    EdgeColoredComplete,
    SimpleGraph,
    colorblind_instance,
    delta_plus_one_instance,
    latin_instance,
    rainbow_matching_instance,
)
from flawwalk.problem import Problem


class DeclaredProblem(Problem):
    """Condition-checker stub: declared structure only, no dynamics."""

    def __init__(self, amenabilities: Sequence[int],
                 neighborhoods: Dict[int, Set[int]],
                 log2_state_space: float = 10.0,
                 initial_flaws: Optional[Set[int]] = None):
        self.flaw_count = len(amenabilities)
        self._amen = list(amenabilities)
        self._nbrs = {f: set(neighborhoods.get(f, ())) for f in range(self.flaw_count)}
        self.log2_state_space = log2_state_space
        self._initial = set(initial_flaws) if initial_flaws is not None else set()
        self.initial_state = "initial"

    def flaws_present(self, state):
        return set(self._initial) if state == "initial" else set()

    def action_count(self, flaw, state):
        raise NotImplementedError("declared-only stub")

    def apply_action(self, flaw, state, k):
        raise NotImplementedError("declared-only stub")

    def amenability(self, flaw):
        return self._amen[flaw]

    def neighborhood(self, flaw):
        return set(self._nbrs[flaw])

    def state_bytes(self, state):
        return repr(state).encode()


def random_declared(rng: random.Random, flaws: int, max_nbrs: int,
                    amen_range=(2, 30)) -> DeclaredProblem:
    amen = [rng.randint(*amen_range) for _ in range(flaws)]
    nbrs = {}
    for f in range(flaws):
        size = rng.randint(0, max_nbrs)
        nbrs[f] = set(rng.sample(range(flaws), min(size, flaws)))
    initial = set(rng.sample(range(flaws), rng.randint(0, flaws)))
    return DeclaredProblem(amen, nbrs, log2_state_space=rng.uniform(1, 50),
                           initial_flaws=initial)


def random_explicit(rng: random.Random, n_states: int = 8, n_flaws: int = 4,
                    sink_count: int = 2, max_actions: int = 3) -> ExplicitProblem:
    """Random tabulated instance honoring the interface contract: every
    present flaw has >= 1 action including one that leaves the state."""
    states = list(range(n_states))
    sinks = set(rng.sample(states, min(sink_count, n_states)))
    table: Dict[int, Dict[int, List[int]]] = {}
    for s in states:
        if s in sinks:
            continue
        flaws = rng.sample(range(n_flaws), rng.randint(1, n_flaws))
        row = {}
        for f in flaws:
            count = rng.randint(1, max_actions)
            targets = [rng.choice(states) for _ in range(count)]
            if all(t == s for t in targets):
                targets[rng.randrange(count)] = rng.choice([t for t in states if t != s])
            row[f] = targets
        table[s] = row
    initial = rng.choice([s for s in states if s not in sinks] or states)
    return ExplicitProblem(initial, table)


# app fixtures

def xor_matrix(n: int = 4) -> ColorMatrix:
    return ColorMatrix.from_rows([[i ^ j for j in range(n)] for i in range(n)])


@pytest.fixture
def latin4():
    return latin_instance(xor_matrix(4))


def matching8_coloring() -> EdgeColoredComplete:
    """Crafted K8 coloring: the canonical matching is heavily flawed."""
    color = {}
    for u in range(8):
        for v in range(u + 1, 8):
            color[(u, v)] = (u + v) % 4
    return EdgeColoredComplete(vertices=8, color=color)


@pytest.fixture
def matching8():
    return rainbow_matching_instance(matching8_coloring())


def star_coloring(vertices: int) -> EdgeColoredComplete:
    """Same-colored edges always share a vertex: no flaws anywhere."""
    return EdgeColoredComplete(
        vertices=vertices,
        color={(u, v): u for u in range(vertices) for v in range(u + 1, vertices)})


@pytest.fixture
def path3_coloring():
    return delta_plus_one_instance(SimpleGraph.from_edges(3, [(0, 1), (1, 2)]), 3)


@pytest.fixture
def colorblind_path4():
    return colorblind_instance(SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)]))


@pytest.fixture
def colorblind_triangle():
    return colorblind_instance(SimpleGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))


# whole state spaces

def all_permutations(n: int) -> List[Tuple[int, ...]]:
    return [tuple(p) for p in itertools.permutations(range(n))]


def all_perfect_matchings(vertices: int) -> List[Tuple[int, ...]]:
    def rec(remaining: Tuple[int, ...]) -> List[List[Tuple[int, int]]]:
        if not remaining:
            return [[]]
        u = remaining[0]
        out = []
        for i in range(1, len(remaining)):
            v = remaining[i]
            rest = remaining[1:i] + remaining[i + 1:]
            for tail in rec(rest):
                out.append([(u, v)] + tail)
        return out

    states = []
    for pairing in rec(tuple(range(vertices))):
        partner = [0] * vertices
        for u, v in pairing:
            partner[u] = v
            partner[v] = u
        states.append(tuple(partner))
    return states


def all_colorings(edge_count: int, colors: int = 6) -> List[Tuple[int, ...]]:
    return [tuple(c) for c in itertools.product(range(colors), repeat=edge_count)]
