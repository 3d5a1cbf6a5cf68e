"""Witness forests and their round trips with flaw sequences.

A traced run can be condensed into a rooted labeled forest in three
flavors: "break" forests for the uniform walk (built from the sequence of
newly-introduced flaw sets), and "recursive" / "lefthanded" forests that
mirror the invocation tree of the nested walks.  Each flavor admits a
replay that recovers the exact sequence of addressed flaws.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

from .problem import FlawOrder, Problem


class ForestError(ValueError):
    """Malformed forest or break sequence."""


@dataclass(frozen=True)
class BreakSequence:
    """Per-step sets of flaws that were introduced and later addressed.

    sets[0] is taken from the initial state; sets[i] from step i's
    transition.  The addressed-flaw sequence is recoverable by repeatedly
    extracting the greatest pending flaw.
    """

    sets: Tuple[frozenset, ...]


@dataclass(frozen=True)
class WitnessForest:
    """Rooted labeled forest; vertex i carries flaw labels[i] and hangs
    under parents[i] (None for roots).  Vertices are stored in the order
    their steps executed."""

    flavor: str  # "break" | "recursive" | "lefthanded"
    labels: Tuple[int, ...]
    parents: Tuple[Optional[int], ...]

    def __post_init__(self):
        if self.flavor not in ("break", "recursive", "lefthanded"):
            raise ForestError(f"unknown forest flavor {self.flavor!r}")
        if len(self.labels) != len(self.parents):
            raise ForestError("labels and parents must have equal length")
        for v, p in enumerate(self.parents):
            if p is not None and not (0 <= p < len(self.labels)):
                raise ForestError(f"vertex {v} has out-of-range parent {p}")

    def roots(self) -> List[int]:
        return [v for v, p in enumerate(self.parents) if p is None]

    def children(self, v: int) -> List[int]:
        return [w for w, p in enumerate(self.parents) if p == v]

    def children_map(self) -> List[List[int]]:
        kids: List[List[int]] = [[] for _ in self.labels]
        for w, p in enumerate(self.parents):
            if p is not None:
                kids[p].append(w)
        return kids


def break_sequence(trace, states: Sequence[Any], problem: Problem) -> BreakSequence:
    """Introduced-flaw sets of a traced run, stripped of flaws that were
    never addressed.

    `states` must be the full state sequence of the run (initial state
    first), as captured by a walk with keep_states=True.  A flaw counts as
    introduced at step i when it is present after the step but was not
    present before it, or when it is the addressed flaw and survived.  Two
    kinds of introduced flaws are stripped: those that later vanish without
    ever being addressed, and those that persist to the end unaddressed.
    """
    witness = [s.flaw for s in trace.steps]
    t = len(witness)
    if len(states) != t + 1:
        raise ForestError(
            f"trace has {t} steps but {len(states)} states were supplied")
    present = [set(problem.flaws_present(s)) for s in states]
    for i, w in enumerate(witness):
        if w not in present[i]:
            raise ForestError(
                f"state sequence inconsistent with trace: flaw {w} absent "
                f"before step {i + 1}")

    raw: List[set] = [set(present[0])]
    for i in range(1, t):
        raw.append(present[i] - (present[i - 1] - {witness[i - 1]}))

    out: List[frozenset] = []
    for i, b in enumerate(raw):
        eradicated = set()
        never_addressed = set()
        for f in b:
            addressed_at = [ell for ell in range(i + 1, t + 1) if witness[ell - 1] == f]
            vanish = None
            for j in range(i + 1, t + 1):
                if f not in present[j]:
                    vanish = j
                    break
            first_addr = addressed_at[0] if addressed_at else None
            if vanish is not None and (first_addr is None or first_addr > vanish):
                eradicated.add(f)
            elif vanish is None and first_addr is None:
                never_addressed.add(f)
        out.append(frozenset(b - eradicated - never_addressed))
    return BreakSequence(sets=tuple(out))


def break_forest(bs: BreakSequence, ordering: Optional[FlawOrder] = None) -> WitnessForest:
    """Frontier construction: the first set supplies the roots; at step i
    the frontier vertex of greatest label spawns the i-th set as children."""
    ordering = ordering if ordering is not None else FlawOrder()
    if not bs.sets:
        return WitnessForest(flavor="break", labels=(), parents=())
    labels: List[int] = []
    parents: List[Optional[int]] = []
    frontier: List[int] = []
    for f in sorted(bs.sets[0]):
        frontier.append(len(labels))
        labels.append(f)
        parents.append(None)
    for i in range(1, len(bs.sets)):
        _check_frontier_distinct(labels, frontier, i)
        if not frontier:
            raise ForestError(f"frontier exhausted before step {i}")
        v = max(frontier, key=lambda w: ordering.rank(i, labels[w]))
        frontier.remove(v)
        for f in sorted(bs.sets[i]):
            frontier.append(len(labels))
            labels.append(f)
            parents.append(v)
    return WitnessForest(flavor="break", labels=tuple(labels), parents=tuple(parents))


def _check_frontier_distinct(labels: List[int], frontier: List[int], step: int) -> None:
    seen = set()
    for v in frontier:
        if labels[v] in seen:
            raise ForestError(
                f"duplicate frontier label {labels[v]} at step {step}")
        seen.add(labels[v])


def forest_to_witness(forest: WitnessForest,
                      ordering: Optional[FlawOrder] = None) -> List[int]:
    """Replay a forest back into its sequence of addressed flaws.

    Break flavor: replay the frontier process, always expanding the
    greatest frontier label.  Recursive/left-handed flavors: trees and
    children are emitted greatest-label-first in preorder, matching the
    order in which the nested walks open their invocations.
    """
    ordering = ordering if ordering is not None else FlawOrder()
    kids = forest.children_map()
    total = len(forest.labels)
    if forest.flavor == "break":
        frontier = list(forest.roots())
        out: List[int] = []
        for i in range(1, total + 1):
            _check_frontier_distinct(list(forest.labels), frontier, i)
            if not frontier:
                raise ForestError(f"frontier exhausted at step {i} of {total}")
            v = max(frontier, key=lambda w: ordering.rank(i, forest.labels[w]))
            frontier.remove(v)
            out.append(forest.labels[v])
            frontier.extend(kids[v])
        if frontier:
            raise ForestError("frontier not exhausted after emitting all steps")
        return out

    if not ordering.is_fixed:
        raise ForestError(
            f"{forest.flavor} forests replay under a single fixed order")

    def desc(vertices: List[int]) -> List[int]:
        ordered = sorted(vertices, key=lambda w: ordering.rank(1, forest.labels[w]),
                         reverse=True)
        seen = set()
        for w in ordered:
            if forest.labels[w] in seen:
                raise ForestError(
                    f"duplicate sibling label {forest.labels[w]} in "
                    f"{forest.flavor} forest")
            seen.add(forest.labels[w])
        return ordered

    out = []
    stack = list(reversed(desc(forest.roots())))
    while stack:
        v = stack.pop()
        out.append(forest.labels[v])
        stack.extend(reversed(desc(kids[v])))
    return out
