"""Brute-force structural verification on small instances.

Materializes the full transition digraph reachable from the initial state,
checks per-flaw accountability (at most one incoming arc per label at each
state), derives the true causality relation for comparison against the
declared neighborhoods, and inverts traced runs backwards from their final
state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .graphs import CausalityDigraph, FlawGraphG, ResponsibilityDigraph, build_g
from .problem import ContractViolation, Problem

State = Any


class StateCapExceeded(RuntimeError):
    """Reachable state space outgrew the enumeration cap; the digraph would
    be partial."""

    def __init__(self, cap: int):
        super().__init__(f"more than {cap} states reachable; digraph would be partial")
        self.cap = cap


class ReconstructionError(ValueError):
    """Witness/final-state pair does not invert to a trajectory."""


@dataclass(frozen=True)
class AtomicityViolation:
    flaw: int
    dst: State
    src1: State
    src2: State

    def describe(self, problem: Optional[Problem] = None) -> str:
        if problem is not None:
            return (f"flaw {problem.flaw_label(self.flaw)} has two arcs into "
                    f"state digest {problem.state_digest(self.dst)} from digests "
                    f"{problem.state_digest(self.src1)} and "
                    f"{problem.state_digest(self.src2)}")
        return f"flaw {self.flaw} has two arcs into {self.dst!r}"


@dataclass(frozen=True)
class ResponsibilityViolation:
    clause: int
    detail: str


@dataclass
class ExplicitDigraph:
    """The explicit multi-digraph on the reachable states: one arc per
    (state, present flaw, distinct successor)."""

    states: List[State]
    index: Dict[State, int]
    present: List[FrozenSet[int]]
    arcs: List[Tuple[int, int, int]]  # (src index, flaw, dst index)

    def incoming(self) -> Dict[Tuple[int, int], List[int]]:
        """(flaw, dst index) -> source indices."""
        inc: Dict[Tuple[int, int], List[int]] = {}
        for s, f, t in self.arcs:
            inc.setdefault((f, t), []).append(s)
        return inc

    def sinks(self) -> List[int]:
        return [i for i, u in enumerate(self.present) if not u]


def enumerate_digraph(problem: Problem, state_cap: int = 2000,
                      sources: Optional[Sequence[State]] = None) -> ExplicitDigraph:
    """Breadth-first closure of all transitions from the initial state (or
    from every state in `sources`, for exhaustive whole-space checks).

    Raises StateCapExceeded when the closure passes state_cap, and
    ContractViolation when a present flaw offers no action or only the
    do-nothing action.  State identity is full value equality, never a
    digest.
    """
    seeds = list(sources) if sources is not None else [problem.initial_state]
    states: List[State] = []
    index: Dict[State, int] = {}
    present: List[FrozenSet[int]] = []
    for s in seeds:
        if s not in index:
            if len(states) >= state_cap:
                raise StateCapExceeded(state_cap)
            index[s] = len(states)
            states.append(s)
            present.append(frozenset(problem.flaws_present(s)))
    arcs: List[Tuple[int, int, int]] = []
    queue = list(range(len(states)))
    while queue:
        si = queue.pop(0)
        state = states[si]
        for f in sorted(present[si]):
            count = problem.action_count(f, state)
            if count < 1:
                raise ContractViolation("present flaw has an empty action set",
                                        flaw=f, state_digest=problem.state_digest(state))
            targets = []
            seen: Set[int] = set()
            for k in range(count):
                nxt = problem.apply_action(f, state, k)
                ti = index.get(nxt)
                if ti is None:
                    if len(states) >= state_cap:
                        raise StateCapExceeded(state_cap)
                    ti = len(states)
                    states.append(nxt)
                    index[nxt] = ti
                    present.append(frozenset(problem.flaws_present(nxt)))
                    queue.append(ti)
                if ti not in seen:
                    seen.add(ti)
                    targets.append(ti)
            if targets == [si]:
                raise ContractViolation(
                    "action set contains only the current state",
                    flaw=f, state_digest=problem.state_digest(state))
            arcs.extend((si, f, ti) for ti in targets)
    return ExplicitDigraph(states=states, index=index, present=present, arcs=arcs)


def verify_atomicity(d: ExplicitDigraph) -> Optional[AtomicityViolation]:
    """None when every (flaw, destination) has at most one incoming arc;
    otherwise the first violation with both offending sources."""
    first: Dict[Tuple[int, int], int] = {}
    for s, f, t in d.arcs:
        prev = first.get((f, t))
        if prev is not None and prev != s:
            return AtomicityViolation(flaw=f, dst=d.states[t],
                                      src1=d.states[prev], src2=d.states[s])
        first[(f, t)] = s
    return None


def derive_causality(d: ExplicitDigraph) -> CausalityDigraph:
    """True causality arcs observed anywhere in the digraph: f -> g when
    some arc addressing f lands in a state containing g that either is f
    itself or was absent at the source."""
    flaw_count = 0
    c = CausalityDigraph(flaw_count=0)
    for s, f, t in d.arcs:
        flaw_count = max(flaw_count, f + 1)
        src_present = d.present[s]
        for g in d.present[t]:
            flaw_count = max(flaw_count, g + 1)
            if g == f or g not in src_present:
                c.add(f, g)
    c.flaw_count = flaw_count
    return c


def observed_causality(problem: Problem, states: Sequence[State],
                       witness: Sequence[int]) -> CausalityDigraph:
    """Causality arcs exhibited by one traced run (a subset of the true
    relation); usable when the state space is too large to enumerate."""
    c = CausalityDigraph(flaw_count=problem.flaw_count)
    prev = set(problem.flaws_present(states[0]))
    for i, f in enumerate(witness):
        cur = set(problem.flaws_present(states[i + 1]))
        for g in cur:
            if g == f or g not in prev:
                c.add(f, g)
        prev = cur
    return c


def declared_causality(problem: Problem) -> CausalityDigraph:
    """The declared neighborhoods as a digraph (requires an enumerable
    flaw universe)."""
    c = CausalityDigraph(flaw_count=problem.flaw_count)
    for f in problem.flaw_ids():
        succ = problem.neighborhood(f)
        if succ:
            c.arcs[f] = set(succ)
    return c


def check_declared_covers_derived(problem: Problem,
                                  derived: CausalityDigraph) -> List[Tuple[int, int]]:
    """Arcs of the derived causality missing from the declared
    neighborhoods (empty list = declaration is sound)."""
    missing = []
    for f, succ in derived.arcs.items():
        for g in succ:
            if not problem.in_neighborhood(f, g):
                missing.append((f, g))
    return missing


def scc_schedule(c: CausalityDigraph) -> List[Set[int]]:
    """Strongly connected components in topological order of the
    condensation, sources first."""
    n = c.flaw_count
    index_of: Dict[int, int] = {}
    lowlink: Dict[int, int] = {}
    on_stack: Set[int] = set()
    stack: List[int] = []
    sccs: List[Set[int]] = []
    counter = [0]

    for root in range(n):
        if root in index_of:
            continue
        # Iterative Tarjan: (vertex, iterator over successors).
        work = [(root, iter(sorted(c.successors(root))))]
        index_of[root] = lowlink[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index_of:
                    index_of[w] = lowlink[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(c.successors(w)))))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index_of[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index_of[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                sccs.append(comp)
    # Tarjan emits components descendants-first; reverse for sources-first.
    sccs.reverse()
    return sccs


def reconstruct_trajectory(witness: Sequence[int], final: State,
                           d: ExplicitDigraph) -> List[State]:
    """Walk the arcs backwards: each step's source is the unique state with
    an arc of the step's label into the current state.  Returns the full
    state sequence, initial state first.  Requires an atomic digraph."""
    ti = d.index.get(final)
    if ti is None:
        raise ReconstructionError("final state is not in the digraph")
    inc = d.incoming()
    rev: List[int] = [ti]
    cur = ti
    for w in reversed(list(witness)):
        srcs = inc.get((w, cur))
        if not srcs:
            raise ReconstructionError(
                f"no arc labeled {w} enters the state at position {len(rev)}")
        if len(set(srcs)) > 1:
            raise ReconstructionError(
                f"digraph is not atomic at flaw {w}; reconstruction is ambiguous")
        cur = srcs[0]
        rev.append(cur)
    return [d.states[i] for i in reversed(rev)]


def validate_responsibility(r: ResponsibilityDigraph,
                            c: CausalityDigraph) -> Optional[ResponsibilityViolation]:
    """Check the two defining clauses of a responsibility digraph against
    its causality digraph and base order; None when valid."""
    order = r.base_order
    rank = {f: order.rank(1, f) for f in range(c.flaw_count)}
    for f, succ in c.arcs.items():
        for g in succ:
            if (g == f or rank[f] < rank[g]) and not r.has_arc(f, g):
                kind = "self-loop" if g == f else "forward arc"
                return ResponsibilityViolation(
                    clause=1, detail=f"{kind} {f}->{g} of the causality "
                                     f"digraph is missing")
    into: Dict[int, List[int]] = {}
    for k, succ in r.arcs.items():
        for g in succ:
            into.setdefault(g, []).append(k)
    for j, succ in c.arcs.items():
        for i in succ:
            if i != j and rank[j] > rank[i] and not r.has_arc(j, i):
                for k in into.get(j, ()):
                    if not r.has_arc(k, i):
                        return ResponsibilityViolation(
                            clause=2,
                            detail=f"backward arc {j}->{i} was dropped but "
                                   f"{k}->{j} exists without {k}->{i}")
    return None


__all__ = [
    "AtomicityViolation",
    "ExplicitDigraph",
    "ReconstructionError",
    "ResponsibilityViolation",
    "StateCapExceeded",
    "build_g",
    "check_declared_covers_derived",
    "declared_causality",
    "derive_causality",
    "enumerate_digraph",
    "observed_causality",
    "reconstruct_trajectory",
    "scc_schedule",
    "validate_responsibility",
    "verify_atomicity",
]
