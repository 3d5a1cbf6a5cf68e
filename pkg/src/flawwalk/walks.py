"""The walk engine: uniform, recursive, and left-handed focused walks.

All three walks share the same stepping rule: pick a present flaw, draw an
action index uniformly with the seeded counter RNG, move to that action's
state.  They differ only in how the flaw to address is chosen.  Runs are
fully deterministic given (problem, ordering, budget, seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

from .forests import WitnessForest
from .graphs import ResponsibilityDigraph
from .problem import ContractViolation, FlawOrder, Problem

State = Any


@dataclass(frozen=True)
class Step:
    """One transition: 1-based index, addressed flaw, drawn action index,
    digest of the state after the transition."""

    index: int
    flaw: int
    action_index: int
    post_digest: int


@dataclass
class WalkTrace:
    seed: int
    budget: int
    steps: List[Step]
    sink: bool
    final_state: State
    open_stack: Tuple[int, ...] = ()
    states: Optional[List[State]] = None

    @property
    def witness(self) -> List[int]:
        return [s.flaw for s in self.steps]

    @property
    def outcome(self) -> str:
        return "sink" if self.sink else "budget-exceeded"


class _Run:
    """Shared per-run bookkeeping for the three walks."""

    def __init__(self, problem: Problem, budget: int, seed: int, keep_states: bool):
        if budget < 1:
            raise ValueError(f"budget must be >= 1, got {budget}")
        from .rng import CounterRng

        self.problem = problem
        self.budget = budget
        self.rng = CounterRng(seed)
        self.seed = seed
        self.state = problem.initial_state
        self.steps: List[Step] = []
        self.states: Optional[List[State]] = [self.state] if keep_states else None

    def take_step(self, flaw: int) -> None:
        problem = self.problem
        count = problem.action_count(flaw, self.state)
        if count < 1:
            raise ContractViolation(
                "present flaw has an empty action set",
                flaw=flaw, state_digest=problem.state_digest(self.state))
        k = self.rng.next_below(count)
        self.state = problem.apply_action(flaw, self.state, k)
        self.steps.append(Step(index=len(self.steps) + 1, flaw=flaw,
                               action_index=k,
                               post_digest=problem.state_digest(self.state)))
        if self.states is not None:
            self.states.append(self.state)

    def trace(self, sink: bool, open_stack: Tuple[int, ...] = ()) -> WalkTrace:
        return WalkTrace(seed=self.seed, budget=self.budget, steps=self.steps,
                         sink=sink, final_state=self.state,
                         open_stack=open_stack, states=self.states)


def run_uniform(problem: Problem, ordering: Optional[FlawOrder] = None,
                budget: int = 1, seed: int = 0, *,
                keep_states: bool = False) -> WalkTrace:
    """Address the greatest present flaw under the step's order until the
    state is flawless or the budget is exhausted."""
    ordering = ordering if ordering is not None else FlawOrder()
    run = _Run(problem, budget, seed, keep_states)
    while True:
        present = problem.flaws_present(run.state)
        if not present:
            return run.trace(sink=True)
        if len(run.steps) >= budget:
            return run.trace(sink=False)
        run.take_step(ordering.greatest(len(run.steps) + 1, present))


@dataclass
class _Frame:
    flaw: int
    vertex: int
    entry_present: Optional[set] = None  # flaws present at invocation, for contract checks


def _run_nested(problem: Problem, ordering: FlawOrder, budget: int, seed: int,
                flavor: str, limiter, keep_states: bool,
                check_contracts: bool,
                order_for_checks: Optional[FlawOrder]) -> Tuple[WalkTrace, WitnessForest]:
    """Common engine for the recursive and left-handed walks.

    `limiter(f)` yields the membership test used to filter the present
    flaws while the invocation for f is open.  Realized with an explicit
    stack; each invocation consumes one step (one action draw).
    """
    run = _Run(problem, budget, seed, keep_states)
    labels: List[int] = []
    parents: List[Optional[int]] = []
    stack: List[_Frame] = []

    def finish(sink: bool) -> Tuple[WalkTrace, WitnessForest]:
        open_stack = tuple(fr.flaw for fr in stack) if not sink else ()
        forest = WitnessForest(flavor=flavor, labels=tuple(labels),
                               parents=tuple(parents))
        return run.trace(sink, open_stack), forest

    def check_return(frame: _Frame, present: set) -> None:
        if frame.entry_present is None:
            return
        if flavor == "recursive":
            # On return from addressing f, no flaw of the entry state may
            # survive if it is f itself or one of f's neighbors.
            bad = {g for g in present
                   if g == frame.flaw or not (g in frame.entry_present
                                              and not problem.in_neighborhood(frame.flaw, g))}
            if bad:
                raise AssertionError(
                    f"return contract broken for flaw {frame.flaw}: {sorted(bad)}")
        else:
            order = order_for_checks or ordering
            f_rank = order.rank(1, frame.flaw)
            if frame.flaw in present:
                raise AssertionError(
                    f"return contract broken: flaw {frame.flaw} still present")
            above_now = {g for g in present if order.rank(1, g) > f_rank}
            above_entry = {g for g in frame.entry_present if order.rank(1, g) > f_rank}
            if not above_now <= above_entry:
                raise AssertionError(
                    f"return contract broken for flaw {frame.flaw}: "
                    f"{sorted(above_now - above_entry)} appeared above it")

    while True:
        present = problem.flaws_present(run.state)
        # Unwind invocations whose filtered flaw set is exhausted.
        while stack:
            frame = stack[-1]
            member = limiter(frame.flaw)
            if any(member(g) for g in present):
                break
            if check_contracts:
                check_return(frame, present)
            stack.pop()
        if stack:
            frame = stack[-1]
            member = limiter(frame.flaw)
            candidates = [g for g in present if member(g)]
            parent = frame.vertex
        else:
            if not present:
                return finish(sink=True)
            candidates = list(present)
            parent = None
        if len(run.steps) >= budget:
            return finish(sink=False)
        step_index = len(run.steps) + 1
        flaw = ordering.greatest(step_index, candidates)
        vertex = len(labels)
        labels.append(flaw)
        parents.append(parent)
        entry = set(present) if check_contracts else None
        run.take_step(flaw)
        stack.append(_Frame(flaw=flaw, vertex=vertex, entry_present=entry))


def run_recursive(problem: Problem, ordering: Optional[FlawOrder] = None,
                  budget: int = 1, seed: int = 0, *,
                  keep_states: bool = False,
                  check_contracts: bool = False) -> Tuple[WalkTrace, WitnessForest]:
    """Nested elimination: addressing f keeps re-addressing the greatest
    present flaw among f's declared neighbors until none remains."""
    ordering = ordering if ordering is not None else FlawOrder()

    def limiter(f: int):
        return lambda g: problem.in_neighborhood(f, g)

    return _run_nested(problem, ordering, budget, seed, "recursive", limiter,
                       keep_states, check_contracts, None)


def run_lefthanded(problem: Problem, ordering: Optional[FlawOrder] = None,
                   responsibility: Optional[ResponsibilityDigraph] = None,
                   budget: int = 1, seed: int = 0, *,
                   keep_states: bool = False,
                   check_contracts: bool = False) -> Tuple[WalkTrace, WitnessForest]:
    """Recursive walk with the responsibility digraph as recursion filter.

    Requires a single fixed order matching the responsibility digraph's
    base order.  When `responsibility` is None the declared causality
    relation is used, which makes the walk coincide with run_recursive.
    """
    ordering = ordering if ordering is not None else FlawOrder()
    if not ordering.is_fixed:
        raise ValueError("left-handed walk requires a single fixed flaw order")

    if responsibility is None:
        def limiter(f: int):
            return lambda g: problem.in_neighborhood(f, g)
    else:
        if not responsibility.base_order.same_order(ordering):
            raise ValueError(
                "responsibility digraph base order differs from the walk order")

        def limiter(f: int):
            succ = responsibility.successors(f)
            return lambda g: g in succ

    return _run_nested(problem, ordering, budget, seed, "lefthanded", limiter,
                       keep_states, check_contracts, ordering)
