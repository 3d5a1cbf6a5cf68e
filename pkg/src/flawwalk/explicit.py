"""Fully tabulated toy instances, mainly for tests and tiny demos."""

from __future__ import annotations

import math
from typing import Any, Dict, Mapping, Optional, Sequence, Set

from .problem import Problem

State = Any


class ExplicitProblem(Problem):
    """An instance given by an explicit transition table.

    `transitions[state][flaw]` lists the action targets, in enumeration
    order, for each flaw present in that state; states absent from the
    table (or with empty flaw maps) are flawless.  Neighborhoods default
    to the true causality relation derived from the table, so declared
    coverage is exact unless overridden.
    """

    def __init__(self, initial: State,
                 transitions: Mapping[State, Mapping[int, Sequence[State]]],
                 flaw_count: Optional[int] = None,
                 neighborhoods: Optional[Mapping[int, Set[int]]] = None,
                 amenabilities: Optional[Mapping[int, int]] = None,
                 log2_state_space: Optional[float] = None):
        self._table: Dict[State, Dict[int, tuple]] = {
            s: {f: tuple(targets) for f, targets in fl.items() if targets}
            for s, fl in transitions.items()
        }
        states = set(self._table)
        states.add(initial)
        for fl in self._table.values():
            for targets in fl.values():
                states.update(targets)
        self._states = states

        flaws_seen = {f for fl in self._table.values() for f in fl}
        self.flaw_count = flaw_count if flaw_count is not None else (
            max(flaws_seen, default=-1) + 1)
        self.initial_state = initial
        self.log2_state_space = (log2_state_space if log2_state_space is not None
                                 else math.log2(max(len(states), 1)))

        if amenabilities is not None:
            self._amenability = dict(amenabilities)
        else:
            self._amenability = {}
            for fl in self._table.values():
                for f, targets in fl.items():
                    cur = self._amenability.get(f)
                    if cur is None or len(targets) < cur:
                        self._amenability[f] = len(targets)

        if neighborhoods is not None:
            self._neighborhood = {f: set(g) for f, g in neighborhoods.items()}
        else:
            self._neighborhood = {f: set() for f in range(self.flaw_count)}
            for state, fl in self._table.items():
                before = set(fl)
                for f, targets in fl.items():
                    for t in targets:
                        for g in self.flaws_present(t):
                            if g == f or g not in before:
                                self._neighborhood.setdefault(f, set()).add(g)

    def flaws_present(self, state: State) -> Set[int]:
        return set(self._table.get(state, ()))

    def action_count(self, flaw: int, state: State) -> int:
        return len(self._table.get(state, {}).get(flaw, ()))

    def apply_action(self, flaw: int, state: State, k: int) -> State:
        return self._table[state][flaw][k]

    def amenability(self, flaw: int) -> int:
        return self._amenability.get(flaw, 1)

    def neighborhood(self, flaw: int) -> Set[int]:
        return set(self._neighborhood.get(flaw, ()))

    def state_bytes(self, state: State) -> bytes:
        return repr(state).encode()

    def validate_solution(self, state: State) -> Optional[str]:
        present = self.flaws_present(state)
        if present:
            return f"flaws {sorted(present)} still present"
        return None
