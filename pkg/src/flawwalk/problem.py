"""The pluggable problem interface consumed by the walk engine.

A problem instance exposes a flaw universe indexed by dense integer ids,
a flaw detector, per-(flaw, state) action enumerations, amenabilities
(minimum action counts), and declared neighborhoods for the causality
structure.  States are opaque hashable values owned by the instance.
"""

from __future__ import annotations

import abc
from typing import Any, Iterable, Iterator, Optional, Sequence

from .rng import fnv1a64

State = Any
FlawId = int


class ContractViolation(RuntimeError):
    """An instance broke its interface contract during a run."""

    def __init__(self, message: str, flaw: Optional[int] = None,
                 state_digest: Optional[int] = None):
        detail = message
        if flaw is not None:
            detail += f" (flaw={flaw}"
            if state_digest is not None:
                detail += f", state_digest={state_digest}"
            detail += ")"
        super().__init__(detail)
        self.flaw = flaw
        self.state_digest = state_digest


class FlawOrder:
    """A strict total order on flaw ids, possibly varying per step.

    The default instance orders flaws by id.  `rank` returns a sort key;
    the walk addresses the flaw of greatest rank among those eligible.
    """

    is_fixed: bool = True

    def rank(self, step_index: int, flaw: FlawId) -> int:
        return flaw

    def greatest(self, step_index: int, flaws: Iterable[FlawId]) -> FlawId:
        return max(flaws, key=lambda f: self.rank(step_index, f))

    def ranks_key(self) -> object:
        """Identity token used to compare fixed orders for equality."""
        return None

    def same_order(self, other: "FlawOrder") -> bool:
        return self.is_fixed and other.is_fixed and self.ranks_key() == other.ranks_key()


class PermutationOrder(FlawOrder):
    """Fixed order given explicitly: ranks[f] is the priority of flaw f."""

    def __init__(self, ranks: Sequence[int]):
        seen = sorted(ranks)
        if seen != list(range(len(ranks))):
            raise ValueError("ranks must be a permutation of 0..n-1")
        self._ranks = tuple(ranks)

    def rank(self, step_index: int, flaw: FlawId) -> int:
        return self._ranks[flaw]

    def ranks_key(self) -> object:
        return self._ranks


class StepOrderCycle(FlawOrder):
    """Multi-permutation mode: step i uses orders[(i - 1) % len(orders)]."""

    is_fixed = False

    def __init__(self, orders: Sequence[FlawOrder]):
        if not orders:
            raise ValueError("need at least one order")
        self._orders = tuple(orders)

    def rank(self, step_index: int, flaw: FlawId) -> int:
        return self._orders[(step_index - 1) % len(self._orders)].rank(step_index, flaw)


class Problem(abc.ABC):
    """Base class for problem instances.

    Contract highlights:
      - flaw ids are dense in [0, flaw_count) and stable for the instance;
      - for every state s and flaw f present in s, action_count(f, s) >= 1
        and the action set contains at least one state other than s;
      - amenability(f) <= action_count(f, s) for every s containing f;
      - flaws_present is a pure function of the state;
      - neighborhood(f) must contain every flaw that addressing f can
        introduce or preserve, in any state.
    """

    initial_state: State
    flaw_count: int
    log2_state_space: float

    @abc.abstractmethod
    def flaws_present(self, state: State) -> set[FlawId]:
        ...

    @abc.abstractmethod
    def action_count(self, flaw: FlawId, state: State) -> int:
        ...

    @abc.abstractmethod
    def apply_action(self, flaw: FlawId, state: State, k: int) -> State:
        ...

    @abc.abstractmethod
    def amenability(self, flaw: FlawId) -> int:
        ...

    @abc.abstractmethod
    def neighborhood(self, flaw: FlawId) -> set[FlawId]:
        ...

    @abc.abstractmethod
    def state_bytes(self, state: State) -> bytes:
        ...

    def state_digest(self, state: State) -> int:
        return fnv1a64(self.state_bytes(state))

    def flaw_ids(self) -> Iterator[FlawId]:
        return iter(range(self.flaw_count))

    def flaw_label(self, flaw: FlawId) -> str:
        return str(flaw)

    def in_neighborhood(self, flaw: FlawId, other: FlawId) -> bool:
        """Membership test for declared neighborhoods; override when the
        explicit set is expensive to materialize."""
        return other in self.neighborhood(flaw)

    def adjacent_in_g(self, f: FlawId, g: FlawId) -> bool:
        """Mutual-causality adjacency (the undirected restriction)."""
        if f == g:
            return False
        return self.in_neighborhood(f, g) and self.in_neighborhood(g, f)

    def condition_profile(self):
        """Closed-form per-class condition summary, or None.

        Large instances supply one so condition checkers avoid enumerating
        the flaw universe; see conditions.ConditionProfile.
        """
        return None

    def neighborhood_clique_cover(self, flaw: FlawId) -> Optional[list[list[FlawId]]]:
        """Partition of neighborhood(flaw) into cliques, when available."""
        return None

    def initial_independent_bound(self) -> Optional[int]:
        """Upper bound on the largest mutually non-adjacent subset of the
        initially present flaws, when cheaper than exact computation."""
        return None

    def validate_solution(self, state: State) -> Optional[str]:
        """Independent domain check: None if state is a valid solution,
        else a human-readable violation description.  Must not rely on
        flaws_present."""
        raise NotImplementedError
