"""Convergence-condition checkers and step budgets.

Four criteria are supported.  Each produces a per-flaw (or per-flaw-class)
charge ratio theta; the walk converges when max theta < 1, with per-step
progress rate delta = 1 - max theta, entropy offset t0, and step budget
ceil((t0 + s) / delta) at failure probability 2^-s.

  symmetric   e * sum(1/A_g) over the neighborhood, no charges needed;
  asymmetric  (1/(mu_f A_f)) * prod(1 + mu_g) over the neighborhood;
  cluster     as asymmetric but summing only over neighborhood subsets
              that are independent in the mutual-causality graph;
  lefthanded  as asymmetric with a responsibility digraph's neighborhoods.

Instances may supply a closed-form per-class profile so that huge flaw
universes never need to be enumerated; otherwise the checkers walk the
declared structure flaw by flaw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .graphs import FlawGraphG, ResponsibilityDigraph
from .problem import Problem

E = math.e


class CapExceeded(RuntimeError):
    """Explicit enumeration would exceed the configured cap."""

    def __init__(self, flaw, size: int, cap: int):
        super().__init__(
            f"neighborhood of flaw {flaw} has size {size} > cap {cap} and no "
            f"closed form is available")
        self.flaw = flaw


@dataclass(frozen=True)
class ChargeVector:
    """Positive per-flaw charges, either an explicit map or one shared
    value."""

    values: Optional[Mapping[int, float]] = None
    uniform_value: Optional[float] = None

    def __post_init__(self):
        if (self.values is None) == (self.uniform_value is None):
            raise ValueError("provide exactly one of values / uniform_value")
        if self.uniform_value is not None and not self.uniform_value > 0:
            raise ValueError("charges must be strictly positive")
        if self.values is not None:
            for f, v in self.values.items():
                if not v > 0:
                    raise ValueError(f"charge for flaw {f} must be positive, got {v}")

    @classmethod
    def uniform(cls, value: float) -> "ChargeVector":
        return cls(uniform_value=value)

    @classmethod
    def of(cls, values: Mapping[int, float]) -> "ChargeVector":
        return cls(values=dict(values))

    @property
    def is_uniform(self) -> bool:
        return self.uniform_value is not None

    def mu(self, flaw: int) -> float:
        if self.uniform_value is not None:
            return self.uniform_value
        try:
            return self.values[flaw]
        except KeyError:
            raise KeyError(f"no charge supplied for flaw {flaw}") from None


@dataclass(frozen=True)
class ConditionReport:
    criterion: str  # symmetric | asymmetric | cluster | lefthanded
    theta: Dict
    delta: float
    t0: float
    holds: bool
    root_term: int

    def max_theta(self) -> float:
        return max(self.theta.values(), default=0.0)


@dataclass(frozen=True)
class FlawClassSummary:
    """Closed-form summary for one class of interchangeable flaws."""

    name: str
    amenability: int
    inv_amenability_sum: float  # upper bound on sum(1/A_g) over the neighborhood
    neighborhood_bound: int  # upper bound on the neighborhood size
    clique_sizes: Optional[Tuple[int, ...]] = None  # clique cover size bounds


@dataclass(frozen=True)
class ConditionProfile:
    classes: Tuple[FlawClassSummary, ...]


def step_budget(report: ConditionReport, s: int) -> int:
    """Steps sufficient for success probability >= 1 - 2^-s."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if not report.holds:
        raise ValueError("condition does not hold; no finite budget is certified")
    return math.ceil((report.t0 + s) / report.delta)


def _initial_flaws(problem: Problem) -> set:
    return set(problem.flaws_present(problem.initial_state))


def _amenability(problem: Problem, f: int) -> int:
    a = problem.amenability(f)
    if a < 1:
        raise ValueError(f"flaw {f} has non-positive amenability {a}")
    return a


def _report(criterion: str, theta: Dict, t0: float, root_term: int) -> ConditionReport:
    worst = max(theta.values(), default=0.0)
    delta = 1.0 - worst
    return ConditionReport(criterion=criterion, theta=theta, delta=delta,
                           t0=t0, holds=delta > 0.0, root_term=root_term)


def _ratio_t0(problem: Problem, root_term: int,
              max_mu_a: float, min_a: float) -> float:
    ratio = (max_mu_a / min_a) if min_a > 0 else 0.0
    return problem.log2_state_space + root_term * math.log2(1.0 + ratio)


def check_symmetric(problem: Problem, *, exact: bool = False) -> ConditionReport:
    """theta_f = e * sum over the neighborhood of 1/A_g; holds when every
    such sum stays below 1/e.  t0 specializes to log2|states| + |initial
    flaws| because the implied charges keep the charge/amenability ratio
    at most 1."""
    root = len(_initial_flaws(problem))
    t0 = problem.log2_state_space + root
    profile = None if exact else problem.condition_profile()
    theta: Dict = {}
    if profile is not None:
        for cls in profile.classes:
            if cls.amenability < 1:
                raise ValueError(f"class {cls.name} has non-positive amenability")
            theta[cls.name] = E * cls.inv_amenability_sum
    else:
        for f in problem.flaw_ids():
            theta[f] = E * sum(1.0 / _amenability(problem, g)
                               for g in problem.neighborhood(f))
    return _report("symmetric", theta, t0, root)


def check_asymmetric(problem: Problem, charges: ChargeVector, *,
                     exact: bool = False) -> ConditionReport:
    """theta_f = (1/(mu_f A_f)) * prod over the neighborhood of (1+mu_g)."""
    root = len(_initial_flaws(problem))
    profile = None if exact else problem.condition_profile()
    theta: Dict = {}
    if profile is not None:
        if not charges.is_uniform:
            raise ValueError(
                "per-flaw charges require exact=True (profiles are per-class)")
        mu = charges.uniform_value
        max_mu_a = 0.0
        min_a = math.inf
        for cls in profile.classes:
            a = cls.amenability
            theta[cls.name] = (1.0 + mu) ** cls.neighborhood_bound / (mu * a)
            max_mu_a = max(max_mu_a, mu * a)
            min_a = min(min_a, a)
        t0 = _ratio_t0(problem, root, max_mu_a, min_a if theta else 0.0)
        return _report("asymmetric", theta, t0, root)

    max_mu_a = 0.0
    min_a = math.inf
    for f in problem.flaw_ids():
        a = _amenability(problem, f)
        mu_f = charges.mu(f)
        prod = 1.0
        for g in problem.neighborhood(f):
            prod *= 1.0 + charges.mu(g)
        theta[f] = prod / (mu_f * a)
        max_mu_a = max(max_mu_a, mu_f * a)
        min_a = min(min_a, a)
    t0 = _ratio_t0(problem, root, max_mu_a, min_a if theta else 0.0)
    return _report("asymmetric", theta, t0, root)


def expand_asymmetric(problem: Problem, charges: ChargeVector,
                      cap: int = 20) -> Dict[int, float]:
    """Cross-validation oracle: the same charge ratios computed by explicit
    enumeration of every neighborhood subset (the empty subset contributes
    the empty product, 1)."""
    out: Dict[int, float] = {}
    for f in problem.flaw_ids():
        nbrs = sorted(problem.neighborhood(f))
        if len(nbrs) > cap:
            raise CapExceeded(f, len(nbrs), cap)
        mus = [charges.mu(g) for g in nbrs]
        total = 0.0
        for mask in range(1 << len(nbrs)):
            prod = 1.0
            m = mask
            i = 0
            while m:
                if m & 1:
                    prod *= mus[i]
                m >>= 1
                i += 1
            total += prod
        out[f] = total / (charges.mu(f) * _amenability(problem, f))
    return out


def _independent_sum(vertices: Sequence[int], adjacent: Callable[[int, int], bool],
                     mu_of: Callable[[int], float]) -> float:
    """Sum over all independent subsets of `vertices` of the product of
    charges (independence polynomial evaluated at the charges)."""
    vs = tuple(vertices)
    if not vs:
        return 1.0
    v, rest = vs[0], vs[1:]
    skip = _independent_sum(rest, adjacent, mu_of)
    compatible = tuple(u for u in rest if not adjacent(v, u))
    return skip + mu_of(v) * _independent_sum(compatible, adjacent, mu_of)


def _max_independent(vertices: Sequence[int],
                     adjacent: Callable[[int, int], bool]) -> int:
    vs = tuple(vertices)
    if not vs:
        return 0
    v, rest = vs[0], vs[1:]
    best = _max_independent(rest, adjacent)
    compatible = tuple(u for u in rest if not adjacent(v, u))
    return max(best, 1 + _max_independent(compatible, adjacent))


def _cluster_root_term(problem: Problem, initial: set, cap: int,
                       adjacent: Callable[[int, int], bool]) -> int:
    if len(initial) <= cap:
        return _max_independent(sorted(initial), adjacent)
    bound = problem.initial_independent_bound()
    return bound if bound is not None else len(initial)


def check_cluster(problem: Problem, charges: ChargeVector,
                  g: Optional[FlawGraphG] = None, *, cap: int = 20,
                  exact: bool = False) -> ConditionReport:
    """theta_f restricted to neighborhood subsets independent in the
    mutual-causality graph.  Small neighborhoods are enumerated exactly;
    larger ones need a clique cover, which yields the closed-form product
    of (1 + clique charge sums).  The root term is the largest independent
    subset of the initially present flaws (bounded, not exact, when they
    are too many)."""
    if g is not None:
        adjacent = g.has_edge
    else:
        adjacent = problem.adjacent_in_g
    initial = _initial_flaws(problem)
    profile = None if exact else problem.condition_profile()
    theta: Dict = {}
    if profile is not None:
        if not charges.is_uniform:
            raise ValueError(
                "per-flaw charges require exact=True (profiles are per-class)")
        mu = charges.uniform_value
        max_mu_a = 0.0
        min_a = math.inf
        for cls in profile.classes:
            if cls.clique_sizes is None:
                raise CapExceeded(cls.name, cls.neighborhood_bound, cap)
            a = cls.amenability
            total = 1.0
            for size in cls.clique_sizes:
                total *= 1.0 + mu * size
            theta[cls.name] = total / (mu * a)
            max_mu_a = max(max_mu_a, mu * a)
            min_a = min(min_a, a)
        root = _cluster_root_term(problem, initial, cap, adjacent)
        t0 = _ratio_t0(problem, root, max_mu_a, min_a if theta else 0.0)
        return _report("cluster", theta, t0, root)

    max_mu_a = 0.0
    min_a = math.inf
    for f in problem.flaw_ids():
        a = _amenability(problem, f)
        mu_f = charges.mu(f)
        nbrs = sorted(problem.neighborhood(f))
        if len(nbrs) <= cap:
            total = _independent_sum(nbrs, adjacent, charges.mu)
        else:
            cover = problem.neighborhood_clique_cover(f)
            if cover is None:
                raise CapExceeded(f, len(nbrs), cap)
            total = 1.0
            for clique in cover:
                total *= 1.0 + sum(charges.mu(h) for h in clique)
        theta[f] = total / (mu_f * a)
        max_mu_a = max(max_mu_a, mu_f * a)
        min_a = min(min_a, a)
    root = _cluster_root_term(problem, initial, cap, adjacent)
    t0 = _ratio_t0(problem, root, max_mu_a, min_a if theta else 0.0)
    return _report("cluster", theta, t0, root)


def check_lefthanded(problem: Problem, charges: ChargeVector,
                     responsibility: ResponsibilityDigraph) -> ConditionReport:
    """As asymmetric, with the responsibility digraph's neighborhoods in
    place of the declared causal neighborhoods.  Validate the digraph with
    structure.validate_responsibility first."""
    root = len(_initial_flaws(problem))
    theta: Dict = {}
    max_mu_a = 0.0
    min_a = math.inf
    for f in problem.flaw_ids():
        a = _amenability(problem, f)
        mu_f = charges.mu(f)
        prod = 1.0
        for g in responsibility.successors(f):
            prod *= 1.0 + charges.mu(g)
        theta[f] = prod / (mu_f * a)
        max_mu_a = max(max_mu_a, mu_f * a)
        min_a = min(min_a, a)
    t0 = _ratio_t0(problem, root, max_mu_a, min_a if theta else 0.0)
    return _report("lefthanded", theta, t0, root)


def symmetric_charge_vector(problem: Problem) -> ChargeVector:
    """Charges built from the amenability structure alone: with Z the lcm
    of all amenabilities and d the largest neighborhood sum of Z/A_g, each
    flaw gets Z/(d*A_f).  Whenever check_symmetric holds, check_asymmetric
    holds under these charges.  Neighborhood-free instances degenerate to
    2/A_f (any value above 1/A_f works there)."""
    flaws = list(problem.flaw_ids())
    amen = {f: _amenability(problem, f) for f in flaws}
    nbrs = {f: sorted(problem.neighborhood(f)) for f in flaws}
    if all(not n for n in nbrs.values()):
        return ChargeVector.of({f: 2.0 / amen[f] for f in flaws})
    z = math.lcm(*amen.values())
    d = max(sum(z // amen[g] for g in nbrs[f]) for f in flaws)
    if d == 0:
        d = 1
    return ChargeVector.of({f: float(Fraction(z, d * amen[f])) for f in flaws})


def search_uniform_mu(problem: Problem, criterion: str = "asymmetric", *,
                      lo: float = 1e-6, hi: float = 1e6, per_decade: int = 8,
                      g: Optional[FlawGraphG] = None,
                      responsibility: Optional[ResponsibilityDigraph] = None,
                      exact: bool = False) -> Optional[Tuple[float, ConditionReport]]:
    """Log-spaced grid search for a single shared charge value; returns the
    (mu, report) pair with the largest progress rate among holding points,
    or None when no grid point holds."""
    decades = math.log10(hi / lo)
    count = max(2, int(round(decades * per_decade)) + 1)
    best: Optional[Tuple[float, ConditionReport]] = None
    for i in range(count):
        mu = lo * 10 ** (i * decades / (count - 1))
        charges = ChargeVector.uniform(mu)
        if criterion == "asymmetric":
            report = check_asymmetric(problem, charges, exact=exact)
        elif criterion == "cluster":
            report = check_cluster(problem, charges, g, exact=exact)
        elif criterion == "lefthanded":
            if responsibility is None:
                raise ValueError("lefthanded search needs a responsibility digraph")
            report = check_lefthanded(problem, charges, responsibility)
        else:
            raise ValueError(f"unknown criterion {criterion!r}")
        if report.holds and (best is None or report.delta > best[1].delta):
            best = (mu, report)
    return best
