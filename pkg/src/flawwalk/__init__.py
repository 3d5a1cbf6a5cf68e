"""flawwalk: focused random walks that repair flawed combinatorial states.

Plug a problem in by subclassing `Problem` (a flaw detector, per-flaw
action enumerations, amenabilities, and declared causal neighborhoods),
then drive it with one of three walks.  Convergence-condition checkers
certify step budgets before running; structural verifiers check the
declared structure against brute-force enumeration on small instances.
"""

from .conditions import (
    CapExceeded,
    ChargeVector,
    ConditionProfile,
    ConditionReport,
    FlawClassSummary,
    check_asymmetric,
    check_cluster,
    check_lefthanded,
    check_symmetric,
    expand_asymmetric,
    search_uniform_mu,
    step_budget,
    symmetric_charge_vector,
)
from .explicit import ExplicitProblem
from .forests import BreakSequence, ForestError, WitnessForest, break_forest, break_sequence, forest_to_witness
from .graphs import (
    CausalityDigraph,
    FlawGraphG,
    ResponsibilityDigraph,
    build_g,
    responsibility_from_causality,
)
from .problem import ContractViolation, FlawOrder, PermutationOrder, Problem, StepOrderCycle
from .rng import CounterRng, fnv1a64, splitmix64
from .structure import (
    AtomicityViolation,
    ExplicitDigraph,
    ReconstructionError,
    ResponsibilityViolation,
    StateCapExceeded,
    check_declared_covers_derived,
    declared_causality,
    derive_causality,
    enumerate_digraph,
    observed_causality,
    reconstruct_trajectory,
    scc_schedule,
    validate_responsibility,
    verify_atomicity,
)
from .walks import Step, WalkTrace, run_lefthanded, run_recursive, run_uniform

__version__ = "0.1.0"
