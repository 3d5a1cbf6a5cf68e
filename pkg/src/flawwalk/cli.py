"""Command-line front end: generate, check, solve, verify, stats.

Exit codes: 0 success (solve: sink reached and validated; check: condition
holds; verify: all checks pass), 1 usage/condition failures, 2 budget
exceeded, 3 instance contract violation.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import conditions, structure
from .apps import files as appfiles
from .apps.coloring import delta_plus_one_instance
from .apps.colorblind import colorblind_instance
from .apps.latin import LatinProblem, latin_instance
from .apps.matching import rainbow_matching_instance
from .conditions import ChargeVector, ConditionReport, step_budget, symmetric_charge_vector
from .graphs import responsibility_from_causality
from .problem import ContractViolation, FlawOrder, Problem
from .rng import fnv1a64
from .structure import StateCapExceeded
from .walks import WalkTrace, run_lefthanded, run_recursive, run_uniform

TRACE_MAGIC = "flawwalk-trace"
TRACE_VERSION = 1


# trace files

@dataclass(frozen=True)
class TraceFile:
    version: int
    app: str
    seed: int
    budget: int
    steps: Tuple[Tuple[int, int, int, int], ...]  # (step, flaw, action, digest)
    outcome: str
    final_digest: int

    @classmethod
    def from_trace(cls, app: str, trace: WalkTrace, problem: Problem) -> "TraceFile":
        return cls(
            version=TRACE_VERSION, app=app, seed=trace.seed, budget=trace.budget,
            steps=tuple((s.index, s.flaw, s.action_index, s.post_digest)
                        for s in trace.steps),
            outcome=trace.outcome,
            final_digest=problem.state_digest(trace.final_state))

    def serialize(self) -> str:
        lines = [f"{TRACE_MAGIC} {self.version} {self.app} {self.seed} {self.budget}"]
        lines += [f"{i} {f} {k} {d}" for (i, f, k, d) in self.steps]
        lines.append(f"{self.outcome} {self.final_digest}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "TraceFile":
        lines = text.splitlines()
        if not lines:
            raise ValueError("empty trace file")
        head = lines[0].split()
        if len(head) != 5 or head[0] != TRACE_MAGIC:
            raise ValueError("bad trace header")
        version, app = int(head[1]), head[2]
        seed, budget = int(head[3]), int(head[4])
        if not lines[1:]:
            raise ValueError("missing trace footer")
        foot = lines[-1].split()
        if len(foot) != 2 or foot[0] not in ("sink", "budget-exceeded"):
            raise ValueError("bad trace footer")
        steps = []
        for line in lines[1:-1]:
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"bad step line: {line!r}")
            steps.append(tuple(int(p) for p in parts))
        for want, (got, *_rest) in enumerate(steps, 1):
            if got != want:
                raise ValueError(f"step indices not contiguous at {got}")
        return cls(version=version, app=app, seed=seed, budget=budget,
                   steps=tuple(steps), outcome=foot[0], final_digest=int(foot[1]))


# run records

RECORD_FIELDS = ("app", "instance", "walk", "seed", "budget", "outcome",
                 "steps", "wall_ms")


def format_record(app: str, instance_digest: int, walk: str, trace: WalkTrace,
                  wall_ms: float) -> str:
    vals = {
        "app": app,
        "instance": f"{instance_digest:016x}",
        "walk": walk,
        "seed": str(trace.seed),
        "budget": str(trace.budget),
        "outcome": trace.outcome,
        "steps": str(len(trace.steps)),
        "wall_ms": f"{wall_ms:.3f}",
    }
    return "record " + " ".join(f"{k}={vals[k]}" for k in RECORD_FIELDS)


def parse_record(line: str) -> Optional[Dict[str, str]]:
    parts = line.strip().split()
    if not parts or parts[0] != "record":
        return None
    out: Dict[str, str] = {}
    for tok in parts[1:]:
        if "=" not in tok:
            return None
        k, v = tok.split("=", 1)
        out[k] = v
    if not all(k in out for k in RECORD_FIELDS):
        return None
    return out


# instance loading

def load_problem(app: str, path: str, q: Optional[int] = None) -> Tuple[Problem, int]:
    text = Path(path).read_text()
    digest = fnv1a64(text.encode())
    if app == "latin":
        return latin_instance(appfiles.parse_latin(text)), digest
    if app == "matching":
        return rainbow_matching_instance(appfiles.parse_matching(text)), digest
    if app == "coloring":
        graph = appfiles.parse_graph(text)
        return delta_plus_one_instance(graph, q if q else graph.max_degree() + 1), digest
    if app == "colorblind":
        return colorblind_instance(appfiles.parse_graph(text)), digest
    raise ValueError(f"unknown app {app!r}")


def default_criterion(app: str) -> str:
    return "cluster" if app == "latin" else "symmetric"


def resolve_charges(problem: Problem, mu_spec: Optional[str]) -> ChargeVector:
    if mu_spec is None:
        if isinstance(problem, LatinProblem):
            return ChargeVector.uniform(problem.default_uniform_mu())
        raise ValueError("this criterion needs --mu (theorem1|uniform:<v>|file:<p>)")
    if mu_spec == "theorem1":
        return symmetric_charge_vector(problem)
    if mu_spec.startswith("uniform:"):
        return ChargeVector.uniform(float(mu_spec.split(":", 1)[1]))
    if mu_spec.startswith("file:"):
        values = {}
        for line in Path(mu_spec.split(":", 1)[1]).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            f, v = line.split()
            values[int(f)] = float(v)
        return ChargeVector.of(values)
    raise ValueError(f"bad --mu value {mu_spec!r}")


def evaluate_condition(problem: Problem, criterion: str, mu_spec: Optional[str],
                       cap: int) -> ConditionReport:
    if criterion == "symmetric":
        return conditions.check_symmetric(problem)
    charges = resolve_charges(problem, mu_spec)
    if criterion == "asymmetric":
        return conditions.check_asymmetric(problem, charges)
    if criterion == "cluster":
        return conditions.check_cluster(problem, charges, cap=cap)
    if criterion == "lefthanded":
        if problem.flaw_count > 50000:
            raise ValueError("lefthanded checking needs an enumerable flaw universe")
        c = structure.declared_causality(problem)
        return conditions.check_lefthanded(problem, charges,
                                           responsibility_from_causality(c))
    raise ValueError(f"unknown criterion {criterion!r}")


# subcommands

def cmd_generate(args) -> int:
    if args.app == "latin":
        if args.n is None or args.delta is None:
            raise ValueError("latin generation needs --n and --delta")
        matrix = appfiles.generate_latin(args.n, args.delta, args.seed)
        bound = (27 * args.n) // 256
        if args.delta > bound:
            print(f"note: multiplicity {args.delta} exceeds {bound} = "
                  f"floor(27n/256); the cluster condition will not hold",
                  file=sys.stderr)
        text = appfiles.write_latin(matrix)
    elif args.app == "matching":
        if args.n is None or args.q is None:
            raise ValueError("matching generation needs --n (vertices) and --q")
        text = appfiles.write_matching(appfiles.generate_matching(args.n, args.q, args.seed))
    elif args.app in ("coloring", "colorblind"):
        if args.n is None or args.edges is None:
            raise ValueError("graph generation needs --n and --edges")
        text = appfiles.write_graph(appfiles.generate_graph(args.n, args.edges, args.seed))
    else:
        raise ValueError(f"unknown app {args.app!r}")
    Path(args.out).write_text(text)
    print(f"wrote {args.out} digest={fnv1a64(text.encode()):016x}")
    return 0


def cmd_check(args) -> int:
    problem, _ = load_problem(args.app, args.instance, args.q)
    report = evaluate_condition(problem, args.criterion, args.mu, args.cap)
    for key in sorted(report.theta, key=str):
        print(f"class={key} theta={report.theta[key]:.9g}")
    budgets = {}
    for s in (20, 40):
        budgets[s] = step_budget(report, s) if report.holds else "-"
    print(f"criterion={report.criterion} delta={report.delta:.9g} "
          f"t0={report.t0:.6f} root_term={report.root_term} "
          f"budget_s20={budgets[20]} budget_s40={budgets[40]} "
          f"holds={'true' if report.holds else 'false'}")
    return 0 if report.holds else 1


def cmd_solve(args) -> int:
    problem, digest = load_problem(args.app, args.instance, args.q)
    if args.budget is not None:
        if not args.force:
            raise ValueError("--budget requires --force")
        budget = args.budget
    else:
        report = evaluate_condition(problem, args.criterion or
                                    default_criterion(args.app), args.mu, args.cap)
        if not report.holds:
            print("condition does not hold; re-run with --force and --budget",
                  file=sys.stderr)
            return 1
        budget = step_budget(report, args.s)

    started = time.perf_counter()
    order = FlawOrder()
    if args.walk == "uniform":
        trace = run_uniform(problem, order, budget, args.seed)
    elif args.walk == "recursive":
        trace, _forest = run_recursive(problem, order, budget, args.seed)
    elif args.walk == "lefthanded":
        trace, _forest = run_lefthanded(problem, order, None, budget, args.seed)
    else:
        raise ValueError(f"unknown walk {args.walk!r}")
    wall_ms = (time.perf_counter() - started) * 1000.0

    if trace.sink:
        violation = problem.validate_solution(trace.final_state)
        if violation is not None:
            print(f"sink failed domain validation: {violation}", file=sys.stderr)
            return 3

    if args.trace:
        Path(args.trace).write_text(
            TraceFile.from_trace(args.app, trace, problem).serialize())
    print(format_record(args.app, digest, args.walk, trace, wall_ms))
    return 0 if trace.sink else 2


def cmd_verify(args) -> int:
    problem, _ = load_problem(args.app, args.instance, args.q)
    selected = args.checks.split(",") if args.checks else [
        "atomicity", "causality", "reconstruction", "responsibility"]
    ok = True

    try:
        digraph = structure.enumerate_digraph(problem, state_cap=args.cap)
    except StateCapExceeded as exc:
        print(f"enumeration failed: {exc}", file=sys.stderr)
        return 1
    print(f"enumerated states={len(digraph.states)} arcs={len(digraph.arcs)}")

    if "atomicity" in selected:
        violation = structure.verify_atomicity(digraph)
        if violation is None:
            print("atomicity pass")
        else:
            ok = False
            print(f"atomicity fail: {violation.describe(problem)}")

    derived = structure.derive_causality(digraph)
    if "causality" in selected:
        missing = structure.check_declared_covers_derived(problem, derived)
        if not missing:
            print("causality-containment pass")
        else:
            ok = False
            f, g = missing[0]
            print(f"causality-containment fail: derived arc "
                  f"{problem.flaw_label(f)} -> {problem.flaw_label(g)} "
                  f"is not declared")

    if "reconstruction" in selected:
        bad = 0
        runs = 0
        for seed in range(args.samples):
            trace = run_uniform(problem, FlawOrder(), budget=30,
                                seed=args.seed + seed, keep_states=True)
            runs += 1
            try:
                rebuilt = structure.reconstruct_trajectory(
                    trace.witness, trace.final_state, digraph)
            except structure.ReconstructionError:
                bad += 1
                continue
            if rebuilt != trace.states:
                bad += 1
        if bad == 0:
            print(f"reconstruction pass ({runs} traces)")
        else:
            ok = False
            print(f"reconstruction fail: {bad}/{runs} traces did not round-trip")

    if "responsibility" in selected:
        r = responsibility_from_causality(derived)
        violation = structure.validate_responsibility(r, derived)
        if violation is None:
            print("responsibility pass")
        else:
            ok = False
            print(f"responsibility fail: clause {violation.clause}: {violation.detail}")

    return 0 if ok else 1


def _quantile(sorted_vals: Sequence[float], q: float) -> float:
    if not sorted_vals:
        return math.nan
    pos = q * (len(sorted_vals) - 1)
    lo = int(math.floor(pos))
    hi = int(math.ceil(pos))
    if lo == hi:
        return sorted_vals[lo]
    frac = pos - lo
    return sorted_vals[lo] * (1 - frac) + sorted_vals[hi] * frac


def cmd_stats(args) -> int:
    groups: Dict[Tuple[str, str, str, str], List[Dict[str, str]]] = {}
    total = 0
    for path in args.records:
        for line in Path(path).read_text().splitlines():
            rec = parse_record(line)
            if rec is None:
                continue
            total += 1
            key = (rec["app"], rec["instance"], rec["walk"], rec["budget"])
            groups.setdefault(key, []).append(rec)
    if total == 0:
        print("no records found", file=sys.stderr)
        return 1
    print("app instance walk budget runs success_rate "
          "steps_min steps_median steps_p90 steps_max max_over_budget")
    for key in sorted(groups):
        app, inst, walk, budget = key
        recs = groups[key]
        steps = sorted(int(r["steps"]) for r in recs)
        sinks = sum(1 for r in recs if r["outcome"] == "sink")
        ratio = steps[-1] / int(budget) if int(budget) else math.nan
        print(f"{app} {inst} {walk} {budget} {len(recs)} "
              f"{sinks / len(recs):.3f} {steps[0]} "
              f"{_quantile(steps, 0.5):.1f} {_quantile(steps, 0.9):.1f} "
              f"{steps[-1]} {ratio:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flawwalk",
        description="Find flaw-free combinatorial objects by focused random walks")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_q=True):
        p.add_argument("--app", required=True,
                       choices=("latin", "matching", "coloring", "colorblind"))
        if with_q:
            p.add_argument("--q", type=int, default=None,
                           help="color count for the coloring app (default: max degree + 1)")

    gen = sub.add_parser("generate", help="write a random instance file")
    add_common(gen, with_q=False)
    gen.add_argument("--n", type=int, help="matrix size / vertex count")
    gen.add_argument("--delta", type=int, help="latin color multiplicity bound")
    gen.add_argument("--q", type=int, help="matching per-color multiplicity bound")
    gen.add_argument("--edges", type=int, help="edge count for graph instances")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_generate)

    chk = sub.add_parser("check", help="evaluate a convergence condition")
    chk.add_argument("instance")
    add_common(chk)
    chk.add_argument("--criterion", default=None,
                     choices=("symmetric", "asymmetric", "cluster", "lefthanded"))
    chk.add_argument("--mu", default=None,
                     help="theorem1 | uniform:<value> | file:<path>")
    chk.add_argument("--cap", type=int, default=20)
    chk.set_defaults(func=lambda a: cmd_check(_fill_criterion(a)))

    sol = sub.add_parser("solve", help="run a walk until flawless or budget")
    sol.add_argument("instance")
    add_common(sol)
    sol.add_argument("--walk", default="uniform",
                     choices=("uniform", "recursive", "lefthanded"))
    sol.add_argument("--seed", type=int, default=0)
    sol.add_argument("--s", type=int, default=20,
                     help="failure-probability exponent (budget certifies 1-2^-s)")
    sol.add_argument("--budget", type=int, default=None)
    sol.add_argument("--force", action="store_true",
                     help="run even when no condition holds (needs --budget)")
    sol.add_argument("--criterion", default=None,
                     choices=("symmetric", "asymmetric", "cluster", "lefthanded"))
    sol.add_argument("--mu", default=None)
    sol.add_argument("--trace", default=None, help="write the step trace here")
    sol.add_argument("--cap", type=int, default=20)
    sol.set_defaults(func=cmd_solve)

    ver = sub.add_parser("verify", help="brute-force structural checks")
    ver.add_argument("instance")
    add_common(ver)
    ver.add_argument("--checks", default=None,
                     help="comma list: atomicity,causality,reconstruction,responsibility")
    ver.add_argument("--cap", type=int, default=2000)
    ver.add_argument("--samples", type=int, default=25)
    ver.add_argument("--seed", type=int, default=0)
    ver.set_defaults(func=cmd_verify)

    sta = sub.add_parser("stats", help="summarize solve records")
    sta.add_argument("records", nargs="+")
    sta.set_defaults(func=cmd_stats)
    return parser


def _fill_criterion(args):
    if args.criterion is None:
        args.criterion = default_criterion(args.app)
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ContractViolation as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 3
    except (ValueError, appfiles.InstanceFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
