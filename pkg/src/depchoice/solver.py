"""Dependency problems: a requirement formula plus a monotone cost on event sets."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .completion import BlLattice, Nucleus
from .formula import Formula, parse_formula
from .logic import UblLattice, model_set
from .order import bits
from .rdp import RdpLattice


class Unsatisfiable(ValueError):
    pass


class Objective:
    """Monotone map from event sets to non-negative numbers."""

    def __call__(self, events: frozenset) -> float:
        raise NotImplementedError

    def on_state(self, b: BlLattice, i: int) -> float:
        """Value of completion state ``i``; override for trace-sensitive costs."""
        return self(b.events_of(i))


@dataclass(frozen=True)
class Cardinality(Objective):
    def __call__(self, events: frozenset) -> float:
        return len(events)


@dataclass(frozen=True)
class WeightedSum(Objective):
    weights: Mapping[str, float] = field(default_factory=dict)
    default: float = 0.0

    def __post_init__(self):
        if self.default < 0 or any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be non-negative")

    def __call__(self, events: frozenset) -> float:
        return sum(self.weights.get(e, self.default) for e in events)

    def __hash__(self):
        return hash((tuple(sorted(self.weights.items())), self.default))


@dataclass(frozen=True)
class ConflictCount(Objective):
    pairs: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(frozenset(p) for p in self.pairs))
        if any(len(p) != 2 for p in self.pairs):
            raise ValueError("a conflict is a pair of distinct events")

    def __call__(self, events: frozenset) -> float:
        return sum(1 for p in self.pairs if p <= events)


@dataclass
class DependencyProblem:
    formula: Formula
    objective: Objective = field(default_factory=Cardinality)

    def __post_init__(self):
        if isinstance(self.formula, str):
            self.formula = parse_formula(self.formula)


@dataclass
class Solution:
    state: frozenset
    trace_state: int
    value: float
    all_optima: list[frozenset]


def _sort_key(events: Iterable[str]) -> list[str]:
    return sorted(events)


def minimal_models(b: BlLattice, f: Formula | str, n: Nucleus | None = None) -> list[int]:
    """Minimal completion states satisfying ``f``, as state-lattice indices."""
    u = UblLattice(b)
    if isinstance(f, str):
        f = parse_formula(f)
    m = model_set(u, f, n)
    Q = b.lattice
    return [q for q in bits(m) if Q.down[q] & m == 1 << q]


def solve(r: RdpLattice | None, b: BlLattice, p: DependencyProblem, n: Nucleus | None = None) -> Solution:
    """Cheapest minimal model; ties go to the lexicographically least event list.

    Monotonicity of the objective means only minimal models need scoring.
    """
    mins = minimal_models(b, p.formula, n)
    if not mins:
        raise Unsatisfiable("no reachable state satisfies the formula")
    scored = []
    for q in mins:
        events = b.events_of(q)
        if r is not None:
            assert events in r, "completion state projects outside the reachable lattice"
        scored.append((p.objective.on_state(b, q), _sort_key(events), q, events))
    best = min(v for v, *_ in scored)
    optima = sorted((s for s in scored if s[0] == best), key=lambda s: (s[1], s[2]))
    seen: list[frozenset] = []
    for _, _, _, ev in optima:
        if ev not in seen:
            seen.append(ev)
    _, _, q, events = optima[0]
    return Solution(events, q, best, seen)
