"""Dependency structures with choice: validation and completion.

An event maps to a collection of alternative dependency sets, read as a
formula in disjunctive normal form.  ``{}`` as a dependency set means the
event has no prerequisites.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

DEFAULT_MAX_SETS = 4096

DepSets = frozenset  # frozenset[frozenset[str]]


class UnknownEvent(KeyError):
    def __init__(self, name: str, where: str = ""):
        self.name = name
        super().__init__(f"unknown event {name!r}" + (f" in {where}" if where else ""))


class Exploded(RuntimeError):
    """Transitive completion produced more dependency sets than allowed."""


class InvalidDsc(ValueError):
    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


def _sorted_sets(sets: Iterable[frozenset]) -> list[frozenset]:
    return sorted(sets, key=lambda s: (len(s), sorted(s)))


@dataclass(frozen=True)
class PreDsc:
    events: tuple[str, ...]
    deps: Mapping[str, frozenset]

    def __post_init__(self):
        events = tuple(sorted(set(self.events)))
        if len(events) != len(self.events):
            raise ValueError("duplicate event names")
        deps = {}
        for e, sets in self.deps.items():
            if e not in events:
                raise UnknownEvent(e, "dependency map")
            deps[e] = frozenset(frozenset(s) for s in sets)
        for e in events:
            if e not in deps:
                raise ValueError(f"no dependency sets given for {e!r}")
            for s in deps[e]:
                for f in s:
                    if f not in events:
                        raise UnknownEvent(f, f"dependencies of {e!r}")
        object.__setattr__(self, "events", events)
        object.__setattr__(self, "deps", deps)

    @classmethod
    def from_dict(cls, spec: Mapping[str, Iterable[Iterable[str]]]):
        """``{"a": [["b"], ["c"]], "b": [[]], "c": [[]]}``."""
        return cls(tuple(spec), {e: frozenset(frozenset(s) for s in alts) for e, alts in spec.items()})

    def to_dict(self) -> dict[str, list[list[str]]]:
        return {e: [sorted(s) for s in _sorted_sets(self.deps[e])] for e in self.events}

    def __eq__(self, other):
        if not isinstance(other, PreDsc):
            return NotImplemented
        return self.events == other.events and self.deps == other.deps

    def __hash__(self):
        return hash((self.events, frozenset(self.deps.items())))

    def __repr__(self):
        body = ", ".join(
            f"{e}: " + " | ".join("{" + ",".join(sorted(s)) + "}" for s in _sorted_sets(self.deps[e]))
            for e in self.events
        )
        return f"{type(self).__name__}({body})"

    def is_choice_free(self) -> bool:
        return all(len(v) == 1 for v in self.deps.values())


@dataclass(frozen=True)
class Violation:
    kind: str  # "incomplete", "self", "cycle", "empty"
    event: str
    depset: frozenset | None = None
    detail: str = ""

    def __str__(self):
        s = f"{self.kind}: {self.event}"
        if self.depset is not None:
            s += " {" + ",".join(sorted(self.depset)) + "}"
        return s + (f" ({self.detail})" if self.detail else "")


def is_complete_set(d: PreDsc, xs: frozenset) -> bool:
    """Every member has some dependency set inside ``xs``."""
    return all(any(s <= xs for s in d.deps[e]) for e in xs)


def accretion_closure(d: PreDsc, within: Iterable[str] | None = None) -> frozenset:
    """Events reachable from the empty set by adding one enabled event at a time."""
    allowed = set(d.events if within is None else within)
    got: set[str] = set()
    changed = True
    while changed:
        changed = False
        for e in d.events:
            if e in allowed and e not in got and any(s <= got for s in d.deps[e]):
                got.add(e)
                changed = True
    return frozenset(got)


def validate_dsc(d: PreDsc) -> list[Violation]:
    """Every violated DSC condition; the empty list means ``d`` is a DSC."""
    out = []
    for e in d.events:
        if not d.deps[e]:
            out.append(Violation("empty", e))
        for s in _sorted_sets(d.deps[e]):
            if e in s:
                out.append(Violation("self", e, s, "dependency set contains its own event"))
            elif not is_complete_set(d, s):
                missing = sorted(f for f in s if not any(t <= s for t in d.deps[f]))
                out.append(Violation("incomplete", e, s, "unsupported: " + ",".join(missing)))
    reach = accretion_closure(d)
    for e in d.events:
        if e not in reach:
            out.append(Violation("cycle", e, None, "not reachable by accretion from the empty set"))
    return out


class Dsc(PreDsc):
    """A validated dependency structure with choice."""

    def __post_init__(self):
        super().__post_init__()
        problems = validate_dsc(self)
        if problems:
            raise InvalidDsc(problems)

    @classmethod
    def empty(cls):
        return cls((), {})


def _expand(d: dict[str, frozenset], e: str, s: frozenset, cap: int) -> set[frozenset]:
    unmet = sorted(f for f in s if not any(t <= s for t in d[f]))
    if not unmet:
        return {s}
    choices = [_sorted_sets(d[f]) for f in unmet]
    out: set[frozenset] = set()
    for pick in itertools.product(*choices):
        out.add(s.union(*pick))
        if len(out) > cap:
            raise Exploded(f"more than {cap} dependency sets for {e!r}")
    return out


def complete_pre_dsc(d: PreDsc, max_sets: int = DEFAULT_MAX_SETS) -> Dsc:
    """Close dependency sets transitively, drop cyclic sets and dead events.

    Each incomplete dependency set is replaced by its one-step completions (one
    union per choice of dependency set for each unsupported member); sets that
    contain their own event are removed, then events left with no sets, and any
    set mentioning a removed event.  Repeats until nothing changes.  Complete
    sets are left as they are, so a DSC is a fixpoint.
    """
    deps = {e: frozenset(d.deps[e]) for e in d.events}
    while True:
        new: dict[str, frozenset] = {}
        for e in sorted(deps):
            sets: set[frozenset] = set()
            for s in _sorted_sets(deps[e]):
                sets |= _expand(deps, e, s, max_sets)
                if len(sets) > max_sets:
                    raise Exploded(f"more than {max_sets} dependency sets for {e!r}")
            new[e] = frozenset(s for s in sets if e not in s)
        while True:
            dead = {e for e, sets in new.items() if not sets}
            if not dead:
                break
            new = {e: frozenset(s for s in sets if not s & dead)
                   for e, sets in new.items() if e not in dead}
        if new == deps:
            break
        deps = new
    return Dsc(tuple(deps), deps)


@dataclass
class CompletionDelta:
    deleted_events: list[str] = field(default_factory=list)
    changed: dict[str, tuple[list[list[str]], list[list[str]]]] = field(default_factory=dict)

    @property
    def trivial(self) -> bool:
        return not self.deleted_events and not self.changed


def completion_delta(before: PreDsc, after: PreDsc) -> CompletionDelta:
    delta = CompletionDelta()
    delta.deleted_events = [e for e in before.events if e not in after.deps]
    for e in after.events:
        if before.deps[e] != after.deps[e]:
            delta.changed[e] = (before.to_dict()[e], after.to_dict()[e])
    return delta
