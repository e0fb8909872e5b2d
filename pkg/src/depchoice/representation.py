"""Recognize reachable-set lattices and rebuild a dependency structure from one.

Start from the choice-free structure on the join-irreducibles (each depends
on everything strictly below it), then merge every pair ``(a, b)`` that has
a witness ``x < a ∨ b`` with ``x ∨ a = x ∨ b = a ∨ b``.  Merged events keep
all of their alternatives.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .dsc import Dsc
from .order import (
    FiniteLattice,
    bits,
    element_name,
    find_isomorphism,
    find_m3,
    is_upper_semimodular,
    join_irreducible_indices,
)
from .rdp import DEFAULT_MAX_STATES, build_rdp


class NotInImage(ValueError):
    pass


@dataclass(frozen=True)
class QPairs:
    """Unordered pairs of join-irreducible indices, each with one witness index."""

    pairs: frozenset  # frozenset[frozenset[int]]
    witness: dict = field(default_factory=dict, compare=False, hash=False)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(tuple(sorted(p)) for p in self.pairs))


def compute_q(L: FiniteLattice) -> QPairs:
    ji = join_irreducible_indices(L)
    pairs = set()
    witness = {}
    for ia, a in enumerate(ji):
        for b in ji[ia + 1:]:
            j = L.join(a, b)
            for x in bits(L.down[j] & ~(1 << j)):
                if L.join(x, a) == j and L.join(x, b) == j:
                    key = frozenset((a, b))
                    pairs.add(key)
                    witness[key] = x
                    break
    return QPairs(frozenset(pairs), witness)


class _UnionFind:
    def __init__(self, names: Sequence[str]):
        self.parent = {n: n for n in names}

    def find(self, x: str) -> str:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb))
            self.parent[hi] = lo


def _event_names(L: FiniteLattice, ji: Sequence[int]) -> dict[int, str]:
    names = {i: element_name(L.elements[i]) for i in ji}
    if len(set(names.values())) != len(names):
        raise ValueError("join-irreducibles do not have distinct display names")
    return names


def uds(L: FiniteLattice, pair_order: Sequence[tuple[int, int]] | None = None) -> Dsc:
    """Dependency structure whose reachable-set lattice is ``L``.

    ``pair_order`` overrides the order in which Q-pairs are merged (the
    result does not depend on it).
    """
    if not is_upper_semimodular(L):
        raise NotInImage("lattice is not upper semimodular")
    if find_m3(L) is not None:
        raise NotInImage("lattice contains the diamond M3")
    ji = join_irreducible_indices(L)
    names = _event_names(L, ji)
    uf = _UnionFind(sorted(names.values()))
    pairs = list(pair_order) if pair_order is not None else list(compute_q(L))
    for a, b in pairs:
        uf.union(names[a], names[b])
    deps: dict[str, set[frozenset]] = {}
    for x in ji:
        below = frozenset(uf.find(names[y]) for y in ji if y != x and L.leq(y, x))
        deps.setdefault(uf.find(names[x]), set()).add(below)
    return Dsc(tuple(deps), {e: frozenset(s) for e, s in deps.items()})


@dataclass
class RoundtripReport:
    ok: bool
    size: int
    merged: dict[str, list[str]]  # representative -> all join-irreducible names merged into it
    renaming: dict[str, str]  # rebuilt event -> original event it stands for
    isomorphism: dict | None = None

    @property
    def identity_renaming(self) -> bool:
        return all(len(v) == 1 for v in self.merged.values()) and len(set(self.renaming.values())) == len(self.renaming)


def roundtrip_check(d: Dsc, max_states: int = DEFAULT_MAX_STATES) -> RoundtripReport:
    """Rebuild ``d`` from its reachable lattice and compare the lattices."""
    r = build_rdp(d, max_states)
    L = r.lattice
    d2 = uds(L)
    r2 = build_rdp(d2, max_states)
    iso = find_isomorphism(r2.lattice, L)
    ji = join_irreducible_indices(L)
    names = _event_names(L, ji)
    merged: dict[str, list[str]] = {e: [] for e in d2.events}
    renaming: dict[str, str] = {}
    uf = _UnionFind(sorted(names.values()))
    for a, b in compute_q(L):
        uf.union(names[a], names[b])
    for x in ji:
        rep = uf.find(names[x])
        merged[rep].append(names[x])
        (lower,) = bits(L.lower_covers[x])
        (ev,) = L.elements[x] - L.elements[lower]
        renaming.setdefault(rep, ev)
    for v in merged.values():
        v.sort()
    return RoundtripReport(iso is not None, L.n, merged, renaming, iso)
