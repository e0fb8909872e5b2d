"""Reachable dependency posets: the lattice of complete event sets of a DSC."""
from __future__ import annotations

from functools import cached_property

from .dsc import Dsc
from .order import CapExceeded, FiniteLattice, bits, popcount, subset_lattice

DEFAULT_MAX_STATES = 1 << 20


class NotAnElement(ValueError):
    pass


class RdpLattice:
    """Complete event sets of ``dsc`` ordered by inclusion.

    ``masks[i]`` is element ``i`` as a bitmask over ``dsc.events``; ``lattice``
    (built on first use) has ``frozenset`` elements in the same order.
    """

    def __init__(self, dsc: Dsc, masks: list[int]):
        self.dsc = dsc
        self.events = dsc.events
        self._bit = {e: 1 << k for k, e in enumerate(self.events)}
        self.masks = sorted(masks, key=lambda m: (popcount(m), [self.events[k] for k in bits(m)]))
        self._pos = {m: i for i, m in enumerate(self.masks)}
        self.sets = [self.to_set(m) for m in self.masks]

    def __len__(self):
        return len(self.masks)

    def __contains__(self, xs) -> bool:
        return self.to_mask(xs) in self._pos

    def to_mask(self, xs) -> int:
        m = 0
        for e in xs:
            m |= self._bit[e]
        return m

    def to_set(self, m: int) -> frozenset:
        return frozenset(self.events[k] for k in bits(m))

    @cached_property
    def lattice(self) -> FiniteLattice:
        return subset_lattice(self.masks, self.sets)

    def index(self, xs) -> int:
        m = self.to_mask(xs)
        if m not in self._pos:
            raise NotAnElement(f"{sorted(xs)} is not reachable")
        return self._pos[m]

    def interior(self, m: int) -> int:
        """Largest reachable subset of the event mask ``m``."""
        got = 0
        deps = self._dep_masks
        changed = True
        while changed:
            changed = False
            for k in bits(m & ~got):
                if any(s & ~got == 0 for s in deps[k]):
                    got |= 1 << k
                    changed = True
        return got

    @cached_property
    def _dep_masks(self) -> list[list[int]]:
        return [[self.to_mask(s) for s in self.dsc.deps[e]] for e in self.events]


def build_rdp(d: Dsc, max_states: int = DEFAULT_MAX_STATES) -> RdpLattice:
    """Enumerate complete event sets by single-event accretion from the empty set."""
    bit = {e: k for k, e in enumerate(d.events)}
    deps = [[sum(1 << bit[f] for f in s) for s in d.deps[e]] for e in d.events]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for k in range(len(d.events)):
                if x >> k & 1:
                    continue
                if any(s & ~x == 0 for s in deps[k]):
                    y = x | (1 << k)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > max_states:
                            raise CapExceeded(f"more than {max_states} reachable event sets")
        frontier = nxt
    return RdpLattice(d, list(seen))


def build_rdp_by_unions(d: Dsc, max_states: int = DEFAULT_MAX_STATES) -> RdpLattice:
    """Second construction: each dependency set plus its event, closed under unions, plus the empty set."""
    bit = {e: k for k, e in enumerate(d.events)}
    basis = {sum(1 << bit[f] for f in s) | (1 << bit[e]) for e in d.events for s in d.deps[e]}
    family = {0}
    for b in basis:
        family |= {x | b for x in family}
        if len(family) > max_states:
            raise CapExceeded(f"more than {max_states} reachable event sets")
    return RdpLattice(d, list(family))


def rdp_meet(r: RdpLattice, x, y) -> frozenset:
    """Greatest reachable event set inside ``x ∩ y``."""
    for s in (x, y):
        if s not in r:
            raise NotAnElement(f"{sorted(s)} is not reachable")
    return r.to_set(r.interior(r.to_mask(x) & r.to_mask(y)))
