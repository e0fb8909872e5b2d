"""Bruns-Lakser completion, trace labels and Merkle digests, nuclei.

For a finite poset the completion is the lattice of downsets of its
join-irreducible elements.  When the source is a reachable dependency poset
each join-irreducible is an event together with the trace that enabled it
(``a_b`` vs ``a_c``).
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from typing import Hashable, Sequence

from .order import (
    DownsetLattice,
    FiniteLattice,
    FinitePoset,
    bits,
    downsets,
    element_name,
    is_distributive,
    join_irreducible_indices,
)
from .rdp import RdpLattice


class NotDistributive(ValueError):
    pass


class DigestCollision(RuntimeError):
    pass


@dataclass(frozen=True)
class TraceLabel:
    event: str
    trace: frozenset  # the join-irreducible reachable set this label names
    name: str
    digest: bytes | None = None

    @property
    def below(self) -> frozenset:
        """Events of the trace other than the label's own event."""
        return self.trace - {self.event}


@dataclass
class BlLattice:
    source: FinitePoset
    ji: FinitePoset  # join-irreducibles of source, induced order
    lattice: DownsetLattice  # downsets of ji
    embedding: dict  # source element -> lattice index
    labels: dict | None = None  # ji element -> TraceLabel

    def name(self, i: int) -> str:
        """Display name of lattice element ``i`` (its maximal labels)."""
        s = self.lattice.sets[i]
        if not s:
            return "{}"
        tops = [k for k in bits(s) if self.ji.up[k] & s == 1 << k]
        names = sorted(self.label_name(self.ji.elements[k]) for k in tops)
        return " ".join(names) if any(len(n) > 1 for n in names) else "".join(names)

    def label_name(self, x: Hashable) -> str:
        if self.labels is not None:
            return self.labels[x].name
        return element_name(x)

    def events_of(self, i: int) -> frozenset:
        """Underlying event set of a lattice element (union of its traces)."""
        out: frozenset = frozenset()
        for k in bits(self.lattice.sets[i]):
            x = self.ji.elements[k]
            out |= x if isinstance(x, frozenset) else {x}
        return out


def _trace_labels(r: RdpLattice, ji: FinitePoset) -> dict:
    P = r.lattice
    new_event = {}
    for x in ji.elements:
        i = P.index(x)
        (lower,) = bits(P.lower_covers[i])
        (e,) = x - P.elements[lower]
        new_event[x] = e
    variants: dict[str, int] = {}
    for e in new_event.values():
        variants[e] = variants.get(e, 0) + 1
    labels = {}
    for x, e in new_event.items():
        if variants[e] == 1:
            name = e
        else:
            name = e + "_" + element_name(x - {e})
        labels[x] = TraceLabel(e, x, name)
    return labels


def bl_completion(source: FinitePoset | RdpLattice) -> BlLattice:
    """Downsets of the join-irreducibles, with the embedding of ``source``.

    An ``RdpLattice`` source also gets trace labels on its join-irreducibles.
    """
    rdp = source if isinstance(source, RdpLattice) else None
    P = rdp.lattice if rdp is not None else source
    ji_idx = join_irreducible_indices(P)
    ji = P.subposet(ji_idx)
    L = downsets(ji)
    embedding = {}
    for i, x in enumerate(P.elements):
        m = 0
        for k, j in enumerate(ji_idx):
            if P.leq(j, i):
                m |= 1 << k
        embedding[x] = L.of_set(m)
    labels = _trace_labels(rdp, ji) if rdp is not None else None
    return BlLattice(P, ji, L, embedding, labels)


def _digest(name: str, children: Sequence[bytes]) -> bytes:
    raw = name.encode("utf-8")
    h = hashlib.sha256()
    h.update(len(raw).to_bytes(4, "big"))
    h.update(raw)
    for c in sorted(children):
        h.update(c)
    return h.digest()


def merkle_digest(b: BlLattice) -> BlLattice:
    """Fill label digests bottom-up over the join-irreducible poset.

    ``digest = SHA-256(len(event) as 4-byte big-endian || event || sorted
    digests of the label's lower covers)``.
    """
    if b.labels is None:
        raise ValueError("completion has no trace labels")
    ji = b.ji
    digests: dict[int, bytes] = {}
    for k in ji.linear_extension():
        label = b.labels[ji.elements[k]]
        digests[k] = _digest(label.event, [digests[c] for c in bits(ji.lower_covers[k])])
    seen: dict[bytes, Hashable] = {}
    labels = {}
    for k, x in enumerate(ji.elements):
        d = digests[k]
        if d in seen:
            raise DigestCollision(f"{b.labels[x].name} and {b.labels[seen[d]].name}")
        seen[d] = x
        labels[x] = replace(b.labels[x], digest=d)
    return replace(b, labels=labels)


# ---------------------------------------------------------------------------
# nuclei


@dataclass(frozen=True)
class NucleusViolation:
    law: str
    elements: tuple

    def __str__(self):
        return f"{self.law} fails at {self.elements}"


@dataclass
class Nucleus:
    """An endofunction on a finite lattice, by index; see :meth:`violations`."""

    carrier: FiniteLattice
    mapping: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.mapping) if i == j]

    def violations(self, laws: Sequence[str] = ("monotone", "inflationary", "idempotent", "meets")) -> list[NucleusViolation]:
        L, j = self.carrier, self.mapping
        out = []
        for i in range(L.n):
            if "inflationary" in laws and not L.leq(i, j[i]):
                out.append(NucleusViolation("inflationary", (i,)))
            if "idempotent" in laws and j[j[i]] != j[i]:
                out.append(NucleusViolation("idempotent", (i,)))
        for a in range(L.n):
            for b in range(a + 1, L.n):
                if "monotone" in laws and L.leq(a, b) and not L.leq(j[a], j[b]):
                    out.append(NucleusViolation("monotone", (a, b)))
                if "meets" in laws and j[L.meet(a, b)] != L.meet(j[a], j[b]):
                    out.append(NucleusViolation("meets", (a, b)))
                if "joins" in laws and j[L.join(a, b)] != L.join(j[a], j[b]):
                    out.append(NucleusViolation("joins", (a, b)))
        return out

    def is_nucleus(self) -> bool:
        return not self.violations()

    def preserves_joins(self) -> bool:
        return not self.violations(("joins",))


def closure_from_fixed(L: FiniteLattice, fixed) -> tuple[int, ...]:
    """Map each element to the meet of the fixed elements above it.

    ``fixed`` is a mask or an iterable of indices.
    """
    if not isinstance(fixed, int):
        fixed = L.mask(fixed)
    return tuple(L.meet_all(bits(L.up[i] & fixed)) for i in range(L.n))


def double_basis(L: FiniteLattice) -> list[int]:
    """Lattice indices of the join-irreducibles of the poset of join-irreducibles.

    Minimal elements of that poset are kept even when there is only one: it is
    a non-bottom element of ``L``, not an empty join there.
    """
    ji_idx = join_irreducible_indices(L)
    J = L.subposet(ji_idx)
    out = []
    for k, i in enumerate(ji_idx):
        strict = J.down[k] & ~(1 << k)
        if not strict or J.supremum(strict) != k:
            out.append(i)
    return out


def bl_generators(L: FiniteLattice) -> list[int]:
    """Elements the topology must fix: the double basis, all its joins (bottom
    included) and all meets of those (top included)."""
    basis = double_basis(L)
    joins = {L.bottom}
    for x in basis:
        joins |= {L.join(x, y) for y in joins}
    fixed = {L.top} | joins
    frontier = set(fixed)
    while frontier:
        new = {L.meet(x, y) for x in frontier for y in fixed} - fixed
        fixed |= new
        frontier = new
    return sorted(fixed)


def nucleus_closure(L: FiniteLattice, generators) -> set[int]:
    """Smallest fixed-point set of a nucleus containing ``generators``.

    On a finite Heyting algebra these are exactly the subsets closed under
    meets and under ``x -> f`` for every ``x`` and every member ``f``.
    """
    fixed = set(generators) | {L.top}
    frontier = set(fixed)
    while frontier:
        new = set()
        for f in frontier:
            new |= {L.implies(x, f) for x in range(L.n)}
            new |= {L.meet(f, g) for g in fixed}
        frontier = new - fixed
        fixed |= frontier
    return fixed


def bl_topology(L: FiniteLattice) -> Nucleus:
    """The Bruns-Lakser topology on a finite distributive lattice.

    The generators from :func:`bl_generators` are not always the fixed set of
    a meet-preserving map (on the downsets of S7 they are not), so the result
    is the nucleus with the fewest fixed points among those fixing all of
    them.  ``closure_from_fixed(L, bl_generators(L))`` gives the raw closure.
    """
    if not is_distributive(L):
        raise NotDistributive("Bruns-Lakser topology needs a distributive lattice")
    fixed = nucleus_closure(L, bl_generators(L))
    return Nucleus(L, closure_from_fixed(L, fixed))
