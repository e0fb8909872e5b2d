"""Version parameterizations and the nuclei they induce."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .completion import BlLattice, Nucleus
from .dsc import PreDsc, UnknownEvent
from .order import FiniteLattice, FinitePoset, bits
from .rdp import RdpLattice


class InvalidVersionMap(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


class NotJoinPreserving(ValueError):
    pass


@dataclass(frozen=True)
class VersionMap:
    """Lower event -> higher event; identity on events not mentioned."""

    raise_: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "raise_", dict(sorted(self.raise_.items())))

    def __call__(self, e: str) -> str:
        return self.raise_.get(e, e)

    def __bool__(self):
        return bool(self.raise_)

    def __hash__(self):
        return hash(tuple(self.raise_.items()))

    def image(self, events) -> frozenset:
        return frozenset(self(e) for e in events)


@dataclass
class VersionReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_version_map(d: PreDsc, v: VersionMap) -> VersionReport:
    """Check idempotence and the substitution property on every dependency set."""
    rep = VersionReport()
    for lo, hi in v.raise_.items():
        for e in (lo, hi):
            if e not in d.deps:
                raise UnknownEvent(e, "version map")
        if lo == hi:
            continue
        if v(hi) != hi:
            rep.errors.append(f"not idempotent: {lo} -> {hi} -> {v(hi)}")
    for e in d.events:
        for s in sorted(d.deps[e], key=lambda s: (len(s), sorted(s))):
            if not any(v(x) != x for x in s):
                continue
            sub = v.image(s)
            if sub not in d.deps[e]:
                rep.errors.append(
                    f"substitution: {e} has {{{','.join(sorted(s))}}} but not {{{','.join(sorted(sub))}}}"
                )
    for lo, hi in v.raise_.items():
        if lo != hi and any(lo in s for s in d.deps[hi]):
            rep.warnings.append(f"higher version {hi} may depend on its lower version {lo}")
    return rep


@dataclass
class Ponucleus:
    """Endofunction on a finite poset, by index."""

    carrier: FinitePoset
    mapping: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.mapping) if i == j]

    def violations(self, laws: Sequence[str] = ("monotone", "idempotent", "meets", "joins")) -> list[tuple[str, tuple]]:
        """Failures of the listed laws; meets/joins only where they exist."""
        P, j = self.carrier, self.mapping
        out = []
        for i in range(P.n):
            if "idempotent" in laws and j[j[i]] != j[i]:
                out.append(("idempotent", (i,)))
            if "inflationary" in laws and not P.leq(i, j[i]):
                out.append(("inflationary", (i,)))
        for a in range(P.n):
            for b in range(a + 1, P.n):
                pair = (1 << a) | (1 << b)
                if "monotone" in laws:
                    if (P.leq(a, b) and not P.leq(j[a], j[b])) or (P.leq(b, a) and not P.leq(j[b], j[a])):
                        out.append(("monotone", (a, b)))
                if "meets" in laws:
                    m = P.infimum(pair)
                    if m is not None and P.infimum((1 << j[a]) | (1 << j[b])) != j[m]:
                        out.append(("meets", (a, b)))
                if "joins" in laws:
                    s = P.supremum(pair)
                    if s is not None and P.supremum((1 << j[a]) | (1 << j[b])) != j[s]:
                        out.append(("joins", (a, b)))
        return out

    def preserves_joins(self) -> bool:
        return not self.violations(("joins",))


def induced_pvp(r: RdpLattice, v: VersionMap) -> Ponucleus:
    """Contract reachable sets that differ only in versions to their union.

    ``X`` goes to the union of all reachable ``Y`` with ``v[Y] == v[X]``,
    which is the largest reachable subset of the events whose version class
    ``X`` touches.
    """
    rep = validate_version_map(r.dsc, v)
    if not rep.ok:
        raise InvalidVersionMap(rep.errors)
    cls_mask: dict[str, int] = {}
    for k, e in enumerate(r.events):
        cls_mask[v(e)] = cls_mask.get(v(e), 0) | (1 << k)
    mapping = []
    for m in r.masks:
        sat = 0
        for k in bits(m):
            sat |= cls_mask[v(r.events[k])]
        mapping.append(r.index(r.to_set(r.interior(sat))))
    return Ponucleus(r.lattice, tuple(mapping))


def lift_to_bl(b: BlLattice, p: Ponucleus) -> tuple[int, ...]:
    """Functorial lift of a poset map to the completion, by index.

    A downset of join-irreducibles goes to the join of the embedded images of
    its members.
    """
    L = b.lattice
    P = b.source
    if p.carrier is not P and p.carrier.elements != P.elements:
        raise ValueError("ponucleus is not on this completion's source")
    ji_pos = [P.index(x) for x in b.ji.elements]
    image = [L.sets[b.embedding[P.elements[p(i)]]] for i in ji_pos]
    out = []
    for s in L.sets:
        m = 0
        for k in bits(s):
            m |= image[k]
        out.append(L.of_set(m))
    return tuple(out)


def lift_nucleus_bl(b: BlLattice, p: Ponucleus) -> Nucleus:
    """Lift a join-preserving ponucleus on ``b.source`` to ``b.lattice``.

    Inflationary and idempotent whenever ``p`` is; meet preservation is not
    guaranteed (check with ``Nucleus.violations``).
    """
    if not p.preserves_joins():
        raise NotJoinPreserving("ponucleus does not preserve existing joins")
    return Nucleus(b.lattice, lift_to_bl(b, p))


def nucleus_quotient(n: Nucleus) -> tuple[FiniteLattice, dict[int, int]]:
    """Lattice of fixed points and the surjection ``i -> position of n(i)``."""
    L = n.carrier
    fixed = n.fixed_points()
    Q = L.subposet(fixed)
    quotient = FiniteLattice(Q.elements, Q.up)
    pos = {i: k for k, i in enumerate(fixed)}
    return quotient, {i: pos[n(i)] for i in range(L.n)}
