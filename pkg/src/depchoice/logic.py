"""The requirement lattice over a completion, formula evaluation and the ◇ modality.

A requirement is identified with the set of completion states that satisfy
it, an up-set of the state lattice ``Q``.  Its irredundant normal form lists
the minimal satisfying states as clauses, each a downset of join-irreducibles.

Two orders are in play:

* model order (inclusion of satisfying sets) drives :func:`eval_formula`:
  ``&`` intersects, ``|`` unions, ``->`` is the Heyting implication;
* requirement order (``x <= y`` iff ``y`` is at least as strong as ``x``)
  is the order of :attr:`UblLattice.lattice`: ``true`` is the bottom,
  ``false`` the top, join is conjunction and meet is disjunction.

The materialized lattice stores each requirement by its *non-model* set,
a downset of ``Q``, so that inclusion of those sets is the requirement
order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .completion import BlLattice, Nucleus
from .formula import And, Atom, Const, Formula, Imp, Modal, Or, parse_formula
from .order import CapExceeded, DownsetLattice, FinitePoset, bits, downsets, element_name
from .versioning import Ponucleus, lift_nucleus_bl

DEFAULT_MAX_UBL = 20_000
MAX_ENUM_MAXIMAL = 6


class UnknownAtom(KeyError):
    def __init__(self, atom: Atom):
        self.atom = atom
        super().__init__(f"no join-irreducible matches {atom.event}" + (f"[{','.join(atom.trace)}]" if atom.trace else ""))


class ModalWithoutNucleus(ValueError):
    pass


@dataclass(frozen=True, order=True)
class UblElement:
    """Irredundant DNF: each clause is a downset mask over the generators."""

    clauses: tuple[int, ...]

    @property
    def is_true(self) -> bool:
        return self.clauses == (0,)

    @property
    def is_false(self) -> bool:
        return not self.clauses


class UblLattice:
    """Requirements over the join-irreducibles of a completion (or any poset).

    ``states`` is the lattice of downsets of the generators.  Nothing larger
    is built until :attr:`lattice` is first used.
    """

    def __init__(self, base: BlLattice | FinitePoset, max_elements: int = DEFAULT_MAX_UBL):
        if isinstance(base, BlLattice):
            self.bl: BlLattice | None = base
            self.generators = base.ji
            self.states: DownsetLattice = base.lattice
        else:
            self.bl = None
            self.generators = base
            self.states = downsets(base)
        self.max_elements = max_elements
        Q = self.states
        self._full = (1 << Q.n) - 1
        self._by_gen = {s: i for i, s in enumerate(Q.sets)}

    # -- model sets -----------------------------------------------------

    def up_interior(self, mask: int) -> int:
        """Largest up-set of states inside ``mask``."""
        Q = self.states
        out = 0
        for q in bits(mask):
            if Q.up[q] & ~mask == 0:
                out |= 1 << q
        return out

    def models(self, x: UblElement) -> int:
        m = 0
        for c in x.clauses:
            m |= self.states.up[self._by_gen[c]]
        return m

    def from_models(self, mask: int) -> UblElement:
        Q = self.states
        mins = [q for q in bits(mask) if Q.down[q] & mask == 1 << q]
        return UblElement(tuple(sorted(Q.sets[q] for q in mins)))

    def clause_models(self, downset_mask: int) -> int:
        """States satisfying the conjunction of the given generators."""
        closed = 0
        for k in bits(downset_mask):
            closed |= self.generators.down[k]
        return self.states.up[self._by_gen[closed]]

    @property
    def true(self) -> UblElement:
        return UblElement((0,))

    @property
    def false(self) -> UblElement:
        return UblElement(())

    # -- requirement order ----------------------------------------------

    def requirement_leq(self, x: UblElement, y: UblElement) -> bool:
        """``y`` is at least as strong as ``x``: every clause of ``y`` refines one of ``x``."""
        return all(any(cx & ~cy == 0 for cx in x.clauses) for cy in y.clauses)

    def conj(self, x: UblElement, y: UblElement) -> UblElement:
        return self.from_models(self.models(x) & self.models(y))

    def disj(self, x: UblElement, y: UblElement) -> UblElement:
        return self.from_models(self.models(x) | self.models(y))

    def imp(self, x: UblElement, y: UblElement) -> UblElement:
        return self.from_models(self.up_interior((self._full & ~self.models(x)) | self.models(y)))

    # -- naming ---------------------------------------------------------

    def clause_name(self, c: int) -> str:
        if self.bl is not None:
            return self.bl.name(self._by_gen[c])
        G = self.generators
        tops = [k for k in bits(c) if G.up[k] & c == 1 << k]
        names = sorted(element_name(G.elements[k]) for k in tops)
        if not names:
            return "{}"
        return " ".join(names) if any(len(n) > 1 for n in names) else "".join(names)

    def format(self, x: UblElement) -> str:
        if x.is_false:
            return "false"
        if x.is_true:
            return "true"
        return " | ".join(self.clause_name(c) for c in x.clauses)

    # -- atoms ----------------------------------------------------------

    def atom_generators(self, a: Atom) -> list[int]:
        """Generator indices an atom stands for (its trace variants)."""
        G = self.generators
        out = []
        for k, x in enumerate(G.elements):
            if self.bl is not None and self.bl.labels is not None:
                lab = self.bl.labels[x]
                if a.trace is None and lab.name == a.event:
                    return [k]
                if lab.event == a.event and (a.trace is None or set(a.trace) <= lab.below):
                    out.append(k)
            elif a.trace is None and element_name(x) == a.event:
                out.append(k)
        if not out:
            raise UnknownAtom(a)
        return out

    def atom_models(self, a: Atom) -> int:
        m = 0
        for k in self.atom_generators(a):
            m |= self.clause_models(1 << k)
        return m

    # -- materialization ------------------------------------------------

    @cached_property
    def lattice(self) -> DownsetLattice:
        """Requirement-order lattice; element ``i`` has non-model set ``lattice.sets[i]``."""
        n_max = len(self.generators.maximal())
        if n_max > MAX_ENUM_MAXIMAL:
            raise CapExceeded(f"{n_max} incomparable maximal generators; refusing full enumeration")
        return downsets(self.states, cap=self.max_elements)

    @cached_property
    def elements(self) -> list[UblElement]:
        return [self.from_models(self._full & ~s) for s in self.lattice.sets]

    @cached_property
    def _pos(self) -> dict[UblElement, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def index(self, x: UblElement) -> int:
        return self._pos[x]

    def element(self, i: int) -> UblElement:
        return self.elements[i]

    def __len__(self):
        return self.lattice.n


def build_ubl(base: BlLattice | FinitePoset, max_elements: int = DEFAULT_MAX_UBL) -> UblLattice:
    """Requirement lattice with every element enumerated."""
    u = UblLattice(base, max_elements)
    u.lattice  # noqa: B018  force enumeration so caps surface here
    return u


def model_set(u: UblLattice, f: Formula, n: Nucleus | None) -> int:
    if isinstance(f, Const):
        return u._full if f.value else 0
    if isinstance(f, Atom):
        return u.atom_models(f)
    if isinstance(f, And):
        return model_set(u, f.left, n) & model_set(u, f.right, n)
    if isinstance(f, Or):
        return model_set(u, f.left, n) | model_set(u, f.right, n)
    if isinstance(f, Imp):
        a, b = model_set(u, f.left, n), model_set(u, f.right, n)
        return u.up_interior((u._full & ~a) | b)
    if isinstance(f, Modal):
        if n is None:
            raise ModalWithoutNucleus("formula uses <> but no nucleus was given")
        inner = model_set(u, f.arg, n)
        i = u.lattice.of_set(u._full & ~inner)
        return u._full & ~u.lattice.sets[n(i)]
    raise TypeError(f"not a formula: {f!r}")


def eval_formula(u: UblLattice, f: Formula | str, n: Nucleus | None = None) -> UblElement:
    """Normal form of ``f``; ``<>`` applies ``n``, a nucleus on ``u.lattice``."""
    if isinstance(f, str):
        f = parse_formula(f)
    return u.from_models(model_set(u, f, n))


def satisfies(b: BlLattice | UblLattice, state: int, f: Formula | str, n: Nucleus | None = None) -> bool:
    """Whether completion state ``state`` (an index into the state lattice) satisfies ``f``."""
    u = b if isinstance(b, UblLattice) else UblLattice(b)
    if isinstance(f, str):
        f = parse_formula(f)
    return bool(model_set(u, f, n) >> state & 1)


def lift_states_nucleus(u: UblLattice, states_map: Sequence[int]) -> Nucleus:
    """Apply a state-level map clause by clause: models ``M`` go to the up-closure of their image."""
    Q = u.states
    L = u.lattice
    out = []
    for s in L.sets:
        m = u._full & ~s
        img = 0
        for q in bits(m):
            img |= Q.up[states_map[q]]
        out.append(L.of_set(u._full & ~img))
    return Nucleus(L, tuple(out))


def lift_nucleus_ubl(u: UblLattice, p: Ponucleus | Nucleus) -> Nucleus:
    """Lift a join-preserving ponucleus on the reachable lattice (or a nucleus on the states)."""
    if isinstance(p, Ponucleus):
        if u.bl is None:
            raise ValueError("lifting a ponucleus needs a completion base")
        p = lift_nucleus_bl(u.bl, p)
    if p.carrier is not u.states and p.carrier.n != u.states.n:
        raise ValueError("nucleus is not on this lattice's states")
    return lift_states_nucleus(u, p.mapping)


MODAL_LAWS = ("unit", "multiplication", "functoriality", "meets", "strength", "bind")


@dataclass
class ModalLawReport:
    counterexamples: dict[str, list[tuple[int, ...]]] = field(
        default_factory=lambda: {law: [] for law in MODAL_LAWS})

    @property
    def ok(self) -> bool:
        return not any(self.counterexamples.values())

    def failed(self) -> list[str]:
        return [law for law in MODAL_LAWS if self.counterexamples[law]]


def check_modal_laws(L, n: Nucleus, limit: int = 5) -> ModalLawReport:
    """Evaluate the six modal laws in the Heyting algebra ``L``.

    A law holds when its value is ``L.top``; at most ``limit`` counterexamples
    are kept per law.
    """
    rep = ModalLawReport()
    top, meet = L.top, L.meet
    table = [[L.implies(a, b) for b in range(L.n)] for a in range(L.n)]
    ce = rep.counterexamples

    def bad(law, *xs):
        if len(ce[law]) < limit:
            ce[law].append(xs)

    for x in range(L.n):
        if table[x][n(x)] != top:
            bad("unit", x)
        if table[n(n(x))][n(x)] != top:
            bad("multiplication", x)
    for x in range(L.n):
        nx, row = n(x), table[x]
        for y in range(L.n):
            ny, xy = n(y), meet(x, y)
            if table[row[y]][table[nx][ny]] != top:
                bad("functoriality", x, y)
            a, c = n(xy), meet(nx, ny)
            if table[a][c] != top or table[c][a] != top:
                bad("meets", x, y)
            if table[meet(x, ny)][n(xy)] != top:
                bad("strength", x, y)
            if table[meet(nx, row[ny])][ny] != top:
                bad("bind", x, y)
    return rep
