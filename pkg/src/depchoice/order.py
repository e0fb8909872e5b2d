"""Finite posets and lattices.

Elements are arbitrary hashable ids kept in a fixed order; all relations are
stored as Python ``int`` bitmasks indexed by that order (``up[i]`` has bit
``j`` set iff ``i <= j``).  Covers are derived, never supplied.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Sequence


class CapExceeded(RuntimeError):
    """An enumeration or search exceeded its configured limit."""


class NotALattice(ValueError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def element_name(x: Hashable) -> str:
    """Compact display name; event sets render as ``ab`` or ``{x,yy}``."""
    if isinstance(x, (frozenset, set, tuple)) and not isinstance(x, str):
        items = sorted(element_name(y) for y in x)
        if not items:
            return "{}"
        if all(len(s) == 1 for s in items):
            return "".join(items)
        return "{" + ",".join(items) + "}"
    return str(x)


class FinitePoset:
    """A finite partial order on ``elements``.

    Build with :meth:`from_relation` or :meth:`from_covers`, or pass an up-set
    table directly (``check=False`` skips the axiom check).
    """

    def __init__(self, elements: Sequence[Hashable], up: Sequence[int], *, check: bool = True):
        self.elements = tuple(elements)
        self.n = len(self.elements)
        self._index = {x: i for i, x in enumerate(self.elements)}
        if len(self._index) != self.n:
            raise ValueError("element ids must be unique")
        self.up = tuple(up)
        down = [0] * self.n
        for i, m in enumerate(self.up):
            for j in bits(m):
                down[j] |= 1 << i
        self.down = tuple(down)
        if check:
            self._check_order()

    @classmethod
    def from_relation(cls, elements: Sequence[Hashable], leq: Callable[[Hashable, Hashable], bool]):
        elements = tuple(elements)
        up = []
        for x in elements:
            m = 0
            for j, y in enumerate(elements):
                if leq(x, y):
                    m |= 1 << j
            up.append(m)
        return cls(elements, up)

    @classmethod
    def from_covers(cls, elements: Sequence[Hashable], covers: Iterable[tuple[Hashable, Hashable]]):
        """Order generated by ``(lower, upper)`` pairs (reflexive-transitive closure)."""
        elements = tuple(elements)
        idx = {x: i for i, x in enumerate(elements)}
        succ = [0] * len(elements)
        for a, b in covers:
            succ[idx[a]] |= 1 << idx[b]
        up = [0] * len(elements)
        # closure by repeated propagation; sizes here are small
        for i in range(len(elements)):
            seen = 1 << i
            frontier = seen
            while frontier:
                nxt = 0
                for j in bits(frontier):
                    nxt |= succ[j]
                frontier = nxt & ~seen
                seen |= nxt
            up[i] = seen
        return cls(elements, up)

    @classmethod
    def discrete(cls, elements: Sequence[Hashable]):
        return cls(tuple(elements), [1 << i for i in range(len(elements))])

    @classmethod
    def chain(cls, elements: Sequence[Hashable]):
        n = len(elements)
        full = (1 << n) - 1
        return cls(tuple(elements), [full & ~((1 << i) - 1) for i in range(n)])

    def _check_order(self) -> None:
        for i in range(self.n):
            if not self.up[i] >> i & 1:
                raise ValueError(f"not reflexive at {self.elements[i]!r}")
            for j in bits(self.up[i]):
                if j != i and self.up[j] >> i & 1:
                    raise ValueError(f"not antisymmetric: {self.elements[i]!r}, {self.elements[j]!r}")
                if self.up[j] & ~self.up[i]:
                    raise ValueError(f"not transitive through {self.elements[j]!r}")

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def __repr__(self) -> str:
        return f"{type(self).__name__}({[element_name(x) for x in self.elements]})"

    def index(self, x: Hashable) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise KeyError(f"{x!r} is not an element") from None

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def le(self, x: Hashable, y: Hashable) -> bool:
        return self.leq(self.index(x), self.index(y))

    def comparable(self, i: int, j: int) -> bool:
        return bool((self.up[i] | self.down[i]) >> j & 1)

    def mask(self, indices: Iterable[int]) -> int:
        m = 0
        for i in indices:
            m |= 1 << i
        return m

    @cached_property
    def upper_covers(self) -> tuple[int, ...]:
        """``upper_covers[i]``: mask of elements covering ``i``."""
        out = []
        for i in range(self.n):
            strict = self.up[i] & ~(1 << i)
            m = strict
            for j in bits(strict):
                m &= ~(self.up[j] & ~(1 << j))
            out.append(m)
        return tuple(out)

    @cached_property
    def lower_covers(self) -> tuple[int, ...]:
        out = [0] * self.n
        for i, m in enumerate(self.upper_covers):
            for j in bits(m):
                out[j] |= 1 << i
        return tuple(out)

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs ``(lower, upper)`` in index order."""
        return [(i, j) for i in range(self.n) for j in bits(self.upper_covers[i])]

    def covers_by(self, i: int, j: int) -> bool:
        """True iff ``j`` covers ``i``."""
        return bool(self.upper_covers[i] >> j & 1)

    def minimal(self) -> list[int]:
        return [i for i in range(self.n) if self.down[i] == 1 << i]

    def maximal(self) -> list[int]:
        return [i for i in range(self.n) if self.up[i] == 1 << i]

    def least(self) -> int | None:
        full = (1 << self.n) - 1
        for i in range(self.n):
            if self.up[i] == full:
                return i
        return None

    def greatest(self) -> int | None:
        full = (1 << self.n) - 1
        for i in range(self.n):
            if self.down[i] == full:
                return i
        return None

    def supremum(self, mask: int) -> int | None:
        """Least upper bound of a set of indices, if it exists in this poset."""
        ub = (1 << self.n) - 1
        for i in bits(mask):
            ub &= self.up[i]
        for i in bits(ub):
            if self.up[i] == ub:
                return i
        return None

    def infimum(self, mask: int) -> int | None:
        lb = (1 << self.n) - 1
        for i in bits(mask):
            lb &= self.down[i]
        for i in bits(lb):
            if self.down[i] == lb:
                return i
        return None

    def subposet(self, indices: Sequence[int]) -> "FinitePoset":
        indices = list(indices)
        pos = {i: k for k, i in enumerate(indices)}
        up = []
        for i in indices:
            m = 0
            for j in bits(self.up[i]):
                if j in pos:
                    m |= 1 << pos[j]
            up.append(m)
        return FinitePoset([self.elements[i] for i in indices], up, check=False)

    def dual(self) -> "FinitePoset":
        return FinitePoset(self.elements, self.down, check=False)

    def downset_mask(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.down[i]
        return out

    def upset_mask(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.up[i]
        return out

    def is_antichain(self, mask: int) -> bool:
        for i in bits(mask):
            if (self.up[i] | self.down[i]) & mask & ~(1 << i):
                return False
        return True

    def linear_extension(self) -> list[int]:
        """Indices sorted so that every element follows everything below it."""
        return sorted(range(self.n), key=lambda i: (popcount(self.down[i]), i))

    def is_lattice(self) -> bool:
        for i in range(self.n):
            for j in range(i + 1, self.n):
                m = (1 << i) | (1 << j)
                if self.supremum(m) is None or self.infimum(m) is None:
                    return False
        return self.n > 0


class FiniteLattice(FinitePoset):
    """A finite lattice.

    Meets and joins are looked up through the up/down masks: the set of
    upper bounds of ``{i, j}`` equals ``up[i] & up[j]``, which is the up-set of
    the join.
    """

    def __init__(self, elements, up, *, check: bool = True):
        super().__init__(elements, up, check=check)
        if self.n == 0:
            raise NotALattice("empty poset")
        self._by_up = {m: i for i, m in enumerate(self.up)}
        self._by_down = {m: i for i, m in enumerate(self.down)}
        full = (1 << self.n) - 1
        top = self._by_down.get(full)
        bottom = self._by_up.get(full)
        if top is None or bottom is None:
            raise NotALattice("no top or bottom")
        self.top = top
        self.bottom = bottom
        if check:
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    if (self.up[i] & self.up[j]) not in self._by_up:
                        raise NotALattice(f"no join for {self.elements[i]!r}, {self.elements[j]!r}")
                    if (self.down[i] & self.down[j]) not in self._by_down:
                        raise NotALattice(f"no meet for {self.elements[i]!r}, {self.elements[j]!r}")

    @classmethod
    def from_poset(cls, P: FinitePoset) -> "FiniteLattice":
        return cls(P.elements, P.up)

    def join(self, i: int, j: int) -> int:
        return self._by_up[self.up[i] & self.up[j]]

    def meet(self, i: int, j: int) -> int:
        return self._by_down[self.down[i] & self.down[j]]

    def join_all(self, indices: Iterable[int]) -> int:
        ub = (1 << self.n) - 1
        for i in indices:
            ub &= self.up[i]
        return self._by_up[ub]

    def meet_all(self, indices: Iterable[int]) -> int:
        lb = (1 << self.n) - 1
        for i in indices:
            lb &= self.down[i]
        return self._by_down[lb]

    def implies(self, a: int, b: int) -> int:
        """Relative pseudo-complement: greatest ``x`` with ``a ∧ x <= b``.

        Raises ``ValueError`` when it does not exist (non-distributive input).
        """
        cand = [x for x in range(self.n) if self.down[b] >> self.meet(a, x) & 1]
        best = self.join_all(cand)
        if not self.down[b] >> self.meet(a, best) & 1:
            raise ValueError("relative pseudo-complement does not exist")
        return best

    def dual(self) -> "FiniteLattice":
        return FiniteLattice(self.elements, self.down, check=False)

    def sublattice_of(self, indices: Sequence[int]) -> "FiniteLattice":
        """Induced order on ``indices``; raises NotALattice if it is not one."""
        P = self.subposet(indices)
        return FiniteLattice(P.elements, P.up)


class DownsetLattice(FiniteLattice):
    """The lattice of downsets of ``base``; element ``i`` is ``sets[i]`` (a mask over base)."""

    def __init__(self, base: FinitePoset, sets: Sequence[int]):
        self.base = base
        self.sets = tuple(sets)
        self._by_set = {s: i for i, s in enumerate(self.sets)}
        elements = [frozenset(base.elements[k] for k in bits(s)) for s in self.sets]
        super().__init__(elements, _subset_up(self.sets), check=False)

    def join(self, i: int, j: int) -> int:
        return self._by_set[self.sets[i] | self.sets[j]]

    def meet(self, i: int, j: int) -> int:
        return self._by_set[self.sets[i] & self.sets[j]]

    def of_set(self, mask: int) -> int:
        return self._by_set[mask]

    def interior(self, mask: int) -> int:
        """Largest downset of ``base`` contained in ``mask``."""
        out = 0
        for k in bits(mask):
            if self.base.down[k] & ~mask == 0:
                out |= 1 << k
        return out

    def implies(self, a: int, b: int) -> int:
        full = (1 << self.base.n) - 1
        return self._by_set[self.interior((full & ~self.sets[a]) | self.sets[b])]


def _subset_up(sets: Sequence[int]) -> list[int]:
    up = []
    for s in sets:
        m = 0
        for j, t in enumerate(sets):
            if s & ~t == 0:
                m |= 1 << j
        up.append(m)
    return up


def subset_lattice(sets: Sequence[int], elements: Sequence[Hashable] | None = None) -> FiniteLattice:
    """Lattice of a family of bitmask sets under inclusion (must be a lattice)."""
    elements = tuple(elements) if elements is not None else tuple(sets)
    return FiniteLattice(elements, _subset_up(sets))


# ---------------------------------------------------------------------------
# operations


def join_irreducible_indices(P: FinitePoset) -> list[int]:
    """Indices of join-irreducible elements.

    ``x`` is reducible iff it is the least upper bound (in ``P``) of the set of
    elements strictly below it.  A global bottom counts as the empty join and
    is excluded; other minimal elements are irreducible.
    """
    out = []
    for i in range(P.n):
        strict = P.down[i] & ~(1 << i)
        if P.supremum(strict) != i:
            out.append(i)
    return out


def join_irreducibles(P: FinitePoset) -> FinitePoset:
    return P.subposet(join_irreducible_indices(P))


def meet_irreducible_indices(P: FinitePoset) -> list[int]:
    return join_irreducible_indices(P.dual())


def _downset_masks(P: FinitePoset, cap: int | None) -> list[int]:
    order = P.linear_extension()
    out: list[int] = []

    def rec(k: int, chosen: int) -> None:
        if k == len(order):
            out.append(chosen)
            if cap is not None and len(out) > cap:
                raise CapExceeded(f"more than {cap} downsets")
            return
        x = order[k]
        rec(k + 1, chosen)
        if P.down[x] & ~(1 << x) & ~chosen == 0:
            rec(k + 1, chosen | (1 << x))

    rec(0, 0)
    out.sort(key=lambda s: (popcount(s), sorted(bits(s))))
    return out


def downsets(P: FinitePoset, cap: int | None = None) -> DownsetLattice:
    """Distributive lattice of downsets of ``P`` ordered by inclusion."""
    return DownsetLattice(P, _downset_masks(P, cap))


def upsets(P: FinitePoset, cap: int | None = None) -> FiniteLattice:
    """Lattice of up-sets of ``P`` under inclusion."""
    D = downsets(P.dual(), cap)
    return FiniteLattice(D.elements, D.up, check=False)


@dataclass(frozen=True)
class LatticeClass:
    distributive: bool
    modular: bool
    upper_semimodular: bool
    has_m3: bool
    has_s7_cover: bool


def is_distributive(L: FiniteLattice) -> bool:
    """``L`` has exactly as many elements as its join-irreducibles have downsets.

    ``x -> (join-irreducibles below x)`` is always an order embedding into
    those downsets; it is onto exactly when ``L`` is distributive.
    """
    J = L.subposet(join_irreducible_indices(L))
    try:
        return len(_downset_masks(J, L.n)) == L.n
    except CapExceeded:
        return False


def distributive_law_holds(L: FiniteLattice) -> bool:
    """Check ``x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`` on every triple."""
    n = L.n
    for x in range(n):
        for y in range(n):
            for z in range(y + 1, n):
                if L.meet(x, L.join(y, z)) != L.join(L.meet(x, y), L.meet(x, z)):
                    return False
    return True


def is_modular(L: FiniteLattice) -> bool:
    """Modular law ``x <= z => x ∨ (y ∧ z) = (x ∨ y) ∧ z`` (equivalently, N5-free)."""
    n = L.n
    for x in range(n):
        for z in bits(L.up[x]):
            for y in range(n):
                if L.join(x, L.meet(y, z)) != L.meet(L.join(x, y), z):
                    return False
    return True


def is_upper_semimodular(L: FiniteLattice) -> bool:
    """If ``a`` and ``b`` both cover ``a ∧ b`` then ``a ∨ b`` covers both."""
    for m in range(L.n):
        ups = list(bits(L.upper_covers[m]))
        for a, b in itertools.combinations(ups, 2):
            j = L.join(a, b)
            if not (L.covers_by(a, j) and L.covers_by(b, j)):
                return False
    return True


def find_m3(L: FiniteLattice) -> tuple[int, int, int] | None:
    n = L.n
    for x in range(n):
        for y in range(x + 1, n):
            if L.comparable(x, y):
                continue
            j, m = L.join(x, y), L.meet(x, y)
            for z in range(y + 1, n):
                if L.comparable(x, z) or L.comparable(y, z):
                    continue
                if (L.join(x, z) == j and L.join(y, z) == j
                        and L.meet(x, z) == m and L.meet(y, z) == m):
                    return (x, y, z)
    return None


def find_s7_cover(L: FiniteLattice) -> dict[str, int] | None:
    """Cover-preserving sublattice isomorphic to the centered hexagon S7.

    Shape: ``0 < b, c``; ``b < ab``; ``c < ac``; ``b, c < bc``;
    ``ab, bc, ac < 1``, every listed relation a cover.
    """
    for z0 in range(L.n):
        ups = list(bits(L.upper_covers[z0]))
        for b, c in itertools.permutations(ups, 2):
            if b > c:
                continue
            bc = L.join(b, c)
            if not (L.covers_by(b, bc) and L.covers_by(c, bc)):
                continue
            for ab in bits(L.upper_covers[b] & ~(1 << bc)):
                for ac in bits(L.upper_covers[c] & ~(1 << bc)):
                    if ab == ac:
                        continue
                    t = L.join(ab, ac)
                    if not all(L.covers_by(x, t) for x in (ab, bc, ac)):
                        continue
                    emb = {"0": z0, "b": b, "c": c, "bc": bc, "ab": ab, "ac": ac, "1": t}
                    if _is_s7_sublattice(L, emb):
                        return emb
    return None


_S7_MEETS = {
    ("ab", "ac"): "0", ("ab", "bc"): "b", ("ac", "bc"): "c", ("ab", "c"): "0",
    ("ac", "b"): "0", ("b", "c"): "0",
}
_S7_JOINS = {
    ("ab", "ac"): "1", ("ab", "bc"): "1", ("ac", "bc"): "1", ("ab", "c"): "1",
    ("ac", "b"): "1", ("b", "c"): "bc",
}


def _is_s7_sublattice(L: FiniteLattice, emb: dict[str, int]) -> bool:
    if len(set(emb.values())) != 7:
        return False
    for (x, y), m in _S7_MEETS.items():
        if L.meet(emb[x], emb[y]) != emb[m]:
            return False
    for (x, y), j in _S7_JOINS.items():
        if L.join(emb[x], emb[y]) != emb[j]:
            return False
    return True


def classify_lattice(L: FiniteLattice) -> LatticeClass:
    return LatticeClass(
        distributive=is_distributive(L),
        modular=is_modular(L),
        upper_semimodular=is_upper_semimodular(L),
        has_m3=find_m3(L) is not None,
        has_s7_cover=find_s7_cover(L) is not None,
    )


# ---------------------------------------------------------------------------
# width, height, antichains


def height(P: FinitePoset) -> int:
    """Number of elements in a longest chain."""
    longest = [0] * P.n
    for i in P.linear_extension():
        below = P.down[i] & ~(1 << i)
        longest[i] = 1 + max((longest[j] for j in bits(below)), default=0)
    return max(longest, default=0)


def width_bruteforce(P: FinitePoset) -> int:
    best = 0

    def rec(candidates: int, size: int) -> None:
        nonlocal best
        if size + popcount(candidates) <= best:
            return
        if not candidates:
            best = max(best, size)
            return
        i = (candidates & -candidates).bit_length() - 1
        rest = candidates & ~(1 << i)
        rec(rest & ~(P.up[i] | P.down[i]), size + 1)
        rec(rest, size)

    rec((1 << P.n) - 1, 0)
    return best


def width_matching(P: FinitePoset) -> int:
    """Dilworth: width = n - maximum matching in the strict-order bipartite graph."""
    succ = [P.up[i] & ~(1 << i) for i in range(P.n)]
    match_right = [-1] * P.n

    def augment(u: int, seen: list[bool]) -> bool:
        for v in bits(succ[u]):
            if seen[v]:
                continue
            seen[v] = True
            if match_right[v] < 0 or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    matched = sum(augment(u, [False] * P.n) for u in range(P.n))
    return P.n - matched


BRUTE_FORCE_WIDTH_LIMIT = 15


def width(P: FinitePoset) -> int:
    if P.n <= BRUTE_FORCE_WIDTH_LIMIT:
        return width_bruteforce(P)
    return width_matching(P)


def width_height(P: FinitePoset) -> tuple[int, int]:
    return width(P), height(P)


def enumerate_antichains(P: FinitePoset, cap: int | None = 1_000_000) -> list[frozenset]:
    """All antichains (including the empty one), as frozensets of elements.

    Order: by size, then by index tuple.
    """
    found: list[int] = []

    def rec(start: int, chosen: int, allowed: int) -> None:
        found.append(chosen)
        if cap is not None and len(found) > cap:
            raise CapExceeded(f"more than {cap} antichains")
        for i in bits(allowed >> start << start):
            rec(i + 1, chosen | (1 << i), allowed & ~(P.up[i] | P.down[i]))

    rec(0, 0, (1 << P.n) - 1)
    found.sort(key=lambda m: (popcount(m), sorted(bits(m))))
    return [frozenset(P.elements[i] for i in bits(m)) for m in found]


# ---------------------------------------------------------------------------
# isomorphism

DEFAULT_ISO_CAP = 10_000_000


def _signature(P: FinitePoset, i: int) -> tuple[int, int, int, int]:
    return (popcount(P.down[i]), popcount(P.up[i]),
            popcount(P.lower_covers[i]), popcount(P.upper_covers[i]))


def find_isomorphism(P: FinitePoset, Q: FinitePoset, cap: int = DEFAULT_ISO_CAP) -> dict | None:
    """An order isomorphism ``P -> Q`` as an element mapping, or ``None``."""
    if P.n != Q.n:
        return None
    sp = [_signature(P, i) for i in range(P.n)]
    sq = [_signature(Q, i) for i in range(Q.n)]
    if sorted(sp) != sorted(sq):
        return None
    if len(P.covers()) != len(Q.covers()):
        return None
    # match most constrained elements first: bottom-up, rare signatures early
    counts: dict = {}
    for s in sp:
        counts[s] = counts.get(s, 0) + 1
    order = sorted(range(P.n), key=lambda i: (counts[sp[i]], popcount(P.down[i]), i))
    by_sig: dict = {}
    for j, s in enumerate(sq):
        by_sig.setdefault(s, []).append(j)
    image = [-1] * P.n
    used = 0
    nodes = 0

    def consistent(i: int, j: int) -> bool:
        for k in range(P.n):
            kk = image[k]
            if kk < 0:
                continue
            if P.leq(i, k) != Q.leq(j, kk) or P.leq(k, i) != Q.leq(kk, j):
                return False
        return True

    def rec(pos: int) -> bool:
        nonlocal used, nodes
        if pos == P.n:
            return True
        i = order[pos]
        for j in by_sig[sp[i]]:
            if used >> j & 1:
                continue
            nodes += 1
            if nodes > cap:
                raise CapExceeded(f"isomorphism search exceeded {cap} nodes")
            if consistent(i, j):
                image[i] = j
                used |= 1 << j
                if rec(pos + 1):
                    return True
                image[i] = -1
                used &= ~(1 << j)
        return False

    if rec(0):
        return {P.elements[i]: Q.elements[image[i]] for i in range(P.n)}
    return None


def is_isomorphic(P: FinitePoset, Q: FinitePoset, cap: int = DEFAULT_ISO_CAP) -> bool:
    return find_isomorphism(P, Q, cap) is not None
