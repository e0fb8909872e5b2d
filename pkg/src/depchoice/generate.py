"""Random and exhaustive instance generators for tests and experiment scripts."""
from __future__ import annotations

import random
import string
from collections import defaultdict
from typing import Iterator

from .dsc import Dsc, PreDsc
from .order import CapExceeded, FinitePoset, bits, downsets, is_isomorphic, popcount
from .versioning import VersionMap, validate_version_map

NAMES = string.ascii_lowercase


def random_pre_dsc(rng: random.Random, n: int, max_alts: int = 3, max_size: int = 2) -> PreDsc:
    """Arbitrary dependency sets; may contain cycles, self references, gaps."""
    events = list(NAMES[:n])
    deps = {}
    for e in events:
        alts = set()
        for _ in range(rng.randint(1, max_alts)):
            alts.add(frozenset(rng.sample(events, rng.randint(0, min(max_size, n)))))
        deps[e] = alts
    return PreDsc(tuple(events), deps)


def random_dsc(rng: random.Random, n: int, max_alts: int = 3, p_stop: float = 0.4) -> Dsc:
    """Each event's alternatives are random complete sets of earlier events."""
    names = list(NAMES[:n])
    rng.shuffle(names)
    deps: dict[str, set[frozenset]] = {}
    for k, e in enumerate(names):
        alts: set[frozenset] = set()
        for _ in range(rng.randint(1, max_alts)):
            got: set[str] = set()
            while rng.random() > p_stop:
                enabled = [f for f in names[:k] if f not in got and any(s <= got for s in deps[f])]
                if not enabled:
                    break
                got.add(rng.choice(enabled))
            alts.add(frozenset(got))
        deps[e] = alts
    return Dsc(tuple(names), deps)


def _substitute(d: Dsc, v: VersionMap) -> Dsc | None:
    """Add the substituted copy of every dependency set; None if that breaks the structure."""
    deps = {e: set(d.deps[e]) for e in d.events}
    for e in d.events:
        for s in list(deps[e]):
            t = v.image(s)
            if e not in t:
                deps[e].add(t)
    try:
        d2 = Dsc(d.events, deps)
    except ValueError:
        return None
    return d2 if validate_version_map(d2, v).ok else None


def random_versioned_dsc(rng: random.Random, n: int, tries: int = 20) -> tuple[Dsc, VersionMap]:
    """A DSC with a non-trivial version map when one is found, else the identity map."""
    for _ in range(tries):
        d = random_dsc(rng, n)
        if n < 2:
            break
        k = rng.randint(1, max(1, n // 2))
        events = list(d.events)
        rng.shuffle(events)
        raise_ = {}
        his = events[:k]
        for lo in events[k:]:
            if rng.random() < 0.5:
                raise_[lo] = rng.choice(his)
        if not raise_:
            continue
        v = VersionMap(raise_)
        d2 = _substitute(d, v)
        if d2 is not None:
            return d2, v
    return random_dsc(rng, n), VersionMap()


def random_poset(rng: random.Random, n: int, p: float = 0.3) -> FinitePoset:
    """Random order on ``n`` integers: random DAG along a hidden linear order, closed."""
    perm = list(range(n))
    rng.shuffle(perm)
    up = [1 << i for i in range(n)]
    for a in range(n - 1, -1, -1):
        for b in range(a + 1, n):
            if rng.random() < p:
                up[perm[a]] |= up[perm[b]]
    return FinitePoset(list(range(n)), up)


def _invariant(P: FinitePoset) -> tuple:
    sig = []
    for i in range(P.n):
        ups = sorted(popcount(P.up[j]) for j in bits(P.upper_covers[i]))
        downs = sorted(popcount(P.down[j]) for j in bits(P.lower_covers[i]))
        sig.append((popcount(P.down[i]), popcount(P.up[i]), tuple(ups), tuple(downs)))
    return tuple(sorted(sig))


def _extend(P: FinitePoset, below: int) -> FinitePoset:
    """Add a new maximal element ``P.n`` above the downset ``below``."""
    n = P.n
    up = [u | (1 << n) if below >> i & 1 else u for i, u in enumerate(P.up)] + [1 << n]
    return FinitePoset(list(range(n + 1)), up, check=False)


def posets_up_to_iso(n_max: int, max_downsets: int | None = None) -> Iterator[FinitePoset]:
    """One poset per isomorphism class, by size.

    With ``max_downsets`` only posets with at most that many downsets are kept
    (the count never drops when an element is added, so pruning is safe).
    """
    level = [FinitePoset([], [])]
    yield level[0]
    for _ in range(n_max):
        buckets: dict[tuple, list[FinitePoset]] = defaultdict(list)
        nxt = []
        for P in level:
            for below in downsets(P).sets:
                Q = _extend(P, below)
                if max_downsets is not None:
                    try:
                        downsets(Q, cap=max_downsets)
                    except CapExceeded:
                        continue
                bucket = buckets[_invariant(Q)]
                if any(is_isomorphic(Q, R) for R in bucket):
                    continue
                bucket.append(Q)
                nxt.append(Q)
        if not nxt:
            return
        yield from nxt
        level = nxt


def distributive_lattices(max_size: int) -> Iterator:
    """Every distributive lattice with at most ``max_size`` elements, up to isomorphism."""
    for P in posets_up_to_iso(max_size - 1, max_downsets=max_size):
        yield downsets(P)
