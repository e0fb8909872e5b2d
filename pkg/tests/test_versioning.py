import random

import pytest
from hypothesis import given, strategies as st

from depchoice.completion import Nucleus, bl_completion
from depchoice.dsc import Dsc, UnknownEvent
from depchoice.generate import random_versioned_dsc
from depchoice.order import is_isomorphic, FinitePoset
from depchoice.rdp import build_rdp
from depchoice.versioning import (
    InvalidVersionMap,
    NotJoinPreserving,
    VersionMap,
    induced_pvp,
    lift_nucleus_bl,
    lift_to_bl,
    nucleus_quotient,
    validate_version_map,
)

B_TO_C = VersionMap({"b": "c"})


def names(r, idxs):
    return sorted("".join(sorted(r.sets[i])) for i in idxs)


def test_valid_map(running):
    rep = validate_version_map(running, B_TO_C)
    assert rep.ok and rep.warnings == []


def test_not_idempotent(running):
    rep = validate_version_map(running, VersionMap({"b": "c", "c": "b"}))
    assert any("idempotent" in e for e in rep.errors)


def test_substitution_violation():
    d = Dsc.from_dict({"a": [["b"]], "b": [[]], "c": [[]]})
    rep = validate_version_map(d, B_TO_C)
    assert rep.errors == ["substitution: a has {b} but not {c}"]
    with pytest.raises(InvalidVersionMap):
        induced_pvp(build_rdp(d), B_TO_C)


def test_unknown_event_in_map(running):
    with pytest.raises(UnknownEvent):
        validate_version_map(running, VersionMap({"b": "zz"}))


def test_higher_depending_on_lower_warns():
    d = Dsc.from_dict({"b": [[]], "c": [["b"]]})
    assert validate_version_map(d, B_TO_C).warnings


def test_running_pvp(running_rdp):
    p = induced_pvp(running_rdp, B_TO_C)
    assert names(running_rdp, p.fixed_points()) == ["", "abc", "bc"]
    assert p.violations(("monotone", "idempotent", "inflationary", "joins")) == []


def test_running_pvp_fails_meets(running_rdp):
    # ab /\ ac = {} is fixed, yet both ab and ac go to abc
    p = induced_pvp(running_rdp, B_TO_C)
    r = running_rdp
    bad = {tuple(sorted(names(r, pair))) for law, pair in p.violations(("meets",))}
    assert ("ab", "ac") in bad


def test_identity_map_gives_identity(running_rdp):
    p = induced_pvp(running_rdp, VersionMap())
    assert p.mapping == tuple(range(running_rdp.lattice.n))


def test_running_bl_lift(running_rdp, running_bl):
    p = induced_pvp(running_rdp, B_TO_C)
    n = lift_nucleus_bl(running_bl, p)
    assert sorted(running_bl.name(i) for i in n.fixed_points()) == ["a_b a_c", "bc", "{}"]
    assert not n.violations(("monotone", "inflationary", "idempotent"))
    Q, surj = nucleus_quotient(n)
    assert is_isomorphic(Q, FinitePoset.chain(range(3)))
    assert sorted(set(surj.values())) == [0, 1, 2]
    Qr, _ = nucleus_quotient(Nucleus(running_rdp.lattice, p.mapping))
    assert is_isomorphic(Qr, FinitePoset.chain(range(3)))


def test_running_bl_lift_fails_meets(running_rdp, running_bl):
    n = lift_nucleus_bl(running_bl, induced_pvp(running_rdp, B_TO_C))
    bad = {tuple(sorted(running_bl.name(i) for i in v.elements)) for v in n.violations(("meets",))}
    assert ("a_b", "a_c") in bad


def test_join_preservation_counterexample():
    # {a} and {c} are both fixed, but {a,c} may swap a for its higher version b
    d = Dsc.from_dict({"a": [[], ["c"]], "b": [["c"]], "c": [[]]})
    r = build_rdp(d)
    p = induced_pvp(r, VersionMap({"a": "b"}))
    a, c, ac = r.index(frozenset("a")), r.index(frozenset("c")), r.index(frozenset("ac"))
    assert p(a) == a and p(c) == c
    assert r.sets[p(ac)] == frozenset("abc")
    assert not p.preserves_joins()
    with pytest.raises(NotJoinPreserving):
        lift_nucleus_bl(bl_completion(r), p)


def versioned(seed, n):
    d, v = random_versioned_dsc(random.Random(seed), n)
    r = build_rdp(d)
    return d, v, r, induced_pvp(r, v)


@given(st.integers(0, 10**6), st.integers(1, 5))
def test_pvp_laws(seed, n):
    d, v, r, p = versioned(seed, n)
    assert not p.violations(("monotone", "idempotent", "inflationary"))
    L = r.lattice
    # every state has a least fixed point above it, and it is p's value
    fixed = p.fixed_points()
    for i in range(L.n):
        above = [f for f in fixed if L.leq(i, f)]
        least = [f for f in above if all(L.leq(f, g) for g in above)]
        assert least == [p(i)]
    # the image only ever adds events from classes already touched
    for i in range(L.n):
        assert v.image(r.sets[p(i)]) == v.image(r.sets[i])


@given(st.integers(0, 10**6), st.integers(1, 5))
def test_bl_lift_laws(seed, n):
    d, v, r, p = versioned(seed, n)
    b = bl_completion(r)
    if r.lattice.n > 40:
        return
    n_bl = Nucleus(b.lattice, lift_to_bl(b, p))
    # inflationary, monotone and idempotent hold even without join preservation
    assert not n_bl.violations(("monotone", "inflationary", "idempotent"))
    if not p.preserves_joins():
        return
    # a join-preserving p is extended along the embedding
    for x, i in b.embedding.items():
        j = r.lattice.index(x)
        assert b.events_of(n_bl(i)) == r.sets[p(j)]
