import random

import pytest
from hypothesis import given, strategies as st

import oracles
from depchoice.dsc import Dsc
from depchoice.generate import random_dsc
from depchoice.order import CapExceeded, classify_lattice, is_distributive
from depchoice.rdp import NotAnElement, build_rdp, build_rdp_by_unions, rdp_meet


def test_running_example_elements(running_rdp):
    assert sorted("".join(sorted(s)) for s in running_rdp.sets) == sorted(["", "b", "c", "ab", "ac", "bc", "abc"])


def test_chain():
    r = build_rdp(Dsc.from_dict({"a": [["b"]], "b": [[]]}))
    assert r.sets == [frozenset(), frozenset("b"), frozenset("ab")]


def test_empty():
    r = build_rdp(Dsc.empty())
    assert r.sets == [frozenset()]
    assert r.lattice.n == 1


def test_meet_examples(running_rdp):
    assert rdp_meet(running_rdp, frozenset("ab"), frozenset("ac")) == frozenset()
    assert rdp_meet(running_rdp, frozenset("ab"), frozenset("bc")) == frozenset("b")
    assert rdp_meet(running_rdp, frozenset("ab"), frozenset("ab")) == frozenset("ab")
    with pytest.raises(NotAnElement):
        rdp_meet(running_rdp, frozenset("a"), frozenset("ab"))


def test_cap():
    d = Dsc.from_dict({e: [[]] for e in "abcdefgh"})
    with pytest.raises(CapExceeded):
        build_rdp(d, max_states=100)


@given(st.integers(0, 10**6), st.integers(1, 6))
def test_rdp_properties(seed, n):
    d = random_dsc(random.Random(seed), n)
    r = build_rdp(d)
    L = r.lattice
    assert set(r.sets) == set(oracles.complete_sets(d.events, d.deps))
    assert set(build_rdp_by_unions(d).sets) == set(r.sets)
    assert r.sets[L.bottom] == frozenset() and r.sets[L.top] == frozenset(d.events)
    for i in range(L.n):
        for j in range(L.n):
            assert r.sets[L.join(i, j)] == r.sets[i] | r.sets[j]
            inside = [s for s in r.sets if s <= r.sets[i] & r.sets[j]]
            assert r.sets[L.meet(i, j)] == frozenset().union(*inside)
            assert rdp_meet(r, r.sets[i], r.sets[j]) == r.sets[L.meet(i, j)]
    c = classify_lattice(L)
    assert c.upper_semimodular and not c.has_m3
    if d.is_choice_free():
        assert c.distributive


def test_choice_free_is_distributive():
    d = Dsc.from_dict({"a": [["b", "c"]], "b": [[]], "c": [[]], "e": [["b"]]})
    assert is_distributive(build_rdp(d).lattice)
