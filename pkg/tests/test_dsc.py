import itertools
import random

import pytest
from hypothesis import given, strategies as st

from depchoice.dsc import (
    Dsc,
    Exploded,
    InvalidDsc,
    PreDsc,
    UnknownEvent,
    accretion_closure,
    complete_pre_dsc,
    completion_delta,
    is_complete_set,
    validate_dsc,
)
from depchoice.generate import random_dsc, random_pre_dsc


def kinds(d):
    return sorted({v.kind for v in validate_dsc(d)})


def test_running_example_valid(running):
    assert validate_dsc(running) == []
    assert not running.is_choice_free()


def test_self_containment():
    d = PreDsc.from_dict({"a": [["a"]]})
    assert "self" in kinds(d)


def test_two_cycle():
    d = PreDsc.from_dict({"a": [["b"]], "b": [["a"]]})
    assert "cycle" in kinds(d)
    # no accretion order exists: check every permutation directly
    for order in itertools.permutations("ab"):
        got = set()
        ok = True
        for e in order:
            if not any(s <= got for s in d.deps[e]):
                ok = False
                break
            got.add(e)
        assert not ok


def test_incomplete_set_reported():
    d = PreDsc.from_dict({"a": [["b"]], "b": [["c"]], "c": [[]]})
    vs = validate_dsc(d)
    assert [(v.kind, v.event) for v in vs] == [("incomplete", "a")]


def test_unknown_event():
    with pytest.raises(UnknownEvent) as exc:
        PreDsc.from_dict({"a": [["zz"]]})
    assert exc.value.name == "zz"


def test_dsc_constructor_validates():
    with pytest.raises(InvalidDsc):
        Dsc.from_dict({"a": [["a"]]})


def test_completion_of_valid_is_identity(running):
    assert complete_pre_dsc(running) == running
    assert completion_delta(running, complete_pre_dsc(running)).trivial


def test_completion_deletes_two_cycle():
    d = complete_pre_dsc(PreDsc.from_dict({"a": [["b"]], "b": [["a"]]}))
    assert d == Dsc.empty()
    assert validate_dsc(d) == []


def test_completion_closes_chain():
    d = complete_pre_dsc(PreDsc.from_dict({"a": [["b"]], "b": [["c"]], "c": [[]]}))
    assert d.deps["a"] == {frozenset("bc")}
    delta = completion_delta(PreDsc.from_dict({"a": [["b"]], "b": [["c"]], "c": [[]]}), d)
    assert delta.changed == {"a": ([["b"]], [["b", "c"]])}


def test_completion_expands_choices():
    d = complete_pre_dsc(PreDsc.from_dict({"x": [["a"]], "a": [["b"], ["c"]], "b": [[]], "c": [[]]}))
    assert d.deps["x"] == {frozenset("ab"), frozenset("ac")}


def test_completion_cap():
    spec = {f"e{i}": [[f"v{i}"], [f"w{i}"]] for i in range(6)}
    spec.update({f"v{i}": [[]] for i in range(6)})
    spec.update({f"w{i}": [[]] for i in range(6)})
    spec["top"] = [[f"e{i}" for i in range(6)]]
    with pytest.raises(Exploded):
        complete_pre_dsc(PreDsc.from_dict(spec), max_sets=10)


@given(st.integers(0, 10**6), st.integers(1, 6))
def test_completion_idempotent_and_complete(seed, n):
    pre = random_pre_dsc(random.Random(seed), n)
    d = complete_pre_dsc(pre)
    assert validate_dsc(d) == []
    assert complete_pre_dsc(d) == d
    for e in d.events:
        for s in d.deps[e]:
            assert e not in s
            assert all(any(t <= s for t in d.deps[f]) for f in s)


@given(st.integers(0, 10**6), st.integers(1, 6))
def test_random_dsc_is_valid(seed, n):
    d = random_dsc(random.Random(seed), n)
    assert validate_dsc(d) == []
    assert accretion_closure(d) == frozenset(d.events)


def test_is_complete_set(running):
    assert is_complete_set(running, frozenset("ab"))
    assert not is_complete_set(running, frozenset("a"))


def test_dict_roundtrip(running):
    assert Dsc.from_dict(running.to_dict()) == running
    assert "a: {b} | {c}" in repr(running)
