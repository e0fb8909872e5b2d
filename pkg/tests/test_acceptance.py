"""End-to-end checks, one per acceptance criterion.

Each test records a ``PASS``/``FAIL criterion k: ...`` line that is printed
in the terminal summary, then asserts.  Random batteries use fixed seeds.
"""
import itertools
import math
import random

import pytest

import conftest
import oracles
from depchoice.combinatorics import chain_product_width, width_bound
from depchoice.completion import Nucleus, bl_completion, bl_topology
from depchoice.generate import (
    distributive_lattices,
    posets_up_to_iso,
    random_dsc,
    random_poset,
    random_versioned_dsc,
)
from depchoice.logic import UblLattice, build_ubl, check_modal_laws, lift_nucleus_ubl
from depchoice.order import (
    CapExceeded,
    FiniteLattice,
    FinitePoset,
    classify_lattice,
    downsets,
    find_s7_cover,
    is_isomorphic,
    subset_lattice,
    width,
)
from depchoice.rdp import build_rdp
from depchoice.representation import compute_q, roundtrip_check, uds
from depchoice.solver import DependencyProblem, WeightedSum, solve
from depchoice.versioning import NotJoinPreserving, VersionMap, induced_pvp, lift_nucleus_bl, lift_to_bl, nucleus_quotient

from test_combinatorics import chain_tuples

B_TO_C = VersionMap({"b": "c"})


def record(k, ok, detail):
    conftest.ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
    assert ok, detail


def chain(n):
    return FinitePoset.chain(range(n))


def grid(m, n):
    return FinitePoset.from_relation(
        list(itertools.product(range(m), range(n))), lambda p, q: p[0] <= q[0] and p[1] <= q[1])


def s7():
    return FiniteLattice.from_poset(FinitePoset.from_covers(
        ["0", "b", "c", "ab", "bc", "ac", "1"],
        [("0", "b"), ("0", "c"), ("b", "ab"), ("b", "bc"), ("c", "bc"), ("c", "ac"),
         ("ab", "1"), ("bc", "1"), ("ac", "1")]))


def test_criterion_1_running_rdp(running_rdp):
    L = running_rdp.lattice
    c = classify_lattice(L)
    got = (L.n, is_isomorphic(L, s7()), find_s7_cover(L) is not None,
           c.upper_semimodular, c.modular, c.distributive, c.has_m3)
    expected = (7, True, True, True, False, False, False)
    record(1, got == expected,
           f"{L.n} elements, S7 shape {got[1]}, usm={c.upper_semimodular} modular={c.modular} "
           f"distributive={c.distributive} m3={c.has_m3}")


def test_criterion_2_running_completion(running_bl):
    b = running_bl
    labels = sorted(lab.name for lab in b.labels.values())
    ok = b.lattice.n == 9 and is_isomorphic(b.lattice, grid(3, 3)) and labels == ["a_b", "a_c", "b", "c"]
    record(2, ok, f"{b.lattice.n} elements, 3x3 grid {is_isomorphic(b.lattice, grid(3, 3))}, labels {labels}")


def test_criterion_3_version_nucleus(running_rdp, running_bl):
    r, b = running_rdp, running_bl
    p = induced_pvp(r, B_TO_C)
    n = lift_nucleus_bl(b, p)
    on_rdp = sorted(("".join(sorted(r.sets[i])) or "{}") for i in p.fixed_points())
    on_bl = sorted(b.name(i) for i in n.fixed_points())
    q_rdp, _ = nucleus_quotient(Nucleus(r.lattice, p.mapping))
    q_bl, _ = nucleus_quotient(n)
    chains = is_isomorphic(q_rdp, chain(3)) and is_isomorphic(q_bl, chain(3))
    ok = on_rdp == ["abc", "bc", "{}"] and on_bl == ["a_b a_c", "bc", "{}"] and chains
    record(3, ok, f"rdp fixed {on_rdp}, completion fixed {on_bl}, quotients 3-chains {chains}")


def test_criterion_4_requirement_lattice_counts(running_rdp, running_bl):
    V = FinitePoset.from_covers(["a", "b_a", "c_a"], [("a", "b_a"), ("a", "c_a")])
    counts = {
        "discrete-2": (len(build_ubl(FinitePoset.discrete(range(2)))), 6),
        "2-chain": (len(build_ubl(chain(2))), 4),
        "V": (len(build_ubl(V)), 7),
        "discrete-4": (len(build_ubl(FinitePoset.discrete(range(4)))), 168),
        "running": (len(build_ubl(running_bl)), 21),
    }
    u = build_ubl(running_bl)
    n = lift_nucleus_ubl(u, induced_pvp(running_rdp, B_TO_C))
    fixed = sorted(u.format(u.element(i)) for i in n.fixed_points())
    closed_ok = (fixed == sorted(["true", "bc", "a_b a_c", "false"])
                 and is_isomorphic(u.lattice.subposet(n.fixed_points()), chain(4)))
    bad = {k: v for k, v in counts.items() if v[0] != v[1]}
    detail = ", ".join(f"{k} {got}/{want}" for k, (got, want) in counts.items())
    detail += f", modal-closed {fixed} chain={closed_ok}"
    if bad:
        # the running requirement lattice is the downsets of a 3x3 grid: 20 elements
        detail += "; mismatch " + ", ".join(bad)
    record(4, not bad and closed_ok, detail)


def test_criterion_5_representation_roundtrip():
    rng = random.Random(5)
    fails = 0
    for _ in range(500):
        if not roundtrip_check(random_dsc(rng, rng.randint(1, 5))).ok:
            fails += 1
    lat_fails = 0
    n_lat = 0
    for L in distributive_lattices(16):
        n_lat += 1
        d = uds(L)
        if len(compute_q(L)) or not d.is_choice_free() or not is_isomorphic(build_rdp(d).lattice, L):
            lat_fails += 1
    record(5, fails == 0 and lat_fails == 0,
           f"random roundtrips failed {fails}/500, distributive lattices failed {lat_fails}/{n_lat}")


def test_criterion_6_nucleus_and_modal_laws(running_rdp, running_bl):
    laws = ("inflationary", "idempotent", "meets")
    # completion topologies of random finite distributive lattices
    rng = random.Random(6)
    topo_fail = 0
    for _ in range(100):
        L = downsets(random_poset(rng, rng.randint(1, 5)))
        if bl_topology(L).violations(("monotone",) + laws):
            topo_fail += 1

    # the running example with b -> c
    u6 = build_ubl(running_bl)
    p6 = induced_pvp(running_rdp, B_TO_C)
    fig_bl = bool(lift_nucleus_bl(running_bl, p6).violations(laws))
    n6 = lift_nucleus_ubl(u6, p6)
    fig_ubl = bool(n6.violations(laws))
    fig_modal = check_modal_laws(u6.lattice, n6).failed()

    # random versioned instances
    rng = random.Random(66)
    done = skipped_cap = not_join = bl_fail = ubl_fail = modal_fail = 0
    while done < 100:
        d, v = random_versioned_dsc(rng, rng.randint(1, 5))
        r = build_rdp(d)
        b = bl_completion(r)
        u = UblLattice(b, max_elements=200)
        try:
            u.lattice
        except CapExceeded:
            skipped_cap += 1
            continue
        done += 1
        p = induced_pvp(r, v)
        try:
            nb = lift_nucleus_bl(b, p)
        except NotJoinPreserving:
            not_join += 1
            nb = Nucleus(b.lattice, lift_to_bl(b, p))
        bl_fail += bool(nb.violations(laws))
        nu = lift_nucleus_ubl(u, nb)
        ubl_fail += bool(nu.violations(laws))
        modal_fail += not check_modal_laws(u.lattice, nu).ok

    ok = not (topo_fail or fig_bl or fig_ubl or fig_modal or not_join or bl_fail or ubl_fail or modal_fail)
    record(6, ok,
           f"topologies failed {topo_fail}/100; running example: completion lift breaks meets {fig_bl}, "
           f"requirement lift breaks laws {fig_ubl}, modal failures {fig_modal or 'none'}; "
           f"random 100 (+{skipped_cap} skipped over size cap): version map not join-preserving {not_join}, "
           f"completion lift fails {bl_fail}, requirement lift fails {ubl_fail}, modal laws fail {modal_fail}")


def test_criterion_7_solver_oracle():
    rng = random.Random(7)
    mismatches = 0
    for _ in range(300):
        d = random_dsc(rng, rng.randint(1, 5))
        r = build_rdp(d)
        b = bl_completion(r)
        f = oracles.random_dnf(rng, d.events)
        obj = WeightedSum({e: float(rng.randint(0, 5)) for e in d.events})
        value, optima = oracles.brute_force_optimum(b, f, obj)
        s = solve(r, b, DependencyProblem(f, obj))
        if s.value != value or s.state not in optima:
            mismatches += 1
    record(7, mismatches == 0, f"{mismatches} mismatches in 300 instances")


def test_criterion_8_widths():
    sperner = []
    for n in range(6):
        B = subset_lattice(range(1 << n))
        leq = B.le
        sperner.append(oracles.max_antichain(B.elements, leq) == math.comb(n, -(-n // 2)))
    tuples = chain_tuples(200)
    chain_bad = []
    for hs in tuples:
        pts, leq = oracles.chain_product(hs)
        if chain_product_width(hs) != oracles.max_antichain_search(pts, leq):
            chain_bad.append(hs)
    rng = random.Random(8)
    below = []
    for _ in range(200):
        P = random_poset(rng, rng.randint(1, 7), rng.choice([0.1, 0.3, 0.5]))
        exact = width(downsets(P))
        if width_bound(P) < exact:
            below.append((P.n, width_bound(P), exact))
    discrete_eq = all(width_bound(FinitePoset.discrete(range(n))) == width(downsets(FinitePoset.discrete(range(n))))
                      for n in range(1, 8))
    ok = all(sperner) and not chain_bad and not below and discrete_eq
    record(8, ok,
           f"Sperner n<=5 {all(sperner)}; chain products {len(tuples) - len(chain_bad)}/{len(tuples)} match; "
           f"bound below exact width on {len(below)}/200 posets (e.g. {below[:2]}); discrete equality {discrete_eq}")


def test_criterion_9_antichain_bijection():
    bad = []
    total = 0
    for P in posets_up_to_iso(4):
        total += 1
        D = downsets(P)
        expected = len(oracles.antichains(D.elements, lambda s, t: s <= t))
        if len(build_ubl(P)) != expected:
            bad.append(P)
    record(9, not bad, f"{total - len(bad)}/{total} posets match")


@pytest.fixture(scope="session", autouse=True)
def _summary_order():
    yield
    conftest.ACCEPTANCE_LINES.sort(key=lambda s: int(s.split("criterion ")[1].split(":")[0]))
