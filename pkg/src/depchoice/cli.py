"""Command line front end: ``depchoice <command> REPO [options]``.

Exit codes:

==  ==========================================================
0   success
1   a check reported failures (``laws``, ``validate --strict``)
2   bad usage
3   unreadable file, bad YAML or bad formula
4   invalid repository (unknown event, bad version map)
5   a size cap was hit
6   problem has no solution
7   structure outside a construction's domain
==  ==========================================================
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .combinatorics import chain_product_poly, width_bound
from .completion import NotDistributive, Nucleus, bl_completion, bl_topology, merkle_digest
from .dot import export_dot, lattice_json
from .dsc import DEFAULT_MAX_SETS, Exploded, InvalidDsc, UnknownEvent
from .formula import ParseError
from .logic import DEFAULT_MAX_UBL, UblLattice, UnknownAtom, check_modal_laws, lift_nucleus_ubl
from .order import CapExceeded, classify_lattice, element_name, width_height
from .rdp import DEFAULT_MAX_STATES, build_rdp
from .repofile import RepoFormatError, Repository, ValidationFailed, ingest, load_problem
from .representation import NotInImage, roundtrip_check
from .solver import Unsatisfiable, solve
from .versioning import InvalidVersionMap, NotJoinPreserving, induced_pvp, lift_nucleus_bl, nucleus_quotient

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_PARSE, EXIT_INVALID, EXIT_CAP, EXIT_UNSAT, EXIT_DOMAIN = range(8)

_ERRORS = [
    ((RepoFormatError, ParseError, OSError), EXIT_PARSE),
    ((UnknownEvent, UnknownAtom, ValidationFailed, InvalidDsc, InvalidVersionMap), EXIT_INVALID),
    ((CapExceeded, Exploded), EXIT_CAP),
    ((Unsatisfiable,), EXIT_UNSAT),
    ((NotInImage, NotJoinPreserving, NotDistributive), EXIT_DOMAIN),
]


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.data: dict = {}

    def put(self, key: str, value, text: str | None = None):
        self.data[key] = value
        if not self.as_json and text != "":
            print(text if text is not None else f"{key}: {value}")

    def finish(self):
        if self.as_json:
            print(json.dumps(self.data, indent=2, sort_keys=True))


def _write_dot(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _repo(args) -> Repository:
    return ingest(args.repo, max_sets=args.max_sets)


def _rdp(args, repo):
    return build_rdp(repo.dsc, max_states=args.max_states)


def _show_lattice(args, out: _Out, P, names, fixed=None, title="hasse"):
    if args.count:
        out.put("count", P.n)
    if args.dot:
        _write_dot(args.dot, export_dot(P, names, fixed or (), title=title))
    if args.json or not (args.count or args.dot):
        js = lattice_json(P, names, fixed)
        if args.json:
            out.data.update(js)
        else:
            for name in names:
                print(name)


def cmd_validate(args) -> int:
    repo = _repo(args)
    out = _Out(args.json)
    out.put("events", list(repo.dsc.events), f"{len(repo.dsc.events)} events: {' '.join(repo.dsc.events)}")
    out.put("deleted", repo.delta.deleted_events, "" if repo.delta.deleted_events else "no events deleted")
    if not args.json:
        for e in repo.delta.deleted_events:
            print(f"deleted: {e}")
        for e, (before, after) in repo.delta.changed.items():
            print(f"closed: {e} {before} -> {after}")
    out.data["changed"] = {e: {"before": b, "after": a} for e, (b, a) in repo.delta.changed.items()}
    out.put("versions", dict(repo.versions.raise_), None if repo.versions else "no versions")
    out.put("warnings", repo.warnings, "\n".join(f"warning: {w}" for w in repo.warnings) or "no warnings")
    out.finish()
    return EXIT_CHECK if args.strict and repo.warnings else EXIT_OK


def cmd_rdp(args) -> int:
    repo = _repo(args)
    r = _rdp(args, repo)
    out = _Out(args.json)
    names = [element_name(s) for s in r.sets]
    _show_lattice(args, out, r.lattice, names, title="rdp")
    if args.classify:
        c = classify_lattice(r.lattice)
        out.put("class", vars(c).copy(), " ".join(f"{k}={v}" for k, v in vars(c).items()))
    out.finish()
    return EXIT_OK


def cmd_bl(args) -> int:
    repo = _repo(args)
    b = bl_completion(_rdp(args, repo))
    out = _Out(args.json)
    names = [b.name(i) for i in range(b.lattice.n)]
    _show_lattice(args, out, b.lattice, names, title="bl")
    if args.digests:
        b = merkle_digest(b)
        digests = {lab.name: lab.digest.hex() for lab in sorted(b.labels.values(), key=lambda x: x.name)}
        out.put("digests", digests, "\n".join(f"{k} {v}" for k, v in digests.items()))
    out.finish()
    return EXIT_OK


def _ubl(args, repo):
    b = bl_completion(_rdp(args, repo))
    u = UblLattice(b, max_elements=args.max_ubl)
    u.lattice  # noqa: B018
    return b, u


def cmd_ubl(args) -> int:
    repo = _repo(args)
    _, u = _ubl(args, repo)
    out = _Out(args.json)
    _show_lattice(args, out, u.lattice, [u.format(x) for x in u.elements], title="ubl")
    out.finish()
    return EXIT_OK


def cmd_nucleus(args) -> int:
    repo = _repo(args)
    r = _rdp(args, repo)
    p = induced_pvp(r, repo.versions)
    out = _Out(args.json)
    if args.on == "rdp":
        P, mapping = r.lattice, p.mapping
        names = [element_name(s) for s in r.sets]
        laws = [(law, xs) for law, xs in p.violations()]
    else:
        b = bl_completion(r)
        if args.on == "bl":
            n = lift_nucleus_bl(b, p)
            names = [b.name(i) for i in range(b.lattice.n)]
        else:
            u = UblLattice(b, max_elements=args.max_ubl)
            n = lift_nucleus_ubl(u, p)
            names = [u.format(x) for x in u.elements]
        P, mapping = n.carrier, n.mapping
        laws = [(v.law, v.elements) for v in n.violations()]
    laws = [f"{law} fails at " + ", ".join(names[i] for i in xs) for law, xs in laws]
    fixed = [i for i, j in enumerate(mapping) if i == j]
    out.put("map", {names[i]: names[j] for i, j in enumerate(mapping)},
            "\n".join(f"{names[i]} -> {names[j]}" for i, j in enumerate(mapping)) if not (args.fixpoints or args.quotient) else "")
    if args.fixpoints:
        out.put("fixpoints", [names[i] for i in fixed], "\n".join(names[i] for i in fixed))
    if args.quotient:
        Q, _ = nucleus_quotient(Nucleus(P, tuple(mapping)))
        qnames = [names[i] for i in fixed]
        out.put("quotient", lattice_json(Q, qnames),
                f"quotient: {Q.n} elements, covers " + ", ".join(f"{qnames[a]} < {qnames[b]}" for a, b in Q.covers()))
        if args.dot:
            _write_dot(args.dot, export_dot(Q, qnames, title="quotient"))
    elif args.dot:
        _write_dot(args.dot, export_dot(P, names, fixed, title=f"nucleus on {args.on}"))
    out.put("violations", laws, "\n".join(f"violation: {v}" for v in laws) or "no law violations")
    out.finish()
    return EXIT_OK


def cmd_solve(args) -> int:
    repo = _repo(args)
    r = _rdp(args, repo)
    b = bl_completion(r)
    problem = load_problem(args.problem, repo)
    sol = solve(r, b, problem)
    out = _Out(args.json)
    out.put("state", sorted(sol.state), "state: " + " ".join(sorted(sol.state)))
    out.put("trace_state", b.name(sol.trace_state), f"trace state: {b.name(sol.trace_state)}")
    out.put("value", sol.value)
    out.put("optima", [sorted(s) for s in sol.all_optima],
            "optima: " + ", ".join("{" + ",".join(sorted(s)) + "}" for s in sol.all_optima))
    out.finish()
    return EXIT_OK


def _law(law: str, xs, names) -> str:
    return f"{law} fails at " + ", ".join(f"[{names[i]}]" for i in xs)


def cmd_laws(args) -> int:
    repo = _repo(args)
    r = _rdp(args, repo)
    b = bl_completion(r)
    out = _Out(args.json)
    results: dict[str, list[str]] = {}
    rnames = [element_name(x) for x in r.sets]
    bnames = [b.name(i) for i in range(b.lattice.n)]
    p = induced_pvp(r, repo.versions)
    results["rdp ponucleus"] = [_law(law, xs, rnames) for law, xs in p.violations()]
    results["bl topology"] = [_law(v.law, v.elements, bnames) for v in bl_topology(b.lattice).violations()]
    try:
        nb = lift_nucleus_bl(b, p)
        results["bl version nucleus"] = [_law(v.law, v.elements, bnames) for v in nb.violations()]
        u = UblLattice(b, max_elements=args.max_ubl)
        unames = [u.format(x) for x in u.elements]
        nu = lift_nucleus_ubl(u, p)
        results["ubl version nucleus"] = [_law(v.law, v.elements, unames) for v in nu.violations()]
        rep = check_modal_laws(u.lattice, nu)
        results["modal laws"] = [_law(law, xs, unames) for law in rep.failed() for xs in rep.counterexamples[law]]
    except NotJoinPreserving as exc:
        results["version lift"] = [str(exc)]
    rt = roundtrip_check(repo.dsc, max_states=args.max_states)
    results["roundtrip"] = [] if rt.ok else ["reachable lattice not recovered"]
    failed = False
    for name, bad in results.items():
        failed |= bool(bad)
        out.put(name, bad, f"{'FAIL' if bad else 'ok':4} {name}" + "".join(f"\n     {x}" for x in bad[:10]))
    out.finish()
    return EXIT_CHECK if failed else EXIT_OK


def cmd_widths(args) -> int:
    out = _Out(args.json)
    if args.repo:
        repo = _repo(args)
        r = _rdp(args, repo)
        b = bl_completion(r)
        w, h = width_height(r.lattice)
        out.put("rdp", {"width": w, "height": h}, f"rdp: width {w} height {h}")
        w, h = width_height(b.lattice)
        out.put("downsets", {"width": w, "height": h}, f"downsets of join-irreducibles: width {w} height {h}")
        jw, jh = width_height(b.ji)
        bound = width_bound(b.ji)
        out.put("bound", {"poset_width": jw, "poset_height": jh, "bound": bound, "exact": w, "holds": bound >= w},
                f"bound {bound} vs exact {w}: {'holds' if bound >= w else 'VIOLATED'}")
    if args.chains:
        heights = [int(x) for x in args.chains.split(",")]
        poly = chain_product_poly(heights)
        out.put("chains", {"heights": heights, "poly": list(poly.coefficients), "width": poly.middle()},
                f"chains {heights}: rank numbers {list(poly.coefficients)}, width {poly.middle()}")
    if not args.repo and not args.chains:
        print("widths needs a repository or --chains", file=sys.stderr)
        return EXIT_USAGE
    out.finish()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="depchoice", description="Dependency structures with choice.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, repo_required=True):
        if repo_required:
            p.add_argument("repo", help="repository YAML file")
        else:
            p.add_argument("repo", nargs="?", help="repository YAML file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
        p.add_argument("--max-sets", type=int, default=DEFAULT_MAX_SETS)
        p.add_argument("--max-ubl", type=int, default=DEFAULT_MAX_UBL)

    def render(p):
        p.add_argument("--count", action="store_true", help="print the number of elements")
        p.add_argument("--dot", metavar="FILE", help="write a Hasse diagram ('-' for stdout)")

    p = sub.add_parser("validate", help="ingest and report completion changes")
    common(p)
    p.add_argument("--strict", action="store_true", help="exit 1 when there are warnings")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("rdp", help="lattice of reachable event sets")
    common(p)
    render(p)
    p.add_argument("--classify", action="store_true")
    p.set_defaults(func=cmd_rdp)

    p = sub.add_parser("bl", help="completion with trace labels")
    common(p)
    render(p)
    p.add_argument("--digests", action="store_true", help="print label digests")
    p.set_defaults(func=cmd_bl)

    p = sub.add_parser("ubl", help="requirement lattice")
    common(p)
    render(p)
    p.set_defaults(func=cmd_ubl)

    p = sub.add_parser("nucleus", help="version nucleus")
    common(p)
    p.add_argument("--on", choices=("rdp", "bl", "ubl"), default="rdp")
    p.add_argument("--fixpoints", action="store_true")
    p.add_argument("--quotient", action="store_true")
    p.add_argument("--dot", metavar="FILE")
    p.set_defaults(func=cmd_nucleus)

    p = sub.add_parser("solve", help="solve a dependency problem")
    common(p)
    p.add_argument("problem", help="problem YAML file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("laws", help="check nucleus and modal laws and the roundtrip")
    common(p)
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("widths", help="widths, heights and the width bound")
    common(p, repo_required=False)
    p.add_argument("--chains", metavar="H1,H2,...", help="chain heights")
    p.set_defaults(func=cmd_widths)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except Exception as exc:
        for types, code in _ERRORS:
            if isinstance(exc, types):
                print(f"error: {exc}", file=sys.stderr)
                return code
        raise


if __name__ == "__main__":
    sys.exit(main())
