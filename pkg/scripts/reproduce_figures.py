"""Rebuild the running example's lattices and write their Hasse diagrams.

    python scripts/reproduce_figures.py --out figures
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from depchoice.completion import Nucleus, bl_completion, merkle_digest
from depchoice.dot import export_dot
from depchoice.dsc import Dsc
from depchoice.logic import build_ubl, lift_nucleus_ubl
from depchoice.order import FinitePoset, classify_lattice, element_name
from depchoice.rdp import build_rdp
from depchoice.versioning import VersionMap, induced_pvp, lift_to_bl


@dataclass
class Config:
    out: Path = Path("figures")
    deps: tuple = (("a", (("b",), ("c",))), ("b", ((),)), ("c", ((),)))
    raise_: tuple = (("b", "c"),)


def run(cfg: Config) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    d = Dsc.from_dict({e: [list(s) for s in alts] for e, alts in cfg.deps})
    v = VersionMap(dict(cfg.raise_))
    r = build_rdp(d)
    b = merkle_digest(bl_completion(r))
    u = build_ubl(b)
    p = induced_pvp(r, v)
    # the lift is applied even when the version map misses some joins
    nb = Nucleus(b.lattice, lift_to_bl(b, p))
    nu = lift_nucleus_ubl(u, nb)

    print(f"reachable sets: {r.lattice.n}  {classify_lattice(r.lattice)}")
    print(f"completion: {b.lattice.n}")
    for lab in sorted(b.labels.values(), key=lambda lab: lab.name):
        print(f"  {lab.name:6} {lab.digest.hex()[:16]}")
    print(f"requirements: {len(u)}")
    print("modal-closed:", ", ".join(u.format(u.element(i)) for i in nu.fixed_points()))

    figures = {
        "reachable": (r.lattice, [element_name(s) for s in r.sets], p.fixed_points()),
        "completion": (b.lattice, [b.name(i) for i in range(b.lattice.n)], nb.fixed_points()),
        "requirements": (u.lattice, [u.format(x) for x in u.elements], nu.fixed_points()),
    }
    for name, (P, names, fixed) in figures.items():
        (cfg.out / f"{name}.dot").write_text(export_dot(P, names, fixed=fixed, title=name))
    for name, P in {
        "discrete2": FinitePoset.discrete(range(2)),
        "chain2": FinitePoset.chain(range(2)),
        "vee": FinitePoset.from_covers(["a", "b_a", "c_a"], [("a", "b_a"), ("a", "c_a")]),
    }.items():
        w = build_ubl(P)
        print(f"requirements over {name}: {len(w)}")
        (cfg.out / f"requirements_{name}.dot").write_text(
            export_dot(w.lattice, [w.format(x) for x in w.elements], title=name))
    print(f"wrote {len(list(cfg.out.glob('*.dot')))} diagrams to {cfg.out}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Config.out)
    run(Config(out=ap.parse_args().out))


if __name__ == "__main__":
    main()
