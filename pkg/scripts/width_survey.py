"""Compare the width bound with exact downset widths on random posets.

    python scripts/width_survey.py --samples 500 --max-n 8 --seed 1
"""
from __future__ import annotations

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from depchoice.combinatorics import width_bound
from depchoice.generate import random_poset
from depchoice.order import downsets, width, width_height


@dataclass
class Config:
    samples: int = 500
    max_n: int = 8
    seed: int = 1
    densities: tuple = (0.1, 0.3, 0.5)


def run(cfg: Config) -> Counter:
    rng = random.Random(cfg.seed)
    tally: Counter = Counter()
    worst = []
    for _ in range(cfg.samples):
        P = random_poset(rng, rng.randint(1, cfg.max_n), rng.choice(cfg.densities))
        exact = width(downsets(P))
        bound = width_bound(P)
        key = "below" if bound < exact else "equal" if bound == exact else "above"
        tally[key] += 1
        if bound < exact:
            worst.append((exact - bound, P.n, width_height(P), bound, exact))
    print(f"{cfg.samples} posets, n <= {cfg.max_n}: " + ", ".join(f"{k} {tally[k]}" for k in ("below", "equal", "above")))
    for gap, n, (w, h), bound, exact in sorted(worst, reverse=True)[:10]:
        print(f"  n={n} width={w} height={h}: bound {bound} < exact {exact}")
    return tally


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    run(Config(a.samples, a.max_n, a.seed))


if __name__ == "__main__":
    main()
