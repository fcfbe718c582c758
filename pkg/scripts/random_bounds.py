"""How close does LP rounding get to the additive 3D/2 bound on random rings?

For every instance the script records the worst ratio
(load(e) - alpha* c(e)) / D over edges, the integrality ratio
alpha_opt / alpha*, and how often uncrossing was needed.

    python scripts/random_bounds.py --count 2000 --seed 7
"""
import argparse
import statistics
import time
from dataclasses import dataclass
from fractions import Fraction

from ringbalance.oracle import brute_force_alpha_opt, random_corpus
from ringbalance.rounding import balance_route


@dataclass
class Config:
    count: int = 1000
    seed: int = 0
    n_max: int = 6
    m_max: int = 8
    oracle: bool = True


def main(cfg: Config):
    start = time.perf_counter()
    excess, gaps, uncrossed, worst = [], [], 0, None
    for k, inst in enumerate(random_corpus(cfg.count, cfg.seed, (2, cfg.n_max), (1, cfg.m_max))):
        res = balance_route(inst)
        D = inst.max_demand()
        over = max((load - res.alpha_star * inst.capacity(e)) / D for e, load in res.loads.items())
        excess.append(over)
        if worst is None or over > worst[0]:
            worst = (over, k)
        uncrossed += bool(res.uncross_steps)
        if cfg.oracle and res.alpha_star:
            gaps.append(brute_force_alpha_opt(inst).alpha_opt / res.alpha_star)
    print(f"instances           {len(excess)}")
    print(f"max excess / D      {float(max(excess)):.4f}  (instance {worst[1]}, bound 1.5)")
    print(f"mean excess / D     {float(statistics.mean(excess)):.4f}")
    print(f"with uncrossing     {uncrossed}")
    if gaps:
        print(f"alpha_opt / alpha*  max {float(max(gaps)):.4f}  mean {float(statistics.mean(gaps)):.4f}  (bound 2)")
    print(f"seconds             {time.perf_counter() - start:.1f}")
    return max(excess) < Fraction(3, 2)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    ap.add_argument("--m-max", type=int, default=Config.m_max)
    ap.add_argument("--no-oracle", action="store_true")
    a = ap.parse_args()
    main(Config(a.count, a.seed, a.n_max, a.m_max, not a.no_oracle))
