"""Approximation scheme against the exact optimum for a few epsilons.

Reports the achieved score max load / (c + eps cbar) relative to alpha_opt
and the number of candidate routings tried.

    python scripts/scheme_quality.py --count 200 --eps 1 1/2 1/3
"""
import argparse
import statistics
import time
from dataclasses import dataclass, field
from fractions import Fraction

from ringbalance.oracle import brute_force_alpha_opt, random_corpus
from ringbalance.ring import congestion
from ringbalance.rounding import balance_route
from ringbalance.scheme import SchemeParams, approximation_scheme


@dataclass
class Config:
    count: int = 200
    seed: int = 1
    eps: list = field(default_factory=lambda: [Fraction(1), Fraction(1, 2), Fraction(1, 3)])
    grid_steps: int = 2


def main(cfg: Config):
    insts = random_corpus(cfg.count, cfg.seed, (2, 5), (1, 6))
    opts = [brute_force_alpha_opt(i).alpha_opt for i in insts]
    plain = [congestion(i, balance_route(i).loads) / o for i, o in zip(insts, opts)]
    print(f"plain rounding: congestion / alpha_opt  max {float(max(plain)):.3f}  mean {float(statistics.mean(plain)):.3f}")
    for eps in cfg.eps:
        t = time.perf_counter()
        ratios, cands = [], []
        for inst, a_opt in zip(insts, opts):
            res = approximation_scheme(inst, SchemeParams(eps, cfg.grid_steps))
            ratios.append(res.best.score / a_opt)
            cands.append(res.candidate_count)
        print(f"eps={str(eps):>4}: score / alpha_opt  max {float(max(ratios)):.3f}  mean {float(statistics.mean(ratios)):.3f}"
              f"  candidates mean {statistics.mean(cands):.1f}  {time.perf_counter() - t:.1f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--eps", type=Fraction, nargs="+", default=Config().eps)
    ap.add_argument("--grid-steps", type=int, default=Config.grid_steps)
    a = ap.parse_args()
    main(Config(a.count, a.seed, a.eps, a.grid_steps))
