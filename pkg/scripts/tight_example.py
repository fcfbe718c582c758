"""Rounding error on the tight family as k grows.

Prints, for each k, the oracle optimum, the LP optimum and the error
(load(e') - alpha_opt c(e')) / D of the rounded routing.

    python scripts/tight_example.py --ks 10 30 100 300 1000
"""
import argparse
import time
from dataclasses import dataclass, field
from fractions import Fraction

from ringbalance.lp import solve_relaxation
from ringbalance.oracle import brute_force_alpha_opt, tight_example
from ringbalance.rounding import balance_route


@dataclass
class Config:
    ks: list = field(default_factory=lambda: [10, 30, 100, 300, 1000])
    eps_power: int = 2  # eps = 1 / k^eps_power


def main(cfg: Config):
    cols = ("k", "eps", "alpha*", "alpha_opt", "load(e')", "error", "secs")
    print(" ".join(c.rjust(w) for c, w in zip(cols, (6, 10, 7, 12, 9, 9, 6))))
    for k in cfg.ks:
        t = time.perf_counter()
        eps = Fraction(1, k ** cfg.eps_power)
        ex = tight_example(k, eps)
        a_star = solve_relaxation(ex.instance).alpha_star
        a_opt = brute_force_alpha_opt(ex.instance).alpha_opt
        res = balance_route(ex.instance, ex.start_node)
        err = ex.error(res.loads, a_opt)
        print(f"{k:>6} {str(eps):>10} {str(a_star):>7} {float(a_opt):>12.8f} "
              f"{str(res.loads[ex.e_prime]):>9} {float(err):>9.5f} {time.perf_counter() - t:>6.2f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ks", type=int, nargs="+", default=Config().ks)
    ap.add_argument("--eps-power", type=int, default=Config.eps_power)
    a = ap.parse_args()
    main(Config(a.ks, a.eps_power))
