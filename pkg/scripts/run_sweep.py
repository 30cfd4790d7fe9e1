"""Case-frequency and runtime sweep over seeded instances.

Solves every (profile, distribution, seed) combination and prints one JSON
summary per profile with step counts by case, mean steps per run and wall time.

    python scripts/run_sweep.py --seeds 200 -m 10 --dist uniform_int correlated
"""

import argparse
import json
import time
from collections import Counter

from twotype_efx import checker
from twotype_efx.engine import solve
from twotype_efx.generator import DISTRIBUTIONS, GenSpec, generate

PROFILES = [(0, 4), (1, 4), (2, 2), (2, 3), (3, 3)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("-m", type=int, default=10)
    ap.add_argument("--dist", nargs="+", default=["uniform_int"], choices=DISTRIBUTIONS)
    ap.add_argument("--assert-lemmas", action="store_true")
    args = ap.parse_args()

    for na, nb in PROFILES:
        for dist in args.dist:
            cases, runs, steps = Counter(), 0, 0
            start = time.perf_counter()
            for seed in range(args.seeds):
                inst = generate(GenSpec(na, nb, m=args.m, dist=dist, seed=seed,
                                        shuffle_agents=True))
                result = solve(inst, assert_lemmas=args.assert_lemmas)
                assert checker.is_efx(inst, result.allocation, checker.Mode.RAW)
                if result.base_case:
                    cases[result.base_case] += 1
                cases.update(step.case.value for step in result.steps)
                runs += 1
                steps += len(result.steps)
            print(json.dumps({
                "n_alpha": na, "n_beta": nb, "m": args.m, "dist": dist, "runs": runs,
                "mean_steps": round(steps / runs, 2), "cases": dict(sorted(cases.items())),
                "seconds": round(time.perf_counter() - start, 3),
            }), flush=True)


if __name__ == "__main__":
    main()
