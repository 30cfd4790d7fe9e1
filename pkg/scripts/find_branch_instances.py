"""Search seeded instances for runs that reach a given improvement case.

Prints one JSON object per hit: the instance, the allocation before the step,
the pooled item, and the step's outcome.  Used to build tests/fixtures.

    python scripts/find_branch_instances.py --case TWO_SOURCE_EXCHANGE --seeds 2000
"""

import argparse
import json

from twotype_efx.engine import Case, solve
from twotype_efx.generator import GenSpec, generate
from twotype_efx.model import instance_to_dict


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--case", default="TWO_SOURCE_EXCHANGE", choices=[c.value for c in Case])
    ap.add_argument("--seeds", type=int, default=2000)
    ap.add_argument("--m", type=int, nargs="+", default=[10])
    ap.add_argument("--limit", type=int, default=5)
    args = ap.parse_args()

    hits = 0
    for seed in range(args.seeds):
        for na, nb in [(2, 2), (2, 3), (3, 3), (2, 4), (3, 2)]:
            for m in args.m:
                spec = GenSpec(na, nb, m=m, seed=seed, shuffle_agents=True)
                inst = generate(spec)
                result = solve(inst)
                prev = result.start
                for step in result.steps:
                    if step.case.value == args.case:
                        print(json.dumps({
                            "spec": spec.to_dict(),
                            "instance": instance_to_dict(inst),
                            "before": [sorted(b) for b in prev.bundles],
                            "g": step.g,
                            "detail": step.detail,
                            "after": [sorted(b) for b in step.allocation.bundles],
                        }), flush=True)
                        hits += 1
                        if hits >= args.limit:
                            return
                    prev = step.allocation


if __name__ == "__main__":
    main()
