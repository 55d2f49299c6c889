"""Compare a P5 and a P7 code on both sides of the expected threshold.

Not part of the gating test suite.  Runs 10^3 trials per point with the BP
iteration cap at 100 and checks that the larger code is better at
p_phys = 0.06 and no better at p_phys = 0.16.

    python scripts/stretch_threshold.py [--trials 1000] [--workers 1]
"""

import argparse
import sys
import time

from qmargulis.decoder import DecoderConfig
from qmargulis.search import search_code
from qmargulis.simulate import TrialPolicy, run_point


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--max-iters", type=int, default=100)
    ap.add_argument("--seed", type=int, default=12)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    codes = {}
    # dimensions listed for the girth-8 instances with |A|=2, |B|=3
    for p, k in ((5, 8), (7, 4)):
        res = search_code(p, 2, 3, target_girth=8, budget=2000, seed=0, target_k=k)
        codes[p] = res.code
        print(f"P{p}: n={res.code.n} k={res.code.k} girth={res.code.girth}")

    cfg = DecoderConfig(max_iterations=args.max_iters)
    policy = TrialPolicy(min_trials=args.trials, target_failures=1, max_trials=args.trials)
    ler = {}
    for p_phys in (0.06, 0.16):
        for p, code in codes.items():
            t0 = time.time()
            rec = run_point(code, p_phys, policy, cfg, seed=args.seed, workers=args.workers)
            ler[p, p_phys] = rec.ler
            print(f"P{p} p_phys={p_phys}: {rec.failures}/{rec.trials} ler={rec.ler:.4f} "
                  f"ci=[{rec.ci_low:.4f},{rec.ci_high:.4f}] ({time.time() - t0:.0f}s)")

    below = ler[7, 0.06] < ler[5, 0.06]
    above = ler[7, 0.16] >= ler[5, 0.16]
    print(f"larger code better at 0.06: {below}")
    print(f"larger code worse or equal at 0.16: {above}")
    print("consistent with a threshold in between" if below and above else "inconclusive")
    return 0 if below and above else 1


if __name__ == "__main__":
    sys.exit(main())
