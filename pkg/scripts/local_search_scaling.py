"""Local-search C4 counts against the exact maximum for odd and even n."""

import argparse
import time

from tourney.analysis import c4_max_formula
from tourney.search import local_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", default="9,11,13,15")
    ap.add_argument("--restarts", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    print("n   best  formula  ratio   hits  seconds")
    for n in map(int, args.n.split(",")):
        t0 = time.perf_counter()
        r = local_search("C4", n, seed=args.seed, restarts=args.restarts, threads=args.threads)
        opt = c4_max_formula(n)
        hits = sum(x["best_count"] == opt for x in r.stats["restarts"])
        print(f"{n:<3} {r.best_count:<5} {opt:<8} {r.best_count / opt:.4f}  {hits:>2}/{args.restarts}  {time.perf_counter() - t0:.1f}")


if __name__ == "__main__":
    main()
