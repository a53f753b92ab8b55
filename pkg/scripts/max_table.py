"""Exact maxima table: best count and density per pattern and n, as CSV on stdout."""

import argparse
import csv
import sys
import time

from tourney.search import exhaustive_max


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--patterns", default="C3,C3PLUS,C3MINUS,C4,TT4")
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["pattern", "n", "best_count", "density", "approx", "maximizers", "seconds"])
    for pat in args.patterns.split(","):
        lo = 3 if pat in ("C3", "TT3") else 4
        for n in range(lo, args.n_max + 1):
            t0 = time.perf_counter()
            r = exhaustive_max(pat, n, args.threads)
            d = r.density
            w.writerow([pat, n, r.best_count, f"{d.numerator}/{d.denominator}", f"{float(d):.6f}", len(r.maximizers), f"{time.perf_counter() - t0:.2f}"])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
