"""Extreme CM positions 1^n / 0^n, solved directly and through ARC KAYLES."""

import argparse
import time

from grundygp.games import Ruleset, cm_to_arc_kayles
from grundygp.solver import GrundyCache, extreme_cm, grundy


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=12)
    ap.add_argument("--graph-max", type=int, default=7, help="largest n also solved as a graph")
    args = ap.parse_args()

    cm, ak = GrundyCache(), GrundyCache()
    print("n  cm  arc_kayles  edges  seconds")
    for n in range(1, args.max + 1):
        t0 = time.perf_counter()
        p = extreme_cm(n)
        direct = grundy(p, Ruleset.CM, cm)
        via, edges = "-", "-"
        if n <= args.graph_max:
            g = cm_to_arc_kayles(p)
            via, edges = grundy(g, Ruleset.ARC_KAYLES, ak), len(g)
        print(f"{n:<2} {direct:<3} {via!s:<11} {edges!s:<6} {time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
