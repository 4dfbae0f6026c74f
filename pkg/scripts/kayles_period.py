"""KAYLES values, GA1 single-heap values and the detected period."""

import argparse

from grundygp.games import Ruleset
from grundygp.solver import detect_period, grundy_sequence, kayles_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=400)
    ap.add_argument("--ga1-max", type=int, default=60)
    args = ap.parse_args()

    seq = kayles_table(args.max)
    rep = detect_period(seq)
    print("KAYLES 0..40:", " ".join(map(str, seq[:41])))
    print(f"period {rep.period}, preperiod {rep.preperiod}, checked through {rep.verified_through}")

    ga1 = grundy_sequence(Ruleset.GA1, "single-heap", args.ga1_max)
    shifted = all(ga1[n - 1] == seq[n - 1] for n in range(1, args.ga1_max + 1))
    print(f"GA1 heap n == KAYLES n-1 for n <= {args.ga1_max}: {shifted}")


if __name__ == "__main__":
    main()
