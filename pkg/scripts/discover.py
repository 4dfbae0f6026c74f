"""Run GP over a range of seeds and count exact discoveries.

    python3 scripts/discover.py --heaps 1 --seeds 0-19
    python3 scripts/discover.py --heaps 3 --count-primed --seeds 0-9 \
        --set tournament_size=7 --set p_crossover=0.5 --set p_subtree_mutation=0.25 --set p_point_mutation=0.15
"""

import argparse
import json

from grundygp.evolve import EvolutionConfig, generate_dataset, run


def seed_range(text):
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ruleset", default="ga2")
    ap.add_argument("--heaps", type=int, default=1)
    ap.add_argument("--max-size", type=int, default=10)
    ap.add_argument("--count-primed", action="store_true")
    ap.add_argument("--seeds", type=seed_range, default=seed_range("0-4"))
    ap.add_argument("--set", action="append", default=[], metavar="FIELD=JSON",
                    help="override an EvolutionConfig field")
    args = ap.parse_args()

    overrides = {}
    for item in args.set:
        k, v = item.split("=", 1)
        overrides[k] = json.loads(v)
    d = generate_dataset(args.ruleset, args.heaps, args.max_size, args.count_primed)
    hits = 0
    for s in args.seeds:
        r = run(EvolutionConfig.from_dict({**overrides, "seed": s}), d)
        hits += r.termination == "EXACT"
        print(f"seed {s:3d} {r.termination:16s} fitness {r.best_fitness:>6} "
              f"gens {len(r.generations):2d} {r.wall_time:5.1f}s  {r.best_expression}")
    print(f"{hits}/{len(args.seeds)} exact")


if __name__ == "__main__":
    main()
