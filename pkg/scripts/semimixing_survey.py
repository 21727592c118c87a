#!/usr/bin/env python3
"""Survey empirical semi-mixing thresholds across the built-in families.

For every legal source word up to a per-family length cap, run the witness
search against the family's seed set and print the threshold on the chosen
horizon.  Usage:

    python3 scripts/semimixing_survey.py [--horizon 30] [--max-len 4]
"""

import argparse
import time

from zeckmix.language import language_of_length
from zeckmix.semimixing import Family, check_empirical, seed_sets


FAMILIES = [
    Family("fibonacci"),
    Family("tribonacci"),
    Family("metallic", (2,)),
    Family("metallic", (3,)),
    Family("kbonacci", (4,)),
    Family("metallic-pisa", (3, 2)),
]


def survey(family, horizon, max_len):
    sub = family.substitution()
    seeds = seed_sets(family, sub)
    words = []
    for length in range(1, max_len + 1):
        words.extend(language_of_length(sub, length))
    start = time.time()
    thresholds = {}
    for w in words:
        table = check_empirical(sub, seeds, w, horizon)
        thresholds[w] = table.threshold
    elapsed = time.time() - start
    missing = [w for w, t in thresholds.items() if t is None]
    worst = max((t for t in thresholds.values() if t is not None), default=None)
    print(f"{family.label():22s} words={len(words):4d} horizon={horizon:3d} "
          f"worst-threshold={worst} unresolved={len(missing)} "
          f"({elapsed:.1f}s)")
    for w in missing:
        print(f"    no threshold on horizon for {w!r}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--horizon", type=int, default=30)
    parser.add_argument("--max-len", type=int, default=4)
    args = parser.parse_args()
    print(f"seed sets and thresholds on horizon {args.horizon} "
          f"(source words up to length {args.max_len})")
    for family in FAMILIES:
        survey(family, args.horizon, args.max_len)


if __name__ == "__main__":
    main()
