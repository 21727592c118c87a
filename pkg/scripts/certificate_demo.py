#!/usr/bin/env python3
"""Build, print and replay constructive semi-mixing certificates.

Picks a few legal source words per constructive family, derives witnesses
just above each threshold, and replays the whole range through the
independent legality engine.  Usage:

    python3 scripts/certificate_demo.py [--span 25] [--words 5]
"""

import argparse

from zeckmix.language import language_of_length
from zeckmix.semimixing import (
    Family,
    certificate_report,
    certify,
    derive_witness,
    verify_certificate,
)

FAMILIES = [
    (Family("fibonacci"), 30),
    (Family("tribonacci"), 20),
    (Family("metallic", (2,)), 20),
]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--span", type=int, default=None,
                        help="override the per-family verification span")
    parser.add_argument("--words", type=int, default=5)
    parser.add_argument("--full-report", action="store_true",
                        help="print one full certificate per family")
    args = parser.parse_args()
    for family, span in FAMILIES:
        span = args.span if args.span is not None else span
        sub = family.substitution()
        words = list(language_of_length(sub, 2))[:args.words]
        printed = False
        for w in words:
            cert = certify(sub, family, w)
            outcome = verify_certificate(
                cert, range(cert.threshold, cert.threshold + span + 1)
            )
            u, s, steps = derive_witness(cert, cert.threshold)
            print(f"{family.label():14s} w={w:4s} N={cert.threshold:2d} "
                  f"level={cert.level} first-witness u={u!r} s={s} "
                  f"steps={len(steps)} verified[{span + 1}]={outcome.ok}")
            if args.full_report and not printed:
                print(certificate_report(cert))
                printed = True


if __name__ == "__main__":
    main()
