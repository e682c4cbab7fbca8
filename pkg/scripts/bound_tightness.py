#!/usr/bin/env python3
"""How often do random convolutions attain the a-priori order bound?

Draws random integer C-finite sequences, derives their self and cross
binomial convolutions, and tabulates order_found against order_bound by
operand orders.  Improper results (roots cancelling as alpha + beta = 0) are
counted separately.
"""

from __future__ import annotations

import argparse
import random
from collections import Counter

from cfconv.cfseq import CFiniteSequence, to_gf
from cfconv.convolve import cross_convolution_identity, self_convolution_identity


def random_sequence(rng: random.Random, max_order: int, span: int) -> CFiniteSequence:
    while True:
        d = rng.randint(1, max_order)
        coeffs = [rng.randint(-span, span) for _ in range(d)]
        initial = [rng.randint(-span, span) for _ in range(d)]
        if coeffs[-1] and any(initial):
            f = to_gf(CFiniteSequence(coeffs, initial))
            return CFiniteSequence([-c for c in f.den.coeffs[1:]], f.series(f.den.degree))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=300)
    parser.add_argument("--max-order", type=int, default=4)
    parser.add_argument("--span", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    tight: Counter = Counter()
    total: Counter = Counter()
    improper: Counter = Counter()
    for _ in range(args.samples):
        a = random_sequence(rng, args.max_order, args.span)
        b = random_sequence(rng, args.max_order, args.span)
        for key, result in (
            (("cross", a.order, b.order), cross_convolution_identity(a, b)),
            (("self", a.order, None), self_convolution_identity(a)),
        ):
            total[key] += 1
            tight[key] += result.order_found == result.order_bound
            improper[key] += not result.gf.is_proper

    print(f"{'kind':6} {'d':>2} {'d2':>3} {'n':>5} {'tight':>7} {'improper':>9}")
    for key in sorted(total, key=lambda k: (k[0], k[1], k[2] or 0)):
        kind, d, d2 = key
        print(
            f"{kind:6} {d:>2} {d2 if d2 else '-':>3} {total[key]:>5} "
            f"{tight[key] / total[key]:>7.2%} {improper[key]:>9}"
        )


if __name__ == "__main__":
    main()
