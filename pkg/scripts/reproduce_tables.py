#!/usr/bin/env python3
"""Regenerate both k-bonacci convolution tables.

Writes self-convolutions for 2 <= k <= 20 and cross convolutions for
2 <= k1 <= k2 <= 10, in every output format, under ``results/``.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from cfconv.cli import table_cross, table_self

EXT = {"text": "txt", "json": "json", "latex": "tex"}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument("--self-kmax", type=int, default=20)
    parser.add_argument("--cross-kmax", type=int, default=10)
    parser.add_argument("--jobs", type=int, default=int(os.environ.get("CFCONV_JOBS", "1")))
    args = parser.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    for name, build, kmax in (
        ("self", table_self, args.self_kmax),
        ("cross", table_cross, args.cross_kmax),
    ):
        report = build(kmax, jobs=args.jobs)
        for fmt, ext in EXT.items():
            path = args.out_dir / f"{name}_kmax{kmax}.{ext}"
            path.write_text(report.render(fmt))
        timing = args.out_dir / f"{name}_kmax{kmax}_timings.txt"
        timing.write_text(report.render("text", timings=True))
        print(
            f"{name}: {report.count} entries in {report.total_elapsed_ms / 1000:.1f} s "
            f"-> {args.out_dir}/{name}_kmax{kmax}.*",
            file=sys.stderr,
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
