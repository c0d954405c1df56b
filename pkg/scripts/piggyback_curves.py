"""Average repair read for the three designs over a (k, r) sweep.

Writes one TSV per design (columns as in ``pbcode analyze``) plus a combined
file.  Repetition counts default to those giving alpha = 8 for d1,
4(2r-3) for d2 and 16 for d3.

    python3 scripts/piggyback_curves.py --k-range 10-20 --r-range 2-5 --out results/curves
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from pbcode.algebra import Field
from pbcode.catalog import sweep
from pbcode.cli import parse_range
from pbcode.engine import emit_tables

DEFAULT_M = {"d1": 4, "d2": 4, "d3": 4}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-range", default="10-20")
    ap.add_argument("--r-range", default="2-5")
    ap.add_argument("--designs", default="d1,d2,d3")
    ap.add_argument("--m", type=int, default=None, help="override the repetition count for every design")
    ap.add_argument("--field", default="gf2^8")
    ap.add_argument("--out", default=None, help="output prefix; prints to stdout if omitted")
    args = ap.parse_args(argv)

    ks, rs = parse_range(args.k_range), parse_range(args.r_range)
    field = Field.parse(args.field)
    combined = []
    for design in args.designs.split(","):
        m = args.m or DEFAULT_M[design]
        t0 = time.perf_counter()
        rows = list(sweep(design, ks, rs, m, field))
        print(f"{design}: {len(rows)} codes in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
        combined += rows
        if args.out:
            path = Path(f"{args.out}_{design}.tsv")
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(emit_tables(rows))
    text = emit_tables(combined)
    if args.out:
        Path(f"{args.out}_all.tsv").write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
