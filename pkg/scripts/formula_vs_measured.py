"""Compare closed-form averages with costs measured from the repair planners.

Rows: design, k, r, m, quantity, measured, formula, match.  The pp closed
form assumes equal parity groups; rows where r is not a multiple of the group
count are marked ``approx`` and not counted.  Exit status is 1 if any exact
row disagrees.

    python3 scripts/formula_vs_measured.py --k-max 20 > results/formula_check.tsv
"""

from __future__ import annotations

import argparse
import sys

from pbcode.algebra import Field
from pbcode.basecode import as_vector_base, make_cauchy_base
from pbcode.catalog import build_code, gamma_of
from pbcode.design1 import gamma1_par, gamma1_sys
from pbcode.design2 import d2_node_cost, d2_repair_systematic, d2_sets, gamma2_sys
from pbcode.engine import measure_gamma
from pbcode.paritypatch import group_count, pp_avg_parity_read, pp_construct, pp_repair_parity, pp_repair_systematic


def rows(k_max: int, r_max: int, ms):
    for r in range(2, r_max + 1):
        for k in range(r, k_max + 1):
            for m in ms:
                g = gamma_of(build_code("d1", k, r, m))
                yield "d1", k, r, m, "gamma_sys", g.sys_avg, gamma1_sys(k, r)
                yield "d1", k, r, m, "gamma_par", g.par_avg, gamma1_par(k, r, m)
                if r < 3:
                    continue
                code = build_code("d2", k, r, m)
                for g_idx, members in enumerate(d2_sets(k, r), start=1):
                    cost = d2_repair_systematic(code, members[0]).cost
                    yield "d2", k, r, m, f"cost_group{g_idx}", cost, m * d2_node_cost(k, r, len(members))
                yield "d2", k, r, m, "gamma_sys", gamma_of(code).sys_avg, gamma2_sys(k, r)
            code = pp_construct(as_vector_base(make_cauchy_base(Field.gf2(8), k, r)))
            g = measure_gamma(code, pp_repair_systematic, pp_repair_parity)
            what = "gamma_par" if r % group_count(k, r) == 0 else "gamma_par_approx"
            yield "pp", k, r, 1, what, g.par_avg, pp_avg_parity_read(k, r)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-max", type=int, default=20)
    ap.add_argument("--r-max", type=int, default=5)
    ap.add_argument("--m", default="1,2,3")
    args = ap.parse_args(argv)
    ms = [int(x) for x in args.m.split(",")]

    print("design\tk\tr\tm\tquantity\tmeasured\tformula\tmatch")
    mismatches = {}
    for design, k, r, m, what, got, want in rows(args.k_max, args.r_max, ms):
        ok = got == want
        if not ok and not what.endswith("approx"):
            mismatches.setdefault(design, []).append((k, r, m, what))
        print(f"{design}\t{k}\t{r}\t{m}\t{what}\t{got}\t{want}\t{'yes' if ok else 'no'}")
    for design, bad in sorted(mismatches.items()):
        print(f"{design}: {len(bad)} mismatches, first {bad[:3]}", file=sys.stderr)
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
