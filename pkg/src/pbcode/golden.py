"""Reference layouts written out by hand, with their expected repair costs.

Each ``expected_*`` function spells out a stored grid term by term:
``{(node, substripe): {message substripe: k-vector}}``; systematic nodes are
filled in automatically.  Minus signs become plus over GF(2^w).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import Field
from .basecode import make_cauchy_base, make_fig1_base, make_fig6_vector_base
from .design1 import d1_construct, d1_repair_parity, d1_repair_systematic
from .design2 import d2_construct, d2_repair_systematic
from .design3 import d3_construct, d3_repair_systematic
from .engine import measure_gamma
from .framework import LinearCode
from .paritypatch import pp_construct, pp_repair_parity, pp_repair_systematic


def build_grid(F: Field, n: int, k: int, alpha: int, entries: dict) -> np.ndarray:
    grid = np.zeros((n, alpha, k * alpha), dtype=np.int64)
    for s in range(alpha):
        for i in range(k):
            grid[i, s, s * k + i] = 1
    for (node, s), terms in entries.items():
        for sub, vec in terms.items():
            lo = (sub - 1) * k
            grid[node - 1, s - 1, lo : lo + k] = F.add(grid[node - 1, s - 1, lo : lo + k], np.asarray(vec) % F.order)
    return grid


def unit_sum(k: int, nodes) -> np.ndarray:
    v = np.zeros(k, dtype=np.int64)
    v[np.array(list(nodes)) - 1] = 1
    return v


def masked(vec, nodes) -> np.ndarray:
    out = np.zeros(len(vec), dtype=np.int64)
    idx = np.array(list(nodes)) - 1
    out[idx] = np.asarray(vec)[idx]
    return out


P1 = np.array([1, 1, 1, 1])
P2 = np.array([1, 2, 3, 4])
Q2 = np.array([1, 2, 0, 0])  # sum_{i=1}^{2} i a_i
V2 = np.array([0, 0, 3, 4])  # sum_{i=3}^{4} i a_i


def expected_d1_pair_m1() -> np.ndarray:
    return build_grid(Field.gf2(8), 6, 4, 2, {
        (5, 1): {1: P1},
        (5, 2): {2: P1},
        (6, 1): {1: V2, 2: P2},
        (6, 2): {2: P2, 1: Q2},
    })


def expected_d1_pair_m2() -> np.ndarray:
    return build_grid(Field.gf2(8), 6, 4, 4, {
        (5, 1): {1: P1},
        (5, 2): {2: P1},
        (5, 3): {3: P1, 2: P2, 1: Q2},
        (5, 4): {4: P1},
        (6, 1): {1: V2, 2: P2},
        (6, 2): {2: P2, 1: Q2},
        (6, 3): {3: V2, 4: P2},
        (6, 4): {4: P2, 3: Q2},
    })


def expected_d2_node12(P: np.ndarray) -> np.ndarray:
    """Rows of node 12 for the (13,10) block: (p2.a, v2.b - p2.c, p2.c + q2.b + q2.a)."""
    p2 = P[1]
    q2, v2 = masked(p2, range(1, 6)), masked(p2, range(6, 11))
    full = build_grid(Field.gf2(8), 13, 10, 3, {
        (12, 1): {1: p2},
        (12, 2): {2: v2, 3: p2},
        (12, 3): {3: p2, 2: q2, 1: q2},
    })
    return full[11]


def expected_d3_11_8(P: np.ndarray) -> np.ndarray:
    k = 8
    e = lambda *nodes: unit_sum(k, nodes)  # noqa: E731
    entries = {(9, s): {s: P[0]} for s in range(1, 5)}
    entries.update({
        (10, 1): {1: P[1]},
        (10, 2): {2: P[1], 1: e(1, 2)},
        (10, 3): {3: P[1], 2: e(5, 6)},
        (10, 4): {4: P[1], 3: e(1, 2)},
        (11, 1): {1: P[2]},
        (11, 2): {2: P[2], 1: e(3, 4)},
        (11, 3): {3: P[2], 2: e(7, 8)},
        (11, 4): {4: P[2], 3: e(3, 4)},
    })
    return build_grid(Field.gf2(8), 11, k, 4, entries)


def expected_d3_13_10(P: np.ndarray) -> np.ndarray:
    # node 11 adds the d9 + d10 sum of substripe s-4 on substripes 5..8
    k = 10
    e = lambda *nodes: unit_sum(k, nodes)  # noqa: E731
    entries = {}
    for s in range(1, 9):
        entries[(11, s)] = {s: P[0]} if s <= 4 else {s: P[0], s - 4: e(9, 10)}
    for off in (0, 4):
        for node, p, g1, g2 in ((12, P[1], (1, 2), (5, 6)), (13, P[2], (3, 4), (7, 8))):
            entries[(node, off + 1)] = {off + 1: p}
            entries[(node, off + 2)] = {off + 2: p, off + 1: e(*g1)}
            entries[(node, off + 3)] = {off + 3: p, off + 2: e(*g2)}
            entries[(node, off + 4)] = {off + 4: p, off + 3: e(*g1)}
    return build_grid(Field.gf2(8), 13, k, 8, entries)


def expected_pp_gf5() -> np.ndarray:
    # substripes per node: (a, b, c, d); substripe u holds (x_1, x_2) of nodes 1 and 2
    return build_grid(Field.gfp(5), 4, 2, 4, {
        (3, 1): {1: [3, 1], 2: [2, 0]},  # 3a1 + 2b1 + a2
        (3, 2): {1: [0, 2], 2: [1, 3]},  # b1 + 2a2 + 3b2
        (3, 3): {3: [3, 1], 4: [2, 0], 1: [3, 2], 2: [4, 0]},
        (3, 4): {3: [0, 2], 4: [1, 3], 1: [0, 2], 2: [1, 1]},
        (4, 1): {1: [3, 2], 2: [4, 0]},  # 3a1 + 4b1 + 2a2
        (4, 2): {1: [0, 2], 2: [1, 1]},  # b1 + 2a2 + b2
        (4, 3): {3: [3, 2], 4: [4, 0]},
        (4, 4): {3: [0, 2], 4: [1, 1]},
    })


@dataclass(frozen=True)
class GoldenResult:
    name: str
    passed: bool
    detail: str


def _same(code: LinearCode, expected: np.ndarray) -> bool:
    return code.grid.shape == expected.shape and np.array_equal(code.grid, expected)


def check_d1_pair() -> GoldenResult:
    code = d1_construct(make_fig1_base(), 1)
    costs = [d1_repair_systematic(code, i).cost for i in range(1, 5)]
    ok = _same(code, expected_d1_pair_m1()) and costs == [6] * 4
    return GoldenResult("d1 (6,4) m=1: layout, 6 of 8 per systematic repair", ok, f"costs {costs}")


def check_d1_parity_pass() -> GoldenResult:
    code = d1_construct(make_fig1_base(), 2)
    costs = [d1_repair_parity(code, j).cost for j in (5, 6)]
    g = measure_gamma(code, d1_repair_systematic, d1_repair_parity)
    ok = _same(code, expected_d1_pair_m2()) and costs == [16, 13] and g.par_avg == Fraction(29, 32)
    return GoldenResult("d1 (6,4) m=2: layout, parity costs 16 and 13", ok, f"costs {costs}, par {g.par_avg}")


def check_d2_13_10() -> GoldenResult:
    base = make_cauchy_base(Field.gf2(8), 10, 3)
    code = d2_construct(base, 1)
    costs = {d2_repair_systematic(code, i).cost for i in range(1, 11)}
    ok = np.array_equal(code.grid[11], expected_d2_node12(base.parities)) and costs == {20}
    return GoldenResult("d2 (13,10): 20 of 30 per systematic repair", ok, f"costs {sorted(costs)}")


def check_d3_11_8() -> GoldenResult:
    base = make_cauchy_base(Field.gf2(8), 8, 3)
    code = d3_construct(base, 2)
    costs = [d3_repair_systematic(code, i).cost for i in range(1, 9)]
    avg = Fraction(sum(costs), 8 * 32)
    ok = _same(code, expected_d3_11_8(base.parities)) and costs == [20] * 4 + [26] * 4 and avg == Fraction(23, 32)
    return GoldenResult("d3 (11,8): costs 20 and 26, average 23/32", ok, f"costs {costs}")


def check_d3_13_10() -> GoldenResult:
    base = make_cauchy_base(Field.gf2(8), 10, 3)
    code = d3_construct(base, 2)
    plans = [d3_repair_systematic(code, i) for i in range(1, 11)]
    costs = [p.cost for p in plans]
    loc = max(p.locality for p in plans)
    avg = Fraction(sum(costs), 10 * 80)
    ok = (
        _same(code, expected_d3_13_10(base.parities))
        and costs == [48] * 4 + [64] * 4 + [48] * 2
        and avg == Fraction(544, 800)
        and loc <= 11
    )
    return GoldenResult("d3 (13,10): costs 48/64/48, locality <= 11", ok, f"costs {costs}, locality {loc}")


def check_pp_gf5() -> GoldenResult:
    code = pp_construct(make_fig6_vector_base())
    sys_costs = [pp_repair_systematic(code, i).cost for i in (1, 2)]
    node4 = pp_repair_parity(code, 4).cost
    g = measure_gamma(code, pp_repair_systematic, pp_repair_parity)
    ok = _same(code, expected_pp_gf5()) and sys_costs == [6, 6] and node4 == 6 and g.par_avg == Fraction(7, 8)
    return GoldenResult("pp (4,2) over GF(5): layout, node 4 in 6 of 8", ok, f"node 4 {node4}, par {g.par_avg}")


CHECKS = (
    check_d1_pair,
    check_d1_parity_pass,
    check_d2_13_10,
    check_d3_11_8,
    check_d3_13_10,
    check_pp_gf5,
)


def run_golden() -> list[GoldenResult]:
    return [check() for check in CHECKS]
