"""Design 3: repair locality k+1 through two levels of piggybacking.

Systematic nodes split into S1, S2, S3.  Level one works on a half of 2*m1
substripes: each even substripe's parities k+2..n carry group sums of S1
taken from the substripe before it, each odd substripe from the third on
carries group sums of S2 from the substripe before it.  Level two stacks two
halves and adds the S3 sum of first-half substripe s onto parity k+1 at
substripe s + 2*m1.  Parity repair is plain full download.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .algebra import Field
from .basecode import ScalarMDSBase, make_cauchy_base
from .engine import (
    RepairPlan,
    check_parity,
    check_systematic,
    full_download_plan,
    make_plan,
)
from .framework import LinearCode, PiggybackSpec, apply_piggyback, instantiate


@dataclass(frozen=True)
class Design3Params:
    k: int
    r: int
    m1: int
    levels: int
    t1: int
    t2: int
    t3: int
    sets: tuple  # (S1, S2, S3)
    groups1: tuple  # r-1 groups of S1; group g rides on parity k+1+g
    groups2: tuple

    @property
    def half(self) -> int:
        return 2 * self.m1

    @property
    def alpha(self) -> int:
        return self.half * self.levels

    def locate(self, node: int) -> tuple[int, tuple]:
        """(set number 1..3, members of the node's group) for a systematic node."""
        for which, groups in ((1, self.groups1), (2, self.groups2)):
            for members in groups:
                if node in members:
                    return which, members
        if node in self.sets[2]:
            return 3, self.sets[2]
        raise ValueError(f"node {node} is not systematic")


def d3_sizes(k: int, r: int) -> tuple[int, int, int]:
    if k < 2 or r < 2:
        raise ValueError("design 3 needs k >= 2 and r >= 2")
    t1 = -(-k * (r - 1) // (2 * r - 1))
    t2 = min(t1, k - t1)
    return t1, t2, k - t1 - t2


def split_groups(nodes, parts: int) -> tuple:
    """Contiguous near-equal groups, larger groups first."""
    nodes = list(nodes)
    size, extra = divmod(len(nodes), parts)
    out, start = [], 0
    for g in range(parts):
        n = size + (1 if g < extra else 0)
        out.append(tuple(nodes[start : start + n]))
        start += n
    return tuple(out)


def d3_params(k: int, r: int, m1: int, levels: int | None = None) -> Design3Params:
    if m1 < 2:
        raise ValueError("design 3 needs m1 >= 2")
    t1, t2, t3 = d3_sizes(k, r)
    if levels is None:
        levels = 2 if t3 else 1
    if levels not in (1, 2):
        raise ValueError("levels must be 1 or 2")
    if levels == 1 and t3:
        raise ValueError(f"k={k}, r={r} leaves {t3} nodes that need the second level")
    S1 = tuple(range(1, t1 + 1))
    S2 = tuple(range(t1 + 1, t1 + t2 + 1))
    S3 = tuple(range(t1 + t2 + 1, k + 1))
    return Design3Params(
        k, r, m1, levels, t1, t2, t3, (S1, S2, S3), split_groups(S1, r - 1), split_groups(S2, r - 1)
    )


def d3_construct(base: ScalarMDSBase, m1: int = 2, levels: int | None = None) -> LinearCode:
    k = base.k
    p = d3_params(k, base.r, m1, levels)
    alpha = p.alpha
    code = instantiate(base, alpha)

    def group_sum(nodes, s: int) -> np.ndarray:
        coeffs = np.zeros(k * alpha, dtype=np.int64)
        for i in nodes:
            coeffs[(s - 1) * k + i - 1] = 1
        return coeffs

    additions = []
    for h in range(p.levels):
        off = h * p.half
        for u in range(2, p.half + 1):
            groups = p.groups1 if u % 2 == 0 else p.groups2
            for g, members in enumerate(groups, start=1):
                if members:
                    additions.append((off + u, k + 1 + g, group_sum(members, off + u - 1)))
    if p.levels == 2 and p.t3:
        for s in range(1, p.half + 1):
            additions.append((s + p.half, k + 1, group_sum(p.sets[2], s)))
    code = apply_piggyback(code, PiggybackSpec(alpha, tuple(additions)))
    return replace(code, design="d3", params=p)


def d3_repair_systematic(code: LinearCode, node: int) -> RepairPlan:
    check_systematic(code, node)
    p: Design3Params = code.params
    k, half = p.k, p.half
    which, members = p.locate(node)
    mates = [i for i in members if i != node]

    def decode_reads(s: int, parity: int) -> list:
        return [(i, s) for i in range(1, k + 1) if i != node] + [(parity, s)]

    reads = []
    if which == 3:
        for s in range(half + 1, 2 * half + 1):
            reads += decode_reads(s, k + 2)
        for s in range(1, half + 1):
            reads.append((k + 1, s + half))
            reads += [(i, s) for i in mates]
        return make_plan(code, node, reads)

    groups = p.groups1 if which == 1 else p.groups2
    carrier = k + 1 + groups.index(members) + 1
    for h in range(p.levels):
        off = h * half
        if which == 1:
            full = range(2, half + 1, 2)
            pig = range(2, half + 1, 2)
        else:
            full = list(range(1, half + 1, 2)) + [half]
            pig = range(3, half + 1, 2)
        for u in full:
            reads += decode_reads(off + u, k + 1)
        for u in pig:
            reads.append((carrier, off + u))
            reads += [(i, off + u - 1) for i in mates]
    return make_plan(code, node, reads)


def d3_repair_parity(code: LinearCode, node: int) -> RepairPlan:
    check_parity(code, node)
    return full_download_plan(code, node)


def gamma3_sys_measured(k: int, r: int, m1: int = 2, field: Field | None = None) -> Fraction:
    """Average systematic repair cost of a Cauchy-based code, over alpha*k."""
    code = d3_construct(make_cauchy_base(field or Field.gf2(8), k, r), m1)
    total = sum(d3_repair_systematic(code, i).cost for i in range(1, k + 1))
    return Fraction(total, k * k * code.alpha)
