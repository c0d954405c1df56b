"""Design 1: pairs of instances, r systematic-node sets, one transformed parity.

Within each pair (odd substripe a, even substripe b) parity k+i, i >= 2,
carries p_i.b + q_i.a where q_i is p_r restricted to set S_{i-1}.  Node k+r
then stores (v_r.a - p_r.b, p_r.b + q_r.a) with v_r = p_r - q_r.  With m > 1
pairs the unused odd symbols of node k+1 pick up sums of earlier parity
symbols, which speeds up parity repair.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .algebra import identity
from .basecode import ScalarMDSBase
from .engine import (
    RepairPlan,
    check_parity,
    check_systematic,
    covered_parity_plan,
    full_download_plan,
    make_plan,
    parity_piggyback_pass,
)
from .framework import (
    LinearCode,
    NodeTransform,
    PiggybackSpec,
    apply_node_transform,
    apply_piggyback,
    instantiate,
)


@dataclass(frozen=True)
class Design1Params:
    k: int
    r: int
    m: int
    t: int
    t_r: int
    sets: tuple  # r tuples of 1-based node ids

    def set_of(self, node: int) -> int:
        for g, members in enumerate(self.sets, start=1):
            if node in members:
                return g
        raise ValueError(f"node {node} is not systematic")


def d1_sizes(k: int, r: int) -> tuple[int, int]:
    """(t, t_r): sizes of the first r-1 sets and of the last one."""
    if r < 2:
        raise ValueError("design 1 needs r >= 2")
    if k < r:
        raise ValueError(f"design 1 needs k >= r, got k={k}, r={r}")
    # ceil(k/r + (r-2)/(2r)) in integers
    t = -(-(2 * k + r - 2) // (2 * r))
    while k - (r - 1) * t < 1:
        t -= 1
    return t, k - (r - 1) * t


def d1_sets(k: int, r: int) -> tuple:
    t, t_r = d1_sizes(k, r)
    sets = [tuple(range(g * t + 1, (g + 1) * t + 1)) for g in range(r - 1)]
    sets.append(tuple(range((r - 1) * t + 1, k + 1)))
    return tuple(sets)


def d1_construct(base: ScalarMDSBase, m: int = 1) -> LinearCode:
    if m < 1:
        raise ValueError("m must be at least 1")
    F, k, r = base.field, base.k, base.r
    t, t_r = d1_sizes(k, r)
    sets = d1_sets(k, r)
    if not np.all(base.parities != 0):
        raise ValueError("base parity entries must all be nonzero")
    alpha = 2 * m
    code = instantiate(base, alpha)
    p_r = base.parities[r - 1]

    additions = []
    for pair in range(m):
        odd, even = 2 * pair + 1, 2 * pair + 2
        lo = (odd - 1) * k
        for i in range(2, r + 1):
            coeffs = np.zeros(k * alpha, dtype=np.int64)
            for node in sets[i - 2]:
                coeffs[lo + node - 1] = p_r[node - 1]
            additions.append((even, k + i, coeffs))
    code = apply_piggyback(code, PiggybackSpec(alpha, tuple(additions)))

    # odd symbol of node k+r minus its even symbol, pair by pair
    T = identity(alpha)
    for pair in range(m):
        T[2 * pair, 2 * pair + 1] = F.neg(1)
    code = apply_node_transform(code, NodeTransform(k + r, T))

    params = Design1Params(k, r, m, t, t_r, sets)
    code = replace(code, design="d1", params=params)
    if m > 1:
        code = parity_piggyback_pass(code, d1_repair_systematic)
    return code


def d1_repair_systematic(code: LinearCode, node: int) -> RepairPlan:
    check_systematic(code, node)
    p: Design1Params = code.params
    k, r = p.k, p.r
    g = p.set_of(node)
    mates = [i for i in p.sets[g - 1] if i != node]
    reads = []
    for pair in range(p.m):
        odd, even = 2 * pair + 1, 2 * pair + 2
        # decode the even message from the other systematic nodes and p_1
        reads += [(i, even) for i in range(1, k + 1) if i != node]
        reads.append((k + 1, even))
        if g < r:
            reads.append((k + g + 1, even))
        else:
            reads.append((k + r, odd))
            reads += [(k + i, even) for i in range(2, r)]
        reads += [(i, odd) for i in mates]
    return make_plan(code, node, reads)


def d1_repair_parity(code: LinearCode, node: int) -> RepairPlan:
    check_parity(code, node)
    if node == code.k + 1:
        return full_download_plan(code, node)
    return covered_parity_plan(code, node)


def gamma1_sys(k: int, r: int) -> Fraction:
    t, t_r = d1_sizes(k, r)
    return Fraction((k - t_r) * (k + t) + t_r * (k + t_r + r - 2), 2 * k * k)


def gamma1_par(k: int, r: int, m: int) -> Fraction:
    inner = (1 + Fraction(1, m)) * k + (1 - Fraction(1, m)) * (r - 1)
    return (2 * k + (r - 1) * inner) / (2 * k * r)
