"""Design 2: blocks of 2r-3 instances with r-1 systematic groups.

Let a_1..a_{2r-3} be the messages of one block and v_i = a_{r-1} + w a_{r-2}
+ ... + w^{r-2} a_1 with w the weight of parity k+i.  Parity k+i keeps one
group, sigma(i), in its substripe r-1 and piggybacks every other group j as
q_{i,j}.v_i on substripes r..2r-3, where q_{i,j} is p_i restricted to group j.
A repair then sees r-1 independent combinations of the lost node's first
r-1 symbols.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .algebra import identity, mat_rank
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
class Design2Params:
    k: int
    r: int
    m: int
    t_low: int
    t_high: int
    t: int
    sets: tuple  # r-1 tuples of 1-based node ids
    weights: tuple  # w_2..w_r

    @property
    def block(self) -> int:
        return 2 * self.r - 3

    def sigma(self, i: int) -> int:
        """The group parity k+i keeps unpiggybacked (i = 2..r)."""
        return self.r - i + 1

    def piggybacked_groups(self, i: int) -> list[int]:
        """Groups carried on substripes r, r+1, ... of parity k+i, in that order."""
        return [j for j in range(1, self.r) if j != self.sigma(i)]

    def set_of(self, node: int) -> int:
        for g, members in enumerate(self.sets, start=1):
            if node in members:
                return g
        raise ValueError(f"node {node} is not systematic")


def d2_sizes(k: int, r: int) -> tuple[int, int, int]:
    """(t_low, t_high, t); the first t groups have t_high members."""
    if r < 3:
        raise ValueError("design 2 needs r >= 3")
    if k < r - 1:
        raise ValueError(f"design 2 needs k >= r-1, got k={k}, r={r}")
    t_low = k // (r - 1)
    t_high = -(-k // (r - 1))
    return t_low, t_high, k - (r - 1) * t_low


def d2_sets(k: int, r: int) -> tuple:
    t_low, t_high, t = d2_sizes(k, r)
    sets, start = [], 1
    for g in range(r - 1):
        size = t_high if g < t else t_low
        sets.append(tuple(range(start, start + size)))
        start += size
    return tuple(sets)


def d2_weights(field, r: int) -> tuple:
    """Powers g^0..g^{r-2} of the field generator; checked to give a nonsingular system."""
    weights = tuple(field.power(field.generator, e) for e in range(r - 1))
    V = np.array([[field.power(w, e) for e in range(r - 1)] for w in weights], dtype=np.int64)
    if len(set(weights)) < r - 1 or mat_rank(field, V) < r - 1:
        raise ValueError(f"{field} has too few distinct nonzero weights for r={r}")
    return weights


def d2_construct(base: ScalarMDSBase, m: int = 1) -> LinearCode:
    if m < 1:
        raise ValueError("m must be at least 1")
    F, k, r = base.field, base.k, base.r
    t_low, t_high, t = d2_sizes(k, r)
    if not np.all(base.parities != 0):
        raise ValueError("base parity entries must all be nonzero")
    params = Design2Params(k, r, m, t_low, t_high, t, d2_sets(k, r), d2_weights(F, r))
    L = params.block
    alpha = L * m
    code = instantiate(base, alpha)

    def masked(i: int, j: int) -> np.ndarray:
        q = np.zeros(k, dtype=np.int64)
        idx = np.array(params.sets[j - 1]) - 1
        q[idx] = base.parities[i - 1, idx]
        return q

    additions = []
    for blk in range(m):
        off = blk * L

        def start(u: int) -> int:
            return (off + u - 1) * k

        for i in range(2, r + 1):
            w = params.weights[i - 2]
            groups = params.piggybacked_groups(i)
            # coefficient of a_u in v_i is w^{r-1-u}
            qsum = np.zeros(k, dtype=np.int64)
            for j in groups:
                qsum = F.add(qsum, masked(i, j))
            coeffs = np.zeros(k * alpha, dtype=np.int64)
            for u in range(1, r - 1):
                coeffs[start(u) : start(u) + k] = F.mul(qsum, F.power(w, r - 1 - u))
            additions.append((off + r - 1, k + i, coeffs))
            for idx, j in enumerate(groups):
                q = masked(i, j)
                coeffs = np.zeros(k * alpha, dtype=np.int64)
                for u in range(1, r):
                    coeffs[start(u) : start(u) + k] = F.mul(q, F.power(w, r - 1 - u))
                additions.append((off + r + idx, k + i, coeffs))
    code = apply_piggyback(code, PiggybackSpec(alpha, tuple(additions)))

    # substripe r-1 minus substripes r..2r-3, block by block
    T = identity(alpha)
    for blk in range(m):
        row = blk * L + r - 2
        for col in range(blk * L + r - 1, (blk + 1) * L):
            T[row, col] = F.neg(1)
    for i in range(2, r + 1):
        code = apply_node_transform(code, NodeTransform(k + i, T))

    code = replace(code, design="d2", params=params)
    if m > 1:
        code = parity_piggyback_pass(code, d2_repair_systematic)
    return code


def d2_repair_systematic(code: LinearCode, node: int) -> RepairPlan:
    check_systematic(code, node)
    p: Design2Params = code.params
    k, r, L = p.k, p.r, p.block
    g = p.set_of(node)
    mates = [i for i in p.sets[g - 1] if i != node]
    reads = []
    for blk in range(p.m):
        off = blk * L
        # the last r-2 substripes decode from the other systematic nodes and p_1
        for s in range(r, L + 1):
            reads += [(i, off + s) for i in range(1, k + 2) if i != node]
        for i in range(2, r + 1):
            if p.sigma(i) == g:
                reads.append((k + i, off + r - 1))
            else:
                reads.append((k + i, off + r + p.piggybacked_groups(i).index(g)))
        for u in range(1, r):
            reads += [(i, off + u) for i in mates]
    return make_plan(code, node, reads)


def d2_repair_parity(code: LinearCode, node: int) -> RepairPlan:
    check_parity(code, node)
    if node == code.k + 1:
        return full_download_plan(code, node)
    return covered_parity_plan(code, node)


def d2_node_cost(k: int, r: int, size: int) -> int:
    """Symbols read per block when repairing a member of a group of ``size`` nodes."""
    return (r - 2) * k + (r - 1) * size


def gamma2_sys(k: int, r: int) -> Fraction:
    """Average systematic repair cost over a block, normalized by (2r-3)k."""
    t_low, t_high, t = d2_sizes(k, r)
    heavy = t * t_high  # nodes sitting in the larger groups
    total = heavy * d2_node_cost(k, r, t_high) + (k - heavy) * d2_node_cost(k, r, t_low)
    return Fraction(total, (2 * r - 3) * k * k)
