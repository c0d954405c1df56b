"""Cheaper parity repair for vector codes that only optimize systematic repair.

Two instances of the base code are stored side by side.  Parities are split
into groups; the first parity of each group gets, on its second-instance
symbols, the sum of the other members' first-instance symbols.  When every
parity passes the same combination Q_i while node i is repaired, systematic
repair is unaffected: the extra term is cancelled with data the other
members already send.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import isqrt

import numpy as np

from .algebra import ShapeError, identity, mat_mul
from .basecode import VectorLinearBase
from .engine import (
    RepairPlan,
    check_parity,
    check_systematic,
    full_download_plan,
    make_plan,
)
from .framework import LinearCode, PiggybackSpec, apply_piggyback, instantiate


@dataclass(frozen=True, eq=False)
class LemmaWitness:
    """Matrices with R Q_x^(i) = Q_y^(i) S for every systematic i."""

    x: int
    y: int
    R: np.ndarray
    S: np.ndarray


@dataclass(frozen=True)
class ParityGroups:
    g: int
    groups: tuple  # tuples of parity indices 1..r

    def group_of(self, x: int) -> tuple:
        for members in self.groups:
            if x in members:
                return members
        raise ValueError(f"parity {x} is in no group")


@dataclass(frozen=True, eq=False)
class PatchParams:
    base: VectorLinearBase
    groups: ParityGroups


def group_count(k: int, r: int) -> int:
    """floor(r / sqrt(k+1)), at least 1."""
    return max(1, isqrt(r * r // (k + 1)))


def parity_groups(k: int, r: int) -> ParityGroups:
    if r < 1:
        raise ValueError("need at least one parity")
    g = min(group_count(k, r), r)
    size, extra = divmod(r, g)
    groups, start = [], 1
    for i in range(g):
        n = size + (1 if i < extra else 0)
        groups.append(tuple(range(start, start + n)))
        start += n
    return ParityGroups(g, tuple(groups))


def lemma_check(vbc: VectorLinearBase, x: int, y: int, R, S) -> bool:
    F = vbc.field
    R = np.asarray(R, dtype=np.int64)
    S = np.asarray(S, dtype=np.int64)
    for i in range(1, vbc.k + 1):
        Qx, Qy = vbc.q(x, i), vbc.q(y, i)
        if R.shape != (vbc.mu, vbc.mu) or S.shape != (Qy.shape[1], Qx.shape[1]):
            raise ShapeError(f"R must be {vbc.mu}x{vbc.mu} and S {Qy.shape[1]}x{Qx.shape[1]}")
        if not np.array_equal(mat_mul(F, R, Qx), mat_mul(F, Qy, S)):
            return False
    return True


def pp_construct(vbc: VectorLinearBase) -> LinearCode:
    k, mu = vbc.k, vbc.mu
    groups = parity_groups(k, vbc.r)
    for members in groups.groups:
        for y in members[1:]:
            beta = vbc.q(y, 1).shape[1]
            if not lemma_check(vbc, members[0], y, identity(mu), identity(beta)):
                raise ValueError(f"parities {members[0]} and {y} do not share repair matrices")
    code = instantiate(vbc, 2)
    F = vbc.field
    additions = []
    for members in groups.groups:
        first = k + members[0]
        for u in range(1, mu + 1):
            coeffs = np.zeros(code.message_size, dtype=np.int64)
            for y in members[1:]:
                coeffs = F.add(coeffs, code.symbol(k + y, u))
            if coeffs.any():
                additions.append((mu + u, first, coeffs))
    code = apply_piggyback(code, PiggybackSpec(code.alpha, tuple(additions)))
    return replace(code, design="pp", params=PatchParams(vbc, groups))


def pp_repair_systematic(code: LinearCode, node: int) -> RepairPlan:
    """Each helper sends what it sent under the base code, once per instance."""
    check_systematic(code, node)
    p: PatchParams = code.params
    k, mu = p.base.k, p.base.mu
    once = p.base.repair_reads(node)
    reads = once + [(h, mu + u) for h, u in once]
    used = sorted({u for _, u in once})
    for h in sorted({h for h, _ in once}):
        members = p.groups.group_of(h - k) if h > k else ()
        if members and h == k + members[0]:
            # undo the piggyback with the other members' first-instance symbols
            reads += [(k + y, u) for y in members[1:] for u in used if (k + y, u) not in reads]
    return make_plan(code, node, reads)


def pp_repair_parity(code: LinearCode, node: int) -> RepairPlan:
    check_parity(code, node)
    p: PatchParams = code.params
    k, mu = p.base.k, p.base.mu
    x = node - k
    members = p.groups.group_of(x)
    if x == members[0]:
        return full_download_plan(code, node)
    second = range(mu + 1, 2 * mu + 1)
    reads = [(i, s) for s in second for i in range(1, k + 1)]
    reads += [(k + members[0], s) for s in second]
    reads += [(k + y, u) for y in members[1:] if y != x for u in range(1, mu + 1)]
    return make_plan(code, node, reads)


def pp_avg_parity_read(k: int, r: int) -> Fraction:
    """Closed-form average parity repair cost, assuming r/g parities per group."""
    if k < 1 or r < 2:
        raise ValueError("need k >= 1 and r >= 2")
    h = Fraction(r, group_count(k, r))
    return Fraction(1, 2) + (k + (h - 1) ** 2) / (2 * k * h)
