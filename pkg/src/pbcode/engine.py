"""Repair plans, their validation and execution, and read/download accounting.

A plan lists the (node, substripe) symbols read from surviving nodes.  Every
helper returns the symbol it read unchanged, so read cost equals download cost
and both are ``len(plan.reads)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .algebra import express_rows, mat_mul, span_rank
from .framework import LinearCode, PiggybackSpec, apply_piggyback, can_decode


class PlanError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RepairPlan:
    failed: int
    reads: tuple
    reconstruction: np.ndarray | None = None  # (alpha, len(reads))

    @property
    def cost(self) -> int:
        return len(self.reads)

    @property
    def nodes(self) -> set[int]:
        return {nd for nd, _ in self.reads}

    @property
    def locality(self) -> int:
        return len(self.nodes)

    def reads_by_node(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for nd, s in self.reads:
            out.setdefault(nd, []).append(s)
        return out


Planner = Callable[[LinearCode, int], RepairPlan]


def check_systematic(code: LinearCode, node: int) -> None:
    if not 1 <= node <= code.k:
        raise ValueError(f"systematic node {node} out of range 1..{code.k}")


def check_parity(code: LinearCode, node: int) -> None:
    if not code.k < node <= code.n:
        raise ValueError(f"parity node {node} out of range {code.k + 1}..{code.n}")


def _check_reads(code: LinearCode, failed: int, reads) -> tuple:
    reads = tuple((int(nd), int(s)) for nd, s in reads)
    if not 1 <= failed <= code.n:
        raise PlanError(f"node {failed} out of range 1..{code.n}")
    for nd, s in reads:
        if not (1 <= nd <= code.n and 1 <= s <= code.alpha):
            raise PlanError(f"read ({nd}, {s}) out of range")
        if nd == failed:
            raise PlanError(f"plan reads from the failed node {failed}")
    if len(set(reads)) != len(reads):
        raise PlanError("plan reads a symbol twice")
    return reads


def make_plan(code: LinearCode, failed: int, reads) -> RepairPlan:
    """Build a plan from its read list, solving for the reconstruction matrix."""
    reads = _check_reads(code, failed, reads)
    X = express_rows(code.field, code.functionals(reads), code.rows(failed))
    if X is None:
        raise PlanError(f"reads do not determine node {failed}")
    return RepairPlan(failed, reads, X)


def plan_validate(code: LinearCode, plan: RepairPlan) -> bool:
    try:
        reads = _check_reads(code, plan.failed, plan.reads)
    except PlanError:
        return False
    F = code.field
    R = code.functionals(reads)
    target = code.rows(plan.failed)
    if span_rank(F, np.vstack([R, target])) != span_rank(F, R):
        return False
    if plan.reconstruction is not None:
        X = np.asarray(plan.reconstruction, dtype=np.int64)
        if X.shape != (code.alpha, len(reads)):
            return False
        if reads and not np.array_equal(mat_mul(F, X, R), target):
            return False
    return True


def apply_plan(code: LinearCode, plan: RepairPlan, values: np.ndarray) -> np.ndarray:
    """Map read symbol values (len(reads), N) to the failed node's (alpha, N)."""
    X = plan.reconstruction
    if X is None:
        X = make_plan(code, plan.failed, plan.reads).reconstruction
    values = np.asarray(values, dtype=np.int64)
    if values.shape[0] != len(plan.reads):
        raise PlanError("wrong number of read values")
    if not plan.reads:
        return np.zeros((code.alpha,) + values.shape[1:], dtype=np.int64)
    if values.ndim == 2:
        return mat_mul(code.field, X, values)
    out = mat_mul(code.field, X, values.reshape(len(plan.reads), 1))
    return out.reshape(code.alpha)


def plan_execute(code: LinearCode, message, plan: RepairPlan) -> np.ndarray:
    """Run a plan against the encoding of ``message``; returns the alpha rebuilt symbols."""
    if not plan_validate(code, plan):
        raise PlanError(f"invalid plan for node {plan.failed}")
    stored = code.encode(message)
    values = np.array([stored[nd - 1, s - 1] for nd, s in plan.reads], dtype=np.int64)
    return apply_plan(code, plan, values)


# ---- generic planners --------------------------------------------------------


def decode_plan(code: LinearCode, failed: int) -> RepairPlan:
    """Read whole nodes until the message is determined (systematic nodes first)."""
    helpers: list[int] = []
    for nd in [i for i in range(1, code.n + 1) if i != failed]:
        helpers.append(nd)
        if len(helpers) >= code.k and can_decode(code, helpers):
            break
    else:
        raise PlanError(f"surviving nodes cannot rebuild node {failed}")
    reads = [(nd, s) for nd in helpers for s in range(1, code.alpha + 1)]
    return make_plan(code, failed, reads)


def full_download_plan(code: LinearCode, failed: int) -> RepairPlan:
    """Repair a parity node by reading every systematic symbol."""
    if failed <= code.k:
        return decode_plan(code, failed)
    reads = [(i, s) for s in range(1, code.alpha + 1) for i in range(1, code.k + 1)]
    return make_plan(code, failed, reads)


def covered_parity_plan(code: LinearCode, failed: int) -> RepairPlan:
    """Parity repair that uses the slots placed by :func:`parity_piggyback_pass`.

    Reads the message of every uncovered substripe, each used slot of the
    first parity, and for every covered substripe the symbols of the other
    non-first parities.
    """
    k, first = code.k, code.k + 1
    if failed <= first or not code.cover:
        return full_download_plan(code, failed)
    covered = {e for _, e in code.cover}
    reads = [(i, s) for s in range(1, code.alpha + 1) if s not in covered for i in range(1, k + 1)]
    reads += [(first, slot) for slot, _ in code.cover]
    reads += [(p, e) for _, e in code.cover for p in range(k + 2, code.n + 1) if p != failed]
    try:
        return make_plan(code, failed, reads)
    except PlanError:
        return full_download_plan(code, failed)


# ---- free slots and the parity pass ---------------------------------------


def free_slots(code: LinearCode, planner: Planner) -> list[tuple[int, int]]:
    """Parity symbols that no systematic repair plan reads."""
    used = set()
    for ell in range(1, code.k + 1):
        used.update(planner(code, ell).reads)
    return [
        (p, s)
        for p in range(code.k + 1, code.n + 1)
        for s in range(1, code.alpha + 1)
        if (p, s) not in used
    ]


def parity_piggyback_pass(code: LinearCode, planner: Planner) -> LinearCode:
    """Load free slots of the first parity with sums of the other parities' symbols.

    Slots are visited in ascending substripe order.  Each takes the earliest
    substripe not yet covered that lies in an earlier instance and whose
    first-parity symbol is itself read during systematic repair; the slot
    gains the sum of the non-first parities' symbols in that substripe.
    """
    k, first = code.k, code.k + 1
    if code.r < 2:
        return code
    slots = sorted(s for nd, s in free_slots(code, planner) if nd == first)
    slot_set = set(slots)
    eligible = [s for s in range(1, code.alpha + 1) if s not in slot_set]
    b = code.instance_size
    covered: set[int] = set()
    cover = []
    additions = []
    for s in slots:
        block = (s - 1) // b
        cands = [e for e in eligible if e not in covered and (e - 1) // b < block]
        if not cands:
            continue
        e = cands[0]
        coeffs = np.zeros(code.message_size, dtype=np.int64)
        for p in range(k + 2, code.n + 1):
            coeffs = code.field.add(coeffs, code.symbol(p, e))
        additions.append((s, first, coeffs))
        covered.add(e)
        cover.append((s, e))
    if not additions:
        return code
    out = apply_piggyback(code, PiggybackSpec(code.alpha, tuple(additions)))
    return replace(out, cover=code.cover + tuple(cover))


# ---- accounting -----------------------------------------------------------


@dataclass(frozen=True)
class GammaTable:
    """Repair cost per node and averages as fractions of the message size k*alpha."""

    costs: dict
    k: int
    alpha: int

    def _avg(self, nodes) -> Fraction:
        nodes = list(nodes)
        total = sum(self.costs[i] for i in nodes)
        return Fraction(total, len(nodes) * self.k * self.alpha)

    @property
    def sys_avg(self) -> Fraction:
        return self._avg(i for i in self.costs if i <= self.k)

    @property
    def par_avg(self) -> Fraction:
        return self._avg(i for i in self.costs if i > self.k)

    @property
    def overall(self) -> Fraction:
        return self._avg(self.costs)

    def fraction(self, node: int) -> Fraction:
        return Fraction(self.costs[node], self.k * self.alpha)


def measure_gamma(code: LinearCode, sys_planner: Planner, par_planner: Planner) -> GammaTable:
    costs = {}
    for i in range(1, code.n + 1):
        plan = (sys_planner if i <= code.k else par_planner)(code, i)
        costs[i] = plan.cost
    return GammaTable(costs, code.k, code.alpha)


TABLE_COLUMNS = (
    "n", "k", "design", "m", "alpha",
    "gamma_sys", "gamma_sys_dec", "gamma_par", "gamma_par_dec", "gamma_all", "gamma_all_dec",
)


def emit_tables(rows: Iterable[tuple]) -> str:
    """Tab-separated table from ``(n, k, design, m, GammaTable)`` rows."""
    out = ["\t".join(TABLE_COLUMNS)]
    for n, k, design, m, g in rows:
        cells = [str(n), str(k), design, str(m), str(g.alpha)]
        for frac in (g.sys_avg, g.par_avg, g.overall):
            cells += [f"{frac.numerator}/{frac.denominator}", f"{float(frac):.6f}"]
        out.append("\t".join(cells))
    return "\n".join(out) + "\n"
