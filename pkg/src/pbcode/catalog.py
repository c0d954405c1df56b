"""Design registry: build a code by name and look up its repair planners."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .algebra import Field
from .basecode import as_vector_base, make_cauchy_base, make_fig1_base
from .design1 import d1_construct, d1_repair_parity, d1_repair_systematic
from .design2 import d2_construct, d2_repair_parity, d2_repair_systematic
from .design3 import d3_construct, d3_repair_parity, d3_repair_systematic
from .engine import GammaTable, Planner, RepairPlan, decode_plan, full_download_plan, measure_gamma
from .framework import LinearCode, instantiate
from .paritypatch import pp_construct, pp_repair_parity, pp_repair_systematic

DESIGNS = ("base", "d1", "d2", "d3", "pp")
BASES = ("cauchy", "small")


@dataclass(frozen=True)
class DesignSpec:
    name: str
    build: Callable  # (scalar base, m) -> LinearCode
    sys_planner: Planner
    par_planner: Planner


def _build_base(base, m):
    return instantiate(base, m)


def _build_pp(base, m):
    return pp_construct(as_vector_base(base))


REGISTRY = {
    "base": DesignSpec("base", _build_base, decode_plan, full_download_plan),
    "d1": DesignSpec("d1", d1_construct, d1_repair_systematic, d1_repair_parity),
    "d2": DesignSpec("d2", d2_construct, d2_repair_systematic, d2_repair_parity),
    "d3": DesignSpec("d3", d3_construct, d3_repair_systematic, d3_repair_parity),
    "pp": DesignSpec("pp", _build_pp, pp_repair_systematic, pp_repair_parity),
}


def make_base(field: Field, k: int, r: int, kind: str = "cauchy"):
    if kind == "cauchy":
        return make_cauchy_base(field, k, r)
    if kind == "small":
        if (k, r) != (4, 2) or field != Field.gf2(8):
            raise ValueError("the small base is the (6,4) code over GF(2^8)")
        return make_fig1_base()
    raise ValueError(f"unknown base {kind!r}; choose from {BASES}")


def build_code(design: str, k: int, r: int, m: int = 1, field: Field | None = None, base: str = "cauchy") -> LinearCode:
    """Construct ``design`` on a k+r node base.  ``m`` is the design's repetition count
    (instances for base, pairs for d1, blocks for d2, half-size m1 for d3; ignored by pp)."""
    if design not in REGISTRY:
        raise ValueError(f"unknown design {design!r}; choose from {DESIGNS}")
    if k < 1 or r < 1:
        raise ValueError("k and r must be positive")
    field = field or Field.gf2(8)
    return REGISTRY[design].build(make_base(field, k, r, base), m)


def planners(design: str) -> tuple[Planner, Planner]:
    spec = REGISTRY[design]
    return spec.sys_planner, spec.par_planner


def plan_for(code: LinearCode, node: int) -> RepairPlan:
    sys_planner, par_planner = planners(code.design)
    return (sys_planner if node <= code.k else par_planner)(code, node)


def gamma_of(code: LinearCode) -> GammaTable:
    return measure_gamma(code, *planners(code.design))


def sweep(design: str, ks: Iterable[int], rs: Iterable[int], m: int = 1, field: Field | None = None):
    """Yield ``(n, k, design, m, GammaTable)`` for every valid (k, r); invalid pairs are skipped."""
    for r in rs:
        for k in ks:
            try:
                code = build_code(design, k, r, m, field)
            except ValueError:
                continue
            yield k + r, k, design, m, gamma_of(code)
