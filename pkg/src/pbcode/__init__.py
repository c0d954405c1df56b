"""Piggybacked erasure codes: constructions, repair planning and a shard store."""

from .algebra import Field
from .basecode import (
    ScalarMDSBase,
    VectorLinearBase,
    as_vector_base,
    make_cauchy_base,
    make_fig1_base,
    make_fig6_vector_base,
)
from .catalog import DESIGNS, build_code, gamma_of, plan_for
from .design1 import d1_construct, d1_repair_parity, d1_repair_systematic, gamma1_par, gamma1_sys
from .design2 import d2_construct, d2_repair_parity, d2_repair_systematic, gamma2_sys
from .design3 import d3_construct, d3_repair_parity, d3_repair_systematic, gamma3_sys_measured
from .engine import RepairPlan, make_plan, measure_gamma, plan_execute, plan_validate
from .framework import LinearCode, decode, instantiate, theorem1_check, verify_mds
from .paritypatch import pp_avg_parity_read, pp_construct, pp_repair_parity, pp_repair_systematic

__version__ = "0.1.0"
