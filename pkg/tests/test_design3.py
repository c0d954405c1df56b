from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from pbcode.algebra import Field
from pbcode.basecode import make_cauchy_base
from pbcode.design3 import (
    d3_construct,
    d3_params,
    d3_repair_parity,
    d3_repair_systematic,
    d3_sizes,
    gamma3_sys_measured,
    split_groups,
)
from pbcode.framework import verify_mds
from pbcode.golden import expected_d3_11_8, expected_d3_13_10

F = Field.gf2(8)


@given(k=st.integers(2, 40), r=st.integers(2, 8))
def test_sizes_partition(k, r):
    t1, t2, t3 = d3_sizes(k, r)
    assert t1 + t2 + t3 == k
    assert t1 >= t2 >= 0 and t3 >= 0


@given(n=st.integers(0, 30), parts=st.integers(1, 6))
def test_split_groups(n, parts):
    groups = split_groups(range(1, n + 1), parts)
    assert len(groups) == parts
    assert [i for g in groups for i in g] == list(range(1, n + 1))
    sizes = [len(g) for g in groups]
    assert sizes == sorted(sizes, reverse=True) and max(sizes) - min(sizes) <= 1


def test_params_13_10():
    p = d3_params(10, 3, 2)
    assert (p.t1, p.t2, p.t3, p.levels, p.half, p.alpha) == (4, 4, 2, 2, 4, 8)
    assert p.groups1 == ((1, 2), (3, 4)) and p.groups2 == ((5, 6), (7, 8))
    assert p.locate(9) == (3, (9, 10))
    assert p.locate(6) == (2, (5, 6))
    with pytest.raises(ValueError):
        p.locate(11)


def test_params_errors():
    with pytest.raises(ValueError):
        d3_params(10, 3, 1)
    with pytest.raises(ValueError):
        d3_params(10, 3, 2, levels=1)
    with pytest.raises(ValueError):
        d3_params(8, 3, 2, levels=3)
    assert d3_params(8, 3, 2).levels == 1


def test_11_8():
    base = make_cauchy_base(F, 8, 3)
    code = d3_construct(base, 2)
    assert np.array_equal(code.grid, expected_d3_11_8(base.parities))
    assert [d3_repair_systematic(code, i).cost for i in range(1, 9)] == [20] * 4 + [26] * 4
    assert gamma3_sys_measured(8, 3) == Fraction(23, 32)
    assert verify_mds(code)


def test_13_10():
    base = make_cauchy_base(F, 10, 3)
    code = d3_construct(base, 2)
    assert np.array_equal(code.grid, expected_d3_13_10(base.parities))
    plans = [d3_repair_systematic(code, i) for i in range(1, 11)]
    assert [p.cost for p in plans] == [48] * 4 + [64] * 4 + [48] * 2
    assert max(p.locality for p in plans) <= 11
    assert d3_repair_parity(code, 12).cost == 80
    assert verify_mds(code)


@pytest.mark.parametrize("k,r,m1", [(6, 2, 2), (9, 4, 2), (7, 3, 3), (12, 2, 2)])
def test_other_shapes_are_mds_and_cheaper(k, r, m1):
    code = d3_construct(make_cauchy_base(F, k, r), m1)
    assert verify_mds(code)
    assert gamma3_sys_measured(k, r, m1) < 1
