from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from pbcode.algebra import Field, ShapeError, identity
from pbcode.basecode import as_vector_base, make_cauchy_base, make_fig6_vector_base
from pbcode.engine import measure_gamma
from pbcode.framework import verify_mds
from pbcode.golden import expected_pp_gf5
from pbcode.paritypatch import (
    group_count,
    lemma_check,
    parity_groups,
    pp_avg_parity_read,
    pp_construct,
    pp_repair_parity,
    pp_repair_systematic,
)


@given(k=st.integers(1, 60), r=st.integers(1, 12))
def test_groups_partition_parities(k, r):
    groups = parity_groups(k, r)
    assert groups.g == len(groups.groups) >= 1
    assert [x for grp in groups.groups for x in grp] == list(range(1, r + 1))
    for x in range(1, r + 1):
        assert x in groups.group_of(x)


def test_group_count():
    assert group_count(3, 2) == 1
    assert group_count(3, 4) == 2
    assert group_count(8, 6) == 2
    assert group_count(20, 3) == 1


def test_lemma_check():
    vb = make_fig6_vector_base()
    assert lemma_check(vb, 1, 2, identity(2), identity(1))
    assert not lemma_check(vb, 1, 2, np.array([[0, 1], [1, 0]]), identity(1))
    with pytest.raises(ShapeError):
        lemma_check(vb, 1, 2, identity(3), identity(1))


def test_gf5_code():
    code = pp_construct(make_fig6_vector_base())
    assert np.array_equal(code.grid, expected_pp_gf5())
    assert verify_mds(code)
    assert [pp_repair_systematic(code, i).cost for i in (1, 2)] == [6, 6]
    assert pp_repair_parity(code, 3).cost == 8
    assert pp_repair_parity(code, 4).cost == 6
    assert measure_gamma(code, pp_repair_systematic, pp_repair_parity).par_avg == Fraction(7, 8)


@pytest.mark.parametrize("k,r", [(8, 3), (3, 3), (4, 6), (8, 6)])
def test_measured_average_matches_formula(k, r):
    code = pp_construct(as_vector_base(make_cauchy_base(Field.gf2(8), k, r)))
    g = measure_gamma(code, pp_repair_systematic, pp_repair_parity)
    assert g.par_avg == pp_avg_parity_read(k, r)


@pytest.mark.parametrize("k", range(2, 21))
def test_closed_form_r3(k):
    assert pp_avg_parity_read(k, 3) == Fraction(2 * k + 2, 3 * k)


def test_formula_domain():
    with pytest.raises(ValueError):
        pp_avg_parity_read(4, 1)
