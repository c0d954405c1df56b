import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from pbcode.algebra import Field
from pbcode.basecode import (
    FieldTooSmallError,
    as_vector_base,
    base_decode,
    base_encode,
    make_cauchy_base,
    make_fig1_base,
    make_fig6_vector_base,
    verify_base_mds,
)


@pytest.mark.parametrize("k,r", [(1, 1), (4, 2), (6, 3), (10, 4), (5, 5)])
def test_cauchy_base_is_mds(k, r):
    base = make_cauchy_base(Field.gf2(8), k, r)
    assert base.parities.shape == (r, k)
    assert base.parities.all()
    assert verify_base_mds(base)


def test_cauchy_base_small_field():
    F = Field.gf2(4)
    assert verify_base_mds(make_cauchy_base(F, 10, 6))
    with pytest.raises(FieldTooSmallError):
        make_cauchy_base(F, 12, 5)


def test_small_base_coefficients():
    base = make_fig1_base()
    assert base.parities.tolist() == [[1, 1, 1, 1], [1, 2, 3, 4]]
    assert verify_base_mds(base)


@given(seed=st.integers(0, 2**32 - 1), data=st.data())
@settings(max_examples=40)
def test_encode_decode_any_k_nodes(seed, data):
    k, r = data.draw(st.integers(1, 8)), data.draw(st.integers(1, 4))
    F = Field.gf2(8)
    base = make_cauchy_base(F, k, r)
    rng = np.random.default_rng(seed)
    msg = F.random(rng, k)
    coded = base_encode(base, msg)
    assert np.array_equal(coded[:k], msg)
    nodes = data.draw(st.permutations(range(1, k + r + 1)))[:k]
    assert np.array_equal(base_decode(base, [(i, coded[i - 1]) for i in nodes]), msg)


def test_decode_rejects_too_few_or_duplicates():
    base = make_cauchy_base(Field.gf2(8), 3, 2)
    coded = base_encode(base, [1, 2, 3])
    with pytest.raises(ValueError):
        base_decode(base, [(1, coded[0]), (2, coded[1])])
    with pytest.raises(ValueError):
        base_decode(base, [(1, coded[0]), (1, coded[0]), (2, coded[1])])


def test_gf5_vector_base():
    vb = make_fig6_vector_base()
    assert (vb.k, vb.r, vb.mu, vb.field) == (2, 2, 2, Field.gfp(5))
    assert verify_base_mds(vb)
    msg = np.array([1, 2, 3, 4])
    coded = base_encode(vb, msg)
    assert coded.shape == (4, 2)
    assert np.array_equal(base_decode(vb, [(3, coded[2]), (4, coded[3])]), msg)
    # node 1 is rebuilt from one symbol of each helper
    assert vb.repair_reads(1) == [(2, 1), (3, 1), (4, 1)]
    assert vb.repair_reads(2) == [(1, 2), (3, 2), (4, 2)]


def test_as_vector_base_matches_scalar():
    base = make_cauchy_base(Field.gf2(8), 4, 3)
    vb = as_vector_base(base)
    assert vb.mu == 1
    assert np.array_equal(vb.generator(), base.generator())
    assert vb.repair_helpers(2) == [1, 3, 4, 7]
