import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from pbcode.algebra import (
    Field,
    ShapeError,
    SingularMatrixError,
    cauchy_matrix,
    express_rows,
    fe_op,
    identity,
    mat_inverse,
    mat_mul,
    mat_rank,
    mat_solve,
    rref,
    solve_consistent,
    span_rank,
)

FIELDS = [Field.gf2(4), Field.gf2(8), Field.gf2(16), Field.gfp(5), Field.gfp(257)]


def elements(F):
    return st.integers(0, F.order - 1)


@pytest.mark.parametrize("F", FIELDS, ids=str)
@given(data=st.data())
def test_field_axioms(F, data):
    a, b, c = (data.draw(elements(F)) for _ in range(3))
    assert int(F.add(a, b)) == int(F.add(b, a))
    assert int(F.mul(a, b)) == int(F.mul(b, a))
    assert int(F.mul(a, F.add(b, c))) == int(F.add(F.mul(a, b), F.mul(a, c)))
    assert int(F.mul(F.mul(a, b), c)) == int(F.mul(a, F.mul(b, c)))
    assert int(F.sub(F.add(a, b), b)) == a
    assert int(F.add(a, F.neg(a))) == 0
    if a:
        assert int(F.mul(a, F.inv(a))) == 1


@pytest.mark.parametrize("F", [F for F in FIELDS if F.order < 300], ids=str)
def test_generator_has_full_order(F):
    g, seen, x = F.generator, set(), 1
    for _ in range(F.order - 1):
        seen.add(x)
        x = int(F.mul(x, g))
    assert len(seen) == F.order - 1


def test_gf256_known_products():
    F = Field.gf2(8)
    # reduction polynomial x^8 + x^4 + x^3 + x^2 + 1
    assert fe_op(F, 2, 0x80, "mul") == 0x1D
    assert F.power(2, 255) == 1 and F.power(2, 51) != 1 and F.power(2, 85) != 1
    assert fe_op(F, 0x53, int(F.inv(0x53)), "mul") == 1
    assert fe_op(F, 7, 7, "add") == 0


def test_fe_op_errors():
    F = Field.gfp(5)
    with pytest.raises(ZeroDivisionError):
        fe_op(F, 1, 0, "div")
    with pytest.raises(ValueError):
        fe_op(F, 5, 1, "add")
    with pytest.raises(ValueError):
        fe_op(F, 1, 1, "pow")
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@pytest.mark.parametrize("text,want", [("gf2^8", Field.gf2(8)), ("GF(2^16)", Field.gf2(16)), ("gf256", Field.gf2(8)),
                                       ("gf5", Field.gfp(5)), ("gf16", Field.gf2(4))])
def test_field_parse(text, want):
    assert Field.parse(text) == want
    assert Field.parse(str(want)) == want


@pytest.mark.parametrize("bad", ["gf2^5", "gf6", "gf1", "z7"])
def test_field_parse_rejects(bad):
    with pytest.raises(ValueError):
        Field.parse(bad)


@pytest.mark.parametrize("F", FIELDS[:2] + FIELDS[3:], ids=str)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6))
@settings(max_examples=40)
def test_inverse_round_trip(F, seed, n):
    rng = np.random.default_rng(seed)
    A = F.random(rng, (n, n))
    if mat_rank(F, A) < n:
        with pytest.raises(SingularMatrixError):
            mat_inverse(F, A)
        return
    Ainv = mat_inverse(F, A)
    assert np.array_equal(mat_mul(F, A, Ainv), identity(n))
    b = F.random(rng, n)
    x = mat_solve(F, A, b)
    assert np.array_equal(mat_mul(F, A, x.reshape(-1, 1))[:, 0], b)


@given(seed=st.integers(0, 2**32 - 1), rows=st.integers(1, 7), cols=st.integers(1, 7))
@settings(max_examples=60)
def test_rank_matches_rref_and_span_rank(seed, rows, cols):
    F = Field.gf2(4)
    rng = np.random.default_rng(seed)
    A = F.random(rng, (rows, cols))
    # sprinkle unit rows so the fast path in span_rank is exercised
    for i in range(0, rows, 2):
        A[i] = 0
        A[i, rng.integers(cols)] = 1
    R, piv = rref(F, A)
    assert mat_rank(F, A) == len(piv) == span_rank(F, A) == mat_rank(F, A.T)
    assert np.array_equal(R[: len(piv)][:, piv], identity(len(piv)))


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=60)
def test_express_rows(seed):
    F = Field.gf2(8)
    rng = np.random.default_rng(seed)
    R = F.random(rng, (5, 8))
    R[0] = 0
    R[0, 3] = 1
    X = F.random(rng, (3, 5))
    T = mat_mul(F, X, R)
    Y = express_rows(F, R, T)
    assert Y is not None and np.array_equal(mat_mul(F, Y, R), T)
    if mat_rank(F, R) < 8:
        outside = np.vstack([R, F.random(rng, (1, 8))])
        if mat_rank(F, outside) > mat_rank(F, R):
            assert express_rows(F, R, outside[-1:]) is None


def test_solve_consistent_detects_inconsistency():
    F = Field.gfp(7)
    A = np.array([[1, 2], [2, 4]])
    assert solve_consistent(F, A, np.array([[1], [3]])) is None
    X = solve_consistent(F, A, np.array([[1], [2]]))
    assert np.array_equal(mat_mul(F, A, X), [[1], [2]])


def test_shape_errors():
    F = Field.gf2(8)
    with pytest.raises(ShapeError):
        mat_mul(F, np.ones((2, 3), dtype=np.int64), np.ones((2, 3), dtype=np.int64))
    with pytest.raises(ShapeError):
        mat_inverse(F, np.ones((2, 3), dtype=np.int64))


@pytest.mark.parametrize("F", [Field.gf2(8), Field.gfp(257)], ids=str)
def test_cauchy_square_submatrices_nonsingular(F):
    rng = np.random.default_rng(0)
    C = cauchy_matrix(F, range(6, 10), range(6))
    for _ in range(50):
        size = int(rng.integers(1, 5))
        rows = rng.choice(4, size, replace=False)
        cols = rng.choice(6, size, replace=False)
        assert mat_rank(F, C[np.ix_(rows, cols)]) == size


def test_cauchy_rejects_shared_points():
    with pytest.raises(ValueError):
        cauchy_matrix(Field.gf2(8), [1, 2], [2, 3])
