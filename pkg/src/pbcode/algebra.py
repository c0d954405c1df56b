"""Finite-field arithmetic and dense linear algebra over GF(2^w) and GF(p).

Field elements are plain Python ints (or numpy int64 arrays of them); every
element-wise operation on :class:`Field` accepts either and broadcasts like
numpy.  Matrices are 2-D int64 arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

# Fixed so that shard files are bit-stable: x^4+x+1, x^8+x^4+x^3+x^2+1,
# x^16+x^12+x^3+x+1.  All three are primitive, so 2 generates the group.
PRIMITIVE_POLYS = {4: 0x13, 8: 0x11D, 16: 0x1100B}


class SingularMatrixError(ValueError):
    pass


class ShapeError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def clmul(a: int, b: int) -> int:
    """Carry-less product of two polynomials over GF(2)."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, poly: int) -> int:
    deg = poly.bit_length() - 1
    while a.bit_length() - 1 >= deg:
        a ^= poly << (a.bit_length() - 1 - deg)
    return a


@dataclass(frozen=True)
class Field:
    """GF(2^w) for w in {4, 8, 16} (``kind='binary'``) or GF(p) (``kind='prime'``)."""

    kind: str = "binary"
    w: int = 8
    p: int = 0

    def __post_init__(self):
        if self.kind == "binary":
            if self.w not in PRIMITIVE_POLYS:
                raise ValueError(f"unsupported extension degree w={self.w}")
        elif self.kind == "prime":
            if not (2 <= self.p < 1 << 16) or not _is_prime(self.p):
                raise ValueError(f"p={self.p} is not a prime below 2^16")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def gf2(cls, w: int = 8) -> "Field":
        return cls("binary", w, 0)

    @classmethod
    def gfp(cls, p: int) -> "Field":
        return cls("prime", 0, p)

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``gf2^8``, ``gf256``, ``gf5`` style names."""
        t = text.lower().replace("(", "").replace(")", "")
        if t.startswith("gf2^"):
            return cls.gf2(int(t[4:]))
        if t.startswith("gf"):
            q = int(t[2:])
            if q > 2 and q & (q - 1) == 0:
                return cls.gf2(q.bit_length() - 1)
            return cls.gfp(q)
        raise ValueError(f"cannot parse field {text!r}")

    def __str__(self) -> str:
        return f"GF(2^{self.w})" if self.binary else f"GF({self.p})"

    @property
    def binary(self) -> bool:
        return self.kind == "binary"

    @property
    def order(self) -> int:
        return 1 << self.w if self.binary else self.p

    @property
    def poly(self) -> int:
        return PRIMITIVE_POLYS[self.w] if self.binary else 0

    @property
    def symbol_bytes(self) -> int:
        return 1 if self.order <= 256 else 2

    # ---- tables -------------------------------------------------------

    @cached_property
    def _logexp(self):
        q = self.order
        exp = np.zeros(2 * q, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        g = self.generator
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        if x != 1 or len(set(exp[: q - 1].tolist())) != q - 1:
            raise ValueError(f"{g} does not generate {self}")
        exp[q - 1 : 2 * q - 2] = exp[: q - 1]
        return log, exp

    @cached_property
    def _mul_table(self):
        if self.order > 256:
            return None
        log, exp = self._logexp
        q = self.order
        a = np.arange(q)
        t = exp[(log[a][:, None] + log[a][None, :])]
        t[0, :] = 0
        t[:, 0] = 0
        return t

    @cached_property
    def _inv_table(self):
        log, exp = self._logexp
        q = self.order
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        return inv

    def _slow_mul(self, a: int, b: int) -> int:
        if self.binary:
            return poly_mod(clmul(a, b), self.poly)
        return a * b % self.p

    @cached_property
    def generator(self) -> int:
        """A generator of the multiplicative group."""
        if self.binary:
            return 2
        p = self.p
        if p == 2:
            return 1
        factors = [f for f in range(2, p) if (p - 1) % f == 0 and _is_prime(f)]
        for g in range(2, p):
            if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
                return g
        raise AssertionError("unreachable")

    # ---- element-wise arithmetic ---------------------------------------

    def add(self, a, b):
        if self.binary:
            return np.bitwise_xor(a, b)
        return np.add(a, b) % self.p

    def sub(self, a, b):
        if self.binary:
            return np.bitwise_xor(a, b)
        return np.subtract(a, b) % self.p

    def neg(self, a):
        if self.binary:
            return a
        return np.negative(a) % self.p

    def mul(self, a, b):
        if not self.binary:
            return np.multiply(a, b) % self.p
        table = self._mul_table
        if table is not None:
            return table[a, b]
        log, exp = self._logexp
        a = np.asarray(a)
        b = np.asarray(b)
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError(f"inverse of zero in {self}")
        return self._inv_table[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = int(self.mul(out, a))
        return out

    def random(self, rng: np.random.Generator, size=None, nonzero: bool = False):
        lo = 1 if nonzero else 0
        return rng.integers(lo, self.order, size=size, dtype=np.int64)


def fe_op(field: Field, a: int, b: int, op: str) -> int:
    """One scalar field operation; ``op`` is add, sub, mul or div."""
    for v in (a, b):
        if not 0 <= v < field.order:
            raise ValueError(f"{v} is not an element of {field}")
    if op == "add":
        return int(field.add(a, b))
    if op == "sub":
        return int(field.sub(a, b))
    if op == "mul":
        return int(field.mul(a, b))
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return int(field.div(a, b))
    raise ValueError(f"unknown op {op!r}")


# ---- matrices -------------------------------------------------------------


def as_mat(rows) -> np.ndarray:
    m = np.array(rows, dtype=np.int64)
    if m.ndim != 2:
        raise ShapeError("expected a 2-D matrix")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mat_mul(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    if not F.binary and A.shape[1] * (F.p - 1) ** 2 < 2**62:
        return (A @ B) % F.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for t in range(A.shape[1]):
        col = A[:, t]
        if not col.any():
            continue
        out = F.add(out, F.mul(col[:, None], B[t][None, :]))
    return out


def mat_vec(F: Field, A: np.ndarray, x) -> np.ndarray:
    return mat_mul(F, A, np.asarray(x, dtype=np.int64).reshape(-1, 1))[:, 0]


def rref(F: Field, M: np.ndarray, ncols: int | None = None):
    """Reduced row-echelon form.

    Pivots are searched only in the first ``ncols`` columns (all by default),
    which lets callers reduce an augmented matrix ``[A | B]``.
    Returns ``(R, pivot_columns)``.
    """
    R = np.array(M, dtype=np.int64, copy=True)
    rows, cols = R.shape
    ncols = cols if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        if R[r, c] != 1:
            R[r] = F.mul(R[r], int(F.inv(int(R[r, c]))))
        col = R[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            R[others] = F.sub(R[others], F.mul(col[others][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def mat_rank(F: Field, A: np.ndarray) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    # eliminate along the shorter side
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(rref(F, A)[1])


def mat_solve(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve ``A X = B`` for square nonsingular ``A``."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    vec = B.ndim == 1
    if vec:
        B = B.reshape(-1, 1)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n or B.shape[0] != n:
        raise ShapeError(f"cannot solve {A.shape} against {B.shape}")
    R, piv = rref(F, np.hstack([A, B]), ncols=n)
    if len(piv) < n:
        raise SingularMatrixError(f"matrix is singular (rank {len(piv)} < {n})")
    X = R[:, n:]
    return X[:, 0] if vec else X


def mat_inverse(F: Field, A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"cannot invert non-square {A.shape}")
    return mat_solve(F, A, identity(A.shape[0]))


def solve_consistent(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray | None:
    """A particular solution of ``A X = B`` for any shape, or None if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    m, n = A.shape
    if B.shape[0] != m:
        raise ShapeError(f"cannot solve {A.shape} against {B.shape}")
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    if m == 0:
        return X if not B.any() else None
    R, piv = rref(F, np.hstack([A, B]), ncols=n)
    if R[len(piv):, n:].any():
        return None
    for i, c in enumerate(piv):
        X[c] = R[i, n:]
    return X


def cauchy_matrix(F: Field, x, y) -> np.ndarray:
    """Matrix with entry (i, j) = 1 / (x_i - y_j)."""
    x = [int(v) for v in x]
    y = [int(v) for v in y]
    pts = x + y
    if len(set(pts)) != len(pts):
        raise ValueError("Cauchy points must be distinct and x, y disjoint")
    if any(not 0 <= v < F.order for v in pts):
        raise ValueError(f"Cauchy points must be elements of {F}")
    xs = np.array(x, dtype=np.int64)[:, None]
    ys = np.array(y, dtype=np.int64)[None, :]
    return F.inv(F.sub(xs, ys))


def _split_unit_rows(R: np.ndarray):
    """Indices of rows with exactly one nonzero entry, their columns, and the rest."""
    nnz = np.count_nonzero(R, axis=1)
    unit = np.flatnonzero(nnz == 1)
    cols = np.argmax(R[unit] != 0, axis=1) if unit.size else np.zeros(0, dtype=np.int64)
    rest = np.flatnonzero(nnz != 1)
    return unit, cols, rest


def span_rank(F: Field, R: np.ndarray) -> int:
    """Rank of the rows of R, eliminating single-coordinate rows first."""
    R = np.asarray(R, dtype=np.int64)
    if R.size == 0:
        return 0
    unit, cols, rest = _split_unit_rows(R)
    known = np.unique(cols)
    mask = np.ones(R.shape[1], dtype=bool)
    mask[known] = False
    return known.size + mat_rank(F, R[rest][:, mask])


def express_rows(F: Field, R: np.ndarray, T: np.ndarray) -> np.ndarray | None:
    """Find X with ``X R = T`` (rows of T as combinations of rows of R), or None."""
    R = np.asarray(R, dtype=np.int64)
    T = np.asarray(T, dtype=np.int64)
    if R.shape[1] != T.shape[1]:
        raise ShapeError(f"row length mismatch {R.shape} vs {T.shape}")
    X = np.zeros((T.shape[0], R.shape[0]), dtype=np.int64)
    unit, cols, rest = _split_unit_rows(R)
    # one representative unit row per known coordinate
    first = {}
    for idx, c in zip(unit.tolist(), cols.tolist()):
        first.setdefault(c, idx)
    known = np.array(sorted(first), dtype=np.int64)
    mask = np.ones(R.shape[1], dtype=bool)
    mask[known] = False
    if rest.size:
        Y = solve_consistent(F, R[rest][:, mask].T, T[:, mask].T)
        if Y is None:
            return None
        Y = Y.T
        X[:, rest] = Y
        resid = F.sub(T[:, known], mat_mul(F, Y, R[rest][:, known])) if known.size else None
    else:
        if T[:, mask].any():
            return None
        resid = T[:, known]
    for j, c in enumerate(known.tolist()):
        row = first[c]
        X[:, row] = F.div(resid[:, j], int(R[row, c]))
    return X
