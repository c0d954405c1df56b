"""Systematic MDS base codes: scalar (one symbol per node) and vector (mu symbols)."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

import numpy as np

from .algebra import Field, cauchy_matrix, identity, mat_mul, mat_rank, mat_solve, rref


class FieldTooSmallError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ScalarMDSBase:
    """Parity node ``k+j`` stores ``parities[j-1] . a`` for message ``a``."""

    field: Field
    k: int
    r: int
    parities: np.ndarray  # (r, k)

    @property
    def n(self) -> int:
        return self.k + self.r

    @property
    def mu(self) -> int:
        return 1

    def generator(self) -> np.ndarray:
        """The (n, k) matrix [I; P]."""
        return np.vstack([identity(self.k), self.parities])

    def node_rows(self, node: int) -> np.ndarray:
        return self.generator()[node - 1 : node]


@dataclass(frozen=True, eq=False)
class VectorLinearBase:
    """A systematic vector code with ``mu`` symbols per node.

    Message coordinates are ordered substripe-major: coordinate
    ``u*k + (i-1)`` is the u-th symbol of systematic node i.  ``parities`` has
    shape (r, mu, k*mu): row u of parity j is the functional stored as that
    node's u-th symbol.  ``repair[i-1]`` is the (mu, beta) matrix Q_i that every
    helper multiplies its data by when node i is repaired (common-Q codes).
    """

    field: Field
    k: int
    r: int
    mu: int
    parities: np.ndarray
    repair: tuple = ()
    helpers: dict = dc_field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.k + self.r

    def node_rows(self, node: int) -> np.ndarray:
        """(mu, k*mu) functionals stored at ``node`` (1-based)."""
        k, mu = self.k, self.mu
        if node <= k:
            rows = np.zeros((mu, k * mu), dtype=np.int64)
            for u in range(mu):
                rows[u, u * k + node - 1] = 1
            return rows
        return self.parities[node - k - 1]

    def generator(self) -> np.ndarray:
        return np.vstack([self.node_rows(i) for i in range(1, self.n + 1)])

    def q(self, x: int, i: int) -> np.ndarray:
        """Repair matrix used by parity ``k+x`` when systematic node i fails."""
        return self.repair[i - 1]

    def repair_helpers(self, i: int) -> list[int]:
        if i in self.helpers:
            return list(self.helpers[i])
        return [h for h in range(1, self.n + 1) if h != i]

    def repair_reads(self, i: int) -> list[tuple[int, int]]:
        """(node, substripe) pairs touched by the base repair of node i."""
        Q = self.repair[i - 1]
        used = [u + 1 for u in range(self.mu) if Q[u].any()]
        return [(h, u) for h in self.repair_helpers(i) for u in used]


def make_cauchy_base(field: Field, k: int, r: int) -> ScalarMDSBase:
    """MDS base whose parity block is a Cauchy matrix (every entry nonzero)."""
    if k < 1 or r < 1:
        raise ValueError("k and r must be positive")
    if k + r > field.order:
        raise FieldTooSmallError(f"n={k + r} exceeds the order of {field}")
    P = cauchy_matrix(field, range(k, k + r), range(k))
    return ScalarMDSBase(field, k, r, P)


def make_fig1_base() -> ScalarMDSBase:
    """(6,4) code over GF(2^8) with parities sum(a_i) and sum(i * a_i)."""
    F = Field.gf2(8)
    base = ScalarMDSBase(F, 4, 2, np.array([[1, 1, 1, 1], [1, 2, 3, 4]], dtype=np.int64))
    if not verify_base_mds(base):
        raise AssertionError("integer coefficients 1..4 are not MDS in GF(2^8)")
    return base


def make_fig6_vector_base() -> VectorLinearBase:
    """(4,2) vector code over GF(5), mu=2, with optimal systematic repair.

    Node 1 stores (a1, b1), node 2 stores (a2, b2); coordinates are
    (a1, a2, b1, b2).
    """
    F = Field.gfp(5)
    parities = np.array(
        [
            [[3, 1, 2, 0], [0, 2, 1, 3]],  # 3a1+2b1+a2, b1+2a2+3b2
            [[3, 2, 4, 0], [0, 2, 1, 1]],  # 3a1+4b1+2a2, b1+2a2+b2
        ],
        dtype=np.int64,
    )
    repair = (np.array([[1], [0]]), np.array([[0], [1]]))
    return VectorLinearBase(F, 2, 2, 2, parities, repair)


def as_vector_base(base: ScalarMDSBase) -> VectorLinearBase:
    """View a scalar MDS code as a common-Q vector code with mu=1, Q_i = [1].

    Node i is repaired from the other systematic nodes and the last parity.
    """
    k, n = base.k, base.n
    helpers = {i: [h for h in range(1, k + 1) if h != i] + [n] for i in range(1, k + 1)}
    repair = tuple(np.ones((1, 1), dtype=np.int64) for _ in range(k))
    return VectorLinearBase(base.field, k, base.r, 1, base.parities[:, None, :].copy(), repair, helpers)


def base_encode(base, message) -> np.ndarray:
    """Encode one instance. Returns (n,) for scalar bases, (n, mu) for vector bases."""
    F = base.field
    msg = np.asarray(message, dtype=np.int64)
    if msg.shape != (base.k * base.mu,):
        raise ValueError(f"message must have {base.k * base.mu} symbols")
    out = mat_mul(F, base.generator(), msg.reshape(-1, 1))[:, 0]
    return out if base.mu == 1 else out.reshape(base.n, base.mu)


def base_decode(base, symbols) -> np.ndarray:
    """Recover the message from ``(node, value)`` pairs; values are mu-vectors for vector bases."""
    F = base.field
    nodes = [int(nd) for nd, _ in symbols]
    if len(set(nodes)) != len(nodes):
        raise ValueError("duplicate node ids")
    if len(nodes) < base.k:
        raise ValueError(f"need at least {base.k} nodes, got {len(nodes)}")
    G = base.generator()
    mu = base.mu
    rows = []
    vals = []
    for nd, v in symbols:
        rows.extend(range((nd - 1) * mu, nd * mu))
        vals.extend(np.atleast_1d(np.asarray(v, dtype=np.int64)).tolist())
    A = G[rows]
    y = np.array(vals, dtype=np.int64)
    # pick an invertible square subsystem
    _, piv = rref(F, A.T)
    if len(piv) < base.k * mu:
        raise ValueError("chosen nodes do not determine the message")
    return mat_solve(F, A[piv], y[piv])


def verify_base_mds(base) -> bool:
    """Every k-subset of nodes determines the message (exhaustive)."""
    G = base.generator()
    mu = base.mu
    for S in combinations(range(base.n), base.k):
        rows = [i * mu + u for i in S for u in range(mu)]
        if mat_rank(base.field, G[rows]) < base.k * mu:
            return False
    return True
