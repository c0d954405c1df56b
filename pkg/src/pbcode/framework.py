"""Piggybacking over multiple instances of a base code.

Every code is held as one coefficient grid of shape (n, alpha, k*alpha):
``grid[i-1, s-1]`` is the linear functional of the whole message that node i
stores as its s-th symbol.  Message substripe s occupies coordinates
``[(s-1)k, sk)``.  Nodes and substripes are 1-based throughout the public API.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field as dc_field, replace
from itertools import combinations
from math import comb
from typing import Any

import numpy as np

from .algebra import (
    Field,
    SingularMatrixError,
    mat_mul,
    mat_rank,
    mat_solve,
    rref,
    span_rank,
)


class TriangularityError(ValueError):
    pass


class CombinatorialBoundError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class LinearCode:
    field: Field
    n: int
    k: int
    alpha: int
    grid: np.ndarray
    # substripes per block; rows of block t reference only blocks <= t
    instance_size: int = 1
    design: str = "custom"
    params: Any = None
    # (slot substripe, covered substripe) pairs placed by the parity pass
    cover: tuple = ()
    transforms: dict = dc_field(default_factory=dict)

    @property
    def r(self) -> int:
        return self.n - self.k

    @property
    def message_size(self) -> int:
        return self.k * self.alpha

    def rows(self, node: int) -> np.ndarray:
        return self.grid[node - 1]

    def symbol(self, node: int, s: int) -> np.ndarray:
        return self.grid[node - 1, s - 1]

    def functionals(self, reads) -> np.ndarray:
        reads = list(reads)
        if not reads:
            return np.zeros((0, self.message_size), dtype=np.int64)
        idx = np.array(reads, dtype=np.int64) - 1
        return self.grid[idx[:, 0], idx[:, 1]]

    def flat(self) -> np.ndarray:
        return self.grid.reshape(self.n * self.alpha, self.message_size)

    def encode(self, message) -> np.ndarray:
        """Stored symbols, shape (n, alpha), for one message of k*alpha symbols."""
        msg = np.asarray(message, dtype=np.int64).reshape(-1, 1)
        return mat_mul(self.field, self.flat(), msg).reshape(self.n, self.alpha)

    def encode_stripes(self, messages: np.ndarray) -> np.ndarray:
        """Encode many stripes at once: (k*alpha, N) -> (n, alpha, N)."""
        out = mat_mul(self.field, self.flat(), messages)
        return out.reshape(self.n, self.alpha, -1)

    def is_systematic(self) -> bool:
        k = self.k
        for i in range(k):
            for s in range(self.alpha):
                row = self.grid[i, s]
                c = s * k + i
                if row[c] != 1 or np.count_nonzero(row) != 1:
                    return False
        return True


@dataclass(frozen=True)
class PiggybackSpec:
    """Additions ``(substripe, node, coefficients)``; coefficients span k*alpha."""

    alpha: int
    additions: tuple = ()


@dataclass(frozen=True, eq=False)
class NodeTransform:
    node: int
    T: np.ndarray


def instantiate(base, instances: int) -> LinearCode:
    """Block-diagonal code: ``instances`` independent copies of ``base``.

    A vector base with mu symbols per node gives ``alpha = instances * mu``.
    """
    if instances < 1:
        raise ValueError("need at least one instance")
    k, n, mu = base.k, base.n, base.mu
    alpha = instances * mu
    grid = np.zeros((n, alpha, k * alpha), dtype=np.int64)
    for node in range(1, n + 1):
        rows = base.node_rows(node)  # (mu, k*mu)
        for t in range(instances):
            lo = t * k * mu
            grid[node - 1, t * mu : (t + 1) * mu, lo : lo + k * mu] = rows
    return LinearCode(base.field, n, k, alpha, grid, instance_size=mu, design="base")


def apply_piggyback(code: LinearCode, spec: PiggybackSpec) -> LinearCode:
    if spec.alpha != code.alpha:
        raise ValueError(f"spec is for alpha={spec.alpha}, code has alpha={code.alpha}")
    F = code.field
    grid = code.grid.copy()
    b = code.instance_size
    for s, node, coeffs in spec.additions:
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape != (code.message_size,):
            raise ValueError("piggyback coefficients must span the whole message")
        if not (1 <= node <= code.n and 1 <= s <= code.alpha):
            raise ValueError(f"no symbol ({node}, {s})")
        target_block = (s - 1) // b
        support = np.flatnonzero(coeffs)
        if support.size and support.max() >= target_block * b * code.k:
            raise TriangularityError(
                f"piggyback on substripe {s} references coordinate {int(support.max())}, "
                f"which is not in an earlier instance"
            )
        grid[node - 1, s - 1] = F.add(grid[node - 1, s - 1], coeffs)
    return replace(code, grid=grid)


def _coarsen(T: np.ndarray, b: int) -> int:
    """Smallest block size (a multiple of b dividing alpha) making T block-diagonal."""
    alpha = T.shape[0]
    for size in range(b, alpha + 1, b):
        if alpha % size:
            continue
        mask = np.zeros_like(T, dtype=bool)
        for t in range(alpha // size):
            mask[t * size : (t + 1) * size, t * size : (t + 1) * size] = True
        if not T[~mask].any():
            return size
    return alpha


def apply_node_transform(code: LinearCode, t: NodeTransform) -> LinearCode:
    """Replace node ``t.node``'s rows by ``T @ rows``."""
    F = code.field
    T = np.asarray(t.T, dtype=np.int64)
    if T.shape != (code.alpha, code.alpha):
        raise ValueError(f"transform must be {code.alpha}x{code.alpha}")
    if mat_rank(F, T) < code.alpha:
        raise SingularMatrixError("node transform is not invertible")
    grid = code.grid.copy()
    grid[t.node - 1] = mat_mul(F, T, grid[t.node - 1])
    transforms = dict(code.transforms)
    prev = transforms.get(t.node)
    transforms[t.node] = T if prev is None else mat_mul(F, T, prev)
    size = _coarsen(T, code.instance_size)
    # composition with earlier transforms must stay block-diagonal too
    size = _coarsen(transforms[t.node], size)
    return replace(code, grid=grid, transforms=transforms, instance_size=size)


def can_decode(code: LinearCode, S) -> bool:
    nodes = sorted(set(S))
    if not nodes:
        return code.message_size == 0
    rows = code.grid[np.array(nodes) - 1].reshape(-1, code.message_size)
    return span_rank(code.field, rows) == code.message_size


def verify_mds(code: LinearCode, bound: int = 10**6) -> bool:
    """Exhaustively check that every k-subset of nodes decodes the message."""
    if comb(code.n, code.k) > bound:
        raise CombinatorialBoundError(f"C({code.n},{code.k}) exceeds bound {bound}")
    return all(can_decode(code, S) for S in combinations(range(1, code.n + 1), code.k))


def _minimal_decodable_sets(code: LinearCode):
    """Decodable node sets none of whose one-smaller subsets decode."""
    n = code.n
    decodable: set[frozenset] = set()
    minimal = []
    for size in range(1, n + 1):
        for S in combinations(range(1, n + 1), size):
            fs = frozenset(S)
            if any(fs - {x} in decodable for x in fs):
                decodable.add(fs)
                continue
            if can_decode(code, S):
                decodable.add(fs)
                minimal.append(S)
    return minimal


def theorem1_check(base, code: LinearCode, bound: int = 10**6) -> bool:
    """Every node set that decodes under plain instances of ``base`` decodes ``code``.

    Decodability is monotone, so checking the minimal decodable sets of the
    plain code is enough.
    """
    if code.alpha % base.mu:
        raise ValueError("alpha is not a multiple of the base substripe count")
    if 2**code.n > bound:
        raise CombinatorialBoundError(f"2^{code.n} node sets exceed bound {bound}")
    plain = instantiate(base, code.alpha // base.mu)
    return all(can_decode(code, S) for S in _minimal_decodable_sets(plain))


def decode(code: LinearCode, symbols: dict) -> np.ndarray:
    """Recover the message from ``{node: alpha stored values}`` by one direct solve."""
    nodes = sorted(symbols)
    A = code.grid[np.array(nodes) - 1].reshape(-1, code.message_size)
    y = np.concatenate([np.asarray(symbols[i], dtype=np.int64) for i in nodes])
    _, piv = rref(code.field, A.T)
    if len(piv) < code.message_size:
        raise ValueError(f"nodes {nodes} do not determine the message")
    return mat_solve(code.field, A[piv], y[piv])


def sequential_decode(code: LinearCode, symbols: dict) -> np.ndarray:
    """Decode instance by instance, subtracting piggybacks of earlier instances."""
    F = code.field
    k, b = code.k, code.instance_size
    nodes = sorted(symbols)
    msg = np.zeros(code.message_size, dtype=np.int64)
    for t in range(code.alpha // b):
        lo, hi = t * b * k, (t + 1) * b * k
        subs = range(t * b, (t + 1) * b)
        A = np.array([code.grid[i - 1, s, lo:hi] for i in nodes for s in subs], dtype=np.int64)
        known = np.array([code.grid[i - 1, s, :lo] for i in nodes for s in subs], dtype=np.int64)
        y = np.array([symbols[i][s] for i in nodes for s in subs], dtype=np.int64)
        if code.grid[np.array(nodes) - 1][:, list(subs), hi:].any():
            raise TriangularityError("rows reference later instances")
        if lo:
            y = F.sub(y, mat_mul(F, known, msg[:lo].reshape(-1, 1))[:, 0])
        _, piv = rref(F, A.T)
        if len(piv) < hi - lo:
            raise ValueError(f"instance {t + 1} is not decodable from nodes {nodes}")
        msg[lo:hi] = mat_solve(F, A[piv], y[piv])
    return msg


def dump_grid(code: LinearCode) -> str:
    """One line per (node, substripe): ``node substripe c0 c1 ...`` in hex."""
    width = 2 if code.field.order <= 256 else 4
    lines = []
    for i in range(code.n):
        for s in range(code.alpha):
            coeffs = " ".join(f"{int(c):0{width}x}" for c in code.grid[i, s])
            lines.append(f"{i + 1} {s + 1} {coeffs}")
    return "\n".join(lines) + "\n"


def grid_digest(code: LinearCode) -> str:
    return hashlib.sha256(dump_grid(code).encode()).hexdigest()
