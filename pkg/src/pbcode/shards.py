"""Shard files and the manifest that describes how a file was striped.

A shard is a 22-byte header (``PBC1``, 16 bytes of manifest hash, node index
as little-endian u16) followed by the node's symbols, stripe after stripe,
alpha symbols per stripe.  Symbols take one byte over GF(2^8) and two
little-endian bytes over GF(2^16).
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import tempfile
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .algebra import Field, mat_inverse, mat_mul, rref
from .catalog import build_code, plan_for
from .engine import apply_plan
from .framework import LinearCode, grid_digest

MAGIC = b"PBC1"
HEADER_SIZE = 22
FORMAT_VERSION = 1
FILE_FIELDS = (Field.gf2(8), Field.gf2(16))


class IntegrityError(RuntimeError):
    pass


class InsufficientDataError(RuntimeError):
    pass


@dataclass
class Manifest:
    design: str
    base: str
    field: str
    n: int
    k: int
    alpha: int
    m: int
    file_length: int
    stripes: int
    grid_digest: str
    seed: int = 0
    version: int = FORMAT_VERSION
    checksums: list = dc_field(default_factory=list)  # CRC-32 of each whole shard file

    def identity(self) -> dict:
        d = asdict(self)
        d.pop("checksums")
        return d

    def hash16(self) -> bytes:
        blob = json.dumps(self.identity(), sort_keys=True).encode()
        return hashlib.sha256(blob).digest()[:16]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Manifest":
        return cls(**json.loads(text))

    @property
    def fieldobj(self) -> Field:
        return Field.parse(self.field)

    def code(self) -> LinearCode:
        """Rebuild the code and confirm it matches the one used when encoding."""
        code = build_code(self.design, self.k, self.n - self.k, self.m, self.fieldobj, self.base)
        if grid_digest(code) != self.grid_digest:
            raise IntegrityError("manifest parameters no longer produce the encoding grid")
        return code


def shard_name(node: int) -> str:
    return f"shard_{node:03d}.pbc"


def threads() -> int:
    try:
        return max(1, int(os.environ.get("PBCODE_THREADS", "1")))
    except ValueError:
        return 1


def _chunks(total: int, parts: int) -> list[slice]:
    parts = max(1, min(parts, total)) if total else 1
    bounds = np.linspace(0, total, parts + 1).astype(int)
    return [slice(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]


def _map_columns(fn, X: np.ndarray, out_rows: int) -> np.ndarray:
    """Apply ``fn`` to column chunks of X in parallel (stripes are independent)."""
    N = X.shape[1]
    out = np.zeros((out_rows, N), dtype=np.int64)
    slices = _chunks(N, threads())

    def work(sl):
        out[:, sl] = fn(X[:, sl])

    if len(slices) == 1:
        work(slices[0])
    else:
        with ThreadPoolExecutor(len(slices)) as pool:
            list(pool.map(work, slices))
    return out


def _dtype(F: Field) -> np.dtype:
    return np.dtype("u1") if F.symbol_bytes == 1 else np.dtype("<u2")


def bytes_to_symbols(data: bytes, F: Field) -> np.ndarray:
    if F.symbol_bytes == 2 and len(data) % 2:
        data = data + b"\0"
    return np.frombuffer(data, dtype=_dtype(F)).astype(np.int64)


def symbols_to_bytes(symbols: np.ndarray, F: Field) -> bytes:
    return np.ascontiguousarray(symbols, dtype=_dtype(F)).tobytes()


def header(manifest: Manifest, node: int) -> bytes:
    return MAGIC + manifest.hash16() + struct.pack("<H", node)


def write_atomic(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        os.fchmod(fd, 0o644)  # mkstemp creates 0600
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def crc(data: bytes) -> int:
    return zlib.crc32(data) & 0xFFFFFFFF


def encode_file(data: bytes, outdir: Path, design: str, n: int, k: int, m: int,
                field: Field, base: str = "cauchy") -> Manifest:
    if field not in FILE_FIELDS:
        raise ValueError("files can only be stored over GF(2^8) or GF(2^16)")
    code = build_code(design, k, n - k, m, field, base)
    stripe = code.k * code.alpha
    sym = bytes_to_symbols(data, field)
    stripes = -(-len(sym) // stripe)
    padded = np.zeros(stripes * stripe, dtype=np.int64)
    padded[: len(sym)] = sym
    msgs = padded.reshape(stripes, stripe).T  # (k*alpha, stripes)
    flat = code.flat()
    stored = _map_columns(lambda X: mat_mul(field, flat, X), msgs, code.n * code.alpha)
    stored = stored.reshape(code.n, code.alpha, stripes)

    manifest = Manifest(design, base, str(field), code.n, code.k, code.alpha, m,
                        len(data), stripes, grid_digest(code))
    outdir.mkdir(parents=True, exist_ok=True)
    blobs = [header(manifest, i + 1) + symbols_to_bytes(stored[i].T.reshape(-1), field) for i in range(code.n)]
    manifest.checksums = [crc(b) for b in blobs]
    for i, blob in enumerate(blobs):
        write_atomic(outdir / shard_name(i + 1), blob)
    write_atomic(outdir / "manifest.json", manifest.to_json().encode())
    return manifest


def load_manifest(shard_dir: Path) -> Manifest:
    path = shard_dir / "manifest.json"
    if not path.exists():
        raise InsufficientDataError(f"no manifest in {shard_dir}")
    return Manifest.from_json(path.read_text())


def check_header(manifest: Manifest, node: int, head: bytes) -> None:
    if head != header(manifest, node):
        raise IntegrityError(f"shard {node} header does not match the manifest")


def open_payload(manifest: Manifest, shard_dir: Path, node: int) -> np.ndarray:
    """Memory-map a shard's payload as (stripes, alpha) symbols without reading it."""
    path = shard_dir / shard_name(node)
    F = manifest.fieldobj
    width = F.symbol_bytes
    expected = HEADER_SIZE + manifest.stripes * manifest.alpha * width
    if path.stat().st_size != expected:
        raise IntegrityError(f"shard {node} has the wrong size")
    with open(path, "rb") as fh:
        check_header(manifest, node, fh.read(HEADER_SIZE))
    if manifest.stripes == 0:
        return np.zeros((0, manifest.alpha), dtype=_dtype(F))
    return np.memmap(path, dtype=_dtype(F), mode="r", offset=HEADER_SIZE,
                     shape=(manifest.stripes, manifest.alpha))


def read_shard(manifest: Manifest, shard_dir: Path, node: int) -> np.ndarray | None:
    """Whole payload as (alpha, stripes) if the shard exists and its checksum holds."""
    path = shard_dir / shard_name(node)
    if not path.exists():
        return None
    blob = path.read_bytes()
    if crc(blob) != manifest.checksums[node - 1]:
        return None
    check_header(manifest, node, blob[:HEADER_SIZE])
    sym = bytes_to_symbols(blob[HEADER_SIZE:], manifest.fieldobj)
    return sym.reshape(manifest.stripes, manifest.alpha).T


def available_nodes(manifest: Manifest, shard_dir: Path) -> list[int]:
    return [i for i in range(1, manifest.n + 1) if (shard_dir / shard_name(i)).exists()]


def decode_stored(code: LinearCode, stored: dict) -> np.ndarray:
    """Message columns (k*alpha, stripes) from ``{node: (alpha, stripes)}``."""
    F = code.field
    nodes = sorted(stored)
    A = code.grid[np.array(nodes) - 1].reshape(-1, code.message_size)
    _, piv = rref(F, A.T)
    if len(piv) < code.message_size:
        raise InsufficientDataError(f"shards {nodes} do not determine the data")
    D = mat_inverse(F, A[piv])
    Y = np.concatenate([stored[i] for i in nodes], axis=0)[piv]
    return _map_columns(lambda X: mat_mul(F, D, X), Y, code.message_size)


def collect_shards(manifest: Manifest, shard_dir: Path, exclude=()) -> dict:
    stored = {}
    for node in range(1, manifest.n + 1):
        if node in exclude:
            continue
        payload = read_shard(manifest, shard_dir, node)
        if payload is not None:
            stored[node] = payload
    return stored


def decode_file(shard_dir: Path) -> bytes:
    manifest = load_manifest(shard_dir)
    code = manifest.code()
    stored = collect_shards(manifest, shard_dir)
    if len(stored) < code.k:
        raise InsufficientDataError(f"only {len(stored)} intact shards, need {code.k}")
    msgs = decode_stored(code, stored)
    data = symbols_to_bytes(msgs.T.reshape(-1), manifest.fieldobj)
    return data[: manifest.file_length]


@dataclass
class RepairReport:
    node: int
    bytes_read: dict  # node -> payload bytes
    header_bytes: int
    message_bytes: int
    plan_cost: int
    fallback: bool

    @property
    def total(self) -> int:
        return sum(self.bytes_read.values())

    @property
    def fraction(self) -> float:
        return self.total / self.message_bytes if self.message_bytes else 0.0

    def as_dict(self) -> dict:
        return {
            "node": self.node,
            "bytes_read": {str(k): v for k, v in sorted(self.bytes_read.items())},
            "total_bytes": self.total,
            "header_bytes": self.header_bytes,
            "message_bytes": self.message_bytes,
            "fraction": self.fraction,
            "plan_cost": self.plan_cost,
            "fallback_decode": self.fallback,
        }


def repair_shard(shard_dir: Path, lost: int) -> RepairReport:
    """Rebuild shard ``lost`` reading only the symbols its repair plan names.

    Falls back to a full decode from intact shards when a plan helper is
    missing or the plan's output fails the checksum.
    """
    manifest = load_manifest(shard_dir)
    if not 1 <= lost <= manifest.n:
        raise ValueError(f"node {lost} out of range 1..{manifest.n}")
    code = manifest.code()
    F = manifest.fieldobj
    width = F.symbol_bytes
    N = manifest.stripes
    plan = plan_for(code, lost)
    present = set(available_nodes(manifest, shard_dir)) - {lost}
    message_bytes = N * code.message_size * width

    if plan.nodes <= present:
        try:
            views = {nd: open_payload(manifest, shard_dir, nd) for nd in plan.nodes}
            values = np.stack([np.asarray(views[nd][:, s - 1], dtype=np.int64) for nd, s in plan.reads])
            rebuilt = _map_columns(lambda X: apply_plan(code, plan, X), values, code.alpha)
            blob = header(manifest, lost) + symbols_to_bytes(rebuilt.T.reshape(-1), F)
            if crc(blob) == manifest.checksums[lost - 1]:
                counts = {nd: len(ss) * N * width for nd, ss in plan.reads_by_node().items()}
                write_atomic(shard_dir / shard_name(lost), blob)
                return RepairReport(lost, counts, HEADER_SIZE * len(plan.nodes), message_bytes, plan.cost, False)
        except IntegrityError:
            pass

    stored = collect_shards(manifest, shard_dir, exclude={lost})
    if len(stored) < code.k:
        raise InsufficientDataError(f"only {len(stored)} intact shards, need {code.k}")
    msgs = decode_stored(code, stored)
    rebuilt = _map_columns(lambda X: mat_mul(F, code.rows(lost), X), msgs, code.alpha)
    counts = {nd: N * code.alpha * width for nd in stored}
    report = RepairReport(lost, counts, HEADER_SIZE * len(stored), message_bytes, len(stored) * code.alpha, True)
    blob = header(manifest, lost) + symbols_to_bytes(rebuilt.T.reshape(-1), F)
    if crc(blob) != manifest.checksums[lost - 1]:
        raise IntegrityError(f"rebuilt shard {lost} fails its checksum")
    write_atomic(shard_dir / shard_name(lost), blob)
    return report
