import os
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, HealthCheck
import hypothesis.strategies as st

from pbcode.algebra import Field
from pbcode.catalog import plan_for
from pbcode.shards import (
    HEADER_SIZE,
    InsufficientDataError,
    IntegrityError,
    Manifest,
    bytes_to_symbols,
    decode_file,
    encode_file,
    load_manifest,
    repair_shard,
    shard_name,
    symbols_to_bytes,
)

GF256, GF65536 = Field.gf2(8), Field.gf2(16)


def random_bytes(n: int, seed: int = 0) -> bytes:
    return np.random.default_rng(seed).integers(0, 256, n, dtype=np.uint8).tobytes()


@given(data=st.binary(max_size=64))
def test_symbol_bytes_round_trip(data):
    assert symbols_to_bytes(bytes_to_symbols(data, GF256), GF256) == data
    wide = symbols_to_bytes(bytes_to_symbols(data, GF65536), GF65536)
    assert wide[: len(data)] == data and len(wide) - len(data) in (0, 1)


@given(data=st.binary(max_size=300))
@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_encode_decode_any_length(tmp_path_factory, data):
    out = tmp_path_factory.mktemp("s")
    encode_file(data, out, "d1", 7, 4, 1, GF256)
    assert decode_file(out) == data


def test_manifest_and_headers(tmp_path):
    data = random_bytes(1000)
    m = encode_file(data, tmp_path, "d2", 9, 6, 1, GF256)
    assert (m.n, m.k, m.alpha, m.file_length) == (9, 6, 3, 1000)
    assert m.stripes == -(-1000 // 18)
    assert load_manifest(tmp_path) == m
    assert Manifest.from_json(m.to_json()) == m
    blob = (tmp_path / shard_name(3)).read_bytes()
    assert blob[:4] == b"PBC1" and blob[4:20] == m.hash16() and blob[20:22] == b"\x03\x00"
    assert len(blob) == HEADER_SIZE + m.stripes * m.alpha
    assert os.stat(tmp_path / shard_name(3)).st_mode & 0o777 == 0o644
    # the checksum list is not part of the identity hash
    m.checksums = []
    assert m.hash16() == blob[4:20]


@pytest.mark.parametrize("design,n,k,m", [("base", 6, 4, 1), ("d1", 8, 5, 2), ("d2", 9, 6, 1), ("d3", 9, 6, 2), ("pp", 8, 5, 1)])
def test_repair_every_node(tmp_path, design, n, k, m):
    data = random_bytes(4000, seed=n)
    encode_file(data, tmp_path, design, n, k, m, GF256)
    code = load_manifest(tmp_path).code()
    for node in range(1, n + 1):
        path = tmp_path / shard_name(node)
        before = path.read_bytes()
        path.unlink()
        rep = repair_shard(tmp_path, node)
        assert path.read_bytes() == before
        assert not rep.fallback
        assert Fraction(rep.total, rep.message_bytes) == Fraction(plan_for(code, node).cost, code.message_size)
    assert decode_file(tmp_path) == data


def test_gf65536_with_threads(tmp_path, monkeypatch):
    monkeypatch.setenv("PBCODE_THREADS", "4")
    data = random_bytes(20001, seed=3)
    encode_file(data, tmp_path, "d2", 14, 10, 2, GF65536)
    (tmp_path / shard_name(12)).unlink()
    rep = repair_shard(tmp_path, 12)
    assert not rep.fallback
    assert decode_file(tmp_path) == data


def test_corrupt_helper_falls_back(tmp_path):
    data = random_bytes(3000)
    encode_file(data, tmp_path, "d1", 8, 5, 1, GF256)
    victim = tmp_path / shard_name(2)
    blob = bytearray(victim.read_bytes())
    blob[50] ^= 0xFF
    victim.write_bytes(bytes(blob))
    (tmp_path / shard_name(1)).unlink()
    rep = repair_shard(tmp_path, 1)
    assert rep.fallback
    assert 2 not in rep.bytes_read
    # decode skips the corrupt shard
    assert decode_file(tmp_path) == data


def test_insufficient_shards(tmp_path):
    encode_file(random_bytes(500), tmp_path, "d1", 7, 4, 1, GF256)
    for node in (1, 2, 3, 4):
        (tmp_path / shard_name(node)).unlink()
    with pytest.raises(InsufficientDataError):
        decode_file(tmp_path)
    with pytest.raises(InsufficientDataError):
        repair_shard(tmp_path, 1)
    with pytest.raises(InsufficientDataError):
        load_manifest(tmp_path / "missing")


def test_tampered_manifest(tmp_path):
    encode_file(random_bytes(500), tmp_path, "d1", 7, 4, 1, GF256)
    path = tmp_path / "manifest.json"
    path.write_text(path.read_text().replace('"grid_digest": "', '"grid_digest": "0'))
    with pytest.raises(IntegrityError):
        decode_file(tmp_path)


def test_rejects_unsupported_field(tmp_path):
    with pytest.raises(ValueError):
        encode_file(b"abc", tmp_path, "d1", 6, 4, 1, Field.gfp(257))
