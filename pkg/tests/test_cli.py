import json

import numpy as np
import pytest

from pbcode.cli import build_parser, main, parse_range
from pbcode.shards import shard_name


@pytest.fixture
def src(tmp_path):
    path = tmp_path / "data.bin"
    path.write_bytes(np.random.default_rng(7).integers(0, 256, 5000, dtype=np.uint8).tobytes())
    return path


def encode(src, out, *extra):
    return main(["encode", str(src), "--out", str(out), *extra])


def test_parse_range():
    assert list(parse_range("3-5")) == [3, 4, 5]
    assert list(parse_range("3..4")) == [3, 4]
    assert list(parse_range("7")) == [7]


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_round_trip_with_parity_repair(tmp_path, src, capsys):
    out = tmp_path / "s"
    assert encode(src, out, "--design", "d1", "--n", "14", "--k", "10", "--m", "2") == 0
    parity = out / shard_name(12)
    before = parity.read_bytes()
    parity.unlink()
    capsys.readouterr()
    assert main(["repair", str(out), "--lost", "12", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert parity.read_bytes() == before
    assert report["node"] == 12 and not report["fallback_decode"]
    assert report["total_bytes"] < report["message_bytes"]
    restored = tmp_path / "back.bin"
    assert main(["decode", str(out), "--out", str(restored)]) == 0
    assert restored.read_bytes() == src.read_bytes()


def test_text_repair_report(tmp_path, src, capsys):
    out = tmp_path / "s"
    encode(src, out, "--design", "d2", "--n", "13", "--k", "10")
    (out / shard_name(3)).unlink()
    assert main(["repair", str(out), "--lost", "3"]) == 0
    text = capsys.readouterr().out
    assert "rebuilt shard 3 by repair plan" in text and "(0.6667)" in text


def test_decode_to_stdout(tmp_path, src, capsysbinary):
    out = tmp_path / "s"
    encode(src, out, "--design", "d3", "--n", "11", "--k", "8")
    capsysbinary.readouterr()
    assert main(["decode", str(out)]) == 0
    assert capsysbinary.readouterr().out == src.read_bytes()


def test_exit_codes(tmp_path, src):
    out = tmp_path / "s"
    assert encode(src, out, "--design", "d2", "--n", "6", "--k", "4") == 2
    assert encode(src, out, "--design", "d1", "--n", "6", "--k", "4", "--base", "small", "--field", "gf2^16") == 2
    assert encode(src, out, "--design", "pp", "--n", "7", "--k", "4") == 0
    for node in (1, 2, 3, 4):
        (out / shard_name(node)).unlink()
    assert main(["decode", str(out), "--out", str(tmp_path / "x")]) == 3
    assert main(["repair", str(out), "--lost", "9"]) == 2
    assert main(["decode", str(tmp_path / "nowhere")]) == 3


def test_corrupt_shard_is_ignored(tmp_path, src):
    out = tmp_path / "s"
    encode(src, out, "--design", "d1", "--n", "6", "--k", "4", "--base", "small")
    victim = out / shard_name(5)
    blob = bytearray(victim.read_bytes())
    blob[-1] ^= 1
    victim.write_bytes(bytes(blob))
    restored = tmp_path / "back.bin"
    assert main(["decode", str(out), "--out", str(restored)]) == 0
    assert restored.read_bytes() == src.read_bytes()
    blob = bytearray((out / shard_name(6)).read_bytes())
    blob[-1] ^= 1
    (out / shard_name(6)).write_bytes(bytes(blob))
    (out / shard_name(1)).unlink()
    assert main(["decode", str(out), "--out", str(restored)]) == 3


def test_verify_and_selftest(capsys):
    assert main(["verify", "--design", "d2", "--n", "13", "--k", "10"]) == 0
    assert "mds: pass" in capsys.readouterr().out
    assert main(["verify", "--design", "pp", "--n", "7", "--k", "4"]) == 0
    assert main(["selftest"]) == 0
    assert "PASS 6/6" in capsys.readouterr().out


def test_analyze(capsys):
    assert main(["analyze", "--design", "d1", "--k-range", "4-5", "--r-range", "2", "--m", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("n\tk\tdesign")
    assert lines[1].split("\t")[:7] == ["6", "4", "d1", "2", "4", "3/4", "0.750000"]
