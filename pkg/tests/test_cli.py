import json

import pytest

from tbix.cli import main
from tbix.selftest import REFERENCE_LINES


@pytest.fixture()
def corpus_file(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("\n".join(REFERENCE_LINES) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def index_file(tmp_path, corpus_file, capsys):
    path = tmp_path / "ref.tbix"
    assert main(["build", "--corpus", str(corpus_file), "--out", str(path)]) == 0
    capsys.readouterr()
    return path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def query_file(tmp_path, lines):
    path = tmp_path / "queries.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def test_build_reports_counts(tmp_path, corpus_file, capsys):
    out_path = tmp_path / "idx.tbix"
    code, out, _ = run(capsys, "build", "--corpus", str(corpus_file), "--out", str(out_path))
    assert code == 0
    assert "3 documents" in out
    assert "6 terms" in out
    assert "72 bits" in out
    assert out_path.exists()


def test_stats_reports_total_bits(index_file, capsys):
    code, out, _ = run(capsys, "stats", "--index", str(index_file))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "metric,key,value"
    assert "total_bits,,72" in lines
    assert "df_histogram,1,3" in lines
    assert "df_histogram,2,3" in lines
    assert "storage_fraction,0.4,2" in lines


def test_query_oracle(tmp_path, index_file, capsys):
    qf = query_file(tmp_path, ["cat sat"])
    code, out, _ = run(capsys, "query", "--index", str(index_file),
                       "--strategy", "oracle", "--queries", qf)
    assert code == 0
    record = json.loads(out.strip())
    assert record["query"] == "cat sat"
    assert record["docids"] == [0]
    assert record["guaranteed"] is None


def test_query_exhaustive_counts(tmp_path, index_file, capsys):
    qf = query_file(tmp_path, ["the sat", "cat dog"])
    code, out, _ = run(capsys, "query", "--index", str(index_file),
                       "--strategy", "exhaustive", "--queries", qf)
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert records[0]["docids"] == [0, 1]
    assert records[0]["candidates_scanned"] == 3
    assert records[1]["docids"] == []


def test_query_tiered_requires_section(tmp_path, index_file, capsys):
    qf = query_file(tmp_path, ["the sat"])
    code, _, err = run(capsys, "query", "--index", str(index_file),
                       "--strategy", "tiered", "--queries", qf)
    assert code == 2
    assert "tier" in err


def test_tier_then_query(tmp_path, index_file, capsys):
    assert run(capsys, "tier", "--index", str(index_file), "--k", "1")[0] == 0
    qf = query_file(tmp_path, ["the sat", "a cat"])
    code, out, _ = run(capsys, "query", "--index", str(index_file),
                       "--strategy", "tiered", "--queries", qf)
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert code == 0
    assert records[0]["docids"] == [0]
    assert records[0]["guaranteed"] is False
    assert records[1]["docids"] == [2]
    assert records[1]["guaranteed"] is True

    code, out, _ = run(capsys, "query", "--index", str(index_file),
                       "--strategy", "tiered", "--fallback", "--queries", qf)
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert records[0]["docids"] == [0, 1]
    assert records[0]["used_fallback"] is True


def test_blocks_then_query(tmp_path, index_file, capsys):
    assert run(capsys, "blocks", "--index", str(index_file), "--beta", "2")[0] == 0
    qf = query_file(tmp_path, ["the cat", "a dog"])
    code, out, _ = run(capsys, "query", "--index", str(index_file),
                       "--strategy", "block", "--queries", qf)
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert code == 0
    assert records[0]["docids"] == [0]
    assert records[0]["candidates_scanned"] == 2
    assert records[1]["docids"] == []


def test_query_bloom_superset(tmp_path, index_file, capsys):
    qf = query_file(tmp_path, ["cat sat", "the"])
    code, out, _ = run(capsys, "query", "--index", str(index_file),
                       "--strategy", "exhaustive", "--model", "bloom",
                       "--bits-per-pair", "64", "--queries", qf)
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert set(records[0]["docids"]) >= {0}
    assert set(records[1]["docids"]) >= {0, 1}


def test_query_tiered_bloom(tmp_path, index_file, capsys):
    assert run(capsys, "tier", "--index", str(index_file), "--k", "1")[0] == 0
    qf = query_file(tmp_path, ["the sat", "a cat"])
    code, out, _ = run(capsys, "query", "--index", str(index_file),
                       "--strategy", "tiered", "--fallback", "--model", "bloom",
                       "--bits-per-pair", "64", "--queries", qf)
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert set(records[0]["docids"]) >= {0, 1}
    assert set(records[1]["docids"]) >= {2}


def test_query_unknown_terms_reported(tmp_path, index_file, capsys):
    qf = query_file(tmp_path, ["zebra", "the zebra"])
    code, out, _ = run(capsys, "query", "--index", str(index_file),
                       "--strategy", "oracle", "--queries", qf)
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert records[0]["docids"] == []
    assert records[0]["unknown_terms"] == ["zebra"]
    assert records[1]["docids"] == []
    assert records[1]["unknown_terms"] == ["zebra"]


def test_gain_csv(tmp_path, index_file, capsys):
    code, out, _ = run(capsys, "gain", "--index", str(index_file), "--ks", "1,2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "k,replaced,trunc_bits,gain_s0,gain_s512,measured_trunc_bits"
    row = lines[1].split(",")
    assert row[:3] == ["1", "3", "8.0"]
    assert float(row[3]) == 18.0
    assert float(row[4]) == 18.0 - 6 * 512


def test_gain_csv_custom_s(index_file, capsys):
    code, out, _ = run(capsys, "gain", "--index", str(index_file), "--ks", "1", "--s", "0")
    lines = out.strip().splitlines()
    assert lines[0] == "k,replaced,trunc_bits,gain,measured_trunc_bits"
    row = lines[1].split(",")
    assert row[0] == "1"
    assert row[1] == "3"
    assert float(row[3]) == 18.0


def test_guarantees_csv(tmp_path, index_file, capsys):
    qf = query_file(tmp_path, ["a cat", "the cat"])
    code, out, _ = run(capsys, "guarantees", "--index", str(index_file),
                       "--queries", qf, "--ks", "1,2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "k,pct_with,pct_without"
    assert lines[1] == "1,50.0,0.0"
    assert lines[2] == "2,100.0,100.0"


def test_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert "FAIL" not in out
    assert "checks passed" in out


def test_usage_errors_exit_1(capsys, index_file, tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        main(["no-such-command"])
    assert excinfo.value.code == 1
    with pytest.raises(SystemExit) as excinfo:
        main(["build", "--corpus"])
    assert excinfo.value.code == 1
    # flag-combination and flag-value validation happens before any I/O
    qf = query_file(tmp_path, ["cat"])
    bad_usages = [
        ["query", "--index", str(index_file), "--strategy", "oracle",
         "--fallback", "--queries", qf],
        ["query", "--index", str(index_file), "--strategy", "exhaustive",
         "--model", "bloom", "--bits-per-pair", "0", "--queries", qf],
        ["tier", "--index", str(index_file), "--k", "0"],
        ["blocks", "--index", str(index_file), "--beta", "0"],
        ["stats", "--index", str(index_file), "--fractions", "0.5,2.0"],
        ["gain", "--index", str(index_file), "--ks", "0"],
        ["gain", "--index", str(index_file), "--ks", "1", "--s", "-3"],
    ]
    for argv in bad_usages:
        with pytest.raises(SystemExit) as excinfo:
            main(argv)
        assert excinfo.value.code == 1, argv
    capsys.readouterr()


def test_missing_index_exits_2(tmp_path, capsys):
    code, _, err = run(capsys, "stats", "--index", str(tmp_path / "nope.tbix"))
    assert code == 2
    assert "error" in err


def test_corrupt_index_exits_2(tmp_path, index_file, capsys):
    data = bytearray(index_file.read_bytes())
    data[0] = 0
    broken = tmp_path / "broken.tbix"
    broken.write_bytes(bytes(data))
    code, _, err = run(capsys, "stats", "--index", str(broken))
    assert code == 2
    assert "offset" in err


def test_empty_corpus_exits_2(tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("\n\n", encoding="utf-8")
    code, _, err = run(capsys, "build", "--corpus", str(empty),
                       "--out", str(tmp_path / "idx.tbix"))
    assert code == 2
    assert "no documents" in err


def test_output_is_deterministic(tmp_path, index_file, capsys):
    qf = query_file(tmp_path, ["cat sat", "the sat", "a"])
    outputs = []
    for _ in range(2):
        code, out, _ = run(capsys, "query", "--index", str(index_file),
                           "--strategy", "exhaustive", "--queries", qf)
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]


def test_index_file_is_deterministic(tmp_path, corpus_file, capsys):
    a = tmp_path / "a.tbix"
    b = tmp_path / "b.tbix"
    run(capsys, "build", "--corpus", str(corpus_file), "--out", str(a))
    run(capsys, "build", "--corpus", str(corpus_file), "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
