import csv
import io
import json

import pytest

from canondim import cli
from canondim.cache import cache_name
from canondim.dataio import FixtureEntry
from canondim.rootsys import GroupSpec


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_f4_json(capsys):
    code, out, _ = run(capsys, "compute", "--family", "F", "--rank", "4", "--isogeny", "sc", "--prime", "3", "--format", "json")
    assert code == 0
    records = json.loads(out)
    assert {r["cd"] for r in records if r["cd"] is not None} == {8}
    assert {r["verdict"] for r in records} == {"agree"}
    direct = next(r for r in records if r["method"] == "direct_charmap")
    assert direct["recovered_degrees"] == [2, 4, 6, 8] and direct["hilbert"][0] == 1


def test_compute_nontorsion_is_zero(capsys):
    code, out, _ = run(capsys, "compute", "--family", "A", "--rank", "2", "--prime", "5", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {r["cd"] for r in rows if r["cd"]} == {"0"}


def test_json_round_trip_and_ordering(capsys):
    code, out, _ = run(capsys, "compute", "--family", "B", "--rank", "3", "--isogeny", "both",
                       "--prime", "5", "--prime", "2", "--format", "json")
    assert code == 0
    records = json.loads(out)
    assert json.loads(json.dumps(records)) == records
    keys = [(r["family"], r["rank"], r["isogeny"], r["prime"]) for r in records]
    assert keys == sorted(keys)
    assert list(records[0])[:6] == ["family", "rank", "isogeny", "prime", "method", "cd"]
    assert set().union(*records) <= set(cli.RECORD_FIELDS)


def test_single_method_selection(capsys):
    code, out, _ = run(capsys, "compute", "--family", "G", "--rank", "2", "--prime", "2", "--method", "cohom2", "--format", "json")
    (rec,) = json.loads(out)
    assert code == 0 and rec["method"] == "cohomology_p2" and rec["cd"] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "--family", "E", "--rank", "5", "--prime", "2"],
        ["compute", "--family", "A", "--rank", "2", "--prime", "4"],
        ["compute", "--family", "A"],
        ["compute", "--prime", "2"],
        ["compute", "--family", "A", "--rank", "2", "--max-seconds", "0"],
        ["compute", "--family", "A", "--rank", "2", "--bogus"],
        ["compute", "--family", "Z", "--rank", "2"],
        ["table", "--format", "xml"],
        ["cache", "inspect"],
    ],
)
def test_invalid_input_exits_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(cli.main(argv))
    assert info.value.code == 2


def test_budget_exceeded_exits_3(capsys):
    code, _, err = run(capsys, "compute", "--family", "E", "--rank", "8", "--prime", "2", "--method", "direct")
    assert code == 3 and "exceeds" in err


def test_consistency_failure_exits_4(capsys, tmp_path):
    bogus = tmp_path / "coh.txt"
    bogus.write_text("canondim-cohomology 1\nG2 p=2 | poincare: 1,0,0,0,0,0,0,0,1 | odd: 3,5 | provenance: wrong on purpose\n")
    code, _, err = run(capsys, "compute", "--family", "G", "--rank", "2", "--prime", "2", "--cohomology-data", str(bogus))
    assert code == 4 and "disagree" in err


def test_bad_data_file_exits_2_with_line(capsys, tmp_path):
    bad = tmp_path / "coh.txt"
    bad.write_text("canondim-cohomology 1\n\nG2 p=2 | poincare: 1,0,0,0,1 | odd: 4 | provenance: x\n")
    code, _, err = run(capsys, "compute", "--family", "G", "--rank", "2", "--prime", "2", "--cohomology-data", str(bad))
    assert code == 2 and ":3:" in err


def test_cache_build_inspect_and_corruption(capsys, tmp_path):
    code, _, _ = run(capsys, "cache", "build", "--family", "B", "--rank", "3", "--isogeny", "both", "--cache-dir", str(tmp_path))
    assert code == 0
    code, out, _ = run(capsys, "cache", "inspect", "--cache-dir", str(tmp_path), "--format", "json")
    rows = json.loads(out)
    assert code == 0 and [r["group"] for r in rows] == ["B3 ad", "B3 sc"] and all(r["complete"] for r in rows)
    # direct computation reads the cached atlas
    code, out, _ = run(capsys, "compute", "--family", "B", "--rank", "3", "--prime", "2", "--method", "direct",
                       "--cache-dir", str(tmp_path), "--format", "json")
    assert code == 0 and json.loads(out)[0]["cd"] == 3
    code, out, _ = run(capsys, "verify", "--family", "B", "--rank", "3", "--cache-dir", str(tmp_path), "--format", "json")
    assert code == 0 and {r["status"] for r in json.loads(out)} == {"PASS"}
    path = tmp_path / cache_name(GroupSpec("B", 3))
    blob = bytearray(path.read_bytes())
    blob[len(blob) // 2] ^= 0xFF
    path.write_bytes(bytes(blob))
    code, _, err = run(capsys, "verify", "--family", "B", "--rank", "3", "--cache-dir", str(tmp_path))
    assert code == 2 and "checksum" in err


def test_verify_default_scope(capsys):
    code, out, _ = run(capsys, "verify", "--format", "json")
    rows = json.loads(out)
    assert code == 0
    assert {r["status"] for r in rows} == {"PASS"}
    names = {r["invariant"] for r in rows}
    assert names == {"degree_sum_equals_N", "weyl_length_generating_function", "method_agreement"}
    assert any(r["scope"] == "F4 sc p=3" for r in rows)


def test_table_failure_exits_4(capsys, monkeypatch):
    monkeypatch.setattr(cli, "INFO_ENTRIES", [])
    monkeypatch.setattr(cli, "load_fixture_table", lambda: [FixtureEntry(GroupSpec("F", 4), 3, 9, "wrong on purpose")])
    code, out, _ = run(capsys, "table", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 4 and rows[0]["status"] == "FAIL" and rows[0]["computed"] == "8"


def test_table_formats_share_data(capsys, monkeypatch):
    monkeypatch.setattr(cli, "INFO_ENTRIES", [(GroupSpec("G", 2), 2, "info")])
    monkeypatch.setattr(cli, "load_fixture_table", lambda: [FixtureEntry(GroupSpec("F", 4), 2, 3, "both")])
    code, out_csv, _ = run(capsys, "table", "--format", "csv")
    assert code == 0
    assert out_csv.splitlines()[0] == ",".join(cli.TABLE_FIELDS)
    code, out_json, _ = run(capsys, "table", "--format", "json")
    rows = json.loads(out_json)
    assert [r["status"] for r in rows] == ["PASS", "INFO"]
    assert [r["computed"] for r in rows] == [3, 3]
    parsed = list(csv.DictReader(io.StringIO(out_csv)))
    assert [int(r["computed"]) for r in parsed] == [3, 3]
