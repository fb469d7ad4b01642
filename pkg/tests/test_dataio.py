import pytest

from canondim.cdim import cd_p2_cohomology
from canondim.dataio import load_cohomology_data, load_degree_data, load_fixture_table
from canondim.errors import InputError
from canondim.rootsys import GroupSpec, build_root_system

HEADER = "canondim-cohomology 1\n"


def write(tmp_path, text, name="data.txt"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_shipped_cohomology_values():
    data = load_cohomology_data()
    cds = {spec.label: cd_p2_cohomology(rec) for spec, rec in data.items()}
    assert cds == {"G2 sc": 3, "F4 sc": 3, "E6 sc": 3, "E7 sc": 17, "E8 sc": 60}
    e8 = data[GroupSpec("E", 8)]
    assert e8.poincare.degree == 248 and sum(e8.odd_generator_degrees) == 128
    assert "consistency-only" in e8.provenance
    # total dimension of H*(E8; F_2) is 2^15
    assert e8.poincare(1) == 2**15


def test_shipped_degree_data_is_consistent():
    for (spec, p), entry in load_degree_data().items():
        rs = build_root_system(spec)
        degs = entry["degrees"]
        assert len(degs) == rs.n and sum(d - 1 for d in degs) <= rs.N
        assert entry["provenance"]


def test_fixture_table_has_twelve_entries():
    rows = load_fixture_table()
    assert len(rows) == 12
    assert {(r.spec.label, r.prime): r.cd for r in rows}[("E8 sc", 2)] == 60
    assert {(r.spec.label, r.prime): r.cd for r in rows}[("E7 ad", 2)] == 18


def test_zero_cd_record(tmp_path):
    path = write(tmp_path, HEADER + "G2 p=2 | poincare: 1,0,0,1 | odd: 3 | provenance: toy\n")
    (rec,) = load_cohomology_data(path).values()
    assert cd_p2_cohomology(rec) == 0


@pytest.mark.parametrize(
    "body,line,fragment",
    [
        ("G2 p=2 | poincare: 1,0,0,0,1 | odd: 4 | provenance: x\n", 2, "odd"),
        ("G2 p=2 | poincare: 1,0,0,1 | odd: 3\n", 2, "provenance"),
        ("# comment\n\nG2 p=2 | poincare: 1,0,0,1 | odd: 3 | provenance:  \n", 4, "provenance"),
        ("G2 p=2 | poincare: 1,x | odd: 3 | provenance: x\n", 2, "integers"),
        ("G2 p=3 | poincare: 1,0,0,1 | odd: 3 | provenance: x\n", 2, "p=2"),
        ("G2 | poincare: 1,0,0,1 | odd: 3 | provenance: x\n", 2, "p=<prime>"),
        ("Q9 p=2 | poincare: 1,0,0,1 | odd: 3 | provenance: x\n", 2, "family"),
        ("G2 p=2 | poincare 1,0,0,1 | odd: 3 | provenance: x\n", 2, "key: value"),
        ("G2 p=2 | odd: 3 | provenance: x\n", 2, "poincare"),
        ("G2 p=2 | poincare: 1,0,0,0,1 | odd: 3 | provenance: x\n", 2, "is odd"),
    ],
)
def test_cohomology_errors_carry_line_numbers(tmp_path, body, line, fragment):
    path = write(tmp_path, HEADER + body)
    with pytest.raises(InputError) as info:
        load_cohomology_data(path)
    assert f":{line}:" in str(info.value)
    assert fragment in str(info.value)


@pytest.mark.parametrize("header", ["", "canondim-cohomology 2\n", "canondim-degrees 1\n", "canondim-cohomology one\n"])
def test_bad_headers(tmp_path, header):
    with pytest.raises(InputError):
        load_cohomology_data(write(tmp_path, header + "G2 p=2 | poincare: 1,0,0,1 | odd: 3 | provenance: x\n"))


def test_degree_data_errors(tmp_path):
    with pytest.raises(InputError, match="positive degrees"):
        load_degree_data(write(tmp_path, "canondim-degrees 1\nE7 p=2 | degrees: 2,3 | provenance: x\n"))
    with pytest.raises(InputError, match="no such file"):
        load_degree_data(tmp_path / "missing.txt")
