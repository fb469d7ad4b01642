"""Readers for the line-oriented data files: cohomology records, degree data, fixtures.

Cohomology and degree files share one layout.  The first non-comment line is a
header ``<kind> <version>``; every other non-blank, non-``#`` line is a record

    <group label> p=<prime> | key: value | key: value ...

where the group label is e.g. ``E8`` or ``E7 ad``.  Integer lists are comma
separated.  ``provenance`` is mandatory in both kinds.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .cdim import CohomologyInput
from .errors import CanonDimError, InputError
from .polyalg import IntPoly
from .rootsys import GroupSpec

COHOMOLOGY_KIND = "canondim-cohomology"
DEGREES_KIND = "canondim-degrees"
SUPPORTED_VERSIONS = {1}


def data_path(name: str) -> Path:
    return Path(str(resources.files("canondim") / "data" / name))


def _int_list(text: str, where: str) -> list:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise InputError(f"{where}: expected comma-separated integers, got {text!r}") from None


def _records(path, kind: str):
    path = Path(path)
    if not path.exists():
        raise InputError(f"{path}: no such file")
    header_seen = False
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{path}:{lineno}"
        if not header_seen:
            parts = line.split()
            if len(parts) != 2 or parts[0] != kind:
                raise InputError(f"{where}: expected header '{kind} <version>'")
            try:
                version = int(parts[1])
            except ValueError:
                raise InputError(f"{where}: bad version {parts[1]!r}") from None
            if version not in SUPPORTED_VERSIONS:
                raise InputError(f"{where}: unsupported {kind} version {version}")
            header_seen = True
            continue
        head, *fields = [f.strip() for f in line.split("|")]
        tokens = head.split()
        if not tokens or not tokens[-1].startswith("p="):
            raise InputError(f"{where}: record must start with '<group> p=<prime>'")
        try:
            spec = GroupSpec.parse(" ".join(tokens[:-1]))
            prime = int(tokens[-1][2:])
        except (InputError, ValueError) as exc:
            raise InputError(f"{where}: {exc}") from None
        values = {}
        for f in fields:
            key, sep, value = f.partition(":")
            if not sep:
                raise InputError(f"{where}: field {f!r} is not 'key: value'")
            values[key.strip()] = value.strip()
        if not values.get("provenance"):
            raise InputError(f"{where}: missing provenance")
        yield where, spec, prime, values
    if not header_seen:
        raise InputError(f"{path}: empty file, expected header '{kind} <version>'")


def load_cohomology_data(path=None) -> dict:
    """``{GroupSpec: CohomologyInput}`` from a cohomology data file (shipped file by default)."""
    path = path or data_path("cohomology_p2.txt")
    out = {}
    for where, spec, prime, values in _records(path, COHOMOLOGY_KIND):
        if prime != 2:
            raise InputError(f"{where}: cohomology records are for p=2 only")
        for key in ("poincare", "odd"):
            if key not in values:
                raise InputError(f"{where}: missing field {key!r}")
        try:
            rec = CohomologyInput(
                family=spec.family,
                rank=spec.rank,
                isogeny=spec.short_isogeny,
                poincare=IntPoly(_int_list(values["poincare"], where)),
                odd_generator_degrees=_int_list(values["odd"], where),
                provenance=values["provenance"],
            )
        except CanonDimError as exc:
            raise InputError(f"{where}: {exc}") from None
        if spec in out:
            raise InputError(f"{where}: duplicate record for {spec.label}")
        out[spec] = rec
    return out


def load_degree_data(path=None) -> dict:
    """``{(GroupSpec, p): {"degrees": [...], "provenance": str}}`` from a degree data file."""
    path = path or data_path("mod_p_degrees.txt")
    out = {}
    for where, spec, prime, values in _records(path, DEGREES_KIND):
        if "degrees" not in values:
            raise InputError(f"{where}: missing field 'degrees'")
        degs = _int_list(values["degrees"], where)
        if len(degs) != spec.rank or any(d < 1 for d in degs):
            raise InputError(f"{where}: need {spec.rank} positive degrees, got {degs}")
        out[(spec, prime)] = {"degrees": degs, "provenance": values["provenance"]}
    return out


@dataclass(frozen=True)
class FixtureEntry:
    spec: GroupSpec
    prime: int
    cd: int
    isogeny_note: str

    @property
    def label(self) -> str:
        return f"cd_{self.prime}({self.spec.label})"


def load_fixture_table(path=None) -> list:
    path = Path(path or data_path("corollary_table.csv"))
    rows = []
    with path.open(newline="") as fh:
        for row in csv.DictReader(line for line in fh if not line.startswith("#")):
            spec = GroupSpec(row["family"], int(row["rank"]), row["isogeny"])
            rows.append(FixtureEntry(spec, int(row["prime"]), int(row["cd"]), row["note"]))
    return rows
