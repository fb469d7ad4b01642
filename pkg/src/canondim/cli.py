"""Command-line interface: ``canondim {compute,table,verify,cache}``.

Exit codes: 0 success, 2 invalid input, 3 budget exceeded, 4 consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import cache as wcache
from .cdim import (
    CHOW_OF_G,
    CLOSED_FORM,
    COHOMOLOGY_P2,
    DIRECT,
    METHODS,
    P_EXCEPTIONAL,
    ComputeReport,
    compute_all,
)
from .charmap import check_prime
from .config import Budget
from .dataio import data_path, load_cohomology_data, load_degree_data, load_fixture_table
from .errors import CanonDimError, ConsistencyFailure, InfeasibleScale, InputError
from .polyalg import quantum_factor_product
from .rootsys import ADJOINT, FAMILIES, SIMPLY_CONNECTED, GroupSpec, all_specs, build_root_system, torsion_primes
from .weyl import enumerate_weyl, expected_counts

METHOD_FLAGS = {
    "closed": CLOSED_FORM,
    "pexc": P_EXCEPTIONAL,
    "direct": DIRECT,
    "chow": CHOW_OF_G,
    "cohom2": COHOMOLOGY_P2,
}
DEFAULT_PRIMES = (2, 3, 5)
RECORD_FIELDS = ("family", "rank", "isogeny", "prime", "method", "cd", "hilbert", "recovered_degrees", "skipped_reason", "verdict", "note")
TABLE_FIELDS = ("group", "isogeny", "prime", "expected", "computed", "methods", "status", "note")
VERIFY_FIELDS = ("invariant", "scope", "status", "seconds", "detail")
# reported next to the fixture table without a published value to compare against
INFO_ENTRIES = [
    (GroupSpec("G", 2, "sc"), 2, "informational: not in the published table"),
    (GroupSpec("E", 6, "ad"), 2, "informational: adjoint form of the p=2 entry"),
]


@dataclass
class RunConfig:
    command: str
    specs: list = field(default_factory=list)
    primes: list = field(default_factory=list)
    methods: tuple = METHODS
    budget: Budget = field(default_factory=Budget)
    cache_dir: Path | None = None
    fmt: str = "text"
    cohomology_path: Path | None = None
    degree_path: Path | None = None
    extended: bool = False
    max_rank: int = 4
    explicit_method: bool = False


# ---------------------------------------------------------------- parsing

def _positive(kind):
    def conv(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    return conv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", type=str.upper, choices=FAMILIES)
    common.add_argument("--rank", type=_positive(int))
    common.add_argument("--isogeny", choices=("sc", "ad", "both"), default=None)
    common.add_argument("--prime", type=int, action="append", dest="primes")
    common.add_argument("--method", choices=(*METHOD_FLAGS, "all"), default="all")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text", dest="fmt")
    common.add_argument("--cache-dir", type=Path)
    common.add_argument("--cohomology-data", type=Path, help="cohomology records (default: shipped file)")
    common.add_argument("--degree-data", type=Path, help="mod-p degree records (default: shipped file)")
    common.add_argument("--extended", action="store_true", help="raise the budget to E7 scale")
    common.add_argument("--max-weyl-order", type=_positive(int))
    common.add_argument("--max-seconds", type=_positive(float))
    common.add_argument("--max-memory-mb", type=_positive(float))

    parser = argparse.ArgumentParser(prog="canondim", description="Canonical p-dimensions of split simple groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("compute", parents=[common], help="compute cd_p for selected groups and primes")
    sub.add_parser("table", parents=[common], help="reproduce the exceptional-group table")
    verify = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    verify.add_argument("--max-rank", type=_positive(int), default=4)
    cache = sub.add_parser("cache", help="manage Weyl atlas cache files")
    csub = cache.add_subparsers(dest="cache_command", required=True)
    csub.add_parser("build", parents=[common], help="enumerate and store atlases")
    insp = csub.add_parser("inspect", parents=[common], help="validate and summarize cache files")
    insp.add_argument("paths", nargs="*", type=Path)
    return parser


def _select_specs(args) -> list:
    if args.family is None:
        if args.rank is not None:
            raise InputError("--rank needs --family")
        return []
    if args.rank is None:
        raise InputError("--family needs --rank")
    iso = args.isogeny or "sc"
    isos = (SIMPLY_CONNECTED, ADJOINT) if iso == "both" else (iso,)
    specs = [GroupSpec(args.family, args.rank, i) for i in isos]
    if iso == "both":
        # F4, G2 and E8 have trivial centre: one group, reported once
        specs = [s for s in specs if s in all_specs(8) or s.isogeny == SIMPLY_CONNECTED]
    return specs


def config_from_args(args) -> RunConfig:
    primes = sorted(set(args.primes or DEFAULT_PRIMES))
    for p in primes:
        check_prime(p)
    overrides = {k: v for k, v in (("max_weyl_order", args.max_weyl_order), ("max_seconds", args.max_seconds),
                                   ("max_memory_mb", args.max_memory_mb)) if v is not None}
    budget = Budget.extended(**overrides) if args.extended else Budget(**overrides)
    methods = METHODS if args.method == "all" else (METHOD_FLAGS[args.method],)
    command = args.command if args.command != "cache" else f"cache-{args.cache_command}"
    return RunConfig(
        command=command,
        specs=_select_specs(args),
        primes=primes,
        methods=methods,
        budget=budget,
        cache_dir=args.cache_dir,
        fmt=args.fmt,
        cohomology_path=args.cohomology_data or data_path("cohomology_p2.txt"),
        degree_path=args.degree_data or data_path("mod_p_degrees.txt"),
        extended=args.extended,
        max_rank=getattr(args, "max_rank", 4),
        explicit_method=args.method != "all",
    )


# ---------------------------------------------------------------- output

def render(rows: list, fields: tuple, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow(["" if r.get(f) is None else _cell(r.get(f)) for f in fields])
        return buf.getvalue().rstrip("\n")
    cells = [[_cell(r.get(f)) for f in fields] for r in rows]
    widths = [max([len(f)] + [len(c[i]) for c in cells]) for i, f in enumerate(fields)]
    lines = ["  ".join(f.ljust(w) for f, w in zip(fields, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines)


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, (list, tuple)):
        return " ".join(map(str, v))
    return str(v)


def report_records(report: ComputeReport) -> list:
    """One JSON-ready record per method in ``report``."""
    out = []
    for r in report.results:
        rec = {
            "family": report.spec.family,
            "rank": report.spec.rank,
            "isogeny": report.spec.short_isogeny,
            "prime": report.prime,
            "method": r.method,
            "cd": r.cd,
        }
        if r.method == DIRECT and r.computed:
            rec["hilbert"] = r.support["hilbert"]
            if r.support.get("recovered_degrees") is not None:
                rec["recovered_degrees"] = r.support["recovered_degrees"]
        if r.skipped_reason:
            rec["skipped_reason"] = r.skipped_reason
        rec["verdict"] = report.verdict
        note = r.support.get("source") or r.support.get("provenance")
        if r.method == COHOMOLOGY_P2:
            note = r.support.get("provenance")
        if note:
            rec["note"] = note
        out.append(rec)
    return out


def sort_records(records: list) -> list:
    order = {m: i for i, m in enumerate(METHODS)}
    return sorted(records, key=lambda r: (r["family"], r["rank"], r["isogeny"], r["prime"], order.get(r["method"], 99)))


# ---------------------------------------------------------------- helpers

def _load_inputs(cfg: RunConfig) -> tuple:
    cohomology = load_cohomology_data(cfg.cohomology_path) if COHOMOLOGY_P2 in cfg.methods else {}
    degree_data = load_degree_data(cfg.degree_path) if cfg.degree_path else {}
    return cohomology, degree_data


def _cached_atlas(cfg: RunConfig, spec: GroupSpec):
    if cfg.cache_dir is None:
        return None
    path = Path(cfg.cache_dir) / wcache.cache_name(spec)
    if not path.exists():
        return None
    stored, atlas = wcache.read_atlas(path)
    if stored != spec or not atlas.complete:
        raise InputError(f"{path}: cache holds {stored.label} with depth {atlas.depth}, expected complete {spec.label}")
    return atlas


def run_one(cfg: RunConfig, spec: GroupSpec, p: int, cohomology, degree_data, strict: bool | None = None) -> ComputeReport:
    cfg.budget.restart()
    return compute_all(
        spec,
        p,
        cfg.budget,
        methods=cfg.methods,
        cohomology=cohomology,
        degree_data=degree_data,
        atlas=_cached_atlas(cfg, spec) if DIRECT in cfg.methods else None,
        strict=cfg.explicit_method and cfg.methods == (DIRECT,) if strict is None else strict,
    )


# ---------------------------------------------------------------- commands

def cmd_compute(cfg: RunConfig, out=None) -> int:
    if not cfg.specs:
        raise InputError("compute needs --family and --rank")
    cohomology, degree_data = _load_inputs(cfg)
    records = []
    for spec in cfg.specs:
        for p in cfg.primes:
            records += report_records(run_one(cfg, spec, p, cohomology, degree_data))
    records = sort_records(records)
    print(render(records, RECORD_FIELDS, cfg.fmt), file=out or sys.stdout)
    return 0


def table_rows(cfg: RunConfig) -> list:
    """Rows reproducing the fixture table, plus informational rows for G2 and E6 adjoint at p = 2."""
    cohomology, degree_data = _load_inputs(cfg)
    rows = []
    entries = [(e.spec, e.prime, e.cd, e.isogeny_note) for e in load_fixture_table()]
    entries += [(spec, p, None, note) for spec, p, note in INFO_ENTRIES]
    for spec, p, expected, note in entries:
        methods = cfg.methods
        notes = [note]
        if DIRECT in methods and spec.family == "E" and spec.rank >= 7 and not cfg.extended:
            methods = tuple(m for m in methods if m != DIRECT)
            notes.append("direct: extended")
        sub = RunConfig(**{**cfg.__dict__, "methods": methods, "explicit_method": False})
        try:
            report = run_one(sub, spec, p, cohomology, degree_data)
        except ConsistencyFailure as exc:
            rows.append(_table_row(spec, p, expected, None, [], "FAIL", f"{note}; {exc}"))
            continue
        agreed = [r.method for r in report.results if r.computed]
        for r in report.results:
            if r.method == DIRECT and not r.computed:
                notes.append("direct: " + ("extended, infeasible here" if "infeasible" in (r.skipped_reason or "") else r.skipped_reason))
        if expected is None:
            status = "INFO"
        else:
            status = "PASS" if report.cd == expected else "FAIL"
        rows.append(_table_row(spec, p, expected, report.cd, agreed, status, "; ".join(notes)))
    return rows


def _table_row(spec, p, expected, computed, methods, status, note) -> dict:
    return {
        "group": f"{spec.family}{spec.rank}",
        "isogeny": spec.short_isogeny,
        "prime": p,
        "expected": expected,
        "computed": computed,
        "methods": list(methods),
        "status": status,
        "note": note,
    }


def cmd_table(cfg: RunConfig, out=None) -> int:
    rows = table_rows(cfg)
    print(render(rows, TABLE_FIELDS, cfg.fmt), file=out or sys.stdout)
    return 4 if any(r["status"] == "FAIL" for r in rows) else 0


def _check(results: list, name: str, scope: str, fn):
    t0 = time.perf_counter()
    try:
        detail = fn()
        status = "PASS" if detail is None else "FAIL"
    except ConsistencyFailure as exc:
        status, detail = "FAIL", str(exc)
    except InfeasibleScale as exc:
        status, detail = "SKIP", str(exc)
    results.append({"invariant": name, "scope": scope, "status": status,
                    "seconds": round(time.perf_counter() - t0, 3), "detail": detail})


def verify_records(cfg: RunConfig) -> list:
    results = []
    cohomology, degree_data = _load_inputs(cfg)
    specs = cfg.specs or all_specs(cfg.max_rank)
    for spec in specs:
        rs = build_root_system(spec)
        degs = rs.profile.degrees

        def degree_sum():
            if sum(d - 1 for d in degs) != rs.N:
                return {"degrees": list(degs), "N": rs.N}

        _check(results, "degree_sum_equals_N", spec.label, degree_sum)
        if spec.isogeny == SIMPLY_CONNECTED:
            def weyl_counts():
                atlas = enumerate_weyl(rs, budget=cfg.budget.restart())
                expected = quantum_factor_product(degs).to_list()
                if atlas.counts != expected:
                    return {"enumerated": atlas.counts, "expected": expected}
                if atlas.counts != atlas.counts[::-1]:
                    return {"counts": atlas.counts, "problem": "not palindromic"}

            _check(results, "weyl_length_generating_function", spec.label, weyl_counts)

        # method agreement: every classical type through rank 4, exceptional ones beyond
        if spec.rank > 4 and spec.family in "ABCD":
            continue
        for p in cfg.primes:
            def agreement(spec=spec, p=p):
                report = run_one(cfg, spec, p, cohomology, degree_data, strict=False)
                tors = torsion_primes(spec)
                if report.cd is None:
                    return {"verdict": report.verdict, "skipped": {r.method: r.skipped_reason for r in report.results}}
                if p not in tors.primes and not tors.partial and report.cd != 0:
                    return {"cd": report.cd, "problem": "nonzero at a non-torsion prime"}
                if DIRECT in cfg.methods and report.char_image is None and spec.rank <= 4:
                    return {"problem": "direct method did not run"}

            _check(results, "method_agreement", f"{spec.label} p={p}", agreement)

    if cfg.cache_dir is not None:
        for path in sorted(Path(cfg.cache_dir).glob("*.cpdw")):
            stored, atlas = wcache.read_atlas(path)  # corruption raises InputError (exit 2)

            def cache_ok(stored=stored, atlas=atlas):
                full = expected_counts(atlas.rs)
                if atlas.counts != full[: len(atlas.counts)]:
                    return {"counts": atlas.counts, "expected": full}
                if wcache.decode_atlas(wcache.encode_atlas(atlas, stored))[1].counts != atlas.counts:
                    return {"problem": "re-encoding changed the atlas"}

            _check(results, "cache_file", path.name, cache_ok)
    return results


def cmd_verify(cfg: RunConfig, out=None) -> int:
    rows = verify_records(cfg)
    print(render(rows, VERIFY_FIELDS, cfg.fmt), file=out or sys.stdout)
    return 4 if any(r["status"] == "FAIL" for r in rows) else 0


def cmd_cache_build(cfg: RunConfig, out=None) -> int:
    if cfg.cache_dir is None or not cfg.specs:
        raise InputError("cache build needs --cache-dir, --family and --rank")
    rows = []
    for spec in cfg.specs:
        atlas = enumerate_weyl(build_root_system(spec), budget=cfg.budget.restart())
        path = wcache.write_atlas(Path(cfg.cache_dir) / wcache.cache_name(spec), atlas, spec)
        rows.append({"file": str(path), "group": spec.label, "elements": len(atlas), "bytes": path.stat().st_size})
    print(render(rows, ("file", "group", "elements", "bytes"), cfg.fmt), file=out or sys.stdout)
    return 0


def cmd_cache_inspect(cfg: RunConfig, paths=(), out=None) -> int:
    paths = list(paths)
    if cfg.cache_dir is not None:
        paths += sorted(Path(cfg.cache_dir).glob("*.cpdw"))
    if not paths:
        raise InputError("cache inspect needs file paths or --cache-dir")
    rows = []
    for path in paths:
        spec, atlas = wcache.read_atlas(path)
        rows.append({"file": str(path), "group": spec.label, "strata": len(atlas.strata),
                     "elements": len(atlas), "covers": bool(atlas.covers), "complete": atlas.complete})
    print(render(rows, ("file", "group", "strata", "elements", "covers", "complete"), cfg.fmt), file=out or sys.stdout)
    return 0


def _print_failure(exc: CanonDimError, fmt: str):
    print(f"error: {exc}", file=sys.stderr)
    report = getattr(exc, "payload", {}).get("report") if isinstance(exc, ConsistencyFailure) else None
    if report is not None:
        print(render(report_records(report), RECORD_FIELDS, fmt), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if cfg.command == "compute":
            return cmd_compute(cfg)
        if cfg.command == "table":
            return cmd_table(cfg)
        if cfg.command == "verify":
            return cmd_verify(cfg)
        if cfg.command == "cache-build":
            return cmd_cache_build(cfg)
        return cmd_cache_inspect(cfg, args.paths)
    except CanonDimError as exc:
        _print_failure(exc, args.fmt if hasattr(args, "fmt") else "text")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
