#!/usr/bin/env python3
"""Recompute the published table with every applicable method and write it as CSV and JSON.

    python scripts/reproduce_table.py --out results/
"""

import argparse
from pathlib import Path

from canondim import cli


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--extended", action="store_true", help="also attempt E7 by the direct method")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    argv = ["table"] + (["--extended"] if args.extended else [])
    rows = cli.table_rows(cli.config_from_args(cli.build_parser().parse_args(argv)))
    for fmt in ("csv", "json"):
        (args.out / f"table.{fmt}").write_text(cli.render(rows, cli.TABLE_FIELDS, fmt) + "\n")
    code = 4 if any(r["status"] == "FAIL" for r in rows) else 0
    print(f"wrote {args.out}/table.csv and table.json (exit {code})")
    raise SystemExit(code)


if __name__ == "__main__":
    main()
