#!/usr/bin/env python3
"""Run the direct method on one group and print per-stratum progress.

Useful for probing how far the extended tier gets on a given machine, e.g.

    python scripts/direct_with_progress.py "E7 sc" 2 --extended --max-seconds 3600
"""

import argparse
import resource
import time

from canondim.charmap import compute_char_image
from canondim.config import Budget
from canondim.errors import InfeasibleScale
from canondim.rootsys import GroupSpec


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("group", help='group label such as "F4" or "E7 ad"')
    parser.add_argument("prime", type=int)
    parser.add_argument("--extended", action="store_true", help="use the extended budget")
    parser.add_argument("--max-seconds", type=float, default=None)
    args = parser.parse_args()

    spec = GroupSpec.parse(args.group)
    kw = {"max_seconds": args.max_seconds} if args.max_seconds else {}
    budget = Budget.extended(**kw) if args.extended else Budget(**kw)
    t0 = time.perf_counter()

    def progress(k, dim, size):
        print(f"k={k:3d} image={dim:7d} stratum={size:7d} t={time.perf_counter() - t0:7.1f}s", flush=True)

    try:
        res = compute_char_image(spec, args.prime, budget, progress=progress)
        print(f"cd_{args.prime}({spec.label}) = {res.cd}; recovered degrees {res.recovered_degrees or res.recovery_error}")
    except InfeasibleScale as exc:
        print(f"infeasible after {time.perf_counter() - t0:.0f}s: {exc}")
    print(f"peak RSS {resource.getrusage(resource.RUSAGE_SELF).ru_maxrss // 1024} MB")


if __name__ == "__main__":
    main()
