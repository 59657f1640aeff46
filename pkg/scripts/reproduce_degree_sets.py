"""Counting sequences of {i,j}-regular simple graphs, checked against the printed rows.

Each row is computed by the adjoint method; with --cross-check the direct
method is run as well.  Mismatches are adjudicated by the brute-force
oracle for n <= 7.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from reference_data import DEGREE_SET_ROWS  # noqa: E402
from regenum.enumeration import count  # noqa: E402
from regenum.oracle import count_graphs_brute  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cross-check", action="store_true")
    args = ap.parse_args()
    failures = 0
    for S, row in DEGREE_SET_ROWS.items():
        start = time.perf_counter()
        got = count("E[e2]", S, len(row) - 1).terms
        secs = time.perf_counter() - start
        status = "ok"
        if args.cross_check and count("E[e2]", S, len(row) - 1, "direct").terms != got:
            status = "METHODS DIVERGE"
        if got != row:
            n = next(i for i, (x, y) in enumerate(zip(got, row)) if x != y)
            judge = count_graphs_brute(n, set(S)) if n <= 7 else "n/a"
            status = f"MISMATCH at n={n}: engine {got[n]}, printed {row[n]}, oracle {judge}"
            failures += 1
        print(f"{S[0]},{S[1]}  {status:6}  {secs:5.2f}s  {','.join(map(str, got))}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
