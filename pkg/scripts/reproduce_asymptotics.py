"""Estimate the asymptotic constants of every catalogued class.

For each class: count terms exactly, guess and certify a recurrence, extend
it, and extrapolate a_n / template(n).  Prints one line per class.
"""
from __future__ import annotations

import argparse
import time

from regenum.asympt import estimate_constant, parse_template
from regenum.catalog import ASYMPTOTIC_CATALOG
from regenum.dfinite import guess_recurrence
from regenum.enumeration import count


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("keys", nargs="*", help="catalog keys (default: all)")
    ap.add_argument("--extra", type=int, default=0, help="additional guessing terms")
    args = ap.parse_args()
    keys = args.keys or list(ASYMPTOTIC_CATALOG)
    print(f"{'class':14} {'seq':8} {'reference':>22} {'estimate':>14} {'error':>9} {'order':>5} {'sec':>6}")
    for key in keys:
        e = ASYMPTOTIC_CATALOG[key]
        start = time.perf_counter()
        terms = count(e.cls, e.degrees, e.fit_terms + args.extra - 1).terms
        rec = guess_recurrence(terms, e.max_order, e.max_degree)
        if rec is None:
            print(f"{key:14} {e.anumber:8} {e.reference:>22} {'no recurrence':>14}")
            continue
        est = estimate_constant(rec, parse_template(e.template, e.support), e.N)
        print(f"{key:14} {e.anumber:8} {e.reference:>22} {est.value:14.6g} {est.error_estimate:9.1e} "
              f"{rec.order:5d} {time.perf_counter() - start:6.1f}", flush=True)


if __name__ == "__main__":
    main()
