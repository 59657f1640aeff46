"""Regenerate the shipped b-file fixtures under src/regenum/data/bfiles.

The fixtures are computed locally by the counting engine (the build has no
network access); each header says so.  Indexing is by number of vertices,
which for parity-restricted classes differs from the usual OEIS indexing;
``regenum oeis-check`` aligns either convention.
"""
from __future__ import annotations

import argparse
from pathlib import Path

from regenum import __version__
from regenum.catalog import OEIS_CLASSES
from regenum.enumeration import count
from regenum.seqio import format_bfile, write_atomic

NOTES = {"A000986": "cited in the reference tables with a digit missing (A00986)"}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/regenum/data/bfiles"))
    args = ap.parse_args()
    out = Path(args.out)
    for anum, (cls, degs) in OEIS_CLASSES.items():
        terms = count(cls, degs, args.n).terms
        header = [
            f"{anum}: {cls} with all degrees in S = {{{','.join(map(str, degs))}}}",
            f"generated locally by regenum {__version__} (exact count), not downloaded from the OEIS",
            "index n = number of labelled vertices",
        ]
        if anum in NOTES:
            header.append(NOTES[anum])
        write_atomic(out / f"b{anum[1:]}.txt", format_bfile(terms, header))
        print(anum, cls, degs, "done", flush=True)


if __name__ == "__main__":
    main()
