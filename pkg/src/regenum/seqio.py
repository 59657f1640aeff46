"""b-files, the on-disk sequence cache, and alignment against reference sequences."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
import urllib.request
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import __version__

__all__ = [
    "parse_bfile", "read_bfile", "format_bfile", "write_atomic", "SequenceCache",
    "fixture_path", "fetch_bfile", "Alignment", "align", "normalize_anumber",
]


def normalize_anumber(a: str) -> str:
    a = a.strip().upper()
    if not a.startswith("A") or not a[1:].isdigit():
        raise ValueError(f"not a sequence number: {a!r}")
    return "A" + a[1:].zfill(6)


def parse_bfile(text: str) -> dict[int, int]:
    """Lines ``n a(n)``; blank lines and lines starting with '#' are ignored."""
    out: dict[int, int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ValueError(f"b-file line {lineno}: expected 'n a(n)', got {line!r}")
        out[int(parts[0])] = int(parts[1])
    return out


def read_bfile(path) -> dict[int, int]:
    return parse_bfile(Path(path).read_text())


def format_bfile(terms, header: list[str] = (), start: int = 0) -> str:
    lines = [f"# {h}" for h in header]
    lines += [f"{start + i} {int(t)}" for i, t in enumerate(terms)]
    return "\n".join(lines) + "\n"


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fixture_path(anumber: str) -> Path | None:
    name = f"b{normalize_anumber(anumber)[1:]}.txt"
    ref = resources.files("regenum").joinpath("data", "bfiles", name)
    return Path(str(ref)) if ref.is_file() else None


def fetch_bfile(anumber: str, dest: Path, timeout: float = 30.0) -> Path:
    a = normalize_anumber(anumber)
    url = f"https://oeis.org/{a}/b{a[1:]}.txt"
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        text = resp.read().decode("utf-8", "replace")
    parse_bfile(text)
    path = dest / f"b{a[1:]}.txt"
    write_atomic(path, text)
    return path


class SequenceCache:
    """Entries keyed by (canonical class, S, N, engine version): a b-file plus a JSON sidecar."""

    def __init__(self, root: Path):
        self.root = Path(root)

    @staticmethod
    def key(cls: str, degrees, N: int, version: str = __version__) -> str:
        text = json.dumps([cls, sorted(degrees), N, version])
        return hashlib.sha256(text.encode()).hexdigest()[:24]

    def _paths(self, key: str) -> tuple[Path, Path]:
        return self.root / "sequences" / f"{key}.b", self.root / "sequences" / f"{key}.json"

    def get(self, cls: str, degrees, N: int) -> list[int] | None:
        bpath, mpath = self._paths(self.key(cls, degrees, N))
        if not (bpath.is_file() and mpath.is_file()):
            return None
        try:
            meta = json.loads(mpath.read_text())
            data = read_bfile(bpath)
        except (ValueError, OSError):
            return None
        if meta.get("class") != cls or meta.get("N") != N or meta.get("version") != __version__:
            return None
        terms = [data.get(i) for i in range(N + 1)]
        return None if None in terms else terms

    def put(self, cls: str, degrees, N: int, terms, method: str) -> None:
        bpath, mpath = self._paths(self.key(cls, degrees, N))
        write_atomic(bpath, format_bfile(terms, [f"{cls} S={sorted(degrees)} regenum {__version__}"]))
        meta = {"class": cls, "degrees": sorted(degrees), "N": N, "version": __version__, "method": method}
        write_atomic(mpath, json.dumps(meta, sort_keys=True, indent=2) + "\n")


@dataclass(frozen=True)
class Alignment:
    transform: str          # "raw" or "section v:rho"
    shift: int              # reference index = engine index + shift
    compared: int
    matching_prefix: int
    first_mismatch: int | None   # engine-side index (after transform)
    reference_index: int | None

    @property
    def full_match(self) -> bool:
        return self.first_mismatch is None and self.compared > 0

    def to_dict(self) -> dict:
        return {"transform": self.transform, "shift": self.shift, "compared": self.compared,
                "matching_prefix": self.matching_prefix, "first_mismatch": self.first_mismatch,
                "reference_index": self.reference_index, "full_match": self.full_match}


def _compare(seq: list, ref: dict[int, int], shift: int, transform: str) -> Alignment:
    compared = 0
    prefix = 0
    mismatch = None
    for i, x in enumerate(seq):
        j = i + shift
        if j not in ref:
            continue
        compared += 1
        if ref[j] != x:
            mismatch = i
            break
        prefix += 1
    return Alignment(transform, shift, compared, prefix, mismatch,
                     None if mismatch is None else mismatch + shift)


def align(terms: list, ref: dict[int, int], max_shift: int = 2, stride: tuple | None = None) -> Alignment:
    """Best alignment of engine terms against reference data.

    Tries index shifts -max_shift..max_shift on the raw sequence and, when the
    sequence lives on one residue class mod v, on that section too.  The best
    alignment has the longest matching prefix; ties go to the smaller shift.
    """
    candidates = [("raw", list(terms))]
    if stride and stride[0] > 1:
        v, rho = stride
        candidates.append((f"section {v}:{rho}", list(terms[rho::v])))
    best = None
    for name, seq in candidates:
        for s in sorted(range(-max_shift, max_shift + 1), key=lambda s: (abs(s), -s)):
            al = _compare(seq, ref, s, name)
            rank = (al.matching_prefix, al.full_match)
            if best is None or rank > best[0]:
                best = (rank, al)
    return best[1]
