"""Command-line interface: ``regenum <command> ...``; every command prints one JSON document.

Exit codes: 0 success, 1 a check failed (no recurrence, mismatch, identity
false), 2 usage error, 3 the two counting methods diverged, 4 computation or
I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import product
from pathlib import Path

from . import __version__
from .asympt import TemplateError, estimate_constant, fit_alpha, parse_template
from .catalog import ASYMPTOTIC_CATALOG, OEIS_CLASSES, catalog_entry
from .config import CacheConfig, CountConfig, EstimateConfig, GuessConfig
from .dfinite import ExtensionError, GuessError, PRecurrence, detect_stride, extend, guess_recurrence
from .enumeration import ProfileError, RegularityProfile, count, verify_identity
from .seqio import SequenceCache, align, fetch_bfile, fixture_path, normalize_anumber, read_bfile
from .species import PRESETS, SpeciesError, preset_catalog_hash, resolve_class

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DIVERGENCE, EXIT_ERROR = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_ERROR):
        super().__init__(message)
        self.code = code


def _render(x):
    """Canonical JSON rendering: integers and rationals as strings."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, float)):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return str(Fraction(int(x.numerator), int(x.denominator)))
    if isinstance(x, dict):
        return {str(k): _render(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_render(v) for v in x]
    return str(x)


def _degrees(text: str) -> tuple:
    try:
        degs = tuple(sorted({int(x) for x in text.replace(" ", "").split(",") if x}))
    except ValueError:
        raise CliError(f"bad degree set {text!r}; expected e.g. 1,2", EXIT_USAGE) from None
    if not degs:
        raise CliError("empty degree set", EXIT_USAGE)
    return degs


def _class(text: str) -> str:
    try:
        return resolve_class(text).canonical()
    except SpeciesError as err:
        raise CliError(f"parse error: {err}", EXIT_USAGE) from None


def _profile(degs: tuple, limit: int) -> RegularityProfile:
    try:
        return RegularityProfile(degs, limit)
    except ProfileError as err:
        raise CliError(str(err), EXIT_USAGE) from None


def _count_one(cfg: CountConfig) -> dict:
    prof = _profile(cfg.degrees, cfg.max_degree_limit)
    out = {"class": cfg.cls, "S": list(cfg.degrees)}
    if cfg.cross_check:
        a = count(cfg.cls, prof, cfg.N, "adjoint")
        b = count(cfg.cls, prof, cfg.N, "direct")
        first = next((i for i, (x, y) in enumerate(zip(a.terms, b.terms)) if x != y), None)
        out.update(method="adjoint+direct", terms=a.terms, agree=first is None, first_divergence=first,
                   seconds={"adjoint": a.seconds, "direct": b.seconds})
    else:
        s = count(cfg.cls, prof, cfg.N, cfg.method)
        out.update(method=cfg.method, terms=s.terms, seconds={cfg.method: s.seconds})
    return out


class Runner:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.cache = None
        if not getattr(args, "no_cache", False):
            self.cache = SequenceCache(CacheConfig(getattr(args, "cache_dir", None)).resolve())
        self.diagnostics: dict = {"warnings": []}
        self.timings: dict = {}

    def terms_for(self, cls: str, degs: tuple, N: int, method: str = "adjoint") -> list[int]:
        if self.cache is not None:
            hit = self.cache.get(cls, degs, N)
            if hit is not None:
                self.diagnostics["cache"] = "hit"
                return hit
        prof = _profile(degs, self.args.max_degree_limit)
        start = time.perf_counter()
        terms = count(cls, prof, N, method).terms
        self.timings["count_ms"] = round(1000 * (time.perf_counter() - start), 3)
        if self.cache is not None:
            try:
                self.cache.put(cls, degs, N, terms, method)
                self.diagnostics["cache"] = "stored"
            except OSError as err:
                self.diagnostics["warnings"].append(f"cache write failed: {err}")
        return terms

    def input_terms(self, N: int | None = None) -> tuple[list, dict]:
        """Terms from --terms-file, else computed from --class/--degrees/--n."""
        a = self.args
        if getattr(a, "terms_file", None):
            path = Path(a.terms_file)
            try:
                text = path.read_text()
            except OSError as err:
                raise CliError(f"cannot read {path}: {err}") from None
            if text.lstrip().startswith("{"):
                doc = json.loads(text)
                res = doc.get("result", doc)
                terms = [Fraction(t) for t in res["terms"]]
            else:
                data = read_bfile(path)
                terms = [Fraction(data[i]) for i in sorted(data)]
            terms = [int(t) if t.denominator == 1 else t for t in terms]
            return terms, {"terms_file": str(path)}
        if not (a.cls and a.degrees):
            raise CliError("need --terms-file or both --class and --degrees", EXIT_USAGE)
        cls, degs = _class(a.cls), _degrees(a.degrees)
        n = a.n if N is None else N
        if n is None:
            raise CliError("need --n", EXIT_USAGE)
        return self.terms_for(cls, degs, n), {"class": cls, "S": list(degs), "n": n}


# -- commands ------------------------------------------------------------------

def cmd_count(r: Runner) -> tuple[dict, dict, int]:
    a = r.args
    if a.n < 0:
        raise CliError("--n must be nonnegative", EXIT_USAGE)
    classes = [_class(c) for c in a.cls]
    degree_sets = [_degrees(d) for d in a.degrees]
    params = {"classes": classes, "degree_sets": [list(d) for d in degree_sets], "n": a.n,
              "method": a.method, "cross_check": a.cross_check}
    if not a.grid and (len(classes) > 1 or len(degree_sets) > 1):
        raise CliError("several classes or degree sets need --grid", EXIT_USAGE)
    cfgs = [CountConfig(c, d, a.n, a.method, a.cross_check, a.max_degree_limit)
            for c, d in product(classes, degree_sets)]
    for cfg in cfgs:
        _profile(cfg.degrees, cfg.max_degree_limit)
    if a.grid:
        with ProcessPoolExecutor(max_workers=a.jobs) as pool:
            results = list(pool.map(_count_one, cfgs))
    else:
        cfg = cfgs[0]
        cached = None if (a.cross_check or r.cache is None) else r.cache.get(cfg.cls, cfg.degrees, cfg.N)
        if cached is not None:
            r.diagnostics["cache"] = "hit"
            results = [{"class": cfg.cls, "S": list(cfg.degrees), "method": cfg.method, "terms": cached,
                        "seconds": {}}]
        else:
            results = [_count_one(cfg)]
            if r.cache is not None:
                try:
                    r.cache.put(cfg.cls, cfg.degrees, cfg.N, results[0]["terms"], results[0]["method"])
                    r.diagnostics["cache"] = "stored"
                except OSError as err:
                    r.diagnostics["warnings"].append(f"cache write failed: {err}")
    code = EXIT_OK
    for res in results:
        secs = res.pop("seconds", {})
        for k, v in secs.items():
            r.timings[f"{res['class']} {res['S']} {k}_ms"] = round(1000 * v, 3)
        if res.get("agree") is False:
            code = EXIT_DIVERGENCE
    result = results[0] if not a.grid else {"runs": results}
    return params, result, code


def cmd_guess(r: Runner) -> tuple[dict, dict, int]:
    a = r.args
    terms, src = r.input_terms()
    cfg = GuessConfig(a.max_order, a.max_degree, not a.ogf, a.guard)
    params = {**src, "max_order": cfg.max_order, "max_degree": cfg.max_degree,
              "egf_mode": cfg.egf_mode, "guard": cfg.guard, "terms_used": len(terms)}
    start = time.perf_counter()
    try:
        rec = guess_recurrence(terms, cfg.max_order, cfg.max_degree, cfg.egf_mode, cfg.guard)
    except GuessError as err:
        raise CliError(str(err), EXIT_FAIL) from None
    r.timings["guess_ms"] = round(1000 * (time.perf_counter() - start), 3)
    if rec is None:
        return params, {"found": False, "recurrence": None}, EXIT_FAIL
    fit = len(terms) - cfg.guard
    report = {"fit_terms": fit, "guard_terms": cfg.guard, "verified_terms": len(terms),
              "annihilates_all": rec.annihilates(terms)}
    result = {"found": True, "recurrence": rec.to_dict(), "text": str(rec), "verification": report}
    return params, result, EXIT_OK if report["annihilates_all"] else EXIT_FAIL


def _load_recurrence(path: str) -> PRecurrence:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, ValueError) as err:
        raise CliError(f"cannot read recurrence from {path}: {err}") from None
    res = doc.get("result", doc)
    rec = res.get("recurrence", res)
    if rec is None:
        raise CliError(f"{path} holds no recurrence", EXIT_FAIL)
    return PRecurrence.from_dict(rec)


def _recurrence_for(r: Runner) -> tuple[PRecurrence, dict]:
    a = r.args
    if a.recurrence:
        return _load_recurrence(a.recurrence), {"recurrence_file": a.recurrence}
    terms, src = r.input_terms(a.fit)
    rec = guess_recurrence(terms, a.max_order, a.max_degree, True)
    if rec is None:
        raise CliError(f"no recurrence found from {len(terms)} terms", EXIT_FAIL)
    return rec, {**src, "fit_terms": len(terms)}


def cmd_extend(r: Runner) -> tuple[dict, dict, int]:
    a = r.args
    if a.terms_file and not a.recurrence:
        terms, src = r.input_terms()
        if a.n + 1 <= len(terms):
            return {**src, "n": a.n}, {"terms": terms[:a.n + 1], "source": "prefix"}, EXIT_OK
        rec = guess_recurrence(terms, a.max_order, a.max_degree, True)
        if rec is None:
            raise CliError("no recurrence found for the supplied terms", EXIT_FAIL)
    else:
        rec, src = _recurrence_for(r)
    start = time.perf_counter()
    try:
        out = extend(rec, a.n, integral=a.integral)
    except ExtensionError as err:
        raise CliError(f"extension blocked: {err}", EXIT_ERROR) from None
    r.timings["extend_ms"] = round(1000 * (time.perf_counter() - start), 3)
    return {**src, "n": a.n}, {"terms": out, "recurrence": rec.to_dict(), "source": "recurrence"}, EXIT_OK


def cmd_asympt(r: Runner) -> tuple[dict, dict, int]:
    a = r.args
    if a.preset:
        e = catalog_entry(a.preset)
        a.cls = a.cls or e.cls
        a.degrees = a.degrees or ",".join(map(str, e.degrees))
        a.template = a.template or e.template
        a.support = a.support or f"{e.support[0]}:{','.join(map(str, e.support[1]))}"
        a.N = a.N or e.N
        a.fit = a.fit or e.fit_terms - 1
        a.max_order, a.max_degree = max(a.max_order, e.max_order), max(a.max_degree, e.max_degree)
    if not a.template:
        raise CliError("need --template or --preset", EXIT_USAGE)
    support = _support(a.support or "1:0")
    try:
        tmpl = parse_template(a.template, support)
    except TemplateError as err:
        raise CliError(f"template error: {err}", EXIT_USAGE) from None
    cfg = EstimateConfig(a.N or 500, a.order)
    rec, src = _recurrence_for(r)
    start = time.perf_counter()
    try:
        est = estimate_constant(rec, tmpl, cfg.N, cfg.order, cfg.bits)
    except ExtensionError as err:
        raise CliError(f"extension blocked: {err}", EXIT_ERROR) from None
    except ValueError as err:
        raise CliError(str(err), EXIT_FAIL) from None
    r.timings["estimate_ms"] = round(1000 * (time.perf_counter() - start), 3)
    params = {**src, "template": a.template, "support": [support[0], list(support[1])], "N": cfg.N,
              "preset": a.preset}
    result = {"estimate": est.to_dict(), "template": tmpl.to_dict(), "recurrence": rec.to_dict()}
    if a.fit_alpha:
        result["alpha_fit"] = repr(fit_alpha(rec, tmpl, cfg.N))
    if a.preset:
        e = catalog_entry(a.preset)
        result["reference"] = {"printed": e.reference, "value": e.reference_value}
    return params, result, EXIT_OK


def _support(text: str) -> tuple:
    try:
        mod, res = text.split(":")
        return int(mod), tuple(sorted({int(x) for x in res.split(",")}))
    except ValueError:
        raise CliError(f"bad support {text!r}; expected e.g. 2:0", EXIT_USAGE) from None


def cmd_verify_identity(r: Runner) -> tuple[dict, dict, int]:
    a = r.args
    if a.i < 1:
        raise CliError("--i must be at least 1", EXIT_USAGE)
    lhs = ("E[e2]", (a.i, a.i + 2))
    rhs = ("E[h2]", (a.i + 2,))
    chk = verify_identity(lhs, rhs, a.n, a.method)
    params = {"i": a.i, "n": a.n, "method": a.method, "lhs": [lhs[0], list(lhs[1])], "rhs": [rhs[0], list(rhs[1])]}
    result = {"agree": chk.agree, "first_divergence": chk.first_divergence, "lhs": chk.lhs, "rhs": chk.rhs}
    return params, result, EXIT_OK if chk.agree else EXIT_FAIL


def cmd_oeis_check(r: Runner) -> tuple[dict, dict, int]:
    a = r.args
    anum = normalize_anumber(a.anumber) if a.anumber else None
    if not (a.cls or a.terms_file) and anum in OEIS_CLASSES:
        cls, degs = OEIS_CLASSES[anum]
        a.cls, a.degrees = cls, ",".join(map(str, degs))
    terms, src = r.input_terms()
    if a.bfile:
        path = Path(a.bfile)
        origin = "file"
    elif anum:
        path = None
        cache_dir = CacheConfig(a.cache_dir).resolve() / "bfiles"
        cached = cache_dir / f"b{anum[1:]}.txt"
        if cached.is_file():
            path, origin = cached, "cache"
        elif a.fetch:
            try:
                path = fetch_bfile(anum, cache_dir)
            except OSError as err:
                raise CliError(f"network failure fetching {anum}: {err}", EXIT_ERROR) from None
            origin = "fetched"
        else:
            path = fixture_path(anum)
            origin = "fixture"
        if path is None:
            raise CliError(f"no local b-file for {anum}; pass --bfile or --fetch", EXIT_ERROR)
    else:
        raise CliError("need --bfile or --anumber", EXIT_USAGE)
    try:
        ref = read_bfile(path)
    except (OSError, ValueError) as err:
        raise CliError(f"cannot read b-file {path}: {err}") from None
    stride = detect_stride(terms)
    al = align(terms, ref, 2, stride)
    params = {**src, "anumber": anum, "bfile_origin": origin}
    r.diagnostics["bfile"] = str(path) if origin == "file" else f"{origin}:{Path(path).name}"
    result = {"alignment": al.to_dict(), "match": al.full_match}
    return params, result, EXIT_OK if al.full_match else EXIT_FAIL


def cmd_presets(r: Runner) -> tuple[dict, dict, int]:
    classes = {name: {"expression": p.expr.canonical(), "description": p.description} for name, p in PRESETS.items()}
    asym = {k: {"class": e.cls, "S": list(e.degrees), "sequence": e.anumber, "template": e.template,
                "support": [e.support[0], list(e.support[1])], "reference": e.reference}
            for k, e in ASYMPTOTIC_CATALOG.items()}
    return {}, {"classes": classes, "asymptotic": asym}, EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="regenum", description="Exact counting of regular labelled structures.")
    p.add_argument("--version", action="version", version=f"regenum {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", help="sequence cache directory (default $REGENUM_CACHE or ~/.cache/regenum)")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    common.add_argument("--timings", action="store_true", help="include timings in diagnostics")
    common.add_argument("--max-degree-limit", type=int, default=6, help="largest admissible max(S)")
    sub = p.add_subparsers(dest="command", required=True)

    def source(sp, need_n=True):
        sp.add_argument("--class", dest="cls", help="preset name or expression such as E[e2]")
        sp.add_argument("--degrees", help="degree set S, e.g. 1,2")
        if need_n:
            sp.add_argument("--n", type=int, help="compute terms 0..n")
        sp.add_argument("--terms-file", help="b-file or JSON output of 'count'")

    sp = sub.add_parser("count", parents=[common], help="counting sequence of a class")
    sp.add_argument("--class", dest="cls", action="append", required=True)
    sp.add_argument("--degrees", action="append", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=["adjoint", "direct"], default="adjoint")
    sp.add_argument("--cross-check", action="store_true", help="run both methods and fail if they differ")
    sp.add_argument("--grid", action="store_true", help="all class x degree-set combinations, in parallel")
    sp.add_argument("--jobs", type=int, default=None)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("guess", parents=[common], help="guess and certify a P-recurrence")
    source(sp)
    sp.add_argument("--max-order", type=int, default=6)
    sp.add_argument("--max-degree", type=int, default=6)
    sp.add_argument("--guard", type=int, default=10)
    sp.add_argument("--ogf", action="store_true", help="plain ansatz instead of the factorial-cleared one")
    sp.set_defaults(func=cmd_guess)

    sp = sub.add_parser("extend", parents=[common], help="extend a sequence by its recurrence")
    source(sp, need_n=False)
    sp.add_argument("--recurrence", help="JSON output of 'guess'")
    sp.add_argument("--fit", type=int, default=59, help="terms used for guessing when computing from a class")
    sp.add_argument("--n", type=int, required=True, help="extend to index n")
    sp.add_argument("--integral", action="store_true", help="assert integral terms")
    sp.add_argument("--max-order", type=int, default=8)
    sp.add_argument("--max-degree", type=int, default=8)
    sp.set_defaults(func=cmd_extend)

    sp = sub.add_parser("asympt", parents=[common], help="estimate an asymptotic constant")
    source(sp, need_n=False)
    sp.add_argument("--recurrence", help="JSON output of 'guess'")
    sp.add_argument("--preset", help="catalog entry, see 'presets'")
    sp.add_argument("--template", help="e.g. 'fact / n^(1/2)'")
    sp.add_argument("--support", help="modulus:residues, e.g. 2:0")
    sp.add_argument("--N", type=int, help="largest index used")
    sp.add_argument("--order", type=int, help="extrapolation order")
    sp.add_argument("--fit", type=int, default=None, help="terms used for guessing")
    sp.add_argument("--fit-alpha", action="store_true", help="also regress the exponent alpha")
    sp.add_argument("--max-order", type=int, default=6)
    sp.add_argument("--max-degree", type=int, default=6)
    sp.set_defaults(func=cmd_asympt, n=None)

    sp = sub.add_parser("verify-identity", parents=[common], help="loops identity for a given i")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--n", type=int, default=12)
    sp.add_argument("--method", choices=["adjoint", "direct"], default="adjoint")
    sp.set_defaults(func=cmd_verify_identity)

    sp = sub.add_parser("oeis-check", parents=[common], help="compare against a b-file")
    source(sp)
    sp.add_argument("--bfile", help="path to a b-file")
    sp.add_argument("--anumber", help="sequence number; uses cache, --fetch, or shipped fixture")
    sp.add_argument("--fetch", action="store_true", help="download the b-file over HTTPS")
    sp.set_defaults(func=cmd_oeis_check)

    sp = sub.add_parser("presets", parents=[common], help="list class and asymptotic presets")
    sp.set_defaults(func=cmd_presets)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "asympt" and args.fit is None and not args.preset:
        args.fit = 59
    runner = Runner(args)
    try:
        params, result, code = args.func(runner)
    except CliError as err:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "command": args.command,
                          "error": str(err)}, sort_keys=True, indent=2))
        return err.code
    diagnostics = runner.diagnostics
    diagnostics["versions"] = {"engine": __version__, "preset_catalog": preset_catalog_hash()}
    if args.timings:
        diagnostics["timings_ms"] = runner.timings
    doc = {"schema_version": SCHEMA_VERSION, "command": args.command, "params": _render(params),
           "result": _render(result), "diagnostics": _render(diagnostics)}
    print(json.dumps(doc, sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
