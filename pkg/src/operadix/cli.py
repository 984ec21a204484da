"""Command-line front end: ``operadix <command> ...``.

Exit codes: 0 success, 2 domain error, 3 failed self-check, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import warnings
from pathlib import Path
from typing import Sequence

from . import __version__, cohomology, freeoperad, koszuldual, minimodel, opseries, trees
from .errors import DomainError, InconsistencyError
from .freeoperad import Family
from .opseries import FamilyId
from .pseries import first_negative, parse_sparse_spec, revert

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_INCONSISTENT = 3
EXIT_USAGE = 64

CACHE_VERSION = 1

FAMILY_ALIASES = {
    "totass": Family.TOT,
    "tass": Family.TOT,
    "partass": Family.PART,
    "pass": Family.PART,
    "totasstilde": Family.TOT_TILDE,
    "tasstilde": Family.TOT_TILDE,
    "partasstilde": Family.PART_TILDE,
    "passtilde": Family.PART_TILDE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _family(text: str) -> str:
    key = text.replace("-", "").replace("_", "").lower()
    if key not in FAMILY_ALIASES:
        raise argparse.ArgumentTypeError(f"unknown family {text!r}; choose from {', '.join(Family.ALL)}")
    return FAMILY_ALIASES[key]


def _family_triple(text: str) -> FamilyId:
    try:
        fam, n, d = text.split(",")
        return FamilyId(_family(fam), int(n), int(d))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected family,n,d; got {text!r}") from exc


# --- cache ----------------------------------------------------------------------

def cache_dir() -> Path:
    env = os.environ.get("OPERADIX_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "operadix"


def _scan_key(n: int) -> dict:
    return {"series": f"1:1,-1:{n},1:{2 * n - 1}", "stride": n - 1}


def cache_get(n: int):
    """Cached reversion state for the trinomial of arity ``n``, or ``None``."""
    path = cache_dir() / f"scan-n{n}.json"
    if not path.exists():
        return None
    try:
        obj = json.loads(path.read_text())
        if obj.get("version") != CACHE_VERSION or obj.get("key") != _scan_key(n):
            return None
        v = [int(x) for x in obj["v"]]
        powers = [[int(x) for x in w] for w in obj["powers"]]
        if len(powers) != 2 or not v or v[0] != 1:
            raise ValueError("malformed state")
        return v, powers
    except (OSError, ValueError, KeyError, TypeError) as exc:
        warnings.warn(f"ignoring corrupt cache entry {path}: {exc}")
        return None


def cache_put(n: int, state) -> None:
    v, powers = state
    d = cache_dir()
    d.mkdir(parents=True, exist_ok=True)
    payload = {
        "version": CACHE_VERSION,
        "key": _scan_key(n),
        "v": [str(x) for x in v],
        "powers": [[str(x) for x in w] for w in powers],
    }
    fd, tmp = tempfile.mkstemp(dir=d, prefix=f".scan-n{n}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh)
        os.chmod(tmp, 0o644)
        os.replace(tmp, d / f"scan-n{n}.json")
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- output ---------------------------------------------------------------------

def _emit(args, data, text: str | None = None) -> None:
    if args.json or text is None:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


# --- commands -------------------------------------------------------------------

def cmd_series(args) -> int:
    fam = FamilyId(args.family, args.n, args.d)
    s = opseries.poincare(fam, args.order)
    _emit(args, {**fam.to_json(), "order": args.order, "series": s.to_json()}, s.format())
    return EXIT_OK


def cmd_revert(args) -> int:
    f = parse_sparse_spec(args.coeffs, args.order)
    h = revert(f, args.order)
    neg = first_negative(h)
    _emit(args, {"order": args.order, "series": h.to_json(), "first_negative": neg}, h.format())
    return EXIT_OK


def cmd_koszul_scan(args) -> int:
    n, bound = args.n, args.bound
    if n < 2:
        raise DomainError("arity must be at least 2")
    K = (bound - 1) // (n - 1)
    state = None if args.no_cache else cache_get(n)
    if state is not None and len(state[0]) - 1 < K and not args.resume:
        state = None
    computed = state is None or len(state[0]) - 1 < K

    def progress(k, total):
        if total >= 500 and k % max(1, total // 10) == 0:
            print(f"koszul-scan n={n}: coefficient {k}/{total}", file=sys.stderr)

    if state is not None and not computed:
        v = state[0]
        s = n - 1
        neg = next((1 + s * k for k in range(K + 1) if v[k] < 0), None)
        result = opseries.ScanResult(n, bound, neg)
    else:
        result, state = opseries.necessary_koszul_scan(n, bound, state=state, progress=progress)
        if not args.no_cache:
            try:
                cache_put(n, state)
            except OSError as exc:
                warnings.warn(f"could not write cache: {exc}")
    data = result.to_json()
    if result.first_negative is not None:
        text = f"n={n}: first negative coefficient at t^{result.first_negative} (not Koszul)"
    else:
        text = f"n={n}: no negative coefficient up to t^{bound} (inconclusive)"
    _emit(args, data, text)
    return EXIT_OK


def cmd_verdict(args) -> int:
    fam = FamilyId(args.family, args.n, args.d)
    v = opseries.koszul_verdict(fam)
    _emit(args, {**fam.to_json(), "status": v.status, "justification": v.justification},
          f"{fam.family}^{fam.n}_{fam.d}: {v.status} ({v.justification})")
    return EXIT_OK


def cmd_dims(args) -> int:
    p = freeoperad.standard_relations(args.family, args.n, args.d)
    rows = []
    for l in range(args.weight + 1) if args.all else [args.weight]:
        q = freeoperad.quotient_dim(p, l)
        row = {"weight": l, "arity": l * (args.n - 1) + 1, "planar": q.planar, "full": str(q.full)}
        if args.family == Family.PART:
            row["scomb"] = trees.count_scomb(args.n, l)
            row["comb_kernel_dim"] = freeoperad.comb_map_kernel_dim(p, l)
        rows.append(row)
    data = {"family": args.family, "n": args.n, "d": args.d, "dims": rows}
    lines = [f"{'weight':>6} {'arity':>5} {'planar':>7} full"]
    for r in rows:
        extra = f"  combs={r['scomb']} comb-kernel={r['comb_kernel_dim']}" if "scomb" in r else ""
        lines.append(f"{r['weight']:>6} {r['arity']:>5} {r['planar']:>7} {r['full']}{extra}")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_trees(args) -> int:
    if args.action == "count":
        c = trees.count_scomb(args.n, args.l) if args.comb else trees.fuss_catalan(args.n, args.l)
        _emit(args, {"n": args.n, "l": args.l, "comb": args.comb, "count": c}, str(c))
    else:
        ts = trees.enumerate_scomb(args.n, args.l) if args.comb else trees.enumerate_full(args.n, args.l)
        enc = [trees.encode(t) for t in ts]
        _emit(args, enc, "\n".join(enc))
    return EXIT_OK


def cmd_dual(args) -> int:
    p = freeoperad.standard_relations(args.family, args.n, args.d)
    qp = koszuldual.shadow(p)
    dq = koszuldual.dual(qp)
    fam, n, d2 = koszuldual.dual_family(args.family, args.n, args.d)
    expected = koszuldual.shadow(freeoperad.standard_relations(fam, n, d2))
    ok = dq.d == d2 and koszuldual.same_relations(dq, expected)
    data = {
        "family": args.family, "n": args.n, "d": args.d,
        "relations": qp.to_json()["relations"],
        "dual": {"family": fam, "n": n, "d": dq.d, "relations": dq.to_json()["relations"]},
        "matches_table": ok,
    }
    _emit(args, data, f"dual of {args.family}^{args.n}_{args.d} is {fam}^{n}_{dq.d}: "
                      f"{'matches' if ok else 'DOES NOT match'} the expected relations")
    return EXIT_OK if ok else EXIT_INCONSISTENT


def cmd_minimodel(args) -> int:
    if args.action == "check":
        ok = minimodel.check_square_zero(minimodel.builtin_model())
        _emit(args, {"square_zero": ok}, "differential squares to zero" if ok else "differential does NOT square to zero")
        return EXIT_OK if ok else EXIT_INCONSISTENT
    if args.action == "arity5":
        r = minimodel.arity5_cycle_analysis()
        _emit(args, r, "\n".join(f"{k}: {v}" for k, v in r.items()))
        return EXIT_OK
    if args.action == "render":
        if args.i is None:
            raise UsageError("render needs --i")
        r = minimodel.mu5_cycle_render(args.i)
        text = "\n".join(f"{'+' if s > 0 else '-'} {e}" for s, e in zip(r["signs"], r["edges"]))
        _emit(args, r, text)
        return EXIT_OK
    if args.action == "arity6":
        h = minimodel.degree1_homology(6)
        _emit(args, {"degree1_homology": h, "ok": h == 0}, f"degree-1 homology at arity 6: {h}")
        return EXIT_OK
    _emit(args, minimodel.builtin_model().to_json())
    return EXIT_OK


def _load_algebra(path: str | None) -> cohomology.AntiAssocAlgebra:
    if not path:
        raise UsageError("this action needs --algebra FILE")
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from exc
    try:
        return cohomology.AntiAssocAlgebra.from_json(obj)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"{path} is not an algebra file: {exc}") from exc


def cmd_coh(args) -> int:
    if args.action == "free":
        if args.g is None:
            raise UsageError("free needs --g")
        alg = cohomology.free_antiassoc(args.g)
        print(json.dumps(alg.to_json()))
        return EXIT_OK
    alg = _load_algebra(args.algebra)
    if args.action == "validate":
        bad = cohomology.validate(alg)
        _emit(args, {"ok": not bad, "violations": [list(t) for t in bad]},
              "anti-associative" if not bad else f"{len(bad)} violating triples, first {bad[0]}")
        return EXIT_OK
    if cohomology.validate(alg):
        raise DomainError("the algebra is not anti-associative")
    if args.action == "dims":
        h = cohomology.standard_cohomology_dims(alg)
    else:
        h = cohomology.deformation_h_dims(alg)
    data = {"h1": h[0], "h2": h[1], "h3": h[2]}
    _emit(args, data, f"h1={h[0]} h2={h[1]} h3={h[2]}")
    return EXIT_OK


def cmd_gk(args) -> int:
    left = opseries.poincare(args.left, args.order)
    right = opseries.poincare(args.right, args.order)
    r = opseries.gk_residual(left, right)
    data = {"left": args.left.to_json(), "right": args.right.to_json(), "order": args.order,
            "residual": r.to_json(), "zero": r.is_zero()}
    _emit(args, data, "residual: " + r.format())
    return EXIT_OK


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="operadix", description="Exact computations for n-ary operads.")
    p.add_argument("--version", action="version", version=f"operadix {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("series", parents=[common], help="Poincaré series of a family")
    s.add_argument("family", type=_family)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--order", type=int, default=15)
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("revert", parents=[common], help="compositional inverse of a sparse series")
    s.add_argument("--coeffs", required=True, help='coefficient:exponent pairs, e.g. "1:1,-1:8,1:15"')
    s.add_argument("--order", type=int, required=True)
    s.set_defaults(func=cmd_revert)

    s = sub.add_parser("koszul-scan", parents=[common], help="scan the inverse trinomial for negative coefficients")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--resume", action="store_true", help="extend a shorter cached scan")
    s.add_argument("--no-cache", action="store_true")
    s.set_defaults(func=cmd_koszul_scan)

    s = sub.add_parser("verdict", parents=[common], help="Koszulity verdict")
    s.add_argument("--family", type=_family, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_verdict)

    s = sub.add_parser("dims", parents=[common], help="quotient dimensions from the free operad")
    s.add_argument("--family", type=_family, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--all", action="store_true", help="report every weight up to --weight")
    s.set_defaults(func=cmd_dims)

    s = sub.add_parser("trees", parents=[common], help="count or list planar trees")
    s.add_argument("action", choices=["count", "list"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--comb", action="store_true", help="only trees whose nodes all start with a leaf")
    s.set_defaults(func=cmd_trees)

    s = sub.add_parser("dual", parents=[common], help="quadratic dual of a family")
    s.add_argument("--family", type=_family, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("minimodel", parents=[common], help="minimal-model checks")
    s.add_argument("action", choices=["check", "arity5", "render", "arity6", "export"])
    s.add_argument("--i", type=int)
    s.set_defaults(func=cmd_minimodel)

    s = sub.add_parser("coh", parents=[common], help="anti-associative algebras and cohomology")
    s.add_argument("action", choices=["validate", "free", "dims", "def-dims"])
    s.add_argument("--algebra")
    s.add_argument("--g", type=int)
    s.set_defaults(func=cmd_coh)

    s = sub.add_parser("gk", parents=[common], help="residual of the generating-series test")
    s.add_argument("--left", type=_family_triple, required=True, help="family,n,d")
    s.add_argument("--right", type=_family_triple, required=True, help="family,n,d")
    s.add_argument("--order", type=int, default=31)
    s.set_defaults(func=cmd_gk)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InconsistencyError, ArithmeticError) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
