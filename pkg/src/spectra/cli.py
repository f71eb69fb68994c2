"""``spectra`` command line.

Exit codes: 0 success, 1 violation found (witness written), 2 usage error,
3 inconclusive (search bound exhausted).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import divisors
from .colouring import (
    LAZY_COLOURINGS,
    TemplateColouring,
    bipartite_rainbow,
    embed_graph_rainbow,
    small_rainbow,
)
from .errors import SpectraError, ValidationError
from .homogeneity import build_homogeneous, build_weakly_homogeneous, canonical_check, level_spectra
from .induced import SimpleGraph, induced_size_set, min_size_set
from .search import check_laws, f_set, g_set_prefix, law_report, n_of_k, psi_bounded

log = logging.getLogger("spectra")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _out_dir(args) -> Path:
    base = args.out or os.environ.get("SPECTRA_OUT") or "spectra-out"
    path = Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: r.get(c, "") for c in columns})
    return buf.getvalue()


def _warn_force(args) -> None:
    if getattr(args, "force", False):
        log.warning("--force: desk-scale guards disabled; this run may be slow or memory hungry")


def _template_from(args) -> TemplateColouring:
    if args.witness:
        return TemplateColouring.load(args.witness)
    if args.small_rainbow is not None:
        return small_rainbow(args.small_rainbow)
    if args.bipartite:
        return bipartite_rainbow(*args.bipartite)
    if args.graph:
        return embed_graph_rainbow(SimpleGraph.load(args.graph))
    raise SpectraError("give one of --witness, --small-rainbow, --bipartite, --graph")


def _add_template_source(p) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--witness", help="template colouring JSON file")
    g.add_argument("--small-rainbow", type=int, metavar="N")
    g.add_argument("--bipartite", type=int, nargs=2, metavar=("A", "B"))
    g.add_argument("--graph", help="graph JSON file, embedded as a rainbow colouring")


def _lazy(name: str):
    try:
        return LAZY_COLOURINGS[name]
    except KeyError:
        raise SpectraError(f"unknown colouring {name!r}; choose from {sorted(LAZY_COLOURINGS)}")


# ---------------------------------------------------------------------------


def cmd_psi(args) -> int:
    _warn_force(args)
    value, witness = psi_bounded(args.k, args.t_max, workers=args.workers, force=args.force)
    path = witness.save(_out_dir(args) / f"psi_k{args.k}_t{args.t_max}.json")
    if args.format == "json":
        print(_dump({"k": args.k, "t_max": args.t_max, "psi": value,
                     "label": "template-class psi", "witness": str(path)}))
    else:
        print(value)
    return EXIT_OK


def cmd_fset(args) -> int:
    F = f_set(_template_from(args))
    if args.format == "json":
        print(_dump({"k": F.k, "fset": F.sorted(), "size": len(F)}))
    else:
        print(" ".join(map(str, F.sorted())))
    return EXIT_OK


def cmd_gset(args) -> int:
    _warn_force(args)
    G = g_set_prefix(_lazy(args.colouring), args.n, force=args.force)
    if args.format == "json":
        print(_dump({"colouring": args.colouring, "N": args.n, "gset": G.sorted()}))
    else:
        print(" ".join(map(str, G.sorted())))
    return EXIT_OK


def cmd_laws(args) -> int:
    _warn_force(args)
    report = law_report(args.t_max, args.k_max, workers=args.workers, force=args.force)
    run = _out_dir(args) / f"laws_t{args.t_max}_k{args.k_max}"
    rows = []
    for row in report.rows:
        wpath = run / "witnesses" / f"t{row['t']}_k{row['k']}.json"
        TemplateColouring.from_dict(row["witness"]).save(wpath)
        rows.append({**row, "witness_path": str(wpath.relative_to(run))})
    for idx, v in enumerate(report.violations):
        vpath = run / "violations" / f"{idx:04d}_{v['law']}.json"
        TemplateColouring.from_dict(v["witness"]).save(vpath)
        v["witness_path"] = str(vpath.relative_to(run))
    doc = report.to_dict()
    doc["rows"] = rows
    _write(run / "report.json", _dump(doc) + "\n")
    _write(run / "summary.csv", _csv(rows, ["t", "k", "classes", "min_F", "witness_path"]))
    print(f"laws t_max={args.t_max} k_max={args.k_max}: classes={report.classes} "
          f"raw={report.raw} violations={len(report.violations)} "
          f"{'PASS' if report.passed else 'FAIL'}")
    print(f"wall time {report.wall_time:.2f}s", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_homog(args) -> int:
    delta = _template_from(args)
    n = args.n if args.n is not None else n_of_k(delta.k)
    trace: list[str] = []
    T = build_homogeneous(delta, n, trace)
    if args.trace:
        for line in trace:
            print(line)
    if args.format == "json":
        print(_dump({**T.to_dict(), "spectrum_sizes": [len(s) for s in level_spectra(delta, T)]}))
    else:
        print(T)
    return EXIT_OK


def cmd_weak_homog(args) -> int:
    trace: list[str] = []
    delta = _lazy(args.colouring)
    T = build_weakly_homogeneous(delta, args.n, args.bound, trace)
    if args.trace:
        for line in trace:
            print(line)
    if T is None:
        print(f"bound-exhausted: no weakly homogeneous {args.n}-tuple inside [{args.bound}]")
        return EXIT_INCONCLUSIVE
    if args.format == "json":
        print(_dump({**T.to_dict(), "spectrum_sizes": [len(s) for s in level_spectra(delta, T)]}))
    else:
        print(T)
    return EXIT_OK


def cmd_canonical_check(args) -> int:
    res = canonical_check(_lazy(args.colouring), args.n, args.bound)
    if args.format == "json":
        print(_dump({"status": res.status, "sizes": list(res.sizes), "detail": res.detail,
                     "witness": res.witness.to_dict() if res.witness else None}))
    else:
        print(f"{res.status} sizes={list(res.sizes)} {res.detail}".rstrip())
    return {"pass": EXIT_OK, "fail": EXIT_VIOLATION}.get(res.status, EXIT_INCONCLUSIVE)


def cmd_sieve(args) -> int:
    _warn_force(args)
    if args.sieve == "h":
        print(divisors.H(Fraction(args.x), Fraction(args.y), Fraction(args.z), force=args.force))
    elif args.sieve == "multtable":
        size = divisors.mult_table_size(args.n, force=args.force)
        print(size)
    elif args.sieve == "density":
        count = divisors.count_A(args.x, force=args.force)
        if args.format == "json":
            print(_dump({"x": args.x, "count": count, "density": count / (args.x - 1),
                         "log_base": divisors.LOG_BASE}))
        else:
            print(f"{count} {count / (args.x - 1):.6f}")
    elif args.sieve == "evidence":
        out = _out_dir(args)
        ks = divisors.evidence_sample(args.k_lo, args.k_hi, args.points)
        ev = divisors.evidence_rows(ks)
        cols = ["k", "in_A", "a", "b", "F", "upper_bound", "ratio"]
        _write(out / "evidence.csv", _csv(ev, cols))
        mt = divisors.mult_table_rows()
        _write(out / "multtable.csv", _csv(mt, ["n", "size", "ratio"]))
        dens = divisors.density_rows()
        _write(out / "density.csv", _csv(dens, ["x", "count", "density"]))
        print(_csv(ev, cols), end="")
    return EXIT_OK


def cmd_minsize(args) -> int:
    _warn_force(args)
    best, witness = min_size_set(args.m, args.n_max, force=args.force)
    path = witness.save(_out_dir(args) / f"minsize_m{args.m}_n{args.n_max}.json")
    print(_csv([{"m": args.m, "n_max": args.n_max, "best": best, "witness_path": str(path)}],
               ["m", "n_max", "best", "witness_path"]), end="")
    return EXIT_OK


def cmd_check_witness(args) -> int:
    data = json.loads(Path(args.path).read_text())
    if "k" not in data:
        G = SimpleGraph.from_dict(data)
        S = sorted(induced_size_set(G))
        print(f"graph v={G.v} m={G.m} |S|={len(S)} S={S}")
        return EXIT_OK
    try:
        delta = TemplateColouring.from_dict(data)
    except ValidationError as exc:
        print(f"invalid witness: {exc}", file=sys.stderr)
        return EXIT_USAGE
    F = f_set(delta)
    problems = check_laws(F)
    print(f"F = {F.sorted()} (|F| = {len(F)}, k = {F.k})")
    for law, detail in problems:
        print(f"violation {law}: {detail}")
    return EXIT_VIOLATION if problems else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (default $SPECTRA_OUT or ./spectra-out)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--force", action="store_true", help="override desk-scale guards")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="spectra", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("psi", parents=[common], help="template-class minimum of |F|")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--t-max", type=int, required=True)
    s.set_defaults(func=cmd_psi)

    s = sub.add_parser("fset", parents=[common], help="F-set of a template colouring")
    _add_template_source(s)
    s.set_defaults(func=cmd_fset)

    s = sub.add_parser("gset", parents=[common], help="G-set prefix of a built-in lazy colouring")
    s.add_argument("--colouring", default="injective")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_gset)

    s = sub.add_parser("laws", parents=[common], help="check the F-set laws exhaustively")
    s.add_argument("--t-max", type=int, required=True)
    s.add_argument("--k-max", type=int, required=True)
    s.set_defaults(func=cmd_laws)

    s = sub.add_parser("homog", parents=[common], help="build an n-homogeneous tuple")
    _add_template_source(s)
    s.add_argument("--n", type=int)
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_homog)

    for name, func in (("weak-homog", cmd_weak_homog), ("canonical-check", cmd_canonical_check)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--colouring", default="injective")
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--bound", type=int, required=True)
        if name == "weak-homog":
            s.add_argument("--trace", action="store_true")
        s.set_defaults(func=func)

    s = sub.add_parser("sieve", help="divisor statistics")
    ss = s.add_subparsers(dest="sieve", required=True)
    h = ss.add_parser("h", parents=[common])
    h.add_argument("--x", required=True)
    h.add_argument("--y", required=True)
    h.add_argument("--z", required=True)
    mt = ss.add_parser("multtable", parents=[common])
    mt.add_argument("--n", type=int, required=True)
    d = ss.add_parser("density", parents=[common])
    d.add_argument("--x", type=int, required=True)
    ev = ss.add_parser("evidence", parents=[common])
    ev.add_argument("--k-lo", type=int, default=16)
    ev.add_argument("--k-hi", type=int, default=10 ** 6)
    ev.add_argument("--points", type=int, default=13)
    s.set_defaults(func=cmd_sieve)

    s = sub.add_parser("minsize", parents=[common], help="least induced-size set for m edges")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.set_defaults(func=cmd_minsize)

    s = sub.add_parser("check-witness", parents=[common], help="re-check a witness file")
    s.add_argument("path")
    s.set_defaults(func=cmd_check_witness)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.workers < 1:
        print("--workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (SpectraError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
