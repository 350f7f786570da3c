"""Command-line front end: ``saito-hodge {catalog,basis,verify,decompose,relations}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .catalog import BUILTIN_NAMES, builtin, dump_datum, get_datum
from .errors import SaitoHodgeError
from .expr import format_value, parse_value
from .hodge import hodge_decompose
from .logmodules import eta_basis, omega_basis
from .report import to_jsonable
from .verify import build_checks, run_checks, run_suite


def _print_record(rec) -> None:
    status = "PASS" if rec.passed else "FAIL"
    line = f"{status}  {rec.check_id}"
    if not rec.passed:
        line += f"  -- {rec.certificate.get('message', '')}"
    print(line, flush=True)


def _finish(report, args) -> int:
    text = report.to_json(timings=getattr(args, "timings", False))
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    summary = f"{sum(r.passed for r in report.records)}/{len(report.records)} checks passed"
    print(summary)
    bad = report.first_failure()
    if bad is not None:
        print(f"first failing check: {bad.check_id}", file=sys.stderr)
        return 1
    return 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in BUILTIN_NAMES:
            d = builtin(name)
            print(f"{name}  rank={d.rank}  degrees={list(d.degrees)}  |A|={len(d.hyperplanes)}  h={d.coxeter_number}")
        return 0
    if not args.name:
        print("catalog show needs a datum name or file", file=sys.stderr)
        return 2
    sys.stdout.write(dump_datum(get_datum(args.name)))
    return 0


def cmd_basis(args) -> int:
    datum = get_datum(args.datum)
    names = datum.var_names
    omegas = omega_basis(args.m, datum)
    etas = eta_basis(args.m, datum)
    if args.format == "json":
        doc = {
            "datum": {"name": datum.name, "sha256": datum.fingerprint},
            "m": args.m,
            "variables": list(names),
            "omega": [to_jsonable(w, names) for w in omegas],
            "eta": [to_jsonable(t, names) for t in etas],
        }
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
        return 0
    for j, w in enumerate(omegas, 1):
        print(f"omega_{j}^({args.m}) = {format_value(w, datum)}")
    for j, t in enumerate(etas, 1):
        print(f"eta_{j}^({args.m}) = {format_value(t, datum)}")
    return 0


def cmd_verify(args) -> int:
    datum = get_datum(args.datum)
    report = run_suite(datum, args.k_min, args.k_max, args.seed, args.threads,
                       progress=None if args.quiet else _print_record)
    return _finish(report, args)


def cmd_relations(args) -> int:
    datum = get_datum(args.datum)
    checks = build_checks(datum, 0, args.k, args.seed, relations_only=True)
    report = run_checks(datum, checks, args.seed, {"k_max": args.k}, args.threads,
                        progress=None if args.quiet else _print_record)
    return _finish(report, args)


def cmd_decompose(args) -> int:
    datum = get_datum(args.datum)
    if args.form:
        text = Path(args.form).read_text(encoding="utf-8")
    elif args.expr:
        text = args.expr
    else:
        print("decompose needs --form FILE or --expr TEXT", file=sys.stderr)
        return 2
    value = parse_value(text, datum)
    dec = hodge_decompose(value)
    levels = dec.as_strings()
    if args.format == "json":
        doc = {
            "datum": {"name": datum.name, "sha256": datum.fingerprint},
            "kind": dec.kind,
            "input": format_value(value, datum),
            "levels": {str(k): v for k, v in levels.items()},
            "residual_zero": dec.residual.is_zero(),
        }
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        frame = "omega^(2k+1)" if dec.kind == "form" else "eta^(2k-1)"
        print(f"frame at level k: {frame}")
        for k, coeffs in levels.items():
            print(f"level {k}: [{', '.join(coeffs)}]")
        print(f"residual: {'0' if dec.residual.is_zero() else format_value(dec.residual, datum)}")
    return 0 if dec.residual.is_zero() else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="saito-hodge", description="Exact computations with logarithmic forms "
                                "and derivations of Coxeter arrangements.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list or print built-in data")
    c.add_argument("action", choices=["list", "show"])
    c.add_argument("name", nargs="?")
    c.set_defaults(func=cmd_catalog)

    def datum_arg(sp):
        sp.add_argument("--datum", required=True, help="built-in name or path to a datum file")

    def run_args(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=None, help="defaults to $SAITO_HODGE_THREADS or 1")
        sp.add_argument("--out", help="write the JSON report here")
        sp.add_argument("--timings", action="store_true", help="include wall times in the report")
        sp.add_argument("--quiet", action="store_true")

    b = sub.add_parser("basis", help="print omega^(m) and eta^(m)")
    datum_arg(b)
    b.add_argument("-m", type=int, required=True)
    b.add_argument("--format", choices=["text", "json"], default="text")
    b.set_defaults(func=cmd_basis)

    v = sub.add_parser("verify", help="run the verification suite")
    datum_arg(v)
    v.add_argument("--k-min", type=int, default=-2)
    v.add_argument("--k-max", type=int, default=2)
    run_args(v)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", help="decompose an invariant logarithmic form or derivation")
    datum_arg(d)
    d.add_argument("--form", help="file holding one expression")
    d.add_argument("--expr", help="the expression itself")
    d.add_argument("--format", choices=["text", "json"], default="text")
    d.set_defaults(func=cmd_decompose)

    r = sub.add_parser("relations", help="check the xi / covariant-derivative basis relations for k = 0..K")
    datum_arg(r)
    r.add_argument("--k", type=int, required=True)
    run_args(r)
    r.set_defaults(func=cmd_relations)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SaitoHodgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
