"""Command-line front end."""

from __future__ import annotations

import argparse
import inspect
import json
import logging
import sys
from pathlib import Path

import numpy as np

from ..expose import ExposeConfig, classify_exposedness
from ..funcat import CATALOG, BandlimitedFunction, CatalogError, evaluate, make_catalog, normalize
from ..zeros import real_zeros
from .experiments import ExperimentSpec, parse_number, run_experiment
from .reports import emit_report, report_from_dict, to_json

log = logging.getLogger("bernstein_lab")


def parse_params(items) -> dict:
    """Accept one JSON object or key=value pairs (values may use pi and lists)."""
    if not items:
        return {}
    text = " ".join(items).strip()
    if text.startswith("{"):
        return json.loads(text)
    out = {}
    for item in text.replace(";", " ").split():
        key, sep, value = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected key=value, got {item!r}")
        try:
            out[key] = parse_number(value)
        except (ValueError, SyntaxError):
            out[key] = value
    return out


def build(name: str, params: dict) -> BandlimitedFunction:
    params = dict(params)
    if name == "prop35_term" and isinstance(params.get("f"), str):
        params["f"] = normalize(make_catalog(params["f"]))
    return make_catalog(name, params)


def _pair(text: str):
    parts = [parse_number(t) for t in text.split(",")]
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


def cmd_catalog(args) -> int:
    for name, fn in sorted(CATALOG.items()):
        sig = ", ".join(f"{p.name}={p.default!r}" if p.default is not p.empty else p.name
                        for p in inspect.signature(fn).parameters.values())
        print(f"{name}({sig})")
    return 0


def cmd_eval(args) -> int:
    f = build(args.name, parse_params(args.params))
    if args.normalize:
        f = normalize(f)
    for re_, im in args.at or [(0.0, 0.0)]:
        v = complex(evaluate(f, complex(re_, im)))
        print(f"{re_:.15g},{im:.15g}\t{v.real:.15g}\t{v.imag:.15g}")
    return 0


def cmd_zeros(args) -> int:
    f = build(args.name, parse_params(args.params))
    lo, hi = args.window
    zs = real_zeros(f, (lo, hi))
    print("re\tim\tmultiplicity\tresidual")
    for z in zs.zeros:
        print(f"{z.location.real:.15g}\t{z.location.imag:.15g}\t{z.multiplicity}\t{z.residual:.3g}")
    if len(zs.real_locations) >= 2:
        print(f"# min real gap {zs.min_real_gap:.15g}")
    return 0


def cmd_classify(args) -> int:
    f = normalize(build(args.name, parse_params(args.params)))
    rep = classify_exposedness(f, cfg=ExposeConfig())
    print(json.dumps(json.loads(json.dumps(rep.to_dict(), default=str)), indent=2, sort_keys=True))
    return 0


def _summary(report) -> None:
    for a in report.assertions:
        mark = "PASS" if a.passed else "FAIL"
        print(f"{mark}  {a.description}: observed {a.observed!r}, expected {a.expected!r}, tol {a.tolerance:g}")
    print(f"{report.spec['name']}: {'all assertions pass' if report.passed else 'FAILED'}")


def _load_spec(path) -> ExperimentSpec:
    return ExperimentSpec.from_dict(json.loads(Path(path).read_text()))


def cmd_experiment(args) -> int:
    report = run_experiment(_load_spec(args.spec_file))
    _summary(report)
    if args.out:
        for p in emit_report(report, args.out, args.format, timestamp=not args.no_timestamp):
            print(f"wrote {p}")
    return 0 if report.passed else 1


def cmd_report(args) -> int:
    if args.input:
        report = report_from_dict(json.loads(Path(args.input).read_text()))
    else:
        report = run_experiment(_load_spec(args.spec))
    if args.out:
        for p in emit_report(report, args.out, args.format, timestamp=not args.no_timestamp):
            print(f"wrote {p}")
    elif args.format == "json":
        sys.stdout.write(to_json(report, timestamp=not args.no_timestamp))
    else:
        raise SystemExit("--format csv needs --out")
    return 0 if report.passed else 1


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bernstein-lab", description="Exposed points of the Bernstein space unit ball: "
                                 "catalog, zeros, classification and experiments.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="catalog operations")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("eval", help="evaluate a catalog function")
    p.add_argument("name")
    p.add_argument("--params", nargs="*", help="JSON object or key=value pairs")
    p.add_argument("--at", type=_pair, action="append", help="point re,im (repeatable)")
    p.add_argument("--normalize", action="store_true", help="normalize to unit L1 norm first")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("zeros", help="real zeros in a window")
    p.add_argument("name")
    p.add_argument("--params", nargs="*")
    p.add_argument("--window", type=_pair, required=True, help="a,b")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("classify", help="exposedness checks for a normalized catalog function")
    p.add_argument("name")
    p.add_argument("--params", nargs="*")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("experiment", help="run an experiment spec")
    p.add_argument("action", choices=["run"])
    p.add_argument("spec_file")
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("report", help="emit a report from a spec or a saved JSON report")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="saved JSON report")
    src.add_argument("--spec", help="experiment spec to run")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CatalogError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
