"""``limitlab`` command line.  Exit codes: 0 pass, 1 verification failure, 2 config error."""

import argparse
import csv
import io
import json
import sys

from ..grassloc import PreconditionError
from ..kernels.series import fmt_coeff
from ..plethysm import PoleError
from .experiments import ConfigError, ExperimentConfig, run
from .parse import ParseError, parse_symfn

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def to_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _flat(value):
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return value


def to_csv(report):
    """Per-m rows (or a single summary row) as CSV."""
    rows = report.get("rows")
    if rows is None:
        rows = [{k: v for k, v in report.items() if not isinstance(v, (dict, list))}]
    cols = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _flat(r.get(k, "")) for k in cols})
    return buf.getvalue()


def to_text(report):
    lines = [f"{report.get('experiment', 'report')}: {report.get('verdict', '?')}"]
    for key in ("caps", "conditions"):
        if key in report:
            lines.append(f"  {key}: {_flat(report[key])}")
    for r in report.get("rows", []):
        lines.append("  " + "  ".join(f"{k}={_flat(v)}" for k, v in sorted(r.items())))
    for key in ("equal", "agreement_degree", "nondecreasing", "increasing_until_cap", "reaches_cap"):
        if key in report:
            lines.append(f"  {key}: {report[key]}")
    for key in ("rhs", "lhs", "chi", "chi0", "gap"):
        if key in report:
            s = report[key]
            lines.append(f"  {key}: {s['nterms']} terms, digest {s['digest']}: {_flat(s['terms'])}")
    for wmsg in report.get("warnings", []):
        lines.append(f"  warning: {wmsg}")
    for name, suite in sorted(report.get("suites", {}).items()):
        lines.append(f"  {name}: {'pass' if suite['pass'] else 'FAIL'} ({suite['checks']} checks)")
    if "note" in report:
        lines.append(f"  note: {report['note']}")
    return "\n".join(lines) + "\n"


FORMATS = {"json": to_json, "csv": to_csv, "text": to_text}


def _common(p, *, mu=False, m_range=True):
    p.add_argument("--n", type=int, default=2, help="number of variables")
    if mu:
        p.add_argument("--mu", default="", help="partition, e.g. 2,1")
    if m_range:
        p.add_argument("--m-from", type=int, default=0)
        p.add_argument("--m-to", type=int, default=4)
        p.add_argument("--m-step", type=int, default=1)
    p.add_argument("--zdeg", type=int, default=16, help="z-degree cap")
    p.add_argument("--qtdeg", type=int, default=8, help="total q,t-degree cap")
    p.add_argument("--wdeg", type=int, default=4, help="w-degree cap")
    p.add_argument("--format", choices=sorted(FORMATS), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="add wall times (breaks byte-identical output)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent m values")


def build_parser():
    ap = argparse.ArgumentParser(prog="limitlab", description="Truncated-series experiments.")
    sub = ap.add_subparsers(dest="kind", required=True)

    p = sub.add_parser("theorem1", help="large-twist limit of the Omega pairing")
    _common(p)
    p.add_argument("--kernel", default="poly: 1-z", help="'hall' or 'poly: <z-polynomial>'")
    p.add_argument("--f", default="1", help="symmetric function, e.g. e[1]")

    p = sub.add_parser("norm-ns", help="finite-variable norm formula")
    _common(p, mu=True, m_range=False)

    p = sub.add_parser("norm-nsa", help="norm as a large-twist limit")
    _common(p, mu=True)

    for name, hlp in (("chi-gap", "growth of the chi - chi0 gap"), ("chi", "one chi evaluation")):
        p = sub.add_parser(name, help=hlp)
        _common(p, m_range=(name == "chi-gap"))
        p.add_argument("--Z", default="k=3", help="'k=<int>' or a z-character")
        p.add_argument("--E", default="", help="e.g. 'A=0;B=geom;C=-z'")
        p.add_argument("--f", default="1")
        if name == "chi":
            p.add_argument("--m", type=int, default=0)
            p.add_argument("--mode", choices=("loc", "ct", "gap"), default="gap")

    p = sub.add_parser("selftest", help="invariant suites of every module")
    p.add_argument("--zdeg", type=int, default=8)
    p.add_argument("--format", choices=sorted(FORMATS), default="text")
    p.add_argument("--out")

    p = sub.add_parser("macdonald", help="print a symmetric function in another basis")
    p.add_argument("expr", help="e.g. 'P[2,1]'")
    p.add_argument("--basis", default="m", choices=("m", "e", "h", "p", "P"))
    p.add_argument("--nvars", type=int, help="drop terms with more than this many parts")
    p.add_argument("--exact", action="store_true", help="print exact coefficients (default)")
    p.add_argument("--format", choices=sorted(FORMATS), default="text")
    p.add_argument("--out")
    return ap


def _config(args):
    fields = {k: v for k, v in vars(args).items() if k not in ("format", "out")}
    fields = {k: v for k, v in fields.items() if v is not None}
    return ExperimentConfig(**fields)


def _macdonald(args):
    f = parse_symfn(args.expr).to(args.basis)
    coeffs = {lam: c for lam, c in f.coeffs.items() if args.nvars is None or len(lam) <= args.nvars}
    terms = [[list(lam), fmt_coeff(c)] for lam, c in sorted(coeffs.items(), key=lambda kv: tuple(kv[0]))]
    return {"experiment": "macdonald", "expr": args.expr, "basis": args.basis,
            "nvars": args.nvars, "terms": terms, "verdict": "pass"}


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.kind == "macdonald":
            report = _macdonald(args)
            if args.format == "text":
                _emit("".join(f"{c} * {args.basis}{lam}\n" for lam, c in report["terms"]) or "0\n", args.out)
                return EXIT_PASS
        else:
            report = run(_config(args).validate())
    except (ConfigError, PreconditionError, ParseError, PoleError, ValueError) as exc:
        print(f"limitlab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(FORMATS[args.format](report), args.out)
    verdict = report.get("verdict")
    if verdict == "pass":
        return EXIT_PASS
    if verdict == "precondition":
        return EXIT_CONFIG
    return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
