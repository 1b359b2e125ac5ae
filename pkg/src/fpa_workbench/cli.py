"""Command-line entry point: fpa-workbench <subcommand> --m M [options].

Every subcommand prints a short summary on stdout.  With ``--output`` the
requested format is written to that file; without it, json and csv go to
stdout in place of the summary.  Exit status is nonzero on any failed
check.
"""

import argparse
import csv
import io
import json
import sys

from . import acceptance, fpa, lattice, resolution, series, treebuilder


class CliError(Exception):
    pass


def _positive_m(text):
    m = int(text)
    if m < 1:
        raise argparse.ArgumentTypeError(f"m must be >= 1, got {m}")
    return m


def _nonneg(text):
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {n}")
    return n


def _csv_text(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json_text(data):
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# subcommands: each returns (exit code, summary lines, {format: text}) ----

def cmd_pip(args):
    s = lattice.delta2(args.m)
    pts = lattice.enumerate_pip(s)
    rays, gens = lattice.hilbert_basis(s)
    summary = [f"delta2({args.m}): normalized volume {lattice.normalized_volume(s)}, "
               f"{len(pts)} parallelepiped points, {len(gens)} parallelepiped generators"]
    summary += [f"  {p.coords}" for p in pts] if args.format == "text" else []
    rows = [["index", "height", "coords", "generator"]]
    gset = set(gens)
    for i, p in enumerate(pts):
        rows.append([i, p.height, ":".join(map(str, p.coords)), int(p in gset)])
    code = 0 if len(pts) == lattice.normalized_volume(s) else 1
    return code, summary, {"json": _json_text(lattice.pip_to_json(s)), "csv": _csv_text(rows)}


def cmd_algebra(args):
    pres = fpa.build_presented(args.m)
    semi = fpa.build_fpa_from_simplex(lattice.delta2(args.m))
    cert = fpa.compare_algebras(pres, semi, args.m)
    hs = fpa.hilbert_series(pres)
    bad = fpa.check_axioms(pres) + fpa.check_axioms(semi)
    ok = cert.ok and not bad and hs == fpa.hilbert_series(semi)
    summary = [f"dim {pres.dim} (presented) / {semi.dim} (semigroup)",
               f"hilbert series {hs}",
               "isomorphism: " + ("OK" if cert.ok else f"FAILED ({cert.reason})")]
    if bad:
        summary.append(f"axiom violations: {bad[0]} (+{len(bad) - 1} more)")
    data = {"presented": pres.to_json(), "semigroup": semi.to_json(), "hilbert_series": hs,
            "isomorphism": {"ok": cert.ok, "reason": cert.reason,
                            "bijection": [[fpa.label_str(pres.labels[i]), list(semi.labels[j])]
                                          for i, j in sorted(cert.bijection.items())]}}
    rows = [["basis", "height", "multidegree", "image"]]
    for i, lbl in enumerate(pres.labels):
        img = cert.bijection.get(i)
        rows.append([fpa.label_str(lbl), pres.n_degree[i], ":".join(map(str, pres.multidegree[i])),
                     "" if img is None else ":".join(map(str, semi.labels[img]))])
    return (0 if ok else 1), summary, {"json": _json_text(data), "csv": _csv_text(rows)}


def _engines(args):
    if args.engine in ("symbolic", "both") and args.m < 2:
        raise CliError("the symbolic engine needs m >= 2")
    out = []
    alg = fpa.build_presented(args.m)
    if args.engine in ("bruteforce", "both"):
        out.append(("bruteforce", resolution.resolve(alg, args.steps, args.workers)))
    if args.engine in ("symbolic", "both"):
        out.append(("symbolic", treebuilder.build_symbolic_resolution(args.m, args.steps, alg)))
    return out


def cmd_resolve(args):
    runs = _engines(args)
    summary, code = [], 0
    for name, res in runs:
        line = ",".join(map(str, res.betti_sequence()))
        summary.append(line if len(runs) == 1 else f"{name}: {line}")
    if len(runs) == 2 and runs[0][1].betti() != runs[1][1].betti():
        code = 1
        summary.append("MISMATCH: multigraded betti tables differ between engines")
    data = {name: resolution.resolution_to_json(res) for name, res in runs}
    rows = []
    for name, res in runs:
        body = resolution.betti_csv_rows(res)
        rows += [["engine"] + body[0]] + [[name] + r for r in body[1:]]
    return code, summary, {"json": _json_text(data), "csv": _csv_text(rows)}


def cmd_poincare(args):
    m, n = args.m, args.order
    coarse = series.coarse_poincare(m)
    expansion = series.series_expand(coarse, n).univariate("z")
    expansion = [int(c) for c in (expansion + [0] * (n + 1))[:n + 1]]
    ehr = series.ehrhart_poincare(m)
    data = {"m": m, "order": n,
            "specialized": {"numerator": [int(c) for c in coarse.numerator.univariate("z")],
                            "denominator": [int(c) for c in coarse.denominator.univariate("z")],
                            "expansion": expansion},
            "ehrhart_ring": {"numerator": [int(c) for c in ehr.numerator.univariate("z")],
                             "denominator": [int(c) for c in ehr.denominator.univariate("z")]}}
    summary = [f"specialized: {series.pretty(coarse.numerator, m)} / {series.pretty(coarse.denominator, m)}",
               "expansion: " + ",".join(map(str, expansion))]
    if m >= 2:
        raw = series.specialize(series.poincare_rational(m))
        data["specialized"]["raw"] = {"numerator": [int(c) for c in raw.numerator.univariate("z")],
                                      "denominator": [int(c) for c in raw.denominator.univariate("z")]}
    if args.fine:
        if m < 2:
            raise CliError("the fine-graded rational form needs m >= 2")
        r = series.poincare_rational(m)
        chi_formula = series.chi_closed_form(m)
        display = series.fixed_power_denominator(m)
        data["fine"] = {
            "variables": list(r.numerator.names),
            "numerator": r.numerator.to_json(), "numerator_terms": len(r.numerator),
            "denominator": r.denominator.to_json(), "denominator_terms": len(r.denominator),
            "pretty": {"numerator": series.pretty(r.numerator, m),
                       "denominator": series.pretty(r.denominator, m)},
            "closed_form_matches": r.denominator == chi_formula,
            "fixed_power_form_matches": r.denominator == display,
            "expansion": series.series_expand(r, n).to_json(),
        }
        summary.append(f"fine: ({data['fine']['pretty']['numerator']}) / ({data['fine']['pretty']['denominator']})")
    rows = [["k", "coefficient"]] + [[k, c] for k, c in enumerate(expansion)]
    return 0, summary, {"json": _json_text(data), "csv": _csv_text(rows)}


def cmd_koszul(args):
    hs = fpa.hilbert_series(fpa.build_presented(args.m))
    rep = series.koszul_check(hs, series.coarse_poincare(args.m), args.order)
    data = {"m": args.m, "hilbert_series": hs, "koszul": rep.koszul, "order": rep.order,
            "failing_order": rep.failing_order, "product": [int(c) for c in rep.product]}
    rows = [["k", "coefficient"]] + [[k, int(c)] for k, c in enumerate(rep.product)]
    # the report itself is the result; a failing functional equation is not an error
    return 0, [rep.summary()], {"json": _json_text(data), "csv": _csv_text(rows)}


def cmd_verify(args):
    results = acceptance.run_all(seed=args.seed, workers=args.workers)
    summary = [r.line() for r in results]
    # checks for the requested m on top of the fixed suite
    alg = fpa.build_presented(args.m)
    extra = [("bruteforce", resolution.resolve(alg, args.steps, args.workers))]
    if args.m >= 2:
        extra.append(("symbolic", treebuilder.build_symbolic_resolution(args.m, args.steps, alg)))
    local = []
    for name, res in extra:
        rep = resolution.verify_resolution(res)
        local.append((name, rep))
        summary.append(f"m={args.m} {name} to degree {args.steps}: {rep.summary()}")
    failed = [r.line() for r in results if not r.ok]
    failed += [f"m={args.m} {n}: {rep.first_failure}" for n, rep in local if not rep.ok]
    if failed:
        summary.append("FIRST FAILURE: " + failed[0])
    data = {"criteria": [{"number": r.number, "name": r.name, "ok": r.ok, "detail": r.detail}
                         for r in results],
            "resolutions": {n: {"ok": rep.ok, "failures": rep.failures} for n, rep in local}}
    rows = [["criterion", "name", "ok", "detail"]] + [[r.number, r.name, int(r.ok), r.detail] for r in results]
    return (1 if failed else 0), summary, {"json": _json_text(data), "csv": _csv_text(rows)}


COMMANDS = {
    "pip": (cmd_pip, "enumerate the fundamental parallelepiped and Hilbert basis"),
    "algebra": (cmd_algebra, "build both algebra constructions and compare them"),
    "resolve": (cmd_resolve, "betti tables from the resolution engines"),
    "poincare": (cmd_poincare, "rational Poincare series, fine and specialized"),
    "verify": (cmd_verify, "run the acceptance suite and resolution checks"),
    "koszul": (cmd_koszul, "check the Koszul functional equation"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="fpa-workbench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--m", type=_positive_m, required=True)
        p.add_argument("--format", choices=("json", "csv", "text"),
                       default="json" if name == "poincare" else "text")
        p.add_argument("--output", help="write the formatted result here")
        p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
        p.add_argument("--workers", type=int, default=1)
        if name in ("resolve", "verify"):
            p.add_argument("--steps", type=_nonneg, default=4 if name == "resolve" else 5)
        if name == "resolve":
            p.add_argument("--engine", choices=("bruteforce", "symbolic", "both"), default="bruteforce")
        if name in ("poincare", "koszul"):
            p.add_argument("--order", type=_nonneg, default=10)
        if name == "poincare":
            p.add_argument("--fine", action="store_true", help="include the multigraded form")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return 2
    try:
        code, summary, rendered = COMMANDS[args.command][0](args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = "\n".join(summary) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(rendered.get(args.format, text))
        sys.stdout.write(text)
    elif args.format == "text":
        sys.stdout.write(text)
    else:
        sys.stderr.write(text)
        sys.stdout.write(rendered[args.format])
    return code


if __name__ == "__main__":
    sys.exit(main())
