"""Command-line interface.

Subcommands::

    momaps analyze GRAPH.json        per-graph structural report
    momaps enumerate                 stratified count tables (CSV/JSON)
    momaps catalog                   build a reduced-scheme catalog
    momaps series                    coefficient tables per degree
    momaps dominant                  dominant schemes of a degree
    momaps verify                    run the verification suite

Degrees and sizes cross the CLI as doubled integers (``--two-delta``,
vertex counts).  Exit codes: 0 success, 1 verification/check failure,
2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

from .canonical import canonical_rooted
from .errors import MomapsError, ParseError, UnstabilizedCatalog
from .graph import degree, dumps, knot_profile, load, trace_faces
from .reduction import (
    extract_scheme,
    find_dipoles,
    find_maximal_chains,
    find_melons,
    is_melon_free,
    scheme_degree,
    scheme_to_json_dict,
)


def _positive(value):
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser():
    p = argparse.ArgumentParser(
        prog="momaps",
        description="Combinatorics of multi-orientable tensor graphs: "
                    "enumeration, reduction to schemes, and exact "
                    "counting series.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *flags):
        if "out" in flags:
            sp.add_argument("--out", help="write output to this path "
                                          "instead of stdout")
        if "format" in flags:
            sp.add_argument("--format", choices=("json", "csv"),
                            default="csv", help="output format")
        if "max-vertices" in flags:
            sp.add_argument("--max-vertices", type=_positive, default=8,
                            help="vertex-count cap")
        if "two-delta" in flags:
            sp.add_argument("--two-delta", type=_positive, required=True,
                            help="doubled degree (2δ)")
        if "order" in flags:
            sp.add_argument("--order", type=_positive, default=40,
                            help="series truncation order (vertex index)")

    sp = sub.add_parser("analyze", help="report on one graph file")
    sp.add_argument("path", help="JSON graph file")
    common(sp, "out")

    sp = sub.add_parser("enumerate", help="stratified count tables")
    common(sp, "max-vertices", "format", "out")
    sp.add_argument("--planar", action="store_true",
                    help="count planar graphs only")
    sp.add_argument("--melon-free", action="store_true",
                    help="count melon-free graphs only")
    sp.add_argument("--two-delta-max", type=_positive, default=None,
                    help="cap the doubled degree")

    sp = sub.add_parser("catalog", help="build a reduced-scheme catalog")
    common(sp, "two-delta", "format", "out")
    sp.add_argument("--max-vertices", type=_positive, default=10,
                    help="substitution-scan vertex cap")
    sp.add_argument("--bmax-vertices", type=_positive, default=None,
                    help="vertex cap of the maximally-broken direct scan")

    sp = sub.add_parser("series", help="counting-series coefficients")
    common(sp, "two-delta", "order", "format", "out")
    sp.add_argument("--max-vertices", type=_positive, default=10,
                    help="catalog substitution-scan cap")
    sp.add_argument("--asymptotics", action="store_true",
                    help="append the fitted asymptotic report")

    sp = sub.add_parser("dominant", help="dominant schemes of a degree")
    common(sp, "two-delta", "out")

    sp = sub.add_parser("verify", help="run the verification suite")
    common(sp, "out")
    sp.add_argument("--checks", nargs="*", default=None,
                    help="subset of check names to run")
    sp.add_argument("--shallow", action="store_true",
                    help="skip the slow deep catalog scan (the "
                         "degree-3/2 dominant membership check is "
                         "then reported as skipped)")
    return p


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args):
    g = load(args.path)
    rep = degree(g)
    faces = trace_faces(g)
    melons = find_melons(g)
    dipoles = find_dipoles(g)
    chains = find_maximal_chains(g)
    doc = {
        "vertices": g.num_vertices,
        "edges": 2 * g.num_vertices + g.cycle_components,
        "faces": {"left": rep.f_left, "right": rep.f_right,
                  "straight": rep.f_straight, "total": rep.f},
        "two_delta": rep.two_delta,
        "genera": [{"two_g_lr": c.two_g_lr, "two_g_ls": c.two_g_ls,
                    "two_g_rs": c.two_g_rs} for c in rep.components],
        "lambda": [c.lam for c in rep.components],
        "planar": rep.is_planar,
        "straight_face_lengths": list(rep.straight_lengths),
        "melon_free": is_melon_free(g),
        "melons": len(melons),
        "dipoles": len(dipoles),
        "chains": [ch.type_sequence for ch in chains],
    }
    if rep.is_planar and rep.c == 1:
        v, fs, _ = knot_profile(g)
        doc["knot_components"] = fs
    if is_melon_free(g):
        s = extract_scheme(g)
        doc["scheme"] = scheme_to_json_dict(s)
        if g.root is not None or g.root_on_cycle:
            doc["scheme_code"] = repr(canonical_rooted(s))
        else:
            from .canonical import canonical_unrooted
            doc["scheme_code"] = repr(canonical_unrooted(s))
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_enumerate(args):
    from .enumerate import count_by_degree
    table = count_by_degree(args.max_vertices,
                            two_delta_max=args.two_delta_max,
                            melon_free=args.melon_free)
    if args.planar:
        rows = {k: (p, p) for k, (_, p) in table.rows.items() if p}
        table.rows = rows
    if args.format == "csv":
        _emit(table.to_csv(), args.out)
    else:
        doc = {"max_vertices": table.max_vertices,
               "melon_free": table.melon_free,
               "rows": [{"two_n": v, "two_delta": td, "count": c,
                         "planar_count": p}
                        for (v, td), (c, p) in sorted(table.rows.items())],
               "knots": [{"two_n": v, "k": k, "count": c}
                         for (v, k), c in sorted(table.knots.items())]}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _catalog(args):
    from .enumerate import build_scheme_catalog
    return build_scheme_catalog(args.two_delta,
                                max_vertices=args.max_vertices,
                                bmax_vertices=getattr(
                                    args, "bmax_vertices", None))


def cmd_catalog(args):
    cat = _catalog(args)
    if args.format == "csv":
        lines = ["two_p,c_l,c_r,s_e,s_o,b,min_vertices"]
        for p in cat.params():
            lines.append(f"{p.two_p},{p.c_l},{p.c_r},{p.s_e},{p.s_o},"
                         f"{p.b},{p.min_vertices}")
        body = "\n".join(lines) + "\n"
    else:
        doc = {"two_delta": cat.two_delta,
               "size": len(cat),
               "max_vertices_scanned": cat.max_vertices_scanned,
               "bmax_vertices_scanned": cat.bmax_vertices_scanned,
               "last_growth_at": cat.last_growth_at,
               "stabilized": cat.stabilized,
               "certified_order": cat.certified_order,
               "schemes": [scheme_to_json_dict(s) for s in cat.schemes()]}
        body = json.dumps(doc, indent=2) + "\n"
    _emit(body, args.out)
    print(f"catalog 2δ={cat.two_delta}: {len(cat)} schemes, "
          f"scan ≤ {cat.max_vertices_scanned} vertices, last growth at "
          f"{cat.last_growth_at}, stabilized={cat.stabilized}",
          file=sys.stderr)
    return 0


def cmd_series(args):
    from .series import asymptotic_check, degree_gf, melonic_T
    if args.two_delta == 0:
        f = melonic_T(args.order)
        stab_note = "closed form T = 1 + z T^4"
    else:
        cat = _catalog(args)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", UnstabilizedCatalog)
            f = degree_gf(cat, args.order)
        stab_note = (str(caught[0].message) if caught
                     else f"catalog stabilized ({len(cat)} schemes)")
    if args.format == "csv":
        lines = ["two_n,coefficient"]
        start = 0 if args.two_delta == 0 else 1
        for k in range(start, args.order + 1):
            lines.append(f"{k},{f[k]}")
        body = "\n".join(lines) + "\n"
        if args.asymptotics and args.two_delta > 0:
            rep = asymptotic_check(args.two_delta, f)
            body += "n,ratio,fitted_rate,fitted_exponent\n"
            for two_n, r in rep.ratios:
                body += (f"{two_n / 2},{r:.8f},{rep.fitted_rate:.8f},"
                         f"{rep.fitted_exponent:.6f}\n")
    else:
        doc = {"two_delta": args.two_delta, "order": args.order,
               "coefficients": [int(f[k]) for k in range(args.order + 1)],
               "note": stab_note}
        if args.asymptotics and args.two_delta > 0:
            rep = asymptotic_check(args.two_delta, f)
            doc["asymptotics"] = {
                "fitted_rate": rep.fitted_rate,
                "fitted_exponent": rep.fitted_exponent,
                "predicted_rate": 256.0 / 27.0,
                "predicted_exponent": args.two_delta - 1.5,
                "ratios": [[k, r] for k, r in rep.ratios[-10:]],
                "parity_ratios": [[k, r]
                                  for k, r in rep.parity_ratios[-10:]],
            }
        body = json.dumps(doc, indent=2) + "\n"
    _emit(body, args.out)
    print(stab_note, file=sys.stderr)
    return 0


def cmd_dominant(args):
    from .enumerate import gen_dominant_schemes
    schemes = list(gen_dominant_schemes(args.two_delta))
    lines = [json.dumps(scheme_to_json_dict(s)) for s in schemes]
    _emit("\n".join(lines) + "\n", args.out)
    print(f"{len(schemes)} dominant schemes of doubled degree "
          f"{args.two_delta}", file=sys.stderr)
    return 0


def cmd_verify(args):
    from .verify import VerificationContext, run_checks
    ctx = VerificationContext(deep_catalog=not args.shallow)
    lines = []

    def report(line):
        print(line)
        lines.append(line)

    results = run_checks(args.checks, ctx=ctx, report=report)
    failed = [r for r in results if not r.passed]
    if args.out:
        doc = [{"name": r.name, "passed": r.passed, "detail": r.detail}
               for r in results]
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


_COMMANDS = {
    "analyze": cmd_analyze,
    "enumerate": cmd_enumerate,
    "catalog": cmd_catalog,
    "series": cmd_series,
    "dominant": cmd_dominant,
    "verify": cmd_verify,
}


def main(argv=None):
    # MOMAPS_THREADS caps internal parallelism (the compiled search
    # kernels run single-threaded per subtree; numba reads this before
    # compilation).
    threads = os.environ.get("MOMAPS_THREADS")
    if threads:
        os.environ.setdefault("NUMBA_NUM_THREADS", threads)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MomapsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
