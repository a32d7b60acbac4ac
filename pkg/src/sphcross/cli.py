"""Batch command-line front end. Tables go to CSV (``#`` metadata lines first), nested
summaries to JSON.

    sphcross analytic --graph complete --n 4..50 --moon
    sphcross analytic --graph bipartite --n1 2..20 --n2 5
    sphcross deviation --complete --n 120..125
    sphcross deviation --bipartite --n1 2..40 --n2 2..40
    sphcross simulate --graph complete --n 7 --N 100000 --seed 1 --partitions 8
    sphcross integrate --omega all
    sphcross estimate-types --T 20000 --seed 1965
    sphcross census --graph complete --n 10
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .arc_predicate import FilterConfig
from .layout_constants import (DEFAULT_SPECS, DIMENSION, FALLBACK_TOL_5D, INTEGRANDS, PI12_EXACT,
                               CubatureNotConverged, CubatureSpec, LayoutConstants,
                               default_rsa_constants, integrate_pi, moon_hypothesis_constants,
                               published_rsa_constants, rsa_constants)
from .montecarlo import SimulationConfig, estimate_pi_omegas, simulate_crossings, write_samples_csv
from .product_types import (OMEGA, TYPE_TABLE, GraphSpec, census_bruteforce, census_closed_form,
                            f_over_q, q_size)
from . import variance_engine as ve

EXIT_USAGE = 2
EXIT_NONCONVERGED = 3


def parse_range(text: str) -> list[int]:
    """``"7"``, ``"4..12"`` (inclusive) or ``"4,6,9"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use N, A..B or a,b,c") from None


def load_constants(name: str) -> LayoutConstants:
    if name == "rsa":
        return default_rsa_constants()
    if name == "published":
        return published_rsa_constants()
    if name == "moon":
        return moon_hypothesis_constants()
    return LayoutConstants.from_json(Path(name).read_text())


class _Out:
    def __init__(self, path):
        self.path = path
        self.buf = io.StringIO()

    def __enter__(self):
        return self.buf

    def __exit__(self, *exc):
        if exc[0] is None:
            if self.path in (None, "-"):
                sys.stdout.write(self.buf.getvalue())
            else:
                Path(self.path).write_text(self.buf.getvalue())


def _meta(fh, command, **items):
    fields = " ".join(f"{k}={v}" for k, v in items.items())
    fh.write(f"# sphcross {__version__} command={command} {fields}\n".rstrip() + "\n")


def _fmt(x) -> str:
    return repr(float(x)) if not isinstance(x, (int, str)) else str(x)


def _graph_from_args(p: argparse.ArgumentParser, args) -> GraphSpec:
    if args.graph == "complete":
        if args.n is None:
            p.error("--graph complete needs --n")
        return GraphSpec.complete(args.n)
    if args.graph == "bipartite":
        if args.n1 is None or args.n2 is None:
            p.error("--graph bipartite needs --n1 and --n2")
        return GraphSpec.complete_bipartite(args.n1, args.n2)
    if args.edges is None:
        p.error("--graph edges needs --edges FILE")
    return GraphSpec.from_edge_file(args.edges)


# -- subcommands --------------------------------------------------------------

def cmd_analytic(p, args):
    if args.layout == "rla":
        k = None
        if args.moon:
            p.error("--moon applies only to the rsa layout")
    else:
        k = load_constants(args.constants)
    prov = "rla:delta=exact" if k is None else k.provenance_summary()
    with _Out(args.output) as fh:
        _meta(fh, "analytic", layout=args.layout, constants=prov)
        w = csv.writer(fh, lineterminator="\n")
        if args.graph == "complete":
            if args.n is None:
                p.error("--graph complete needs --n")
            head = ["graph", "n", "q", "expectation", "variance_ours"]
            rows = []
            for n in args.n:
                g = GraphSpec.complete(n)
                if k is None:
                    rep = ve.rla_reference(g)
                    rows.append(["complete", n, q_size(g), rep.expectation, rep.variance])
                    continue
                row = ["complete", n, q_size(g), ve.expectation(g, k), ve.variance_complete_rsa(n, k)]
                if args.moon:
                    moon = ve.moon_variance_complete(n)
                    row += [moon, row[4] - moon, ve.sign(row[4] - moon)]
                rows.append(row)
        else:
            if args.n1 is None or args.n2 is None:
                p.error("--graph bipartite needs --n1 and --n2")
            head = ["graph", "n1", "n2", "q", "expectation", "variance_ours"]
            rows = []
            for a in args.n1:
                for b in args.n2:
                    g = GraphSpec.complete_bipartite(a, b)
                    if k is None:
                        rep = ve.rla_reference(g)
                        rows.append(["bipartite", a, b, q_size(g), rep.expectation, rep.variance])
                        continue
                    ours = ve.variance_bipartite_rsa(a, b, k)
                    row = ["bipartite", a, b, q_size(g), ve.expectation(g, k), ours]
                    if args.moon:
                        moon = ve.moon_variance_bipartite(a, b)
                        row += [moon, ours - moon, ve.sign(ours - moon)]
                    rows.append(row)
        if args.moon:
            head += ["variance_moon", "deviation", "sign"]
        w.writerow(head)
        for r in rows:
            w.writerow([_fmt(x) for x in r])
    return 0


def cmd_deviation(p, args):
    k = load_constants(args.constants)
    with _Out(args.output) as fh:
        _meta(fh, "deviation", constants=k.provenance_summary())
        w = csv.writer(fh, lineterminator="\n")
        if args.complete:
            if args.n is None:
                p.error("--complete needs --n")
            w.writerow(["n", "variance_ours", "variance_moon", "deviation", "sign"])
            for n in args.n:
                ours, moon = ve.variance_complete_rsa(n, k), ve.moon_variance_complete(n)
                w.writerow([n, _fmt(ours), _fmt(moon), _fmt(ours - moon), ve.sign(ours - moon)])
        else:
            if args.n1 is None or args.n2 is None:
                p.error("--bipartite needs --n1 and --n2")
            w.writerow(["n1", "n2", "deviation", "sign"])
            for a in args.n1:
                for b in args.n2:
                    d = ve.deviation_bipartite(a, b, k)
                    w.writerow([a, b, _fmt(d), ve.sign(d)])
    return 0


def _apply_config(args, parser):
    if not args.config:
        return
    conf = json.loads(Path(args.config).read_text())
    defaults = {a.dest: a.default for a in parser._actions}
    for key, value in conf.items():
        dest = key.replace("-", "_")
        if dest not in defaults:
            parser.error(f"unknown config key {key!r}")
        if getattr(args, dest) == defaults[dest]:
            setattr(args, dest, value)


def cmd_simulate(p, args):
    _apply_config(args, p)
    g = _graph_from_args(p, args)
    filt = None if args.filter_l < 0 else FilterConfig(args.filter_l)
    try:
        cfg = SimulationConfig(g, args.N, args.seed, args.partitions, filt, args.threads)
    except ValueError as e:
        p.error(str(e))
    res = simulate_crossings(cfg)
    if args.samples_csv:
        write_samples_csv(res, args.samples_csv)
    summary = res.summary()
    summary["version"] = __version__
    with _Out(args.output) as fh:
        fh.write(json.dumps(summary, indent=2) + "\n")
    return 0


def cmd_integrate(p, args):
    if args.omega != "all" and args.omega not in INTEGRANDS:
        p.error(f"--omega must be 'all' or one of {', '.join(INTEGRANDS)}")
    specs = {}
    for d, base in DEFAULT_SPECS.items():
        tol = args.tol if args.tol is not None else base.target_abs_tolerance
        if d == 5 and args.fallback:
            tol = max(tol, FALLBACK_TOL_5D)
        specs[d] = CubatureSpec(d, tol, args.max_evals or base.max_evaluations)
    try:
        if args.omega == "all":
            c = rsa_constants(specs)
            out = c.to_dict()
        else:
            w = args.omega
            spec = specs[DIMENSION[w]]
            value, err = integrate_pi(w, spec)
            out = {"omega": w, "pi": value, "error": err, "tolerance": spec.target_abs_tolerance,
                   "gamma": value - 1 / 64}
            if w == "12":
                out["closed_form"] = PI12_EXACT
    except CubatureNotConverged as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NONCONVERGED
    with _Out(args.output) as fh:
        fh.write(json.dumps(out, indent=2) + "\n")
    return 0


def cmd_estimate_types(p, args):
    k = load_constants(args.constants)
    est = estimate_pi_omegas(args.T, args.seed, partitions=args.partitions,
                             filter=FilterConfig(max(args.filter_l, 0)), workers=args.threads)
    with _Out(args.output) as fh:
        _meta(fh, "estimate-types", T=args.T, seed=args.seed, partitions=args.partitions,
              graph="K_10", constants=k.provenance_summary())
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["omega", "pi_hat", "gamma_hat", "f_omega", "samples", "count",
                    "stderr_binomial", "stderr_layout", "pi_reference"])
        for omega in OMEGA:
            e = est.estimates[omega]
            w.writerow([omega, _fmt(e.pi_hat), _fmt(e.gamma_hat), est.census[omega], e.samples_used,
                        e.count, _fmt(e.stderr_binomial), _fmt(e.stderr_layout), _fmt(k.pi[omega])])
    return 0


def cmd_census(p, args):
    g = _graph_from_args(p, args)
    closed = census_closed_form(g) if g.kind != "edge_list" else None
    brute = census_bruteforce(g) if (args.bruteforce or closed is None) else None
    q = q_size(g)
    ratios = f_over_q(g) if closed is not None and q > 0 else None
    with _Out(args.output) as fh:
        _meta(fh, "census", graph=g.label.replace(" ", ""), q=q)
        w = csv.writer(fh, lineterminator="\n")
        head = ["omega", "tau", "phi", "num_vertices"]
        if closed is not None:
            head += ["f_omega"]
        if ratios is not None:
            head += ["f_over_q"]
        if brute is not None:
            head += ["f_bruteforce"]
        w.writerow(head)
        for omega in OMEGA:
            row = [omega, *TYPE_TABLE[omega]]
            if closed is not None:
                row.append(closed[omega])
            if ratios is not None:
                row.append(str(ratios[omega]))
            if brute is not None:
                row.append(brute[omega])
            w.writerow(row)
    return 0


# -- parser -------------------------------------------------------------------

def _add_graph_flags(sp, with_edges=True):
    choices = ["complete", "bipartite"] + (["edges"] if with_edges else [])
    sp.add_argument("--graph", choices=choices, default="complete")
    sp.add_argument("--n", type=int)
    sp.add_argument("--n1", type=int)
    sp.add_argument("--n2", type=int)
    if with_edges:
        sp.add_argument("--edges", help="edge list file, one 'u v' pair per line")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphcross", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    consts = argparse.ArgumentParser(add_help=False)
    consts.add_argument("--constants", default="rsa",
                        help="rsa (computed), published, moon, or a constants JSON file")
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--output", "-o", default="-", help="output file (default stdout)")

    sp = sub.add_parser("analytic", parents=[consts, out], help="expectation and variance tables")
    sp.add_argument("--graph", choices=["complete", "bipartite"], default="complete")
    sp.add_argument("--n", type=parse_range)
    sp.add_argument("--n1", type=parse_range)
    sp.add_argument("--n2", type=parse_range)
    sp.add_argument("--layout", choices=["rsa", "rla"], default="rsa")
    sp.add_argument("--moon", action="store_true", help="add Moon's variance and the deviation")
    sp.set_defaults(func=cmd_analytic)

    sp = sub.add_parser("deviation", parents=[consts, out], help="sign of ours minus Moon's variance")
    kind = sp.add_mutually_exclusive_group(required=True)
    kind.add_argument("--complete", action="store_true")
    kind.add_argument("--bipartite", action="store_true")
    sp.add_argument("--n", type=parse_range)
    sp.add_argument("--n1", type=parse_range)
    sp.add_argument("--n2", type=parse_range)
    sp.set_defaults(func=cmd_deviation)

    sp = sub.add_parser("simulate", parents=[out], help="Monte Carlo estimate of Var(C)")
    _add_graph_flags(sp)
    sp.add_argument("--N", type=int, default=100_000, help="number of random layouts")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--partitions", type=int, default=1)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--filter-l", type=int, default=1, help="rotation groups for the filter; -1 disables it")
    sp.add_argument("--samples-csv", help="also write per-layout crossing counts")
    sp.add_argument("--config", help="JSON file whose keys mirror these flags")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("integrate", parents=[out], help="cubature of the pi_w integrals")
    sp.add_argument("--omega", default="all", help="all, or one of " + ", ".join(INTEGRANDS))
    sp.add_argument("--tol", type=float, default=None, help="absolute tolerance")
    sp.add_argument("--max-evals", type=int, default=None)
    sp.add_argument("--fallback", action="store_true",
                    help=f"relax the 5-d tolerance to {FALLBACK_TOL_5D:g}")
    sp.set_defaults(func=cmd_integrate)

    sp = sub.add_parser("estimate-types", parents=[consts, out], help="simulated pi_w on K_10")
    sp.add_argument("--T", type=int, default=20_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--partitions", type=int, default=1)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--filter-l", type=int, default=1)
    sp.set_defaults(func=cmd_estimate_types)

    sp = sub.add_parser("census", parents=[out], help="f_w counts and f_w / q")
    _add_graph_flags(sp)
    sp.add_argument("--bruteforce", action="store_true", help="also enumerate Q x Q")
    sp.set_defaults(func=cmd_census)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    return args.func(sub, args)


if __name__ == "__main__":
    sys.exit(main())
