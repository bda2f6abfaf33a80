"""Command-line surface: build, hk, bounds, certify, test, explore-conjecture.

All outputs are machine-readable: JSON documents embedding a run manifest
(command, input hashes, parameters, seed, budget, version, wall time), or
CSV for sweep commands.  Exact rationals are serialized as "p/q" strings,
never floats.  Exit codes: 0 success, 1 usage, 2 bad input, 3 budget
exceeded, 4 a certification check failed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time

from . import __version__, f2
from .buildings import (
    build_building,
    degree_disparity,
    top_expansion_survey,
)
from .complexes import read_facet_file, write_facet_file
from .errors import BudgetExceeded, CobexError
from .expansion import (
    DEFAULT_BUDGET,
    exact_expansion,
    matroid_lower_bound,
    partition_lower_bound,
    simplex_lower_bound,
    singleton_upper_bound,
    weyl_lower_bound,
)
from .filling import (
    BuildingLike,
    GSet,
    PermGroup,
    build_filling,
    face_load_report,
    load_lower_bound,
    matroid_span_family,
    max_orbit_overlap,
    overlap_lower_bound,
    verify_structure,
    whole_complex_family,
)
from .matroids import matroid_complex, partition_matroid
from .tester import TesterConfig, run_tester

EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_CHECK_FAILED = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _fmt(frac):
    return f"{frac.numerator}/{frac.denominator}"


def _manifest(args, inputs, started, extra=None):
    man = {
        "command": args.command,
        "inputs": {p: _sha256(p) for p in inputs if os.path.exists(p)},
        "parameters": extra or {},
        "seed": getattr(args, "seed", None),
        "budget": getattr(args, "budget", None),
        "threads": getattr(args, "threads", None),
        "version": __version__,
        "wall_time_s": round(time.perf_counter() - started, 3),
    }
    return man


def _emit(doc, out_path):
    text = json.dumps(doc, indent=2, default=str)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def _budget_default():
    env = os.environ.get("COBEX_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _simplex_generators(n):
    verts = n + 1
    gens = []
    if verts >= 2:
        g = list(range(verts))
        g[0], g[1] = g[1], g[0]
        gens.append(g)
        gens.append([(v + 1) % verts for v in range(verts)])
    return gens


def _load_artifact(path):
    """Load an artifact JSON, or wrap a bare facet file."""
    if path.endswith(".json"):
        with open(path, encoding="utf-8") as fh:
            art = json.load(fh)
        base = os.path.dirname(os.path.abspath(path))
        facet_path = os.path.join(base, art["facet_file"])
        X = read_facet_file(facet_path, labels=art.get("labels"))
        art["_complex"] = X
        art["_facet_path"] = facet_path
        art["_path"] = path
        return art
    X = read_facet_file(path)
    return {
        "family": "file",
        "params": {},
        "_complex": X,
        "_facet_path": path,
        "_path": path,
        "aut_generators": [],
    }


def _rebuild_structure(art):
    """Reassemble the building-like structure recorded in an artifact."""
    X = art["_complex"]
    family = art.get("family")
    selector = art.get("b_family")
    if family == "building":
        bld = build_building(art["params"]["n"], art["params"]["q"])
        if [bld.complex.f(k) for k in range(bld.complex.n + 1)] != [
            X.f(k) for k in range(X.n + 1)
        ]:
            raise CobexError("artifact facets do not match the rebuilt building")
        return bld.structure(), bld
    gens = [tuple(g) for g in art.get("aut_generators", [])]
    G = PermGroup(X.f(0), gens)
    if selector == "whole-complex":
        B = whole_complex_family(X)
    else:
        B = matroid_span_family(X)
    return BuildingLike(X, GSet.facets(X), G, B, name=family or "file"), None


def _closed_form_bounds(art, k):
    family = art.get("family")
    params = art.get("params", {})
    certs = []
    if family == "partition":
        n, m = params["n"], params["m"]
        if 0 <= k <= n - 1:
            certs.append(partition_lower_bound(n, m, k))
            certs.append(matroid_lower_bound(n, k))
    elif family == "simplex":
        n = params["n"]
        if 0 <= k <= n - 1:
            certs.append(simplex_lower_bound(n, k))
    elif family == "building":
        n = params["n"]
        if 0 <= k <= n - 1:
            certs.append(weyl_lower_bound(n, k, math.factorial(n + 2)))
    elif family == "matroid":
        n = art["_complex"].n
        if 0 <= k <= n - 1:
            certs.append(matroid_lower_bound(n, k))
    return certs


def cmd_build(args):
    started = time.perf_counter()
    family = args.family[0]
    params = {}
    inputs = []
    if family == "simplex":
        n = int(args.family[1])
        from .complexes import simplex_complex

        X = simplex_complex(n)
        params = {"n": n}
        gens = _simplex_generators(n)
        s_set, b_family = "facets", "whole-complex"
    elif family == "partition":
        n, m = int(args.family[1]), int(args.family[2])
        pm = partition_matroid(n, m)
        X = pm.complex
        params = {"n": n, "m": m}
        gens = [list(g) for g in pm.aut_generators()]
        s_set, b_family = "facets", "matroid-span"
    elif family == "building":
        n, q = int(args.family[1]), int(args.family[2])
        bld = build_building(n, q)
        X = bld.complex
        params = {"n": n, "q": q}
        gens = [list(g) for g in bld.vertex_perms]
        s_set, b_family = "facets", "apartment-intersection"
    elif family == "matroid":
        spec_path = args.family[1]
        inputs.append(spec_path)
        with open(spec_path, encoding="utf-8") as fh:
            data = json.load(fh)
        X, structure, _ = matroid_complex(
            data["ground_set"],
            independent_sets=data.get("independent_sets"),
            bases=data.get("bases"),
            aut_generators=data.get("aut_generators", []),
        )
        params = {"source": os.path.basename(spec_path)}
        gens = [list(g) for g in structure.G.generators]
        s_set, b_family = "facets", "matroid-span"
    else:
        raise CobexError(f"unknown family {family!r}")

    prefix = args.output
    facet_path = prefix + ".facets"
    art_path = prefix + ".json"
    write_facet_file(facet_path, X)
    art = {
        "kind": "cobex-complex",
        "family": family,
        "params": params,
        "facet_file": os.path.basename(facet_path),
        "facet_sha256": _sha256(facet_path),
        "dimension": X.n,
        "f_vector": [X.f(k) for k in range(X.n + 1)],
        "labels": X.labels,
        "aut_generators": gens,
        "s_set": s_set,
        "b_family": b_family,
        "manifest": _manifest(args, inputs + [facet_path], started, params),
    }
    with open(art_path, "w", encoding="utf-8") as fh:
        json.dump(art, fh, indent=2)
        fh.write("\n")
    print(json.dumps({"artifact": art_path, "facet_file": facet_path,
                      "f_vector": art["f_vector"]}))
    return 0


def cmd_hk(args):
    started = time.perf_counter()
    art = _load_artifact(args.artifact)
    X = art["_complex"]
    res = exact_expansion(
        X,
        args.dim,
        budget=args.budget,
        prune=not args.no_prune,
        shards=args.shards,
        threads=args.threads,
    )
    doc = {
        "value": _fmt(res.value),
        "witness": [list(X.labeled(f)) for f in res.witness_faces()],
        "exact": res.exact,
        "search_size": res.search_size,
        "dim": args.dim,
        "labels": X.labels,
        "manifest": _manifest(
            args,
            [art["_facet_path"], art["_path"]],
            started,
            {"dim": args.dim, "prune": not args.no_prune, "shards": args.shards},
        ),
    }
    _emit(doc, args.output)
    return 0


def cmd_bounds(args):
    started = time.perf_counter()
    inputs = []
    if args.family:
        family = args.family[0]
        if family == "partition":
            art = {"family": "partition",
                   "params": {"n": int(args.family[1]), "m": int(args.family[2])}}
        elif family == "simplex":
            art = {"family": "simplex", "params": {"n": int(args.family[1])}}
        elif family == "building":
            art = {"family": "building",
                   "params": {"n": int(args.family[1]), "q": int(args.family[2])}}
        else:
            raise CobexError(f"unknown family {family!r}")
        certs = _closed_form_bounds(art, args.dim)
    else:
        art = _load_artifact(args.artifact)
        inputs = [art["_facet_path"], art["_path"]]
        certs = _closed_form_bounds(art, args.dim)
        if args.singleton:
            certs.append(singleton_upper_bound(art["_complex"], args.dim,
                                               budget=args.budget))
    doc = {
        "dim": args.dim,
        "certificates": [c.as_json() for c in certs],
        "manifest": _manifest(args, inputs, started, {"dim": args.dim}),
    }
    _emit(doc, args.output)
    return 0


def cmd_certify(args):
    started = time.perf_counter()
    art = _load_artifact(args.artifact)
    X = art["_complex"]
    structure, _bld = _rebuild_structure(art)
    k_max = args.kmax if args.kmax is not None else X.n - 1
    report = verify_structure(structure, k_max, seed=args.seed)
    doc = {
        "structure": report.as_json(),
        "filling": None,
        "bounds": {},
        "betti": {str(k): f2.reduced_betti(X, k) for k in range(-1, X.n + 1)},
        "labels": X.labels,
        "manifest": _manifest(
            args,
            [art["_facet_path"], art["_path"]],
            started,
            {"kmax": k_max},
        ),
    }
    failed = not report.ok
    if report.ok:
        try:
            fam = build_filling(structure, k_max)
            defects = fam.boundary_defects()
            supp = fam.support_violations()
            doc["filling"] = {
                "chains": len(fam.chains),
                "boundary_defects": len(defects),
                "support_violations": len(supp),
            }
            failed = failed or defects or supp
            for k in range(0, min(k_max + 1, X.n)):
                a_k, _ = max_orbit_overlap(structure, k)
                certs = [overlap_lower_bound(X, k, a_k)]
                if k <= fam.k_max:
                    rep_k = face_load_report(structure, fam, k)
                    certs.append(load_lower_bound(X, k, rep_k.theta,
                                                  family=structure.name))
                certs.extend(_closed_form_bounds(art, k))
                doc["bounds"][str(k)] = [c.as_json() for c in certs]
        except (CobexError, ValueError) as exc:
            if isinstance(exc, BudgetExceeded):
                raise
            doc["filling"] = {"error": str(exc)}
            failed = True
    doc["ok"] = not failed
    _emit(doc, args.output)
    return EXIT_CHECK_FAILED if failed else 0


def cmd_test(args):
    started = time.perf_counter()
    art = _load_artifact(args.artifact)
    X = art["_complex"]
    label_to_id = {lab: i for i, lab in enumerate(X.labels)}
    alpha = 0
    with open(args.cochain, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            face = tuple(sorted(label_to_id[w] for w in line.split()))
            alpha ^= 1 << X.face_id(face, args.dim)
    certs = _closed_form_bounds(art, args.dim)
    best = max(
        (c for c in certs if c.side == "lower"), key=lambda c: c.value, default=None
    )
    cfg = TesterConfig(k=args.dim, trials=args.trials, seed=args.seed,
                       shards=args.shards)
    rep = run_tester(X, alpha, cfg, distance_budget=args.budget,
                     epsilon_certificate=best)
    doc = rep.as_json()
    doc["labels"] = X.labels
    doc["manifest"] = _manifest(
        args,
        [art["_facet_path"], art["_path"], args.cochain],
        started,
        {"dim": args.dim, "trials": args.trials},
    )
    _emit(doc, args.output)
    return 0


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def cmd_explore(args):
    started = time.perf_counter()
    rows = top_expansion_survey(
        args.q, n=args.n, budget=args.budget, threads=args.threads,
        shards=args.shards,
    )
    header = ["q", "n", "f0", "f_top", "lower_bound", "upper_bound",
              "h_exact", "exact", "seconds"]
    table = [
        [r["q"], r["n"], r["f0"], r["f_top"], r["lower_bound"],
         r["upper_bound"], r["h_exact"] or "", r["exact"], r["seconds"]]
        for r in (row.as_json() for row in rows)
    ]
    if args.csv:
        _write_csv(args.csv, header, table)
        plot_path = args.plot
        if plot_path is None and not args.no_plot:
            plot_path = os.path.splitext(args.csv)[0] + ".png"
        if plot_path:
            from .plots import save_survey_figure

            save_survey_figure(rows, plot_path)
            print(json.dumps({"csv": args.csv, "figure": plot_path}))
    else:
        w = csv.writer(sys.stdout)
        w.writerow(header)
        w.writerows(table)
    doc = {
        "rows": [r.as_json() for r in rows],
        "manifest": _manifest(args, [], started, {"q": args.q, "n": args.n}),
    }
    if args.output:
        _emit(doc, args.output)
    return 0


def cmd_disparity(args):
    started = time.perf_counter()
    art = _load_artifact(args.artifact)
    if art.get("family") != "building":
        raise CobexError("disparity reports need a building artifact")
    bld = build_building(art["params"]["n"], art["params"]["q"])
    report = degree_disparity(bld, budget=args.budget)
    header = ["type", "count", "min_degree", "max_degree", "uniform_average"]
    table = [
        [r["type"], r["count"], r["min_degree"], r["max_degree"],
         _fmt(r["uniform_average"])]
        for r in report["types"]
    ]
    if args.csv:
        _write_csv(args.csv, header, table)
        plot_path = args.plot
        if plot_path is None and not args.no_plot:
            plot_path = os.path.splitext(args.csv)[0] + ".png"
        if plot_path:
            from .plots import save_disparity_figure

            save_disparity_figure(report, plot_path)
    else:
        w = csv.writer(sys.stdout)
        w.writerow(header)
        w.writerows(table)
    doc = {
        "types": [
            {**r, "uniform_average": _fmt(r["uniform_average"])}
            for r in report["types"]
        ],
        "weighted_singleton_upper": _fmt(report["weighted_singleton_upper"]),
        "uniform_singleton_upper": _fmt(report["uniform_singleton_upper"]),
        "manifest": _manifest(args, [art["_path"]], started, {}),
    }
    _emit(doc, args.output)
    return 0


def make_parser():
    parser = _Parser(prog="cobex", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a complex artifact")
    p.add_argument("--family", nargs="+", required=True,
                   metavar=("NAME", "ARG"),
                   help="simplex N | partition N M | building N Q | matroid SPEC.json")
    p.add_argument("-o", "--output", required=True, help="artifact path prefix")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("hk", help="exact expansion constant")
    p.add_argument("artifact")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--budget", type=int, default=_budget_default())
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_hk)

    p = sub.add_parser("bounds", help="closed-form bound certificates")
    p.add_argument("artifact", nargs="?", default=None)
    p.add_argument("--family", nargs="+", default=None)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--singleton", action="store_true",
                   help="also compute the single-face upper bound")
    p.add_argument("--budget", type=int, default=_budget_default())
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("certify", help="verify structure and certify bounds")
    p.add_argument("artifact")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--budget", type=int, default=_budget_default())
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("test", help="run the randomized coboundary tester")
    p.add_argument("artifact")
    p.add_argument("cochain", help="file listing one supported face per line")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--budget", type=int, default=_budget_default())
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("explore-conjecture",
                       help="survey top-level expansion against field size")
    p.add_argument("--q", type=int, nargs="+", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--budget", type=int, default=_budget_default())
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--csv", default=None)
    p.add_argument("--plot", default=None)
    p.add_argument("--no-plot", action="store_true")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("disparity", help="per-type degree report for a building")
    p.add_argument("artifact")
    p.add_argument("--budget", type=int, default=_budget_default())
    p.add_argument("--csv", default=None)
    p.add_argument("--plot", default=None)
    p.add_argument("--no-plot", action="store_true")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_disparity)

    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CobexError, OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
