"""Command-line interface: ``pottszero <subcommand> ...``.

Exit status is 0 on success, 1 on usage or input errors and 2 when a
verification (condition check, table regression, scan) fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import conditions, harness
from .conditions import ConditionParams
from .errors import DiskMapError, PottsError
from .exact import potts_poly_in_w, potts_restricted, random_cluster_exact
from .graph import Boundary, EdgeWeights, parse_weights, read_graph
from .interpolation import InterpolationPlan, RegionSpec, approx_Z, default_radius

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_complex(text: str) -> complex:
    """``"re"`` or ``"re,im"``."""
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"bad complex value {text!r}; use re or re,im")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad complex value {text!r}; use re or re,im") from None
    z = complex(vals[0], vals[1] if len(vals) == 2 else 0.0)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError("complex value must be finite")
    return z


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _parse_boundary(text: str | None) -> Boundary:
    """``"v:c,v:c"`` (0-based vertices, 1-based colours)."""
    if not text:
        return Boundary()
    W, L = [], []
    for item in text.split(","):
        v, _, c = item.partition(":")
        W.append(int(v))
        L.append(int(c))
    return Boundary(tuple(W), tuple(L))


def _emit(obj, stream=None) -> None:
    stream = stream or sys.stdout
    json.dump(obj, stream, indent=2, sort_keys=True)
    stream.write("\n")


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _default_K(delta: int, k: float, system: str = "improved") -> float:
    row = conditions.IMPROVED_ROWS.get(delta)
    if row and conditions.check(system, ConditionParams(delta, k, 0.0, row[0])).holds:
        return row[0]
    return conditions.best_K(system, delta, k)[0]


def _region(args, delta: int, k: float) -> RegionSpec:
    radius = args.radius if getattr(args, "radius", None) is not None else default_radius(delta)
    if getattr(args, "region_eps", None) is not None:
        K = args.K if args.K is not None else _default_K(delta, k)
        return RegionSpec(delta, args.region_eps, math.asin(K), radius)
    return RegionSpec.certified(delta, k, K=getattr(args, "K", None), radius=radius)


# ---------------------------------------------------------------------------
# subcommands


def cmd_exact(args) -> int:
    g = read_graph(args.graph)
    if args.poly:
        N = potts_poly_in_w(g, args.k, _parse_boundary(args.boundary), method=args.method, cap=args.cap)
        _emit({"N": list(N.coeffs)})
        return EXIT_OK
    if args.weights:
        with open(args.weights) as fh:
            w = parse_weights(fh.read(), g, default=args.w)
    else:
        w = EdgeWeights.uniform(g, args.w)
    if args.random_cluster:
        z = random_cluster_exact(g, args.k, [x - 1 for x in w.values])
    else:
        z = potts_restricted(g, args.k, w, _parse_boundary(args.boundary), method=args.method, cap=args.cap)
    _emit({"Z": _pair(z)})
    return EXIT_OK


def cmd_approx(args) -> int:
    g = read_graph(args.graph)
    delta = max(args.delta or 0, max((g.degree(v) for v in range(g.n)), default=0), 3)
    region = _region(args, delta, args.k)
    plan = InterpolationPlan(M=args.order, rho=args.rho, N=args.map_degree, backend=args.backend,
                             check_region=args.check_region)
    try:
        xi, diag = approx_Z(g, args.k, args.w, args.eps, plan, region)
    except DiskMapError as exc:
        print(f"region check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit({
        "xi_re": xi.real,
        "xi_im": xi.imag,
        "log_xi": _pair(diag.log_xi),
        "M": diag.M,
        "backend": diag.backend,
        "tail_estimate": diag.tail_estimate,
        "tail_unverified": diag.tail_unverified,
        "region_check": diag.region_check,
    })
    return EXIT_OK


def cmd_check(args) -> int:
    if args.K is None:
        print("check needs --K", file=sys.stderr)
        return EXIT_USAGE
    p = ConditionParams(args.delta, args.k, args.eps, args.K)
    rep = conditions.check(args.system, p, strict=not args.weak)
    out = rep.to_dict()
    if args.max_eps and rep.holds:
        out["eps_max"] = conditions.max_eps(args.system, args.delta, args.k, args.K)
    _emit(out)
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_tables(args) -> int:
    if not 3 <= args.delta_min <= args.delta_max <= 16:
        print("Delta range must lie within 3..16", file=sys.stderr)
        return EXIT_USAGE
    rows = [conditions.table_row(d, args.system) for d in range(args.delta_min, args.delta_max + 1)]
    gates = ("k_match", "tabulated_row_holds", "margin_not_worse", "c_bound_k_match", "c_within")
    failed = [r["delta"] for r in rows if any(r["checks"].get(g) is False for g in gates)]
    if args.format == "text":
        print(f"{'Delta':>5} {'k':>4} {'K*':>8} {'theta*':>8} {'c':>8} {'eps_max':>10}  expected  theta-dev")
        for r in rows:
            exp = r["expected"]
            dev = r.get("theta_deviation")
            flag = "" if r["checks"].get("theta_consistent", True) else " (!)"
            print(f"{r['delta']:>5} {r['k_min']:>4} {r['K_star']:8.4f} {r['theta']:8.4f} {r['c_val']:8.5f} "
                  f"{r['eps_max']:10.3e}  k={exp.get('k', '-')!s:<4} "
                  f"{'' if dev is None else f'{dev:.2e}'}{flag}")
    else:
        _emit({"rows": rows, "failed": failed})
    if failed:
        print(f"table mismatch for Delta in {failed}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_scan(args) -> int:
    region = _region(args, args.delta, args.k)
    if args.real_sweep:
        ws = [i / 20 for i in range(20)]
        rep = harness.weight_sweep_scan(harness.enumerate_graphs(args.nmax, args.delta), args.k, ws)
    else:
        rep = harness.zero_free_scan(args.delta, args.k, region, args.nmax, args.samples, args.seed)
    out = rep.to_dict()
    out["region"] = {"delta": region.max_degree, "eps": region.eps, "theta": region.theta, "radius": region.radius}
    _emit(out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_roots(args) -> int:
    if args.graph:
        graphs = [read_graph(args.graph)]
    else:
        graphs = list(harness.enumerate_graphs(args.nmax, args.delta))
    delta = max([args.delta or 0, 3] + [max((g.degree(v) for v in range(g.n)), default=0) for g in graphs])
    try:
        region = _region(args, delta, args.k)
    except PottsError as exc:
        print(f"no region: {exc}", file=sys.stderr)
        region = None
    roots = []
    for g in graphs:
        if g.m:
            roots.extend(harness.root_locus(g, args.k, region))
    sys.stdout.write(harness.root_locus_csv(roots))
    if args.boundary_csv and region is not None:
        with open(args.boundary_csv, "w") as fh:
            fh.write(harness.region_boundary_csv(region))
    inside = sum(r.in_region for r in roots)
    if inside:
        print(f"{inside} roots inside the region", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_induction(args) -> int:
    K = args.K if args.K is not None else _default_K(args.delta, args.k, args.system)
    eps = args.eps if args.eps is not None else conditions.max_eps(args.system, args.delta, args.k, K)
    p = ConditionParams(args.delta, args.k, eps, K)
    graphs = [read_graph(args.graph)] if args.graph else harness.enumerate_graphs(args.nmax, args.delta)
    rep = harness.induction_sweep(graphs, args.k, p, args.draws, args.seed, args.max_fixed, args.system)
    out = rep.to_dict()
    out["params"] = {"delta": p.delta, "k": p.k, "eps": p.eps, "K": p.K, "theta": p.theta, "system": args.system}
    _emit(out)
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pottszero", description="Zero-free regions and approximate counting for the Potts model.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def region_flags(p):
        p.add_argument("--K", type=float, help="condition parameter K (default: tabulated or optimal)")
        p.add_argument("--region-eps", type=float, help="region eps (default: largest certified)")
        p.add_argument("--radius", "--delta-disk", dest="radius", type=float,
                       help="radius of the zero-free disk around 1")

    p = sub.add_parser("exact", help="exact partition function")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--w", type=parse_complex, default=0j, help="uniform edge weight re[,im]")
    p.add_argument("--weights", help="per-edge weight file (u v re [im])")
    p.add_argument("--boundary", help="fixed vertices as v:c,v:c")
    p.add_argument("--poly", action="store_true", help="print the w-polynomial coefficients N_j")
    p.add_argument("--random-cluster", action="store_true", help="evaluate via the random cluster sum")
    p.add_argument("--method", choices=("reduced", "full"), default="reduced")
    p.add_argument("--cap", type=_positive_int, help="maximum number of free vertices")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("approx", help="interpolation approximation of Z")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--w", type=parse_complex, required=True)
    p.add_argument("--eps", type=float, default=0.01, help="target accuracy")
    p.add_argument("--order", type=_positive_int, help="fixed truncation order M")
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--map-degree", type=_positive_int, default=1)
    p.add_argument("--backend", choices=("subset", "connected-cluster"), default="subset")
    p.add_argument("--delta", type=int, help="maximum degree of the region (default: the graph's)")
    p.add_argument("--check-region", action="store_true", help="fail unless the disk map lands in the region")
    region_flags(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("check", help="evaluate a condition system")
    p.add_argument("--system", choices=conditions.SYSTEMS, default="improved")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--K", type=float)
    p.add_argument("--weak", action="store_true", help="accept zero margins")
    p.add_argument("--max-eps", action="store_true", help="also report the largest feasible eps")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("tables", help="regenerate the k_Delta / c_Delta tables")
    p.add_argument("--delta-min", type=int, default=3)
    p.add_argument("--delta-max", type=int, default=13)
    p.add_argument("--system", choices=conditions.SYSTEMS, default="improved")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("scan", help="zero-free scan over small graphs")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--nmax", type=_positive_int, default=6)
    p.add_argument("--samples", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--real-sweep", action="store_true", help="uniform real weights 0, 0.05, ..., 0.95 instead")
    region_flags(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("roots", help="roots of the w-polynomial as CSV")
    p.add_argument("--graph")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--nmax", type=_positive_int, default=6)
    p.add_argument("--delta", type=int, default=3)
    p.add_argument("--boundary-csv", help="write the region boundary polyline here")
    region_flags(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("induction-check", help="check the induction invariants on small graphs")
    p.add_argument("--graph")
    p.add_argument("--delta", type=int, default=3)
    p.add_argument("--k", type=_positive_int, default=6)
    p.add_argument("--K", type=float)
    p.add_argument("--eps", type=float, help="region eps (default: largest certified)")
    p.add_argument("--system", choices=conditions.SYSTEMS, default="improved")
    p.add_argument("--nmax", type=_positive_int, default=6)
    p.add_argument("--draws", type=_positive_int, default=10)
    p.add_argument("--max-fixed", type=_positive_int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_induction)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (PottsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
