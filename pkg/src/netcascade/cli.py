"""Command line entry point: ``netcascade <subcommand> ...``.

Every JSON output carries a ``manifest`` whose only run-dependent part is
``manifest["timing"]``; everything else is reproduced bit for bit by
re-running the same arguments. CSV outputs carry the manifest as a leading
``#`` comment line.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction

import networkx as nx

from . import __version__, branching, equilibrium, generators
from .cascade import monte_carlo_utilities
from .game import (DEFAULT_MAX_EDGES, EnumerationCapError, GameParams, ProfileError, closed_form_star,
                   exact_utilities, induced_graph, load_profile, profile_to_json)
from . import structure

EXIT_OK, EXIT_INVALID, EXIT_CAP = 0, 2, 3


class RunManifest:
    def __init__(self, args: argparse.Namespace, argv: list[str]):
        self.started = time.perf_counter()
        self.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        self.argv = list(argv)
        self.command = args.command
        self.arguments = {k: v for k, v in sorted(vars(args).items())
                          if k not in ("out", "func", "command")}
        self.inputs: dict[str, str] = {}

    def hash_input(self, path: str) -> None:
        with open(path, "rb") as fh:
            self.inputs[path] = hashlib.sha256(fh.read()).hexdigest()

    def to_dict(self) -> dict:
        seeds = {k: v for k, v in self.arguments.items() if k == "seed"}
        return {"tool": "netcascade", "version": __version__, "command": self.command,
                "arguments": self.arguments, "seeds": seeds, "inputs": self.inputs,
                "timing": {"timestamp": self.timestamp,
                           "wall_clock_s": round(time.perf_counter() - self.started, 6),
                           "argv": self.argv}}


def parse_range(text: str) -> list[float]:
    """``start:end:step`` (both ends included), a comma list, or a single value.

    Grid points are start + k*step accumulated as fractions, so 0.1:0.9:0.1
    gives exactly nine points with no drift.
    """
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            start, end, step = (Fraction(x) for x in parts)
            if step <= 0 or end < start:
                raise ValueError
            count = int((end - start) / step)
            return [float(start + k * step) for k in range(count + 1)]
        return [float(Fraction(x)) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid range {text!r}; use start:end:step, a,b,c or a number") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(args, payload, manifest: RunManifest) -> None:
    if isinstance(payload, list):
        buf = io.StringIO()
        buf.write("# " + json.dumps(manifest.to_dict()) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(payload)
        text = buf.getvalue()
    else:
        text = json.dumps({"manifest": manifest.to_dict(), **payload}, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args, manifest, need_params=True):
    manifest.hash_input(args.graph)
    profile, params = load_profile(args.graph)
    c = getattr(args, "c", None)
    p = getattr(args, "p", None)
    if isinstance(p, list):
        p = p[0] if len(p) == 1 else None
    if need_params:
        c = c if c is not None else (params.c if params else None)
        p = p if p is not None else (params.p if params else None)
        if c is None or p is None:
            missing = "c" if c is None else "p"
            raise ProfileError(f"missing field 'params.{missing}': pass --{missing} or add params to the graph file")
        params = GameParams(c, p)
    return profile, params


def _estimate_dict(e):
    return {"mean": e.mean, "half_width": e.half_width, "samples": e.samples,
            "confidence": e.confidence, "seed": e.rng_seed}


# --- subcommands ------------------------------------------------------------

def cmd_generate(args, manifest):
    profile = generators.generate(generators.TopologySpec(args.family, args.n, args.arity, args.q,
                                                          args.seed, args.orientation))
    params = GameParams(args.c, args.p) if args.c is not None and args.p is not None else None
    return profile_to_json(profile, params)


def _mc(args, profile, params):
    if args.samples is None and args.eps is None:
        raise ValueError("pass --samples or --eps/--delta for Monte Carlo estimates")
    return monte_carlo_utilities(profile, params, args.samples, eps=args.eps,
                                 delta=args.delta if args.eps is not None else None,
                                 confidence=args.confidence, rng_seed=args.seed, workers=args.workers)


def cmd_simulate(args, manifest):
    profile, params = _load(args, manifest)
    res = _mc(args, profile, params)
    return {"mode": "mc", "params": {"c": params.c, "p": params.p},
            "players": [_estimate_dict(e) for e in res.players], "welfare": _estimate_dict(res.welfare)}


def cmd_utility(args, manifest):
    if args.mode == "mc":
        return cmd_simulate(args, manifest)
    profile, params = _load(args, manifest)
    uv = exact_utilities(profile, params, args.max_edges)
    players = [{"utility": float(u), "benefit": float(b), "cost": float(k)}
               for u, b, k in zip(uv.utilities, uv.benefits, uv.costs)]
    return {"mode": "exact", "params": {"c": params.c, "p": params.p}, "players": players,
            "welfare": uv.welfare, "total_benefit": uv.total_benefit}


def cmd_check_eq(args, manifest):
    profile, params = _load(args, manifest)
    reports = equilibrium.check_equilibrium(
        profile, params, args.deviation_class, args.mode, eps=args.eps or 0.0, delta=args.delta,
        rng_seed=args.seed, max_edges=args.max_edges, full_cap=args.full_cap, workers=args.workers)
    verdicts = [r.verdict.value for r in reports]
    return {"params": {"c": params.c, "p": params.p}, "class": args.deviation_class, "mode": args.mode,
            "is_equilibrium": equilibrium.is_equilibrium(reports),
            "counts": {v.value: verdicts.count(v.value) for v in equilibrium.Verdict},
            "reports": [r.to_dict() for r in reports]}


def cmd_best_response(args, manifest):
    profile, params = _load(args, manifest)
    if args.dynamics:
        final, rounds, settled = equilibrium.best_response_dynamics(profile, params, args.max_rounds,
                                                                    args.full_cap)
        return {"params": {"c": params.c, "p": params.p}, "rounds": rounds, "settled": settled,
                "profile": profile_to_json(final, params)}
    players = range(profile.n) if args.player is None else [args.player]
    out = []
    for i in players:
        br = equilibrium.best_response(profile, params, i, args.full_cap, args.max_edges)
        out.append({"player": i, "strategy": sorted(br.strategy), "utility": br.utility,
                    "current_utility": br.current_utility, "improves": br.improves})
    return {"params": {"c": params.c, "p": params.p}, "best_responses": out}


def _tree_dict(node):
    d = {"vertices": sorted(node.vertices)}
    if node.is_leaf:
        d["min_cut"] = node.min_cut
    else:
        d["cut_size"] = node.cut_size
        d["children"] = [_tree_dict(ch) for ch in node.children]
    return d


P_OPS = ("infection", "tail", "welfare-bounds", "connectivity", "density")


def _analyze_at(op, g, p, args, detail=False):
    """One p-dependent statistic as a flat dict (used by both JSON and CSV output).

    ``detail`` adds the tail op's histogram and tables for single-p JSON output.
    """
    if op == "connectivity":
        est = structure.connectivity_probability(g, p, args.samples, args.seed, args.confidence)
        return {"probability": est.estimate, "lower": est.lower, "upper": est.upper}
    if op == "infection":
        h = args.vertices if args.vertices else sorted(g.nodes)
        est = structure.infection_certainty(g, h, p, args.samples, args.seed, args.confidence)
        return {"probability": est.estimate, "lower": est.lower, "upper": est.upper}
    if op == "tail":
        res = structure.component_size_tail(g, p, args.samples, args.seed, args.confidence)
        out = {"mean_size": float(res.sizes.mean()), "max_size": int(res.sizes.max()),
               "mean_largest": float(res.largest.mean()), "max_largest": int(res.largest.max())}
        if detail:
            out["histogram"] = {str(k): v for k, v in res.histogram().items()}
            out["tail"] = [{"s": s, "probability": e.estimate, "lower": e.lower, "upper": e.upper}
                           for s, e in res.tail_table()]
            out["degree_tail"] = res.degree_tail.tolist()
        return out
    if op == "density":
        rep = structure.density_report(g, p)
        return {"edges": rep.edges, "nlogn_ratio": rep.nlogn_ratio, "linear_ratio": rep.linear_ratio,
                "exceeds_nlogn": rep.exceeds_nlogn}
    chk = structure.welfare_bound_check(g, p, args.vertices or None, args.max_edges)
    iso = structure.isolated_vertex_bound(g.subgraph(chk.component), p)
    return {"n_c": len(chk.component), "expected_largest": chk.expected_largest, "eps": chk.eps,
            "benefit_sum": chk.benefit_sum, "bound": chk.bound, "holds": chk.holds,
            "isolated_exact": iso.exact, "isolated_bound": iso.bound}


def cmd_analyze(args, manifest):
    profile, _ = _load(args, manifest, need_params=False)
    g = induced_graph(profile)
    op = args.op
    if op in P_OPS:
        if args.p is None:
            raise ValueError(f"--op {op} needs --p")
        detail = len(args.p) == 1 and not args.csv
        rows = [(p, _analyze_at(op, g, p, args, detail)) for p in args.p]
        if args.csv:
            header = ["p"] + list(rows[0][1])
            return [header] + [[p] + list(r.values()) for p, r in rows]
        if len(rows) == 1:
            return {"op": op, "p": rows[0][0], **rows[0][1]}
        return {"op": op, "results": [{"p": p, **r} for p, r in rows]}
    if args.csv:
        raise ValueError(f"--csv sweeps need a p-dependent op ({', '.join(P_OPS)})")
    if op == "mincut":
        cut = structure.global_min_cut(g)
        return {"op": op, "value": cut.value, "side": sorted(cut.side), "other": sorted(cut.other)}
    if op == "decompose":
        if args.t is None:
            raise ValueError("--op decompose needs --t")
        dec = structure.min_cut_decompose(g, args.t)
        first = dec.first_dense_leaf()
        return {"op": op, "threshold": args.t, "removed_edge_total": dec.removed_edge_total,
                "internal_nodes": len(dec.internal_nodes()),
                "dense_leaves": [sorted(x.vertices) for x in dec.dense_leaves()],
                "first_dense_leaf": sorted(first.vertices) if first else None, "tree": _tree_dict(dec.root)}
    # robustness
    if args.edge:
        if len(args.edge) != 2:
            raise ValueError("--edge takes two comma-separated vertices, e.g. 0,1")
        certs = [structure.edge_robustness(g, tuple(args.edge))]
    elif args.gamma is not None:
        cert = structure.robust_edge_exists(g, args.gamma)
        return {"op": op, "gamma": args.gamma, "witness": None if cert is None else _cert(cert)}
    else:
        certs = [structure.edge_robustness(g, e) for e in sorted(profile.edges())]
    return {"op": op, "edges": [_cert(c) for c in certs]}


def _cert(cert):
    return {"edge": list(cert.edge), "robustness": cert.robustness, "witness_cut": sorted(cert.witness_cut)}


def _is_star(g):
    n = g.number_of_nodes()
    return n >= 3 and g.number_of_edges() == n - 1 and max(d for _, d in g.degree) == n - 1


def cmd_welfare(args, manifest):
    profile, params = _load(args, manifest)
    spent = float(profile.costs(params.c).sum())
    if args.mode == "exact":
        uv = exact_utilities(profile, params, args.max_edges)
        out = {"mode": "exact", "welfare": uv.welfare, "total_benefit": uv.total_benefit}
    else:
        res = _mc(args, profile, params)
        out = {"mode": "mc", "welfare": _estimate_dict(res.welfare),
               "total_benefit": res.welfare.mean + spent}
    n = profile.n
    out.update({"params": {"c": params.c, "p": params.p}, "edge_expenditure": spent,
                "benefit_per_n2": out["total_benefit"] / n ** 2})
    g = induced_graph(profile)
    if _is_star(g):
        out["closed_form_star_benefit"] = closed_form_star(n, params)
    return out


def cmd_gw(args, manifest):
    if args.offspring == "pmf":
        if not args.pmf:
            raise ValueError("--offspring pmf needs --pmf p0,p1,...")
        off = branching.OffspringDistribution.from_pmf([float(x) for x in args.pmf.split(",")])
    elif args.offspring == "bernoulli":
        off = branching.OffspringDistribution.bernoulli(args.q)
    else:
        off = branching.OffspringDistribution.bernoulli_sum(args.m, args.q)
    rate = branching.rate_function(off, args.theta_max)
    rows = branching.verify_tail_bound(off, range(args.kmax + 1), args.runs, args.seed,
                                       args.confidence, rate=rate)
    table = [["k", "empirical", "lower", "upper", "bound", "satisfied"]]
    table += [[r.k, r.tail.estimate, r.tail.lower, r.tail.upper, r.bound, r.satisfied] for r in rows]
    manifest.arguments["rate_h"] = rate.h
    manifest.arguments["rate_boundary"] = rate.boundary
    return table


def cmd_sweep(args, manifest):
    if args.graph:
        profile, _ = _load(args, manifest, need_params=False)
    else:
        if args.family is None or args.n is None:
            raise ValueError("sweep needs --graph or --family with --n")
        profile = generators.generate(generators.TopologySpec(args.family, args.n, args.arity, args.q,
                                                              args.seed, args.orientation))

    def one(p):
        return equilibrium.equilibrium_region(profile, [p], args.c, args.check, args.max_edges, args.full_cap)

    if args.workers > 1:
        with ThreadPoolExecutor(args.workers) as pool:
            blocks = list(pool.map(one, args.p))
    else:
        blocks = [one(p) for p in args.p]
    table = [["p", "c", "is_equilibrium", "violations", "max_margin"]]
    for block in blocks:
        table += [[x.p, x.c, int(x.is_equilibrium), x.violations, x.max_margin] for x in block]
    return table


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="netcascade",
                                 description="Network formation under random cascade attacks.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, graph=True, params=True):
        if graph:
            sp.add_argument("--graph", required=True, help="graph JSON file")
        if params:
            sp.add_argument("--c", type=float, help="edge cost (overrides the graph file)")
            sp.add_argument("--p", type=float, help="spread probability (overrides the graph file)")
        sp.add_argument("--out", help="output file (default: stdout)")

    def mc_flags(sp):
        sp.add_argument("--samples", type=int)
        sp.add_argument("--eps", type=float)
        sp.add_argument("--delta", type=float, default=0.01)
        sp.add_argument("--confidence", type=float, default=0.99)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=1)

    def family_flags(sp, required):
        sp.add_argument("--family", choices=generators.FAMILIES, required=required)
        sp.add_argument("--n", type=int, required=required)
        sp.add_argument("--arity", type=int, default=2)
        sp.add_argument("--q", type=float, default=0.0)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--orientation", choices=("inward", "forward"), default="inward")

    sp = sub.add_parser("generate", help="write a named topology as a graph file")
    family_flags(sp, True)
    common(sp, graph=False)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("simulate", help="Monte Carlo utilities")
    common(sp)
    mc_flags(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("utility", help="exact or Monte Carlo utilities")
    common(sp)
    sp.add_argument("--mode", choices=("exact", "mc"), default="exact")
    sp.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    mc_flags(sp)
    sp.set_defaults(func=cmd_utility)

    sp = sub.add_parser("check-eq", help="equilibrium check under a deviation class")
    common(sp)
    sp.add_argument("--class", dest="deviation_class", choices=[c.value for c in equilibrium.DeviationClass],
                    default="drop")
    sp.add_argument("--mode", choices=("exact", "mc"), default="exact")
    sp.add_argument("--eps", type=float)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    sp.add_argument("--full-cap", type=int, default=equilibrium.DEFAULT_FULL_CAP)
    sp.set_defaults(func=cmd_check_eq)

    sp = sub.add_parser("best-response", help="exhaustive best responses, optionally iterated")
    common(sp)
    sp.add_argument("--player", type=int)
    sp.add_argument("--dynamics", action="store_true", help="round-robin best responses until stable or capped")
    sp.add_argument("--max-rounds", type=int, default=20)
    sp.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    sp.add_argument("--full-cap", type=int, default=equilibrium.DEFAULT_FULL_CAP)
    sp.set_defaults(func=cmd_best_response)

    sp = sub.add_parser("analyze", help="structural analyses of the game graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--op", required=True, choices=("mincut", "decompose", "robustness") + P_OPS)
    sp.add_argument("--p", type=parse_range, help="value or start:end:step sweep")
    sp.add_argument("--t", type=float, help="decomposition threshold")
    sp.add_argument("--gamma", type=int)
    sp.add_argument("--edge", type=_int_list)
    sp.add_argument("--vertices", type=_int_list)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--confidence", type=float, default=0.99)
    sp.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    sp.add_argument("--csv", action="store_true", help="emit a p-sweep table")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("welfare", help="social welfare, with the star closed form when it applies")
    common(sp)
    sp.add_argument("--mode", choices=("exact", "mc"), default="exact")
    sp.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    mc_flags(sp)
    sp.set_defaults(func=cmd_welfare)

    sp = sub.add_parser("gw", help="branching-process tail against the rate-function bound (CSV)")
    sp.add_argument("--offspring", choices=("bernoulli", "bernoulli-sum", "pmf"), default="bernoulli-sum")
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--q", type=float, default=0.3)
    sp.add_argument("--pmf", help="comma-separated probabilities of 0, 1, 2, ... offspring")
    sp.add_argument("--runs", type=int, default=100_000)
    sp.add_argument("--kmax", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--theta-max", type=float, default=50.0)
    sp.add_argument("--confidence", type=float, default=0.99)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gw)

    sp = sub.add_parser("sweep", help="exact equilibrium map over a (p, c) grid (CSV)")
    sp.add_argument("--graph")
    family_flags(sp, False)
    sp.add_argument("--p", type=parse_range, required=True)
    sp.add_argument("--c", type=parse_range, required=True)
    sp.add_argument("--check", choices=[c.value for c in equilibrium.DeviationClass], default="full")
    sp.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    sp.add_argument("--full-cap", type=int, default=equilibrium.DEFAULT_FULL_CAP)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    manifest = RunManifest(args, argv)
    try:
        payload = args.func(args, manifest)
        _emit(args, payload, manifest)
    except EnumerationCapError as exc:
        print(f"netcascade: error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, OSError, nx.NetworkXException) as exc:
        print(f"netcascade: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
