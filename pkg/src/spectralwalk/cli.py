"""Command-line interface.

Subcommands:

    build      construct lattice / path / cycle / point-cloud graphs
    invariants moment and Poisson spectra, starred spectrum, heat, zeta
    simulate   Monte Carlo exit statistics with z-scores against exact
    verify     stirling-duality | zeta | hankel identity checks
    recover    starred spectrum from pspec or heat moments
    heat       heat content samples as CSV

Every run emits a manifest (command, parameters, seed, version, input
digests, timestamp). Exit codes: 0 success, 1 internal error or failed
verification, 2 invalid input or violated precondition.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .build import LatticeSpec, PointCloudSpec, build_cycle, build_lattice, build_path, build_point_cloud
from .domain import make_domain, regularity
from .errors import SpectralwalkError
from .fileio import load_domain_spec, read_graph, read_points_csv, write_graph
from .operators import interior_laplacian
from .poisson import moment_spectrum, poisson_spectrum
from .spectral import (
    eigendecompose,
    hankel_determinants,
    heat_asymptotics,
    heat_content,
    recover_from_heat,
    recover_from_pspec,
    star_polynomial,
    zeta,
)
from .stirling import mspec_from_pspec, pspec_from_mspec
from .walk import WalkConfig, compare_exact, run_walks
from .poisson import solve_hierarchies

DUALITY_TOL = 1e-9
ZETA_TOL = 1e-10
HANKEL_TOL = 1e-10


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _manifest(args, inputs):
    params = {
        k: v for k, v in sorted(vars(args).items()) if k not in ("func",) and v is not None
    }
    return {
        "command": args.command,
        "parameters": params,
        "seed": getattr(args, "seed", None),
        "toolVersion": __version__,
        "inputDigests": {name: _digest(path) for name, path in inputs.items() if path},
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _emit_json(doc, out):
    text = json.dumps(doc, indent=1)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_domain(args):
    graph = read_graph(args.graph) if args.graph else None
    graph, vertex_set = load_domain_spec(args.domain, graph=graph)
    return graph, make_domain(graph, vertex_set)


def _zeta_value(z):
    if z.imag == 0.0:
        return z.real
    return {"re": z.real, "im": z.imag}


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args):
    if args.kind == "lattice":
        if len(args.lo) != args.dim or len(args.hi) != args.dim:
            raise SpectralwalkError("--lo/--hi must list one bound per dimension")
        spec = LatticeSpec(args.dim, tuple(zip(args.lo, args.hi)), args.spacing)
        g = build_lattice(spec)
    elif args.kind == "path":
        g = build_path(args.n, args.spacing)
    elif args.kind == "cycle":
        g = build_cycle(args.n)
    else:  # cloud
        points = read_points_csv(args.points)
        g = build_point_cloud(PointCloudSpec(tuple(points), args.cutoff))
    write_graph(g, args.out)
    print(f"wrote {g.n_vertices} vertices, {len(g.edge_weights)} directed edges to {args.out}")
    return 0


def cmd_invariants(args):
    graph, dom = _load_domain(args)
    a1 = moment_spectrum(dom, args.kmax)
    a2 = poisson_spectrum(dom, args.kmax)
    reg = regularity(dom)
    sd = eigendecompose(
        interior_laplacian(dom), cluster_rtol=args.cluster_rtol, star_rtol=args.star_rtol
    )
    doc = {
        "mspec": a1,
        "pspec": a2,
        "alpha": reg.alpha if reg.is_regular else None,
        "specStar": {
            "mu": sd.star_mu.tolist(),
            "lambdaPaper": (-sd.star_mu).tolist(),
        },
        "partition": sd.star_masses.tolist(),
    }
    if args.heat_nmax is not None:
        doc["q"] = heat_asymptotics(dom, sd, args.heat_nmax)
    if args.zeta:
        values = []
        for tok in args.zeta.split(","):
            try:
                s = complex(tok)
            except ValueError:
                raise SpectralwalkError(f"bad zeta argument {tok!r}")
            values.append({"s": _zeta_value(s), "value": _zeta_value(zeta(dom, sd, s))})
        doc["zetaValues"] = values
    doc["manifest"] = _manifest(args, {"graph": args.graph, "domain": args.domain})
    _emit_json(doc, args.out)
    return 0


def cmd_simulate(args):
    graph, dom = _load_domain(args)
    index = {orig: i for i, orig in enumerate(graph.original_ids)}
    if args.start not in index:
        raise SpectralwalkError(f"start vertex {args.start} is not in the graph")
    cfg = WalkConfig(
        start_vertex=index[args.start],
        num_walks=args.walks,
        seed=args.seed,
        k_max=args.kmax,
        max_steps=args.max_steps,
    )
    workers = int(os.environ.get("SPECTRALWALK_THREADS", "1"))
    stats = run_walks(dom, cfg, workers=workers if workers > 1 else None)
    hierarchy = solve_hierarchies(dom, args.kmax)
    z = compare_exact(dom, stats, hierarchy)
    doc = {
        "start": args.start,
        "walksRun": stats.walks_run,
        "complete": stats.complete,
        "moments": list(stats.empirical_moments),
        "standardErrors": list(stats.standard_errors),
        "etaHistogram": [[l, c] for l, c in sorted(stats.eta_histogram.items())],
        "exact": [hierarchy.exit_moment(dom, cfg.start_vertex, k) for k in range(args.kmax + 1)],
        "zScores": z,
        "manifest": _manifest(args, {"graph": args.graph, "domain": args.domain}),
    }
    _emit_json(doc, args.out)
    return 0


def _verify_stirling(args, dom):
    reg = regularity(dom)
    if not reg.is_regular:
        detail = ", ".join(f"{v}: {w:.6g}" for v, w in sorted(reg.per_vertex.items()))
        raise SpectralwalkError(
            f"stirling-duality needs a weight-regular domain; interior weights differ ({detail})"
        )
    a1 = moment_spectrum(dom, args.kmax)
    a2 = poisson_spectrum(dom, args.kmax)
    from_pspec = mspec_from_pspec(a2, reg.alpha, args.kmax)
    from_mspec = pspec_from_mspec(a1, reg.alpha, args.kmax)
    results = []
    for k in range(args.kmax + 1):
        r1 = abs(from_pspec[k] - a1[k]) / max(abs(a1[k]), 1e-300)
        r2 = abs(from_mspec[k] - a2[k]) / max(abs(a2[k]), 1e-300)
        residual = max(r1, r2)
        results.append({"k": k, "residual": residual, "pass": residual < args.tol})
    return results


def _verify_zeta(args, dom):
    sd = eigendecompose(interior_laplacian(dom))
    a2 = poisson_spectrum(dom, args.kmax)
    q = heat_asymptotics(dom, sd, args.kmax)
    results = []
    for n in range(1, args.kmax + 1):
        zp = zeta(dom, sd, n).real
        zm = zeta(dom, sd, -n).real
        want_p = a2[n] / math.factorial(n)
        want_m = (-1.0) ** n * q[n] * math.factorial(n)
        r1 = abs(zp - want_p) / max(abs(want_p), 1e-300)
        r2 = abs(zm - want_m) / max(abs(want_m), 1e-300)
        residual = max(r1, r2)
        results.append({"n": n, "residual": residual, "pass": residual < args.tol})
    return results


def _verify_hankel(args, dom):
    a2 = poisson_spectrum(dom, args.kmax)
    moments = [v / math.factorial(n) for n, v in enumerate(a2)]
    diag = hankel_determinants(moments)
    results = []
    for n, (r0, r1) in enumerate(zip(diag.normalized_det0, diag.normalized_det1), start=1):
        ok = r0 >= -args.tol and r1 >= -args.tol
        results.append(
            {"n": n, "normalizedDet0": r0, "normalizedDet1": r1, "pass": bool(ok)}
        )
    return results


def cmd_verify(args):
    graph, dom = _load_domain(args)
    if args.check == "stirling-duality":
        args.tol = args.tol if args.tol is not None else DUALITY_TOL
        results = _verify_stirling(args, dom)
    elif args.check == "zeta":
        args.tol = args.tol if args.tol is not None else ZETA_TOL
        results = _verify_zeta(args, dom)
    else:
        args.tol = args.tol if args.tol is not None else HANKEL_TOL
        results = _verify_hankel(args, dom)
    ok = all(r["pass"] for r in results)
    doc = {
        "check": args.check,
        "tolerance": args.tol,
        "results": results,
        "pass": ok,
        "manifest": _manifest(args, {"graph": args.graph, "domain": args.domain}),
    }
    _emit_json(doc, args.out)
    for r in results:
        key = "k" if "k" in r else "n"
        detail = f"residual={r['residual']:.3e}" if "residual" in r else (
            f"det0={r['normalizedDet0']:.3e} det1={r['normalizedDet1']:.3e}"
        )
        print(f"{args.check} {key}={r[key]}: {detail} {'PASS' if r['pass'] else 'FAIL'}",
              file=sys.stderr)
    return 0 if ok else 1


def cmd_recover(args):
    doc = json.load(open(args.moments, "r", encoding="utf-8"))
    if args.source == "pspec":
        seq = doc.get("pspec") if isinstance(doc, dict) else doc
        if seq is None:
            raise SpectralwalkError(f"{args.moments} carries no 'pspec' array")
        measure = recover_from_pspec(seq, rank_rtol=args.rank_rtol, n_atoms=args.n)
        poly = star_polynomial(seq, measure.n_atoms, rank_rtol=args.rank_rtol)
    else:
        seq = None
        if isinstance(doc, dict):
            seq = doc.get("q", doc.get("heatAsymptotics"))
        elif isinstance(doc, list):
            seq = doc
        if seq is None:
            raise SpectralwalkError(f"{args.moments} carries no 'q' array")
        measure = recover_from_heat(seq, rank_rtol=args.rank_rtol, n_atoms=args.n)
        poly = np.poly(measure.support_points)
    diag = measure.conditioning
    out = {
        "from": args.source,
        "nAtoms": measure.n_atoms,
        "supportPoints": list(measure.support_points),
        "masses": list(measure.masses),
        "specStar": {
            "mu": list(measure.recovered_mu),
            "lambdaPaper": list(measure.recovered_lambda_paper),
        },
        "starPolynomial": list(poly),
        "diagnostics": {
            "det0": list(diag.det0),
            "det1": list(diag.det1),
            "normalizedDet0": list(diag.normalized_det0),
            "normalizedDet1": list(diag.normalized_det1),
            "scale": diag.scale,
            "condition": diag.condition,
        },
        "manifest": _manifest(args, {"moments": args.moments}),
    }
    _emit_json(out, args.out)
    return 0


def cmd_heat(args):
    graph, dom = _load_domain(args)
    if args.t0 < 0 or args.t1 < 0:
        raise SpectralwalkError("times must be nonnegative")
    if args.steps < 1:
        raise SpectralwalkError("steps must be >= 1")
    sd = eigendecompose(interior_laplacian(dom))
    if args.steps == 1 or args.t0 == args.t1:
        times = [args.t0]
    else:
        times = np.linspace(args.t0, args.t1, args.steps).tolist()
    lines = ["t,Q"]
    for t in times:
        lines.append(f"{t!r},{heat_content(dom, sd, t)!r}")
    text = "\n".join(lines) + "\n"
    manifest = _manifest(args, {"graph": args.graph, "domain": args.domain})
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=1)
            fh.write("\n")
    else:
        sys.stdout.write(text)
        print(json.dumps(manifest), file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="spectralwalk", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a graph file")
    bsub = b.add_subparsers(dest="kind", required=True)
    lat = bsub.add_parser("lattice")
    lat.add_argument("--dim", type=int, required=True)
    lat.add_argument("--lo", type=int, nargs="+", required=True)
    lat.add_argument("--hi", type=int, nargs="+", required=True)
    lat.add_argument("--spacing", type=float, default=1.0)
    pa = bsub.add_parser("path")
    pa.add_argument("--n", type=int, required=True)
    pa.add_argument("--spacing", type=float, default=1.0)
    cy = bsub.add_parser("cycle")
    cy.add_argument("--n", type=int, required=True)
    cl = bsub.add_parser("cloud")
    cl.add_argument("--points", required=True, help="CSV of coordinate rows")
    cl.add_argument("--cutoff", type=float, required=True)
    for sp in (lat, pa, cy, cl):
        sp.add_argument("-o", "--out", required=True)
        sp.set_defaults(func=cmd_build)

    inv = sub.add_parser("invariants", help="spectra, starred spectrum, heat, zeta")
    inv.add_argument("--graph")
    inv.add_argument("--domain", required=True)
    inv.add_argument("--kmax", type=int, required=True)
    inv.add_argument("--heat-nmax", type=int, default=None)
    inv.add_argument("--zeta", default=None, help="comma-separated s values")
    inv.add_argument("--cluster-rtol", type=float, default=1e-9)
    inv.add_argument("--star-rtol", type=float, default=1e-10)
    inv.add_argument("-o", "--out")
    inv.set_defaults(func=cmd_invariants)

    sim = sub.add_parser("simulate", help="Monte Carlo exit statistics")
    sim.add_argument("--graph")
    sim.add_argument("--domain", required=True)
    sim.add_argument("--start", type=int, required=True)
    sim.add_argument("--walks", type=int, required=True)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--kmax", type=int, default=3)
    sim.add_argument("--max-steps", type=int, default=10**8)
    sim.add_argument("-o", "--out")
    sim.set_defaults(func=cmd_simulate)

    ver = sub.add_parser("verify", help="identity checks with pass/fail verdicts")
    ver.add_argument("check", choices=["stirling-duality", "zeta", "hankel"])
    ver.add_argument("--graph")
    ver.add_argument("--domain", required=True)
    ver.add_argument("--kmax", type=int, required=True)
    ver.add_argument("--tol", type=float, default=None)
    ver.add_argument("-o", "--out")
    ver.set_defaults(func=cmd_verify)

    rec = sub.add_parser("recover", help="starred spectrum from a moment file")
    rec.add_argument("--from", dest="source", choices=["pspec", "heat"], required=True)
    rec.add_argument("--moments", required=True)
    rec.add_argument("--n", type=int, default=None)
    rec.add_argument("--rank-rtol", type=float, default=1e-10)
    rec.add_argument("-o", "--out")
    rec.set_defaults(func=cmd_recover)

    he = sub.add_parser("heat", help="heat content curve as CSV")
    he.add_argument("--graph")
    he.add_argument("--domain", required=True)
    he.add_argument("--t0", type=float, required=True)
    he.add_argument("--t1", type=float, required=True)
    he.add_argument("--steps", type=int, required=True)
    he.add_argument("-o", "--out")
    he.set_defaults(func=cmd_heat)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpectralwalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal problem
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
