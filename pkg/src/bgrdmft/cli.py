"""Command-line front end.

Subcommands mirror the library layers: ``sector`` and ``domain`` dump basis
and geometry data, ``functional`` produces grid or scan CSVs, ``force``
evaluates the boundary repulsion with its slope verification, and ``approx``
runs the d=3 approximation studies.  Outputs are CSV (grids) and JSON
(structured results), written atomically; identical configurations and seeds
produce byte-identical files.

Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from ._output import atomic_write, csv_text, fmt, json_text
from .errors import BgrdmftError, InvalidArgumentError
from .force import (
    facet_index_for,
    make_facet_point,
    repulsion_strength,
    verify_slope,
)
from .functional import (
    SearchOptions,
    barycentric_grid,
    constrained_search,
    default_kinetic_vectors,
    functional_grid,
    t_scan,
)
from .hubbard_d3 import energy_error_study, functional_error_grid
from .operators import (
    PairInteraction,
    build_interaction_matrix,
    hubbard_interaction,
)
from .polytope import build_domain, facet_distances, polytope_to_json
from .sectors import enumerate_sector


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("BGRDMFT_THREADS", "1")))
    except ValueError:
        return 1


def _load_interaction(spec: str, d: int) -> PairInteraction:
    if spec == "hubbard":
        return hubbard_interaction(d)
    try:
        with open(spec) as handle:
            obj = json.load(handle)
        coeffs = {
            (int(k1), int(k2), int(k3), int(k4)): float(amp)
            for k1, k2, k3, k4, amp in obj["coefficients"]
        }
        return PairInteraction(d=int(obj["d"]), coefficients=coeffs)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InvalidArgumentError(f"cannot load interaction {spec!r}: {exc}")


def _emit(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


def _config_meta(args, extra=None) -> dict:
    meta = {"tool": f"bgrdmft {__version__}"}
    for key in ("d", "N", "P", "interaction", "method", "grid", "seed"):
        if hasattr(args, key):
            meta[key] = getattr(args, key)
    meta.update(extra or {})
    return meta


def _cmd_sector(args) -> int:
    sector = enumerate_sector(args.d, args.N, args.P)
    text = json_text(json.loads(sector.to_json()))
    _emit(os.path.join(args.out, "sector.json") if args.out else None, text)
    return 0


def _cmd_domain(args) -> int:
    sector = enumerate_sector(args.d, args.N, args.P)
    poly = build_domain(sector)
    text = json_text(json.loads(polytope_to_json(poly)))
    rows = []
    if poly.affine_dim in (1, 2) and poly.facets:
        for n in barycentric_grid(poly, args.grid):
            rows.append(list(n) + list(facet_distances(poly, n)))
    header = [f"n{k}" for k in range(args.d)] + [
        f"D{j + 1}" for j in range(len(poly.facets))
    ]
    csv = csv_text(header, rows, _config_meta(args))
    if args.out:
        _emit(os.path.join(args.out, "domain.json"), text)
        _emit(os.path.join(args.out, "facet_distances.csv"), csv)
    else:
        sys.stdout.write(text)
    return 0


def _grid_rows(samples, d):
    rows = []
    for s in samples:
        grad = float(np.linalg.norm(s.gradient)) if s.gradient is not None else ""
        rows.append(
            [fmt(x) for x in s.n]
            + [fmt(s.value), fmt(grad) if grad != "" else "", s.method,
               "1" if s.degenerate else "0"]
        )
    return rows


def _cmd_functional(args) -> int:
    sector = enumerate_sector(args.d, args.N, args.P)
    W = _load_interaction(args.interaction, args.d)
    Wmat = build_interaction_matrix(W, sector)
    opts = SearchOptions(seed=args.seed)
    method_map = {
        "simplex": "simplex-form",
        "general": "general-form",
        "search": "constrained-search",
        "auto": "auto",
        "t-scan": "t-scan",
    }
    method = method_map[args.method]
    if method == "t-scan":
        samples = t_scan(
            sector, Wmat, default_kinetic_vectors(args.d, seed=args.seed)
        )
    else:
        poly = build_domain(sector)
        samples = functional_grid(
            sector, Wmat, args.grid, method, opts, poly=poly,
            threads=_thread_count(),
        )
    header = [f"n{k}" for k in range(args.d)] + [
        "F", "grad_norm", "method", "degenerate_flag"
    ]
    meta = _config_meta(args, {"tol_constraint": opts.tol_constraint,
                               "tol_value": opts.tol_value})
    csv = csv_text(header, _grid_rows(samples, args.d), meta)
    _emit(os.path.join(args.out, "functional.csv") if args.out else None, csv)
    if args.out:
        _emit(
            os.path.join(args.out, "functional_meta.json"),
            json_text(meta),
        )
    return 0


def _cmd_force(args) -> int:
    sector = enumerate_sector(args.d, args.N, args.P)
    W = _load_interaction(args.interaction, args.d)
    Wmat = build_interaction_matrix(W, sector)
    poly = build_domain(sector)
    n_star = np.array([float(x) for x in args.facet_point.split(",")])
    if args.facet_normal:
        kappa = [float(x) for x in args.facet_normal.split(",")]
        facet = facet_index_for(poly, kappa)
    else:
        facet = int(np.argmin(np.abs(facet_distances(poly, n_star))))
    fp = make_facet_point(poly, facet, n_star)
    opts = SearchOptions(seed=args.seed)
    result = repulsion_strength(sector, poly, Wmat, fp, opts)
    eps = np.logspace(
        np.log10(args.eps_min), np.log10(args.eps_max), args.eps_steps
    )
    g_fit, residual, samples = verify_slope(
        sector, Wmat, poly, fp, eps, opts, return_samples=True
    )
    base = constrained_search(sector, Wmat, n_star, opts, poly=poly)
    rows = [[np.sqrt(e), f] for e, f in samples]
    report = {
        "facet": facet,
        "n_star": [float(x) for x in n_star],
        "G": result.G,
        "G_fit": g_fit,
        "fit_residual": residual,
        "F_on_facet": base.value,
        "contributing_terms": [
            {"state": int(a), "coupling_sq": c, "distance": dd}
            for a, c, dd in result.contributing_terms
        ],
    }
    if args.out:
        _emit(os.path.join(args.out, "force.json"), json_text(report))
        _emit(
            os.path.join(args.out, "slope.csv"),
            csv_text(["sqrt_eps", "F"], rows, _config_meta(args)),
        )
    else:
        sys.stdout.write(json_text(report))
    return 0


def _cmd_approx(args) -> int:
    if args.study == "functional-map":
        rows = functional_error_grid(args.grid)
        csv = csv_text(
            ["n0", "n1", "n2", "F_exact", "F_approx", "zbar_exact", "zbar_approx"],
            [
                list(r.n) + [r.f_exact, r.f_approx, r.zbar_exact, r.zbar_approx]
                for r in rows
            ],
            _config_meta(args),
        )
        _emit(
            os.path.join(args.out, "approx_functional.csv") if args.out else None,
            csv,
        )
    else:
        r_grid = np.linspace(0.0, 1.0, args.r_steps)
        theta_grid = np.linspace(0.0, 2.0 * np.pi, args.theta_steps, endpoint=False)
        rows = energy_error_study(r_grid, theta_grid, grid_resolution=args.grid)
        csv = csv_text(
            ["r", "theta", "E_exact", "E_approx", "delta_E"],
            [[r.r, r.theta, r.e_exact, r.e_approx, r.delta_e] for r in rows],
            _config_meta(args),
        )
        _emit(
            os.path.join(args.out, "energy_disk.csv") if args.out else None, csv
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bgrdmft",
        description="Occupation-number functional theory for lattice bosons",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid_default=40):
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--N", type=int, required=True)
        p.add_argument("--P", type=int, required=True)
        p.add_argument("--interaction", default="hubbard")
        p.add_argument("--grid", type=int, default=grid_default)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)

    p = sub.add_parser("sector", help="enumerate a symmetry sector")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--P", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sector)

    p = sub.add_parser("domain", help="build the representability polytope")
    common(p)
    p.set_defaults(func=_cmd_domain)

    p = sub.add_parser("functional", help="evaluate the functional on a grid")
    common(p)
    p.add_argument(
        "--method",
        choices=["auto", "simplex", "general", "search", "t-scan"],
        default="auto",
    )
    p.set_defaults(func=_cmd_functional)

    p = sub.add_parser("force", help="boundary repulsion strength at a facet point")
    common(p)
    p.add_argument("--facet-point", required=True)
    p.add_argument("--facet-normal", default=None)
    p.add_argument("--eps-min", type=float, default=1e-6)
    p.add_argument("--eps-max", type=float, default=1e-3)
    p.add_argument("--eps-steps", type=int, default=12)
    p.set_defaults(func=_cmd_force)

    p = sub.add_parser("approx", help="d=3 approximation studies")
    p.add_argument("--study", choices=["functional-map", "energy-disk"],
                   default="functional-map")
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--r-steps", type=int, default=20)
    p.add_argument("--theta-steps", type=int, default=72)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_approx)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BgrdmftError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
