"""Repulsive boundary force of the functional at domain facets.

Near any facet the functional behaves as F[n* + eps*kappa] = F[n*]
+ G*sqrt(eps) + O(eps) with G <= 0, so its gradient diverges repulsively
like 1/sqrt(eps).  The strength G follows in closed form from the facet
minimizer and the couplings of on-facet to off-facet configuration states,
and is verified here against finite-difference slopes of the exact
functional along the facet normal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    EmptyFacetBasisError,
    InvalidArgumentError,
    PathExitsDomainError,
)
from .functional import FunctionalSample, SearchOptions, constrained_search
from .operators import SectorOperator
from .polytope import DomainPolytope, facet_distances, membership
from .sectors import Sector

ON_FACET_TOL = 1e-9
RIDGE_TOL = 1e-6


@dataclass(frozen=True)
class FacetPoint:
    """A point on exactly one facet of the domain."""

    facet: int
    n_star: np.ndarray
    off_facet_distances: np.ndarray


@dataclass(frozen=True)
class ForceResult:
    """Repulsion strength G with its decomposition into off-facet terms."""

    G: float
    minimizer_used: np.ndarray
    contributing_terms: tuple[tuple[int, float, float], ...]

    def term_sum(self) -> float:
        return sum(t[1] / t[2] for t in self.contributing_terms)


def make_facet_point(poly: DomainPolytope, facet: int, n_star) -> FacetPoint:
    """Validate and package a facet point.

    Requires D_facet(n*) ~ 0 and a clear margin to every other facet;
    points near ridges (two active facets) are refused because the
    square-root expansion assumes a single active constraint.
    """
    if not 0 <= facet < len(poly.facets):
        raise InvalidArgumentError(f"facet index {facet} out of range")
    n_star = np.asarray(n_star, dtype=float)
    D = facet_distances(poly, n_star)
    scale = max(1.0, poly.sector.N)
    if abs(D[facet]) > 1e-10 * scale:
        raise InvalidArgumentError(
            f"point is not on facet {facet}: D = {D[facet]:.3e}"
        )
    others = np.delete(D, facet)
    if np.any(others <= RIDGE_TOL):
        raise InvalidArgumentError(
            "facet point lies on (or too close to) a second facet"
        )
    if membership(poly, n_star)[0] == "outside":
        raise InvalidArgumentError("facet point is outside the domain")
    return FacetPoint(facet=facet, n_star=n_star, off_facet_distances=others)


def facet_index_for(poly: DomainPolytope, kappa) -> int:
    """Index of the facet whose inward normal is parallel to kappa."""
    kappa = np.asarray(kappa, dtype=float)
    kappa = kappa - kappa.mean()
    norm = np.linalg.norm(kappa)
    if norm <= 1e-12:
        raise InvalidArgumentError("facet normal vanishes on the tangent plane")
    kappa = kappa / norm
    for j, f in enumerate(poly.facets):
        if np.allclose(f.kappa, kappa, atol=1e-9):
            return j
    raise InvalidArgumentError("no facet matches the given normal")


def on_facet_states(poly: DomainPolytope, facet: int) -> np.ndarray:
    """Indices of configuration states lying on the given facet."""
    scale = max(1.0, poly.sector.N)
    return np.flatnonzero(np.abs(poly.T[facet]) <= ON_FACET_TOL * scale)


def facet_minimizer(
    sector: Sector,
    poly: DomainPolytope,
    Wmat: SectorOperator,
    fp: FacetPoint,
    opts: SearchOptions | None = None,
) -> tuple[FunctionalSample, list[np.ndarray]]:
    """All value-degenerate constrained-search minimizers at the facet point.

    The search basis is restricted to the on-facet configuration states;
    every distinct minimizer within the value tolerance is returned since the
    repulsion strength must be minimized over them.
    """
    opts = opts or SearchOptions()
    if on_facet_states(poly, fp.facet).size == 0:
        raise EmptyFacetBasisError(
            f"no configuration state lies on facet {fp.facet}"
        )
    sample = constrained_search(
        sector,
        Wmat,
        fp.n_star,
        replace(opts, collect_degenerate=True),
        poly=poly,
    )
    minimizers = list(sample.ties) if sample.ties else [sample.minimizer]
    return sample, minimizers


def repulsion_strength(
    sector: Sector,
    poly: DomainPolytope,
    Wmat: SectorOperator,
    fp: FacetPoint,
    opts: SearchOptions | None = None,
    minimizers=None,
) -> ForceResult:
    """Closed-form repulsion strength at a facet point.

    G = -2 * sqrt( sum over off-facet states a of |<a|W|Phi*>|^2 / D_s(a) ),
    where Phi* is a facet minimizer.  Among degenerate minimizers the one
    minimizing this (nonpositive) expression is used: the constrained search
    continues off the facet from whichever minimizer lowers the value
    fastest, so the functional's slope is the most negative member of the
    family (the min-over-minimizers directional derivative of a min
    function).  G = 0 (no force, pinning possible) is a legal result.
    """
    if minimizers is None:
        _, minimizers = facet_minimizer(sector, poly, Wmat, fp, opts)
    scale = max(1.0, sector.N)
    dist = poly.T[fp.facet]
    off = np.flatnonzero(dist > ON_FACET_TOL * scale)
    best: ForceResult | None = None
    for phi in minimizers:
        coupling = Wmat.matrix @ phi
        terms = tuple(
            (int(a), float(coupling[a] ** 2), float(dist[a])) for a in off
        )
        total = sum(t[1] / t[2] for t in terms)
        G = -2.0 * math.sqrt(max(total, 0.0))
        if best is None or G < best.G:
            best = ForceResult(
                G=G, minimizer_used=phi, contributing_terms=terms
            )
    return best


def verify_slope(
    sector: Sector,
    Wmat: SectorOperator,
    poly: DomainPolytope,
    fp: FacetPoint,
    eps_list,
    opts: SearchOptions | None = None,
    return_samples: bool = False,
):
    """Fit F[n* + eps*kappa] = F[n*] + G_fit*sqrt(eps) along the facet normal.

    The fit is weighted least squares with weights 1/eps, emphasizing the
    asymptotic regime where the O(eps) correction is negligible.  Returns the
    fitted slope and the weighted RMS residual; with ``return_samples`` the
    (eps, F) pairs are appended to the return value.
    """
    opts = opts or SearchOptions()
    eps_arr = np.sort(np.asarray(list(eps_list), dtype=float))[::-1]
    if np.any(eps_arr <= 0):
        raise InvalidArgumentError("eps values must be positive")
    kappa = np.asarray(poly.facets[fp.facet].kappa)
    base, minimizers = facet_minimizer(sector, poly, Wmat, fp, opts)
    f0 = base.value

    values = []
    warm: tuple = tuple(minimizers)
    for eps in eps_arr:  # continuation from large eps down to the asymptotics
        n_eps = fp.n_star + eps * kappa
        if membership(poly, n_eps)[0] == "outside":
            raise PathExitsDomainError(
                f"n* + {eps} * kappa leaves the domain"
            )
        # The warm start from the neighbouring eps already sits in the right
        # basin, so a reduced multistart budget suffices per ladder step.
        step_opts = replace(
            opts, initial_points=warm, n_starts=min(opts.n_starts, 8)
        )
        sample = constrained_search(sector, Wmat, n_eps, step_opts, poly=poly)
        values.append(sample.value)
        warm = (sample.minimizer,) + tuple(minimizers)

    eps_arr = eps_arr[::-1]
    values = np.array(values[::-1])
    dF = values - f0
    weights = 1.0 / eps_arr
    g_fit = float(
        np.sum(weights * dF * np.sqrt(eps_arr)) / np.sum(weights * eps_arr)
    )
    resid = dF - g_fit * np.sqrt(eps_arr)
    rms = float(np.sqrt(np.sum(weights * resid**2) / np.sum(weights)))
    if return_samples:
        return g_fit, rms, list(zip(eps_arr.tolist(), values.tolist()))
    return g_fit, rms


def appendix_coefficient_check(
    sector: Sector,
    Wmat: SectorOperator,
    poly: DomainPolytope,
    fp: FacetPoint,
    eps: float,
    opts: SearchOptions | None = None,
) -> dict:
    """First-order consistency diagnostic of the near-facet expansion.

    The off-facet coefficients of the minimizer at n* + eps*kappa, rescaled
    by 1/sqrt(eps), must satisfy sum r_a^2 D_s(a) = 1 to first order; the
    on-facet coefficients should drift from the facet minimizer by O(eps),
    not O(sqrt(eps)).
    """
    if eps > 1e-4:
        raise InvalidArgumentError("diagnostic assumes eps <= 1e-4")
    opts = opts or SearchOptions()
    base, minimizers = facet_minimizer(sector, poly, Wmat, fp, opts)
    kappa = np.asarray(poly.facets[fp.facet].kappa)
    sample = constrained_search(
        sector,
        Wmat,
        fp.n_star + eps * kappa,
        replace(opts, initial_points=tuple(minimizers)),
        poly=poly,
    )
    c = sample.minimizer
    scale = max(1.0, sector.N)
    dist = poly.T[fp.facet]
    off = dist > ON_FACET_TOL * scale
    r = c[off] / math.sqrt(eps)
    constraint_sum = float(np.sum(r**2 * dist[off]))
    drift = min(
        float(np.max(np.abs(np.abs(c[~off]) - np.abs(phi[~off]))))
        for phi in minimizers
    )
    return {
        "eps": eps,
        "constraint_sum": constraint_sum,
        "off_facet_norm": float(np.linalg.norm(c[off])),
        "on_facet_drift": drift,
        "sqrt_scaling_flag": bool(drift > math.sqrt(eps)),
    }
