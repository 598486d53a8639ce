"""Representable domain of momentum occupation vectors as a convex polytope.

The domain for a sector is the convex hull of its configuration occupation
vectors.  Facets are stored in a normalized convention: the linear part
kappa has zero component sum (tangent to the hyperplane sum n_k = N) and
unit Euclidean norm, so the facet value D(n) = kappa.n + mu is the distance
to the facet hyperplane within the simplex hyperplane.

The incidence-distance matrix T[j, a] = D_j(occupation vector a) over the
whole sector basis, its Moore-Penrose pseudoinverse and the kernel of T
parameterize every weight vector consistent with a given occupation vector.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import (
    DegenerateConstraintError,
    OffHyperplaneError,
    UnsupportedDimensionError,
)
from .sectors import ConfigState, Sector

FACET_TOL = 1e-9
DEDUP_TOL = 1e-9
SVD_RCOND = 1e-10
MAX_AFFINE_DIM = 4
MAX_FACET_SUBSETS = 5_000_000


@dataclass(frozen=True)
class FacetConstraint:
    """Affine facet functional D(n) = kappa . n + mu >= 0."""

    kappa: tuple[float, ...]
    mu: float

    def value(self, n) -> float:
        return float(np.dot(self.kappa, n) + self.mu)


@dataclass(frozen=True)
class IncidenceData:
    """Distance matrix T with pseudoinverse and orthonormal kernel basis."""

    T: np.ndarray
    T_pinv: np.ndarray
    kernel: np.ndarray
    rank: int


@dataclass(frozen=True)
class DomainPolytope:
    sector: Sector
    vertices: tuple[ConfigState, ...]
    facets: tuple[FacetConstraint, ...]
    classification: tuple[str, ...]  # per sector state: vertex|boundary|interior
    degenerate: bool  # affine dimension 0 (single-configuration sector)
    affine_dim: int
    centroid: np.ndarray
    tangent_basis: np.ndarray  # d x affine_dim, orthonormal, zero column sums
    incidence: IncidenceData

    @property
    def T(self) -> np.ndarray:
        return self.incidence.T

    @property
    def T_pinv(self) -> np.ndarray:
        return self.incidence.T_pinv

    @property
    def kernel(self) -> np.ndarray:
        return self.incidence.kernel


def normalize_constraint(kappa_raw, mu_raw: float, N: int) -> FacetConstraint:
    """Shift a raw constraint tangent to the particle-number hyperplane and
    rescale it to a unit normal.

    The shift kappa -> kappa + (nu, ..., nu), mu -> mu - nu*N with
    nu = -mean(kappa) leaves the constraint equivalent on the hyperplane;
    the subsequent rescale changes all facet values by a common positive
    factor only.
    """
    kappa = np.asarray(kappa_raw, dtype=float)
    nu = -float(np.mean(kappa))
    kappa = kappa + nu
    mu = float(mu_raw) - nu * N
    norm = float(np.linalg.norm(kappa))
    if norm <= 1e-12:
        raise DegenerateConstraintError(
            "constraint normal vanishes after tangential projection"
        )
    return FacetConstraint(kappa=tuple(kappa / norm), mu=mu / norm)


def _facet_normals_through(Q: np.ndarray, subset: tuple[int, ...]) -> np.ndarray | None:
    """Unit normal of the hyperplane through the given projected points,
    or None if they do not span a full hyperplane."""
    r = Q.shape[1]
    if r == 1:
        return np.array([1.0])
    diffs = Q[list(subset[1:])] - Q[subset[0]]
    _, s, vt = np.linalg.svd(diffs)
    if np.sum(s > 1e-9 * max(1.0, s[0])) != r - 1:
        return None  # affinely degenerate subset: no unique hyperplane
    return vt[-1]


def _enumerate_facets(Q: np.ndarray, tol: float):
    """Brute-force supporting-hyperplane search over point subsets.

    Yields (unit normal u, offset b) with u.q + b >= 0 for all points and
    equality on an affinely independent subset of size affine_dim.
    """
    m, r = Q.shape
    if comb(m, r) > MAX_FACET_SUBSETS:
        raise UnsupportedDimensionError(
            f"facet enumeration over C({m},{r}) subsets is beyond desk scale"
        )
    for subset in combinations(range(m), r):
        u = _facet_normals_through(Q, subset)
        if u is None:
            continue
        offset = -float(np.dot(u, Q[subset[0]]))
        vals = Q @ u + offset
        if np.all(vals >= -tol):
            yield u, offset
        elif np.all(vals <= tol):
            yield -u, -offset


def build_domain(sector: Sector) -> DomainPolytope:
    """Convex hull of the sector's occupation vectors with complete facet
    enumeration and vertex/boundary/interior classification of every state."""
    pts = np.array(sector.states, dtype=float)
    m, d = pts.shape
    centroid = pts.mean(axis=0)
    diffs = pts - centroid
    if m == 1:
        r = 0
        basis = np.zeros((d, 0))
    else:
        _, svals, vt = np.linalg.svd(diffs, full_matrices=False)
        r = int(np.sum(svals > 1e-9 * max(1.0, svals[0])))
        basis = vt[:r].T
    if r > MAX_AFFINE_DIM:
        raise UnsupportedDimensionError(
            f"affine dimension {r} exceeds supported maximum {MAX_AFFINE_DIM}"
        )

    tol = FACET_TOL * max(1.0, sector.N)
    facets: list[FacetConstraint] = []
    if r >= 1:
        Q = diffs @ basis
        seen: list[FacetConstraint] = []
        for u, offset in _enumerate_facets(Q, tol):
            kappa_raw = basis @ u
            mu_raw = offset - float(np.dot(kappa_raw, centroid))
            fc = normalize_constraint(kappa_raw, mu_raw, sector.N)
            if not any(
                np.allclose(fc.kappa, g.kappa, atol=DEDUP_TOL)
                and abs(fc.mu - g.mu) <= DEDUP_TOL * max(1.0, sector.N)
                for g in seen
            ):
                seen.append(fc)
        facets = sorted(
            seen,
            key=lambda f: tuple(-round(k / DEDUP_TOL) for k in f.kappa)
            + (-round(f.mu / DEDUP_TOL),),
        )

    T = _distance_matrix(facets, pts)
    incidence = _incidence_from_T(T, m)
    classification = _classify_states(T, facets, r, tol)
    vertices = tuple(
        s for s, c in zip(sector.states, classification) if c == "vertex"
    )
    return DomainPolytope(
        sector=sector,
        vertices=vertices,
        facets=tuple(facets),
        classification=classification,
        degenerate=(r == 0),
        affine_dim=r,
        centroid=centroid,
        tangent_basis=basis,
        incidence=incidence,
    )


def _distance_matrix(facets, pts: np.ndarray) -> np.ndarray:
    if not facets:
        return np.zeros((0, pts.shape[0]))
    K = np.array([f.kappa for f in facets])
    mu = np.array([f.mu for f in facets])
    return K @ pts.T + mu[:, None]


def _incidence_from_T(T: np.ndarray, m: int) -> IncidenceData:
    if T.shape[0] == 0:
        return IncidenceData(
            T=T, T_pinv=np.zeros((m, 0)), kernel=np.eye(m), rank=0
        )
    u, s, vt = np.linalg.svd(T, full_matrices=True)
    cutoff = SVD_RCOND * s[0] if s.size else 0.0
    rank = int(np.sum(s > cutoff))
    s_inv = np.zeros((T.shape[1], T.shape[0]))
    for i in range(rank):
        s_inv[i, i] = 1.0 / s[i]
    pinv = vt.T @ s_inv @ u.T
    kernel = vt[rank:].T
    # Deterministic kernel orientation: largest-magnitude entry positive.
    for j in range(kernel.shape[1]):
        col = kernel[:, j]
        if col[np.argmax(np.abs(col))] < 0:
            kernel[:, j] = -col
    return IncidenceData(T=T, T_pinv=pinv, kernel=kernel, rank=rank)


def _classify_states(T, facets, affine_dim: int, tol: float) -> tuple[str, ...]:
    m = T.shape[1]
    if affine_dim == 0:
        return ("vertex",) * m
    kappas = np.array([f.kappa for f in facets])
    out = []
    for i in range(m):
        active = np.abs(T[:, i]) <= tol
        n_active = int(np.sum(active))
        if n_active == 0:
            out.append("interior")
        elif np.linalg.matrix_rank(kappas[active]) >= affine_dim:
            out.append("vertex")
        else:
            out.append("boundary")
    return tuple(out)


def incidence_matrix(
    poly: DomainPolytope,
    facets=None,
    states=None,
) -> IncidenceData:
    """Distance matrix T, pseudoinverse and kernel basis.

    With no arguments, returns the polytope's canonical data (normalized
    facets, sector state order).  Explicit `facets` (any affine convention,
    as (kappa, mu) pairs or FacetConstraint) and/or an explicit `states`
    order may be supplied to reproduce literature matrices verbatim.
    """
    if facets is None and states is None:
        return poly.incidence
    if facets is None:
        fc = list(poly.facets)
    else:
        fc = [
            f if isinstance(f, FacetConstraint) else FacetConstraint(tuple(f[0]), f[1])
            for f in facets
        ]
    pts = np.array(
        poly.sector.states if states is None else [tuple(s) for s in states],
        dtype=float,
    )
    T = _distance_matrix(fc, pts)
    return _incidence_from_T(T, pts.shape[0])


def facet_distances(poly: DomainPolytope, n) -> np.ndarray:
    """Values of every facet functional at n (distances under the normalized
    convention).  n must satisfy the particle-number sum."""
    n = np.asarray(n, dtype=float)
    _require_on_hyperplane(poly, n)
    if not poly.facets:
        return np.zeros(0)
    K = np.array([f.kappa for f in poly.facets])
    mu = np.array([f.mu for f in poly.facets])
    return K @ n + mu


def _require_on_hyperplane(poly: DomainPolytope, n: np.ndarray):
    if n.shape != (poly.sector.d,):
        raise OffHyperplaneError(
            f"vector has shape {n.shape}, expected ({poly.sector.d},)"
        )
    if abs(float(np.sum(n)) - poly.sector.N) > FACET_TOL * max(1.0, poly.sector.N):
        raise OffHyperplaneError(
            f"sum(n) = {np.sum(n)} does not match N = {poly.sector.N}"
        )


def is_simplex_setting(poly: DomainPolytope) -> bool:
    """True when every configuration is a vertex, the vertex count equals the
    sector dimension, and facets correspond one-to-one with vertices."""
    m = poly.sector.dimension
    return (
        len(poly.vertices) == m
        and all(c == "vertex" for c in poly.classification)
        and len(poly.facets) == m
        and not poly.degenerate
    )


def simplex_pairing(poly: DomainPolytope) -> np.ndarray:
    """For a simplex-setting domain, facet index opposite each vertex.

    Column a of T then has its single positive entry at row pairing[a],
    equal to the vertex-to-facet distance L_a.
    """
    if not is_simplex_setting(poly):
        raise ValueError("domain is not in the simplex setting")
    T = poly.T
    pairing = np.full(T.shape[1], -1, dtype=int)
    tol = FACET_TOL * max(1.0, poly.sector.N)
    for a in range(T.shape[1]):
        pos = np.flatnonzero(T[:, a] > tol)
        if pos.size != 1:
            raise ValueError("facet/vertex correspondence is not one-to-one")
        pairing[a] = pos[0]
    return pairing


def membership(poly: DomainPolytope, n, tol: float = FACET_TOL):
    """Classify n as ('interior', []), ('on-facet', active_js) or ('outside', []).

    Points off the domain's affine hull are outside even when every facet
    value is nonnegative (relevant for sectors whose hull is lower-
    dimensional than the particle-number hyperplane).
    """
    n = np.asarray(n, dtype=float)
    _require_on_hyperplane(poly, n)
    scale = max(1.0, poly.sector.N)
    resid = n - poly.centroid
    resid = resid - poly.tangent_basis @ (poly.tangent_basis.T @ resid)
    if np.linalg.norm(resid) > tol * scale:
        return "outside", []
    if poly.degenerate:
        return "interior", []
    D = facet_distances(poly, n)
    if np.any(D < -tol * scale):
        return "outside", []
    active = [int(j) for j in np.flatnonzero(np.abs(D) <= tol * scale)]
    if active:
        return "on-facet", active
    return "interior", []


def polytope_to_json(poly: DomainPolytope) -> str:
    hull_codim = (poly.sector.d - 1) - poly.affine_dim
    meta = {
        "d": poly.sector.d,
        "N": poly.sector.N,
        "P": poly.sector.P,
        "affine_dim": poly.affine_dim,
        "degenerate": poly.degenerate,
    }
    if hull_codim > 0:
        meta["note"] = (
            "affine hull is lower-dimensional than the particle-number "
            "hyperplane; facet normals are chosen tangent to the hull"
        )
    return json.dumps(
        {
            "meta": meta,
            "states": [list(s) for s in poly.sector.states],
            "classification": list(poly.classification),
            "vertices": [list(v) for v in poly.vertices],
            "facets": [{"kappa": list(f.kappa), "mu": f.mu} for f in poly.facets],
            "T": poly.T.tolist(),
            "T_pinv": poly.T_pinv.tolist(),
            "kernel": poly.kernel.tolist(),
        }
    )
