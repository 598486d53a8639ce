"""Universal interaction functional on momentum occupation vectors.

Four routes to the same quantity are provided:

* ``t_scan``            -- Legendre scan: ground states of t-hat + W sweep the
                           functional over all t-representable points.
* ``constrained_search``-- direct minimization of <W> over sector states with
                           prescribed occupations (augmented Lagrangian with
                           multistart).
* ``simplex_functional``-- closed form via facet distances, valid when the
                           domain is a simplex whose vertices exhaust the
                           configuration states.
* ``general_form_functional`` -- pseudoinverse/kernel parameterization of all
                           weight vectors compatible with n, minimized over
                           the kernel coordinate and sign choices.

Coefficients are real by default; under PT symmetry the real restriction
reproduces all ground-state energies.  ``phases="complex"`` doubles the real
variables to cover genuinely complex phase minimization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg
import scipy.optimize

from . import operators
from .errors import (
    ConvergenceError,
    InfeasibleKernelError,
    InfeasibleTargetError,
    InvalidArgumentError,
    NotSimplexError,
)
from .operators import SectorOperator, build_hamiltonian, ground_state
from .polytope import (
    DomainPolytope,
    build_domain,
    facet_distances,
    is_simplex_setting,
    membership,
    simplex_pairing,
)
from .sectors import Sector

CONSTRAINT_TOL = 1e-10
VALUE_TOL = 1e-8
SIGN_EXHAUSTIVE_LIMIT = 20
FD_STEP = 1e-5
RADICAND_TOL = 1e-10


@dataclass(frozen=True)
class FunctionalSample:
    """One evaluation of the interaction functional.

    ``ties`` holds further value-degenerate minimizers (within VALUE_TOL of
    the optimum) when the caller asked for them; downstream consumers use
    them for tie-breaking rules.
    """

    n: np.ndarray
    value: float
    method: str
    gradient: np.ndarray | None = None
    minimizer: np.ndarray | None = None
    degenerate: bool = False
    converged: bool = True
    ties: tuple = ()


@dataclass(frozen=True)
class KernelPoint:
    """A kernel coordinate with the weight radicands it induces."""

    x: np.ndarray
    radicands: np.ndarray

    def feasible(self, tol: float = RADICAND_TOL) -> bool:
        return bool(np.all(self.radicands >= -tol))


@dataclass(frozen=True)
class SearchOptions:
    """Tunables for the constrained search and kernel minimization."""

    n_starts: int = 32
    seed: int = 0
    tol_constraint: float = CONSTRAINT_TOL
    tol_value: float = VALUE_TOL
    max_outer: int = 25
    phases: str = "real"  # "real" or "complex"
    polish_support: bool = True
    initial_points: tuple = ()
    collect_degenerate: bool = False


# ---------------------------------------------------------------------------
# sign / phase minimization at fixed weights
# ---------------------------------------------------------------------------

_PATTERN_CACHE: dict[int, np.ndarray] = {}


def _sign_patterns(m: int) -> np.ndarray:
    """All sign vectors in {+-1}^m with the first entry fixed to +1."""
    if m not in _PATTERN_CACHE:
        k = m - 1
        bits = (np.arange(2**k)[:, None] >> np.arange(k)) & 1
        _PATTERN_CACHE[m] = np.hstack(
            [np.ones((2**k, 1)), 1.0 - 2.0 * bits]
        )
    return _PATTERN_CACHE[m]


def minimize_signs(
    M: np.ndarray, rng: np.random.Generator | None = None, restarts: int = 8
) -> tuple[float, np.ndarray]:
    """min over sigma in {+-1}^m of sigma^T M sigma (global sign fixed).

    Exhaustive up to SIGN_EXHAUSTIVE_LIMIT entries; greedy single-flip descent
    with random restarts beyond that.
    """
    m = M.shape[0]
    if m == 0:
        return 0.0, np.zeros(0)
    if m <= SIGN_EXHAUSTIVE_LIMIT:
        sig = _sign_patterns(m)
        vals = np.einsum("pi,ij,pj->p", sig, M, sig)
        best = int(np.argmin(vals))
        return float(vals[best]), sig[best].copy()
    rng = rng or np.random.default_rng(0)
    starts = [np.ones(m), -np.sign(np.linalg.eigh(M)[1][:, 0] + 1e-300)]
    starts += [rng.choice([-1.0, 1.0], size=m) for _ in range(restarts)]
    best_val, best_sig = math.inf, None
    for sigma in starts:
        sigma = sigma.copy()
        g = M @ sigma
        val = float(sigma @ g)
        while True:
            delta = -4.0 * sigma * g + 4.0 * np.diag(M)
            i = int(np.argmin(delta))
            if delta[i] >= -1e-13:
                break
            val += float(delta[i])
            g = g - 2.0 * sigma[i] * M[:, i]
            sigma[i] = -sigma[i]
        if val < best_val:
            best_val, best_sig = val, sigma
    if best_sig[0] < 0:
        best_sig = -best_sig
    return best_val, best_sig


def _minimize_phases_complex(
    M: np.ndarray, rng: np.random.Generator, starts: int = 16
) -> tuple[float, np.ndarray]:
    """min over unit phases of sum M_ab cos(phi_a - phi_b), phi_0 = 0."""
    m = M.shape[0]
    if m <= 1:
        return float(M.sum()), np.zeros(m)

    def fun(phi_free):
        phi = np.concatenate([[0.0], phi_free])
        diff = phi[:, None] - phi[None, :]
        val = float(np.sum(M * np.cos(diff)))
        grad_full = -2.0 * np.sum(M * np.sin(diff), axis=1)
        return val, grad_full[1:]

    sign_val, sigma = minimize_signs(M, rng)
    best_val, best_phi = sign_val, np.where(sigma < 0, np.pi, 0.0)
    for k in range(starts):
        phi0 = rng.uniform(0.0, 2.0 * np.pi, size=m - 1)
        res = scipy.optimize.minimize(
            fun, phi0, jac=True, method="L-BFGS-B",
            options={"maxiter": 500, "ftol": 1e-15, "gtol": 1e-12},
        )
        if res.fun < best_val:
            best_val = float(res.fun)
            best_phi = np.concatenate([[0.0], res.x])
    return best_val, best_phi


# ---------------------------------------------------------------------------
# constrained search
# ---------------------------------------------------------------------------


def _weight_polytope_center(S: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Max-min-slack weight vector y >= 0 with S^T y = n, sum y = 1."""
    m = S.shape[0]
    A_eq = np.hstack([np.vstack([S.T, np.ones(m)]), np.zeros((S.shape[1] + 1, 1))])
    b_eq = np.concatenate([n, [1.0]])
    A_ub = np.hstack([-np.eye(m), np.ones((m, 1))])  # s - y_a <= 0
    c = np.zeros(m + 1)
    c[-1] = -1.0
    res = scipy.optimize.linprog(
        c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=b_eq,
        bounds=[(0, None)] * m + [(0, None)], method="highs",
    )
    if not res.success:
        raise InfeasibleTargetError(
            "no nonnegative weight vector reproduces the target occupations"
        )
    return res.x[:m]


def _start_coefficients(
    S: np.ndarray, n: np.ndarray, W: np.ndarray,
    opts: SearchOptions, rng: np.random.Generator,
) -> list[np.ndarray]:
    m = S.shape[0]
    y_center = _weight_polytope_center(S, n)
    A_eq = np.vstack([S.T, np.ones(m)])
    b_eq = np.concatenate([n, [1.0]])
    A_pinv = np.linalg.pinv(A_eq)
    starts = [np.asarray(c, dtype=float) for c in opts.initial_points]
    sq_center = np.sqrt(np.maximum(y_center, 0.0))
    starts.append(sq_center.copy())
    _, sigma_w = minimize_signs(W * np.outer(sq_center, sq_center), rng)
    starts.append(sigma_w * sq_center)
    while len(starts) < opts.n_starts:
        y = rng.dirichlet(np.ones(m))
        # project onto the moment-matching affine subspace, then pull toward
        # the interior point until nonnegative
        y = y - A_pinv @ (A_eq @ y - b_eq)
        t = 1.0
        neg = y < 0
        if np.any(neg):
            with np.errstate(divide="ignore"):
                t = min(
                    1.0,
                    float(np.min(y_center[neg] / (y_center[neg] - y[neg]))),
                )
        y = y_center + t * (y - y_center)
        y = np.maximum(y, 0.0)
        signs = rng.choice([-1.0, 1.0], size=m)
        starts.append(signs * np.sqrt(y))
    return starts


def _augmented_lagrangian(
    W: np.ndarray, S: np.ndarray, n: np.ndarray, c0: np.ndarray,
    opts: SearchOptions,
) -> tuple[float, np.ndarray, bool]:
    """One AL run: min c^T W c subject to sum_a c_a^2 S_ak = n_k."""

    def constraint(c):
        return (c * c) @ S - n

    lam = np.zeros(S.shape[1])
    rho = 100.0
    c = c0 / max(np.linalg.norm(c0), 1e-12)
    prev_viol = math.inf
    prev_val = math.inf

    def fun(cv):
        h = constraint(cv)
        mult = lam + rho * h
        val = cv @ W @ cv + lam @ h + 0.5 * rho * (h @ h)
        grad = 2.0 * (W @ cv) + 2.0 * cv * (S @ mult)
        return val, grad

    for _ in range(opts.max_outer):
        res = scipy.optimize.minimize(
            fun, c, jac=True, method="L-BFGS-B",
            options={"maxiter": 800, "ftol": 1e-16, "gtol": 1e-12},
        )
        c = res.x
        h = constraint(c)
        viol = float(np.max(np.abs(h)))
        val = float(c @ W @ c)
        if viol <= opts.tol_constraint and (
            abs(val - prev_val) <= 1e-12 * max(1.0, abs(val))
        ):
            break
        lam = lam + rho * h
        if viol > 0.1 * prev_viol:
            rho = min(rho * 10.0, 1e12)
        prev_viol = viol
        prev_val = val
    ok = float(np.max(np.abs(constraint(c)))) <= max(opts.tol_constraint, 1e-8)
    norm = np.linalg.norm(c)
    if norm > 0:
        c = c / norm
    return float(c @ W @ c), c, ok


def _polish_support(
    W: np.ndarray, S: np.ndarray, n: np.ndarray, c: np.ndarray,
    value: float, opts: SearchOptions,
) -> tuple[float, np.ndarray]:
    """Zero out numerically dead coefficients and re-solve on the support."""
    support = np.abs(c) > 1e-7
    if support.all() or not support.any():
        return value, c
    sub = np.flatnonzero(support)
    val2, c_sub, ok = _augmented_lagrangian(
        W[np.ix_(sub, sub)], S[sub], n, c[sub], opts
    )
    if ok and val2 <= value + 1e-10:
        out = np.zeros_like(c)
        out[sub] = c_sub
        return val2, out
    return value, c


def _canonical_minimizer(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(c) > 1e-7)
    if nz.size and c[nz[0]] < 0:
        return -c
    return c


def constrained_search(
    sector: Sector,
    Wmat: SectorOperator,
    n,
    opts: SearchOptions | None = None,
    poly: DomainPolytope | None = None,
) -> FunctionalSample:
    """Exact functional value at n by direct minimization over sector states.

    Points on the boundary are handled by restricting the basis to the
    configuration states lying on every active facet (the limit of interior
    evaluations).  Raises InfeasibleTargetError outside the domain and
    ConvergenceError when no multistart reaches feasibility.
    """
    opts = opts or SearchOptions()
    n = np.asarray(n, dtype=float)
    poly = poly or build_domain(sector)
    where, active = membership(poly, n)
    if where == "outside":
        raise InfeasibleTargetError(f"occupations {n} are outside the domain")

    S_full = np.array(sector.states, dtype=float)
    keep = np.arange(sector.dimension)
    if active:
        on_all = np.all(
            np.abs(poly.T[active, :]) <= 1e-9 * max(1.0, sector.N), axis=0
        )
        keep = np.flatnonzero(on_all)
    W = Wmat.matrix[np.ix_(keep, keep)]
    S = S_full[keep]

    if opts.phases == "complex":
        W_solve = scipy.linalg.block_diag(W, W)
        S_solve = np.vstack([S, S])
    else:
        W_solve = W
        S_solve = S

    rng = np.random.default_rng(opts.seed)
    starts = _start_coefficients(S_solve, n, W_solve, opts, rng)

    best_val, best_c = math.inf, None
    found = []
    for c0 in starts:
        val, c, ok = _augmented_lagrangian(W_solve, S_solve, n, c0, opts)
        if not ok:
            continue
        found.append((val, c))
        if val < best_val - 1e-15:
            best_val, best_c = val, c
        # Consensus exit: once a dozen independent starts agree to well below
        # the value tolerance there is no sign pattern left to discover.
        if (
            not opts.collect_degenerate
            and len(found) >= 12
            and max(v for v, _ in found) - best_val < 1e-10
        ):
            break
    if best_c is None:
        raise ConvergenceError(
            "constrained search failed to reach feasibility from any start"
        )
    if opts.polish_support:
        polished = []
        for val, c in found:
            if val <= best_val + opts.tol_value:
                val, c = _polish_support(W_solve, S_solve, n, c, val, opts)
                if val < best_val:
                    best_val, best_c = val, c
            polished.append((val, c))
        found = polished
        best_val, best_c = min(
            ((v, c) for v, c in found), key=lambda vc: vc[0]
        )

    if opts.phases == "complex":
        k = len(keep)
        coeff = best_c[:k] + 1j * best_c[k:]
        minim = np.zeros(sector.dimension, dtype=complex)
    else:
        coeff = _canonical_minimizer(best_c)
        minim = np.zeros(sector.dimension)
    minim[keep] = coeff

    ties = ()
    if opts.collect_degenerate and opts.phases != "complex":
        ties = tuple(_collect_degenerate(found, best_val, keep, sector.dimension))
    return FunctionalSample(
        n=n, value=best_val, method="constrained-search", minimizer=minim,
        ties=ties,
    )


def _collect_degenerate(found, best_val, keep, dim):
    ties = []
    seen = set()
    for val, c in found:
        if val > best_val + VALUE_TOL:
            continue
        cc = _canonical_minimizer(c)
        key = tuple(np.round(cc, 6))
        if key in seen:
            continue
        seen.add(key)
        full = np.zeros(dim)
        full[keep] = cc
        ties.append(full)
    return ties


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def simplex_functional(
    sector: Sector,
    poly: DomainPolytope,
    Wmat: SectorOperator,
    n,
    phases: str = "real",
    rng: np.random.Generator | None = None,
) -> FunctionalSample:
    """Closed-form functional in the simplex setting.

    Weights are fixed by the facet-distance ratios |c_a|^2 = D_a(n)/L_a; the
    remaining freedom is the sign (or phase) vector, minimized exhaustively.
    """
    if not is_simplex_setting(poly):
        raise NotSimplexError("domain is not a simplex over the sector states")
    n = np.asarray(n, dtype=float)
    where, _ = membership(poly, n)
    if where == "outside":
        raise InfeasibleTargetError(f"occupations {n} are outside the domain")
    pairing = simplex_pairing(poly)
    D = facet_distances(poly, n)
    L = poly.T[pairing, np.arange(sector.dimension)]
    y = np.maximum(D[pairing] / L, 0.0)
    sq = np.sqrt(y)
    M = Wmat.matrix * np.outer(sq, sq)
    if phases == "complex":
        rng = rng or np.random.default_rng(0)
        val, phi = _minimize_phases_complex(M, rng)
        minim = sq * np.exp(1j * phi)
    else:
        val, sigma = minimize_signs(M, rng)
        minim = sigma * sq
    return FunctionalSample(
        n=n, value=float(val), method="simplex-form", minimizer=minim
    )


def kernel_point(poly: DomainPolytope, n, x) -> KernelPoint:
    """Radicands T^+ D(n) + kernel @ x for a kernel coordinate x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    D = facet_distances(poly, n)
    rad = poly.T_pinv @ D + poly.kernel @ x
    return KernelPoint(x=x, radicands=rad)


def general_form_functional(
    sector: Sector,
    poly: DomainPolytope,
    Wmat: SectorOperator,
    n,
    opts: SearchOptions | None = None,
) -> FunctionalSample:
    """Functional via the pseudoinverse/kernel weight parameterization.

    Every weight vector compatible with n is T^+ D(n) + x with x in ker(T);
    the functional is the minimum over feasible x (nonnegative radicands) and
    sign vectors of the induced quadratic form.
    """
    opts = opts or SearchOptions()
    n = np.asarray(n, dtype=float)
    where, _ = membership(poly, n)
    if where == "outside":
        raise InfeasibleTargetError(f"occupations {n} are outside the domain")
    W = Wmat.matrix
    y0 = poly.T_pinv @ facet_distances(poly, n)
    K = poly.kernel
    q = K.shape[1]
    rng = np.random.default_rng(opts.seed)

    def value_at(y):
        sq = np.sqrt(np.maximum(y, 0.0))
        return minimize_signs(W * np.outer(sq, sq), rng)

    if q == 0:
        if np.any(y0 < -RADICAND_TOL):
            raise InfeasibleKernelError("least-norm weights are negative")
        val, sigma = value_at(y0)
        best_x = np.zeros(0)
        best_y = np.maximum(y0, 0.0)
    elif q == 1:
        k = K[:, 0]
        lo, hi = -math.inf, math.inf
        for a in range(len(y0)):
            if k[a] > 1e-12:
                lo = max(lo, -y0[a] / k[a])
            elif k[a] < -1e-12:
                hi = min(hi, -y0[a] / k[a])
            elif y0[a] < -RADICAND_TOL:
                raise InfeasibleKernelError(
                    "a weight radicand is negative for every kernel coordinate"
                )
        if lo > hi + RADICAND_TOL:
            raise InfeasibleKernelError(
                "no kernel coordinate yields nonnegative weights"
            )
        hi = max(hi, lo)
        val, xbest = _scan_then_golden(
            lambda x: value_at(y0 + k * x)[0], lo, hi
        )
        best_x = np.array([xbest])
        best_y = np.maximum(y0 + k * xbest, 0.0)
        val, sigma = value_at(best_y)
    else:
        x_feas = _feasible_kernel_point(y0, K)
        constraints = [
            {"type": "ineq", "fun": lambda x: y0 + K @ x}
        ]
        best = (math.inf, x_feas)
        starts = [x_feas] + [
            x_feas + rng.normal(scale=0.2, size=q) for _ in range(7)
        ]
        for x0 in starts:
            res = scipy.optimize.minimize(
                lambda x: value_at(np.maximum(y0 + K @ x, 0.0))[0],
                x0, method="SLSQP", constraints=constraints,
                options={"maxiter": 300, "ftol": 1e-12},
            )
            cand = res.x if res.success else x0
            v = value_at(np.maximum(y0 + K @ cand, 0.0))[0]
            if v < best[0]:
                best = (v, cand)
        best_x = best[1]
        best_y = np.maximum(y0 + K @ best_x, 0.0)
        val, sigma = value_at(best_y)

    minim = sigma * np.sqrt(best_y)
    return FunctionalSample(
        n=n, value=float(val), method="general-form", minimizer=minim
    )


def _feasible_kernel_point(y0: np.ndarray, K: np.ndarray) -> np.ndarray:
    """Max-min-radicand kernel coordinate (linear program)."""
    m, q = K.shape
    c = np.zeros(q + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-K, np.ones((m, 1))])  # s - (y0 + Kx) <= 0
    res = scipy.optimize.linprog(
        c, A_ub=A_ub, b_ub=y0, bounds=[(None, None)] * q + [(None, None)],
        method="highs",
    )
    if not res.success or res.x[-1] < -RADICAND_TOL:
        raise InfeasibleKernelError(
            "no kernel coordinate yields nonnegative weights"
        )
    return res.x[:q]


def _scan_then_golden(f, lo: float, hi: float, n_scan: int = 512):
    """Dense pre-scan then golden-section refinement on the best bracket."""
    if hi - lo <= 1e-14:
        return f(lo), lo
    xs = np.linspace(lo, hi, n_scan)
    vals = np.array([f(x) for x in xs])
    i = int(np.argmin(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, n_scan - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-12 * max(1.0, abs(hi - lo)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return f(x), x


# ---------------------------------------------------------------------------
# Legendre scan and grids
# ---------------------------------------------------------------------------


def t_scan(sector: Sector, Wmat: SectorOperator, t_list) -> list[FunctionalSample]:
    """Functional samples from ground states of t-hat + W for each kinetic t.

    F[n(t)] = E0(t) - t.n with n read off the ground state; the gradient of F
    there is -t projected onto the tangent plane of the particle-number
    hyperplane.  Samples with a near-degenerate ground state are flagged and
    their n/F are still reported for completeness.
    """
    S = np.array(sector.states, dtype=float)
    out = []
    for t in t_list:
        t = np.asarray(t, dtype=float)
        H = build_hamiltonian(t, Wmat)
        energy, vec, gap = ground_state(H)
        n = (vec * vec) @ S
        value = energy - float(t @ n)
        grad = -(t - np.mean(t))
        out.append(
            FunctionalSample(
                n=n,
                value=value,
                method="t-scan",
                gradient=grad,
                minimizer=vec,
                degenerate=operators.is_degenerate(H, gap),
            )
        )
    return out


def default_kinetic_vectors(
    d: int,
    seed: int = 0,
    n_radii: int = 12,
    n_directions: int = 48,
    dense_sweep: int = 180,
) -> list[np.ndarray]:
    """Kinetic vectors for Legendre scans: the zero vector (pure-interaction
    ground state), unit tangent directions times log-spaced radii in
    [1e-2, 1e2], and a dense unit-radius sweep."""
    rng = np.random.default_rng(seed)
    dirs = []
    if d == 3:
        sweep = [
            _angle_dir(theta)
            for theta in np.linspace(0.0, 2.0 * np.pi, dense_sweep, endpoint=False)
        ]
    else:
        sweep = []
        for _ in range(dense_sweep):
            v = rng.normal(size=d)
            v -= v.mean()
            sweep.append(v / np.linalg.norm(v))
    for _ in range(n_directions):
        v = rng.normal(size=d)
        v -= v.mean()
        dirs.append(v / np.linalg.norm(v))
    radii = np.logspace(-2.0, 2.0, n_radii)
    out = [np.zeros(d)]
    out.extend(r * v for v in dirs for r in radii)
    out.extend(sweep)
    return out


def _angle_dir(theta: float) -> np.ndarray:
    # Orthonormal basis of the zero-sum plane in R^3.
    e1 = np.array([1.0, -1.0, 0.0]) / math.sqrt(2.0)
    e2 = np.array([1.0, 1.0, -2.0]) / math.sqrt(6.0)
    return math.cos(theta) * e1 + math.sin(theta) * e2


def _evaluator(sector, poly, Wmat, method: str, opts: SearchOptions):
    if method == "auto":
        method = "simplex-form" if is_simplex_setting(poly) else "general-form"
    if method == "simplex-form":
        return method, lambda n: simplex_functional(sector, poly, Wmat, n)
    if method == "general-form":
        return method, lambda n: general_form_functional(
            sector, poly, Wmat, n, opts
        )
    if method == "constrained-search":
        return method, lambda n: constrained_search(
            sector, Wmat, n, opts, poly=poly
        )
    raise InvalidArgumentError(f"unknown functional method {method!r}")


def barycentric_grid(poly: DomainPolytope, resolution: int) -> np.ndarray:
    """Occupation-vector grid covering the domain at the given resolution.

    For domains whose vertices form a simplex the grid is barycentric over
    those vertices; otherwise the full particle-number simplex is gridded and
    filtered by membership.  The domain barycenter is always included.
    """
    sector = poly.sector
    d, N = sector.d, sector.N
    V = np.array(poly.vertices, dtype=float)
    pts = []
    if len(V) == poly.affine_dim + 1:
        for combo in _grid_weights(len(V), resolution):
            pts.append(np.array(combo, dtype=float) @ V / resolution)
    else:
        corners = N * np.eye(d)
        for combo in _grid_weights(d, resolution):
            n = np.array(combo, dtype=float) @ corners / resolution
            if membership(poly, n)[0] != "outside":
                pts.append(n)
    bary = V.mean(axis=0)
    if not any(np.allclose(p, bary, atol=1e-12) for p in pts):
        pts.append(bary)
    return np.array(pts)


def _grid_weights(k: int, resolution: int):
    if k == 1:
        yield (resolution,)
        return
    for first in range(resolution, -1, -1):
        for rest in _grid_weights(k - 1, resolution - first):
            yield (first,) + rest


def functional_grid(
    sector: Sector,
    Wmat: SectorOperator,
    resolution: int,
    method: str = "auto",
    opts: SearchOptions | None = None,
    poly: DomainPolytope | None = None,
    with_gradient: bool = True,
    threads: int = 1,
) -> list[FunctionalSample]:
    """Evaluate the functional over a barycentric grid of the domain.

    Gradient magnitudes use central differences in the tangent plane with
    step 1e-5, falling back to one-sided stencils next to facets.  Per-point
    failures are returned as flagged samples rather than raised.  With
    ``threads > 1`` points are evaluated concurrently; results are assembled
    in grid order either way.
    """
    opts = opts or SearchOptions()
    poly = poly or build_domain(sector)
    if poly.affine_dim > 2:
        raise InvalidArgumentError(
            "grid output is limited to domains of affine dimension <= 2"
        )
    tag, evaluate = _evaluator(sector, poly, Wmat, method, opts)

    def one(n):
        try:
            sample = evaluate(n)
            grad = (
                _tangent_gradient(poly, evaluate, n) if with_gradient else None
            )
            return replace(sample, gradient=grad, method=tag)
        except Exception:
            return FunctionalSample(
                n=n, value=math.nan, method=tag, converged=False
            )

    points = barycentric_grid(poly, resolution)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, points))
    return [one(n) for n in points]


def _tangent_gradient(poly, evaluate, n: np.ndarray) -> np.ndarray:
    B = poly.tangent_basis
    comps = np.zeros(B.shape[1])
    for i in range(B.shape[1]):
        step = FD_STEP * B[:, i]
        plus_ok = membership(poly, n + step)[0] != "outside"
        minus_ok = membership(poly, n - step)[0] != "outside"
        if plus_ok and minus_ok:
            comps[i] = (
                evaluate(n + step).value - evaluate(n - step).value
            ) / (2.0 * FD_STEP)
        elif plus_ok:
            comps[i] = (evaluate(n + step).value - evaluate(n).value) / FD_STEP
        elif minus_ok:
            comps[i] = (evaluate(n).value - evaluate(n - step).value) / FD_STEP
    return B @ comps
