"""One-parameter closed form of the Hubbard functional for d=3, N=3, P=0.

For this sector the kernel of the incidence matrix is one-dimensional, so
the exact functional reduces to a scalar minimization:

    F[n] = min over z in [0, min(n)] of
           2 + 2z - (4*sqrt(6)/3) * sqrt(z) * sum_k sqrt((n_k - z)/3).

A cubic ansatz for the minimizing z as a function of z_max = min(n) gives a
cheap pointwise upper bound of the functional whose quality is measured here
both directly and through the ground-state energies it induces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .functional import barycentric_grid
from .operators import build_hamiltonian, build_interaction_matrix, ground_state
from .operators import hubbard_interaction
from .polytope import build_domain
from .sectors import enumerate_sector

_COEFF = 4.0 * math.sqrt(6.0) / 3.0
Z_PRESCAN_STEP = 1e-3
Z_BRACKET_TOL = 1e-10
_TOL = 1e-9

# Disk of kinetic vectors in the plane t_0 + t_1 + t_2 = 1: an orthonormal
# pair spanning the zero-sum plane plus the uniform shift.
_DISK_FRAME = np.array(
    [
        [-1.0 / math.sqrt(6.0), -1.0 / math.sqrt(2.0)],
        [-1.0 / math.sqrt(6.0), 1.0 / math.sqrt(2.0)],
        [2.0 / math.sqrt(6.0), 0.0],
    ]
)


def z_max(n) -> float:
    """Upper end of the feasible kernel parameter range at n."""
    n = np.asarray(n, dtype=float)
    _validate_n(n)
    return float(np.min(n))


def _validate_n(n: np.ndarray):
    if n.shape != (3,):
        raise InvalidArgumentError("occupation vector must have length 3")
    if abs(float(np.sum(n)) - 3.0) > _TOL:
        raise InvalidArgumentError(f"sum(n) = {np.sum(n)} must equal 3")
    if np.any(n < -_TOL):
        raise InvalidArgumentError("occupations must be nonnegative")


def f_of_z(n, z: float) -> float:
    """Functional value at kernel parameter z (before minimizing over z)."""
    n = np.asarray(n, dtype=float)
    _validate_n(n)
    zm = float(np.min(n))
    if z < -_TOL or z > zm + _TOL:
        raise InvalidArgumentError(f"z = {z} outside feasible range [0, {zm}]")
    z = min(max(z, 0.0), zm)
    rad = np.maximum(n - z, 0.0) / 3.0
    return float(2.0 + 2.0 * z - _COEFF * math.sqrt(z) * np.sum(np.sqrt(rad)))


def _f_vectorized(n: np.ndarray, zs: np.ndarray) -> np.ndarray:
    rad = np.maximum(n[None, :] - zs[:, None], 0.0) / 3.0
    return 2.0 + 2.0 * zs - _COEFF * np.sqrt(zs) * np.sum(np.sqrt(rad), axis=1)


def exact_zbar(n) -> tuple[float, float]:
    """Minimizing z and minimal value, by dense pre-scan plus golden section.

    The objective can switch between boundary and interior minima, so the
    pre-scan (step <= 1e-3) locates the global basin before refinement.
    """
    n = np.asarray(n, dtype=float)
    zm = z_max(n)
    if zm <= 0.0:
        return 0.0, f_of_z(n, 0.0)
    count = max(int(math.ceil(zm / Z_PRESCAN_STEP)) + 1, 9)
    zs = np.linspace(0.0, zm, count)
    vals = _f_vectorized(n, zs)
    i = int(np.argmin(vals))
    a = zs[max(i - 1, 0)]
    b = zs[min(i + 1, count - 1)]
    z, val = _golden(lambda z: f_of_z(n, z), a, b)
    return z, val


def _golden(f, a: float, b: float) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > Z_BRACKET_TOL:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def approx_zbar(zm: float) -> float:
    """Cubic minimizer ansatz: value 0 and slope 1 at 0, value 1/3 and slope
    0 at 1 (the simplest polynomial meeting all four anchor conditions)."""
    if zm < -_TOL or zm > 1.0 + _TOL:
        raise InvalidArgumentError(f"z_max = {zm} outside [0, 1]")
    zm = min(max(zm, 0.0), 1.0)
    return zm * (zm * zm / 3.0 - zm + 1.0)


def approx_functional(n) -> float:
    """Upper bound of the functional from the cubic minimizer ansatz."""
    n = np.asarray(n, dtype=float)
    zm = z_max(n)
    return f_of_z(n, min(approx_zbar(zm), zm))


def zbar_spread(zm: float, samples: int = 60) -> tuple[float, float]:
    """Range of the exact minimizing z over occupation vectors sharing the
    same z_max.

    The cubic ansatz assumes the minimizer depends on n only through z_max;
    this reports how far that assumption is from exact.
    """
    if not 0.0 <= zm <= 1.0:
        raise InvalidArgumentError(f"z_max = {zm} outside [0, 1]")
    lo, hi = math.inf, -math.inf
    # n = (zm, a, 3 - zm - a) with a >= zm keeps min(n) = zm
    for a in np.linspace(zm, (3.0 - zm) / 2.0, samples):
        n = np.array([zm, a, 3.0 - zm - a])
        if np.min(n) < zm - 1e-12:
            continue
        z, _ = exact_zbar(n)
        lo, hi = min(lo, z), max(hi, z)
    return lo, hi


@dataclass(frozen=True)
class ErrorGridRow:
    n: np.ndarray
    f_exact: float
    f_approx: float
    zbar_exact: float
    zbar_approx: float


def functional_error_grid(resolution: int = 200) -> list[ErrorGridRow]:
    """Exact-vs-ansatz comparison over a barycentric grid of the domain."""
    sector = enumerate_sector(3, 3, 0)
    poly = build_domain(sector)
    rows = []
    for n in barycentric_grid(poly, resolution):
        zb, fe = exact_zbar(n)
        za = min(approx_zbar(z_max(n)), z_max(n))
        rows.append(
            ErrorGridRow(
                n=n, f_exact=fe, f_approx=f_of_z(n, za),
                zbar_exact=zb, zbar_approx=za,
            )
        )
    return rows


def disk_kinetic(r: float, theta: float) -> np.ndarray:
    """Kinetic vector of the (r, theta) point of the unit disk of
    one-particle perturbations around the uniform dispersion."""
    return _DISK_FRAME @ np.array(
        [r * math.cos(theta), r * math.sin(theta)]
    ) + np.ones(3) / 3.0


@dataclass(frozen=True)
class DiskRow:
    r: float
    theta: float
    e_exact: float
    e_approx: float
    delta_e: float


def energy_error_study(
    r_grid, theta_grid, grid_resolution: int = 200
) -> list[DiskRow]:
    """Ground-state energies from exact diagonalization versus the ansatz
    functional minimized over a fixed domain grid.

    The ansatz is a pointwise upper bound, so delta_e >= 0 throughout.
    """
    sector = enumerate_sector(3, 3, 0)
    poly = build_domain(sector)
    Wmat = build_interaction_matrix(hubbard_interaction(3), sector)
    grid = barycentric_grid(poly, grid_resolution)
    f_approx = np.array([approx_functional(n) for n in grid])
    rows = []
    for r in r_grid:
        for theta in theta_grid:
            t = disk_kinetic(float(r), float(theta))
            e_exact, _, _ = ground_state(build_hamiltonian(t, Wmat))
            e_approx = float(np.min(grid @ t + f_approx))
            rows.append(
                DiskRow(
                    r=float(r), theta=float(theta),
                    e_exact=e_exact, e_approx=e_approx,
                    delta_e=e_approx - e_exact,
                )
            )
    return rows
