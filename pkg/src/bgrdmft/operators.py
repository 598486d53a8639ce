"""Second-quantized operators on a symmetry-sector basis.

Two-body interactions conserve total momentum, so they are block diagonal
over the sectors and can be assembled densely per sector by bosonic ladder
algebra.  Kinetic operators are diagonal in the momentum occupation basis.
All built-in interactions are real symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionMismatchError, InvalidArgumentError
from .sectors import Sector

SYMMETRY_TOL = 1e-12
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class PairInteraction:
    """Momentum-conserving two-body amplitudes W[k1,k2,k3,k4]."""

    d: int
    coefficients: dict[tuple[int, int, int, int], float]

    def __post_init__(self):
        for (k1, k2, k3, k4), amp in self.coefficients.items():
            if (k1 + k2 - k3 - k4) % self.d != 0:
                raise InvalidArgumentError(
                    f"quadruple {(k1, k2, k3, k4)} violates momentum conservation"
                )
            conj = self.coefficients.get((k4, k3, k2, k1))
            if conj is None or abs(conj - amp) > SYMMETRY_TOL:
                raise InvalidArgumentError(
                    f"coefficients are not Hermitian at {(k1, k2, k3, k4)}"
                )


@dataclass(frozen=True)
class SectorOperator:
    """Dense real symmetric operator in a sector's configuration basis."""

    sector: Sector
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.sector.dimension, self.sector.dimension):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match sector dimension "
                f"{self.sector.dimension}"
            )
        object.__setattr__(self, "matrix", m)

    def to_csv(self) -> str:
        """Row-major full-precision CSV, one row per line."""
        return "\n".join(
            ",".join(format(x, ".17g") for x in row) for row in self.matrix
        )


def hubbard_interaction(d: int) -> PairInteraction:
    """On-site repulsion in the momentum basis: amplitude 1/d for every
    momentum-conserving quadruple (sum_i n_i(n_i-1) in position space)."""
    if d < 1:
        raise InvalidArgumentError(f"d must be >= 1, got {d}")
    coeffs = {}
    for k1 in range(d):
        for k2 in range(d):
            for k3 in range(d):
                k4 = (k1 + k2 - k3) % d
                coeffs[(k1, k2, k3, k4)] = 1.0 / d
    return PairInteraction(d=d, coefficients=coeffs)


def build_interaction_matrix(W: PairInteraction, sector: Sector) -> SectorOperator:
    """Assemble <m| sum W b+b+bb |n> on the sector basis.

    Annihilators are applied before creators, each contributing the usual
    sqrt(n) factor; contributions outside the sector cannot occur for
    momentum-conserving W and are dropped defensively.
    """
    if W.d != sector.d:
        raise DimensionMismatchError(
            f"interaction has d={W.d} but sector has d={sector.d}"
        )
    dim = sector.dimension
    mat = np.zeros((dim, dim))
    for col, state in enumerate(sector.states):
        for (k1, k2, k3, k4), amp in W.coefficients.items():
            occ = list(state)
            if occ[k4] == 0:
                continue
            factor = math.sqrt(occ[k4])
            occ[k4] -= 1
            if occ[k3] == 0:
                continue
            factor *= math.sqrt(occ[k3])
            occ[k3] -= 1
            factor *= math.sqrt(occ[k2] + 1)
            occ[k2] += 1
            factor *= math.sqrt(occ[k1] + 1)
            occ[k1] += 1
            row = sector.index.get(tuple(occ))
            if row is not None:
                mat[row, col] += amp * factor
    return SectorOperator(sector=sector, matrix=mat)


def build_hamiltonian(t, Wmat: SectorOperator) -> SectorOperator:
    """H = diag(t . n^(alpha)) + W on the sector basis."""
    t = np.asarray(t, dtype=float)
    sector = Wmat.sector
    if t.shape != (sector.d,):
        raise DimensionMismatchError(
            f"kinetic vector has length {t.shape}, expected ({sector.d},)"
        )
    if not np.all(np.isfinite(t)):
        raise InvalidArgumentError("kinetic vector entries must be finite")
    occ = np.array(sector.states, dtype=float)
    return SectorOperator(
        sector=sector, matrix=Wmat.matrix + np.diag(occ @ t)
    )


def ground_state(H: SectorOperator) -> tuple[float, np.ndarray, float]:
    """Lowest eigenpair of a symmetric sector operator.

    Returns (energy, unit eigenvector, gap to the next eigenvalue).  The
    eigenvector sign is fixed by making its largest-magnitude entry positive.
    """
    mat = H.matrix
    if not np.allclose(mat, mat.T, atol=SYMMETRY_TOL * max(1.0, _norm(mat))):
        raise InvalidArgumentError("operator matrix is not symmetric")
    vals, vecs = np.linalg.eigh(mat)
    energy = float(vals[0])
    vec = vecs[:, 0]
    gap = float(vals[1] - vals[0]) if len(vals) > 1 else 0.0
    if vec[np.argmax(np.abs(vec))] < 0:
        vec = -vec
    scale = max(1.0, _norm(mat))
    residual = np.linalg.norm(mat @ vec - energy * vec)
    if residual > 1e-12 * scale:
        raise ConvergenceError(
            f"eigensolver residual {residual:.3e} exceeds 1e-12 * ||H||"
        )
    return energy, vec, gap


def is_degenerate(H: SectorOperator, gap: float) -> bool:
    """Ground state counts as degenerate below a scale-relative gap."""
    return gap < DEGENERACY_TOL * max(1.0, _norm(H.matrix))


def _norm(mat: np.ndarray) -> float:
    return float(np.linalg.norm(mat, 2)) if mat.size else 0.0
