import math

import numpy as np
import pytest

from bgrdmft.errors import DimensionMismatchError, InvalidArgumentError
from bgrdmft.operators import (
    PairInteraction,
    SectorOperator,
    build_hamiltonian,
    build_interaction_matrix,
    ground_state,
    hubbard_interaction,
)
from bgrdmft.sectors import enumerate_sector

PAPER_W_330 = np.array(
    [
        [2.0, 0.0, 0.0, 2.0 * math.sqrt(6.0) / 3.0],
        [0.0, 2.0, 0.0, 2.0 * math.sqrt(6.0) / 3.0],
        [0.0, 0.0, 2.0, 2.0 * math.sqrt(6.0) / 3.0],
        [2.0 * math.sqrt(6.0) / 3.0] * 3 + [4.0],
    ]
)


def dense_fock_interaction(W: PairInteraction, d: int, N: int):
    """Independent oracle: assemble W on the full product Fock space from
    per-mode ladder operator matrices, with no symmetry bookkeeping."""
    dim1 = N + 1
    lower = np.diag(np.sqrt(np.arange(1, dim1)), k=1)  # annihilation
    ident = np.eye(dim1)

    def mode_op(op, k):
        mats = [ident] * d
        mats[k] = op
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out

    b = [mode_op(lower, k) for k in range(d)]
    total = np.zeros((dim1**d, dim1**d))
    for (k1, k2, k3, k4), amp in W.coefficients.items():
        total += amp * (b[k1].T @ b[k2].T @ b[k3] @ b[k4])
    return total


def product_index(state, N):
    idx = 0
    for occ in state:
        idx = idx * (N + 1) + occ
    return idx


class TestHubbardInteraction:
    def test_coefficients(self):
        W = hubbard_interaction(3)
        assert W.coefficients[(0, 0, 0, 0)] == pytest.approx(1 / 3)
        assert W.coefficients[(1, 2, 0, 0)] == pytest.approx(1 / 3)
        assert (1, 0, 0, 0) not in W.coefficients

    def test_all_keys_conserve_momentum(self):
        W = hubbard_interaction(4)
        for k1, k2, k3, k4 in W.coefficients:
            assert (k1 + k2 - k3 - k4) % 4 == 0
        assert len(W.coefficients) == 4**3

    def test_hermiticity_validation(self):
        with pytest.raises(InvalidArgumentError):
            PairInteraction(d=3, coefficients={(1, 2, 0, 0): 1.0})
        with pytest.raises(InvalidArgumentError):
            PairInteraction(d=3, coefficients={(1, 0, 0, 0): 1.0})


class TestInteractionMatrix:
    def test_paper_330_matrix(self, hub330):
        _, Wmat, _ = hub330
        np.testing.assert_allclose(Wmat.matrix, PAPER_W_330, atol=1e-12)

    def test_condensate_coupling_element(self, hub360):
        sector, Wmat, _ = hub360
        i = sector.position((1, 4, 1))
        j = sector.position((0, 6, 0))
        assert Wmat.matrix[i, j] == pytest.approx(
            (2.0 / 3.0) * math.sqrt(30.0), abs=1e-12
        )

    def test_condensate_diagonal(self):
        # <N,0,0|W|N,0,0> = N(N-1)/3, cross-checked at N=3 with the fixture
        for N in (3, 5, 8):
            sector = enumerate_sector(3, N, 0)
            Wmat = build_interaction_matrix(hubbard_interaction(3), sector)
            i = sector.position((N, 0, 0))
            assert Wmat.matrix[i, i] == pytest.approx(N * (N - 1) / 3, abs=1e-12)

    def test_symmetry_invariant(self):
        for d, N, P in [(3, 6, 1), (4, 4, 2), (2, 8, 0)]:
            sector = enumerate_sector(d, N, P)
            Wmat = build_interaction_matrix(hubbard_interaction(d), sector)
            np.testing.assert_allclose(Wmat.matrix, Wmat.matrix.T, atol=1e-12)

    def test_dimension_mismatch(self, hub330):
        sector, _, _ = hub330
        with pytest.raises(DimensionMismatchError):
            build_interaction_matrix(hubbard_interaction(4), sector)

    @pytest.mark.parametrize("d,N", [(2, 4), (2, 6), (3, 3), (3, 4)])
    def test_sector_blocks_match_full_fock_oracle(self, d, N):
        W = hubbard_interaction(d)
        full = dense_fock_interaction(W, d, N)
        for P in range(d):
            sector = enumerate_sector(d, N, P)
            Wmat = build_interaction_matrix(W, sector)
            idx = [product_index(s, N) for s in sector.states]
            block = full[np.ix_(idx, idx)]
            np.testing.assert_allclose(Wmat.matrix, block, atol=1e-10)
            # trace check against the oracle block
            assert np.trace(Wmat.matrix) == pytest.approx(
                np.trace(block), abs=1e-10
            )

    def test_off_sector_blocks_vanish(self):
        # momentum conservation: the oracle matrix has no cross-sector terms
        d, N = 3, 3
        full = dense_fock_interaction(hubbard_interaction(d), d, N)
        s0 = enumerate_sector(d, N, 0)
        s1 = enumerate_sector(d, N, 1)
        i0 = [product_index(s, N) for s in s0.states]
        i1 = [product_index(s, N) for s in s1.states]
        np.testing.assert_allclose(full[np.ix_(i0, i1)], 0.0, atol=1e-12)


class TestHamiltonian:
    def test_zero_kinetic(self, hub330):
        sector, Wmat, _ = hub330
        H = build_hamiltonian(np.zeros(3), Wmat)
        np.testing.assert_allclose(H.matrix, Wmat.matrix, atol=0)

    def test_uniform_kinetic_shift(self, hub330):
        sector, Wmat, _ = hub330
        H = build_hamiltonian(np.ones(3), Wmat)
        np.testing.assert_allclose(
            H.matrix, Wmat.matrix + 3.0 * np.eye(4), atol=1e-14
        )

    def test_diagonal_entries(self, hub331):
        sector, Wmat, _ = hub331
        H = build_hamiltonian(np.array([0.0, 1.0, 2.0]), Wmat)
        i = sector.position((2, 1, 0))
        assert H.matrix[i, i] - Wmat.matrix[i, i] == pytest.approx(1.0)

    def test_mismatch(self, hub330):
        _, Wmat, _ = hub330
        with pytest.raises(DimensionMismatchError):
            build_hamiltonian(np.zeros(4), Wmat)
        with pytest.raises(InvalidArgumentError):
            build_hamiltonian(np.array([np.inf, 0.0, 0.0]), Wmat)


class TestGroundState:
    def test_degenerate_diagonal(self, hub331):
        sector, _, _ = hub331
        H = SectorOperator(sector=sector, matrix=2.0 * np.eye(3))
        energy, vec, gap = ground_state(H)
        assert energy == pytest.approx(2.0)
        assert gap == pytest.approx(0.0)
        assert np.linalg.norm(vec) == pytest.approx(1.0)
        assert vec[np.argmax(np.abs(vec))] > 0

    def test_hubbard_330_ground_energy(self, hub330):
        # The symmetric condensate combination couples to the uniform state
        # with element 2*sqrt(2); the reduced 2x2 block [[2, 2r2],[2r2, 4]]
        # has det 0, so the ground energy is exactly 0.  Verified against the
        # full diagonalization here.
        _, Wmat, _ = hub330
        reduced = np.array(
            [[2.0, 2.0 * math.sqrt(2.0)], [2.0 * math.sqrt(2.0), 4.0]]
        )
        expected = float(np.linalg.eigvalsh(reduced)[0])
        energy, vec, gap = ground_state(Wmat)
        assert energy == pytest.approx(expected, abs=1e-12)
        assert energy == pytest.approx(0.0, abs=1e-12)
        assert gap == pytest.approx(2.0, abs=1e-12)

    def test_shift_invariance(self, hub360):
        sector, Wmat, _ = hub360
        e0, v0, _ = ground_state(Wmat)
        shifted = SectorOperator(
            sector=sector, matrix=Wmat.matrix + 1e6 * np.eye(sector.dimension)
        )
        e1, v1, _ = ground_state(shifted)
        assert e1 - e0 == pytest.approx(1e6, rel=1e-12)
        np.testing.assert_allclose(v0, v1, atol=1e-9)

    def test_residual_invariant(self):
        for d, N, P in [(3, 6, 0), (3, 12, 1), (4, 4, 0)]:
            sector = enumerate_sector(d, N, P)
            Wmat = build_interaction_matrix(hubbard_interaction(d), sector)
            energy, vec, _ = ground_state(Wmat)
            scale = np.linalg.norm(Wmat.matrix, 2)
            resid = np.linalg.norm(Wmat.matrix @ vec - energy * vec)
            assert resid <= 1e-10 * max(1.0, scale)

    def test_asymmetric_rejected(self, hub330):
        sector, _, _ = hub330
        bad = np.arange(16.0).reshape(4, 4)
        with pytest.raises(InvalidArgumentError):
            ground_state(SectorOperator(sector=sector, matrix=bad))


def test_csv_export_round_trip(hub330):
    _, Wmat, _ = hub330
    text = Wmat.to_csv()
    rows = [
        [float(x) for x in line.split(",")] for line in text.splitlines()
    ]
    np.testing.assert_array_equal(np.array(rows), Wmat.matrix)
