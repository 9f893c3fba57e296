"""Splitting matrices, Schmidt decompositions, reconstruction, overlaps."""

from math import comb

import numpy as np
import pytest

from schmidtfock.bipartite import (
    apply_collective_annihilator,
    build_gamma,
    fidelity,
    normal_mode_state,
    overlap,
    reconstruct,
    schmidt_decompose,
    schmidt_of_state,
)
from schmidtfock.fock import Statistics, enumerate_basis
from schmidtfock.pairing import embed_paired_state, uniform_paired_state
from schmidtfock.rdm import rdm
from schmidtfock.states import basis_state, random_state

B, F = Statistics.BOSON, Statistics.FERMION


@pytest.fixture(scope="module")
def rng():
    return np.random.default_rng(2024)


class TestBuildGamma:
    def test_frobenius_identity_random_fermion(self, rng):
        state = random_state(enumerate_basis(F, 5, 4), rng)
        gamma = build_gamma(state, 2)
        assert gamma.frobenius_squared() == pytest.approx(6.0, abs=1e-9)

    @pytest.mark.parametrize("stats", [B, F])
    def test_frobenius_identity_all_m(self, stats, rng):
        state = random_state(enumerate_basis(stats, 4, 4), rng)
        for M in range(1, 5):
            gamma = build_gamma(state, M)
            assert gamma.frobenius_squared() == pytest.approx(comb(4, M), abs=1e-9)

    def test_product_fock_state_single_entry_per_split(self):
        state = basis_state(enumerate_basis(F, 4, 2), (1, 0, 1, 0))
        gamma = build_gamma(state, 1)
        # each annihilation leaves exactly one remainder configuration
        assert (np.abs(gamma.entries) > 1e-12).sum() == 2

    @pytest.mark.parametrize("stats", [B, F])
    def test_partner_transpose_rule(self, stats, rng):
        state = random_state(enumerate_basis(stats, 4, 3), rng)
        for M in (1, 2):
            ga = build_gamma(state, M)
            gb = build_gamma(state, 3 - M)
            sign = (-1.0) ** (M * (3 - M)) if stats is F else 1.0
            assert np.abs(gb.entries - sign * ga.entries.T).max() < 1e-12

    def test_m_equals_n_single_column(self, rng):
        state = random_state(enumerate_basis(B, 3, 2), rng)
        gamma = build_gamma(state, 2)
        assert gamma.entries.shape == (len(state.basis), 1)
        assert np.abs(gamma.entries[:, 0] - state.amplitudes).max() < 1e-12

    def test_invalid_m(self, rng):
        state = random_state(enumerate_basis(B, 3, 2), rng)
        with pytest.raises(ValueError):
            build_gamma(state, 0)
        with pytest.raises(ValueError):
            build_gamma(state, 3)


class TestSchmidt:
    def test_uniform_pair_state_flat_spectrum(self):
        state = embed_paired_state(uniform_paired_state(F, 2, 1))
        schmidt = schmidt_of_state(state, 1)
        assert np.allclose(schmidt.sigma, 1 / np.sqrt(2))
        assert schmidt.rank == 4

    def test_condensate_single_mode(self):
        state = basis_state(enumerate_basis(B, 3, 4), (4, 0, 0))
        for M in (1, 2, 3):
            schmidt = schmidt_of_state(state, M)
            assert schmidt.rank == 1
            assert schmidt.sigma[0] == pytest.approx(np.sqrt(comb(4, M)))

    def test_slater_determinant_unit_values(self):
        state = basis_state(enumerate_basis(F, 4, 3), (1, 1, 1, 0))
        schmidt = schmidt_of_state(state, 2)
        assert np.allclose(schmidt.sigma, 1.0)
        assert schmidt.rank == 3

    def test_sigma_descending_and_trace(self, rng):
        state = random_state(enumerate_basis(B, 4, 3), rng)
        schmidt = schmidt_of_state(state, 2)
        assert np.all(np.diff(schmidt.sigma) <= 1e-12)
        assert (schmidt.sigma**2).sum() == pytest.approx(comb(3, 2), abs=1e-8)

    def test_factorization_residual(self, rng):
        state = random_state(enumerate_basis(F, 5, 3), rng)
        gamma = build_gamma(state, 2)
        s = schmidt_decompose(gamma)
        rebuilt = (s.left * s.sigma) @ s.right.conj().T
        assert np.abs(rebuilt - gamma.entries).max() < 1e-9


class TestReconstruct:
    @pytest.mark.parametrize("stats", [B, F])
    def test_full_reconstruction_fidelity(self, stats, rng):
        state = random_state(enumerate_basis(stats, 4, 4), rng)
        for M in range(1, 5):
            rebuilt = reconstruct(schmidt_of_state(state, M))
            assert fidelity(state, rebuilt) >= 1 - 1e-10

    def test_uniform_pair_state_first_term_exact(self):
        # the leading term of the pair-sector expansion is proportional to
        # the state itself, so even k=1 reconstructs it exactly
        state = embed_paired_state(uniform_paired_state(F, 3, 2))
        from schmidtfock.blocks import sector_reconstruct

        rebuilt = sector_reconstruct(state, tuple(range(3)), 1, 1, k=1)
        assert fidelity(state, rebuilt) == pytest.approx(1.0, abs=1e-10)

    def test_truncation_renormalized(self, rng):
        state = random_state(enumerate_basis(B, 3, 3), rng)
        schmidt = schmidt_of_state(state, 1)
        truncated = reconstruct(schmidt, k=1)
        assert truncated.norm() == pytest.approx(1.0, abs=1e-12)

    def test_k_zero_rejected(self, rng):
        state = random_state(enumerate_basis(B, 3, 2), rng)
        with pytest.raises(ValueError):
            reconstruct(schmidt_of_state(state, 1), k=0)


class TestOverlap:
    def test_self_overlap(self, rng):
        state = random_state(enumerate_basis(F, 4, 2), rng)
        assert overlap(state, state) == pytest.approx(1.0)

    def test_orthogonal_basis_states(self):
        basis = enumerate_basis(F, 3, 2)
        a = basis_state(basis, (1, 1, 0))
        b = basis_state(basis, (1, 0, 1))
        assert overlap(a, b) == 0.0

    def test_phase(self, rng):
        state = random_state(enumerate_basis(B, 3, 2), rng)
        phase = np.exp(0.83j)
        from schmidtfock.states import PureState

        rotated = PureState(state.basis, phase * state.amplitudes, normalized=True)
        assert overlap(state, rotated) == pytest.approx(phase)

    def test_basis_mismatch(self, rng):
        a = random_state(enumerate_basis(B, 3, 2), rng)
        b = random_state(enumerate_basis(B, 3, 3), rng)
        with pytest.raises(ValueError):
            overlap(a, b)


class TestNormalModes:
    def test_orthonormality(self, rng):
        state = random_state(enumerate_basis(B, 4, 3), rng)
        schmidt = schmidt_of_state(state, 1)
        for side in ("left", "right"):
            vecs = [normal_mode_state(schmidt, nu, side).amplitudes for nu in range(schmidt.rank)]
            gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
            assert np.abs(gram - np.eye(schmidt.rank)).max() < 1e-10

    @pytest.mark.parametrize("stats", [B, F])
    def test_collective_annihilation_pairs_sides(self, stats, rng):
        # A_nu |Psi> = sigma_nu |right_nu>, and <0|B_nu A_nu'|Psi> = delta sigma
        state = random_state(enumerate_basis(stats, 4, 3), rng)
        schmidt = schmidt_of_state(state, 2)
        for nu in range(schmidt.rank):
            image = apply_collective_annihilator(state, schmidt, nu)
            partner = normal_mode_state(schmidt, nu, "right")
            assert np.linalg.norm(image.amplitudes - schmidt.sigma[nu] * partner.amplitudes) < 1e-9
            for nu2 in range(schmidt.rank):
                other = normal_mode_state(schmidt, nu2, "right")
                val = np.vdot(other.amplitudes, image.amplitudes)
                expected = schmidt.sigma[nu] if nu2 == nu else 0.0
                assert abs(val - expected) < 1e-9

    def test_uniform_state_dominant_mode_is_flat(self):
        # the dominant pair mode of the maximally paired state has uniform
        # coefficients over the pair configurations
        from schmidtfock.pairing import pair_hop_matrix

        pa = uniform_paired_state(F, 4, 2)
        rho_c = pair_hop_matrix(pa)
        w, v = np.linalg.eigh(rho_c)
        top = np.abs(v[:, -1])
        assert np.abs(top - 1 / 2.0).max() < 1e-10  # 1/sqrt(n), n = 4

    def test_mode_out_of_range(self, rng):
        state = random_state(enumerate_basis(B, 3, 2), rng)
        schmidt = schmidt_of_state(state, 1)
        with pytest.raises(ValueError):
            normal_mode_state(schmidt, schmidt.rank, "left")
        with pytest.raises(ValueError):
            normal_mode_state(schmidt, 0, "middle")


class TestIsospectrality:
    @pytest.mark.parametrize("stats", [B, F])
    def test_m_and_partner_spectra_agree(self, stats, rng):
        for _ in range(5):
            d = int(rng.integers(3, 6))
            N = int(rng.integers(2, 5))
            if stats is F:
                N = min(N, d)
            state = random_state(enumerate_basis(stats, d, N), rng)
            for M in range(1, N):
                sa = schmidt_of_state(state, M).sigma
                sb = schmidt_of_state(state, N - M).sigma
                size = max(len(sa), len(sb))
                sa = np.pad(sa, (0, size - len(sa)))
                sb = np.pad(sb, (0, size - len(sb)))
                assert np.abs(sa - sb).max() < 1e-8

    def test_left_vectors_diagonalize_rdm(self, rng):
        state = random_state(enumerate_basis(F, 5, 3), rng)
        schmidt = schmidt_of_state(state, 2)
        rho = rdm(state, 2).matrix
        for nu in range(schmidt.rank):
            u = schmidt.left[:, nu]
            residual = np.linalg.norm(rho @ u - schmidt.sigma[nu] ** 2 * u)
            assert residual < 1e-9 * max(1.0, schmidt.sigma[0] ** 2)
