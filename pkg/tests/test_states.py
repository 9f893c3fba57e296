"""State construction, ladder operators, composition, unitaries, JSON files."""

import json
from math import comb

import numpy as np
import pytest

from schmidtfock.fock import Statistics, enumerate_basis
from schmidtfock.states import (
    SpUnitary,
    apply_annihilation_product,
    apply_annihilator,
    apply_creator,
    apply_operator_string,
    apply_sp_unitary,
    basis_state,
    compose_product_state,
    compose_weighted_products,
    load_state,
    make_state,
    random_state,
    save_state,
    state_from_dict,
    state_to_dict,
)

B, F = Statistics.BOSON, Statistics.FERMION


class TestMakeState:
    def test_single_configuration(self):
        basis = enumerate_basis(B, 2, 2)
        state = make_state(basis, [1, 0, 0])
        assert state.normalized

    def test_normalization(self):
        basis = enumerate_basis(B, 2, 1)
        state = make_state(basis, [1, 1], normalize=True)
        assert np.allclose(state.amplitudes, [1 / np.sqrt(2)] * 2)

    def test_zero_vector_rejected(self):
        basis = enumerate_basis(B, 2, 1)
        with pytest.raises(ValueError):
            make_state(basis, [0, 0])

    def test_length_mismatch(self):
        basis = enumerate_basis(B, 2, 1)
        with pytest.raises(ValueError):
            make_state(basis, [1, 0, 0])


class TestLadderOperators:
    def test_boson_annihilator(self):
        state = basis_state(enumerate_basis(B, 2, 2), (2, 0))
        out = apply_annihilator(state, 0)
        assert out.amplitude((1, 0)) == pytest.approx(np.sqrt(2))

    def test_fermion_annihilator_phase(self):
        state = basis_state(enumerate_basis(F, 2, 2), (1, 1))
        out = apply_annihilator(state, 1)
        assert out.amplitude((1, 0)) == pytest.approx(-1.0)

    def test_empty_mode_gives_zero(self):
        state = basis_state(enumerate_basis(F, 2, 1), (0, 1))
        assert apply_annihilator(state, 0).norm() == 0.0

    def test_boson_creator(self):
        state = basis_state(enumerate_basis(B, 2, 1), (1, 0))
        out = apply_creator(state, 0)
        assert out.amplitude((2, 0)) == pytest.approx(np.sqrt(2))

    def test_fermion_creator(self):
        state = basis_state(enumerate_basis(F, 2, 1), (0, 1))
        out = apply_creator(state, 0)
        assert out.amplitude((1, 1)) == pytest.approx(1.0)
        blocked = apply_creator(basis_state(enumerate_basis(F, 2, 1), (1, 0)), 0)
        assert blocked.norm() == 0.0

    def test_mode_out_of_range(self):
        state = basis_state(enumerate_basis(B, 2, 1), (1, 0))
        with pytest.raises(ValueError):
            apply_annihilator(state, 2)

    @pytest.mark.parametrize("stats", [B, F])
    def test_commutation_relations_as_matrices(self, stats):
        # [c_i, c^dag_j]_-+ = delta_ij checked on the one-particle sector:
        # c_i c^dag_j routes through 2 particles, c^dag_j c_i through the vacuum
        d = 3
        one = enumerate_basis(stats, d, 1)
        two = enumerate_basis(stats, d, 2)
        vac = enumerate_basis(stats, d, 0)

        def annihilate_from_two(i):
            cols = [
                apply_annihilator(basis_state(two, tuple(two.occupations[k])), i).amplitudes
                for k in range(len(two))
            ]
            return np.array(cols).T  # 2-particle -> 1-particle

        def create_from_one(j):
            cols = [
                apply_creator(basis_state(one, tuple(one.occupations[k])), j).amplitudes
                for k in range(len(one))
            ]
            return np.array(cols).T  # 1-particle -> 2-particle

        sign = -1.0 if stats is F else 1.0  # anticommutator vs commutator
        for i in range(d):
            for j in range(d):
                lhs = annihilate_from_two(i) @ create_from_one(j)
                down = np.array(
                    [
                        apply_annihilator(
                            basis_state(one, tuple(one.occupations[k])), i
                        ).amplitudes[0]
                        for k in range(len(one))
                    ]
                )
                up = apply_creator(basis_state(vac, (0,) * d), j).amplitudes
                rhs = np.outer(up, down)
                bracket = lhs - sign * rhs
                expected = np.eye(len(one)) * (1.0 if i == j else 0.0)
                assert np.abs(bracket - expected).max() < 1e-12

class TestAnnihilationProduct:
    def test_uniform_pair_norm(self):
        # one-body annihilation on the two-level uniform pair state: norm^2 = 1/2
        from schmidtfock.pairing import embed_paired_state, uniform_paired_state

        state = embed_paired_state(uniform_paired_state(F, 2, 1))
        for mode in range(4):
            alpha = tuple(1 if i == mode else 0 for i in range(4))
            image = apply_annihilation_product(state, alpha)
            assert image.norm() ** 2 == pytest.approx(0.5)

    def test_full_slater_annihilation(self):
        state = basis_state(enumerate_basis(F, 3, 3), (1, 1, 1))
        image = apply_annihilation_product(state, (1, 1, 1))
        assert abs(image.amplitudes[0]) == pytest.approx(1.0)

    def test_boson_condensate_diagonal(self):
        # <alpha|rho^(2)|alpha> = C(3, 2) = 3 for the (3, 0) configuration
        state = basis_state(enumerate_basis(B, 2, 3), (3, 0))
        image = apply_annihilation_product(state, (2, 0))
        assert image.norm() ** 2 == pytest.approx(comb(3, 2))

    def test_too_many_particles(self):
        state = basis_state(enumerate_basis(B, 2, 1), (1, 0))
        with pytest.raises(ValueError):
            apply_annihilation_product(state, (1, 1))


class TestOperatorSumIdentity:
    @pytest.mark.parametrize("stats", [B, F])
    def test_resolution_of_identity(self, stats):
        rng = np.random.default_rng(42)
        d, N = 4, 3
        state = random_state(enumerate_basis(stats, d, N), rng)
        for M in range(1, N + 1):
            m_basis = enumerate_basis(stats, d, M)
            total = np.zeros_like(state.amplitudes)
            for a in range(len(m_basis)):
                image = apply_annihilation_product(state, tuple(m_basis.occupations[a]))
                back = compose_weighted_products(
                    stats, d, m_basis.occupations[a : a + 1],
                    image.basis.occupations, image.amplitudes[None, :],
                )
                total += back.amplitudes
            assert np.abs(total - comb(N, M) * state.amplitudes).max() < 1e-10


class TestCompose:
    def test_fermion_basis_elements(self):
        left = basis_state(enumerate_basis(F, 3, 1), (1, 0, 0))
        right = basis_state(enumerate_basis(F, 3, 1), (0, 1, 0))
        out = compose_product_state(left, right)
        assert out.amplitude((1, 1, 0)) == pytest.approx(1.0)

    def test_boson_normalization(self):
        left = basis_state(enumerate_basis(B, 2, 1), (1, 0))
        out = compose_product_state(left, left)
        assert out.amplitude((2, 0)) == pytest.approx(np.sqrt(2))

    def test_merge_then_annihilate_inverts(self):
        # composing alpha with beta and annihilating alpha returns beta
        # scaled by the squared merge coefficient
        from schmidtfock.fock import merge_coefficient

        rng = np.random.default_rng(3)
        for stats in (B, F):
            for _ in range(20):
                d = int(rng.integers(2, 5))
                ma, mb = int(rng.integers(1, 3)), int(rng.integers(1, 3))
                ba, bb = enumerate_basis(stats, d, ma), enumerate_basis(stats, d, mb)
                if not len(ba) or not len(bb):
                    continue
                occ_a = tuple(ba.occupations[rng.integers(len(ba))])
                occ_b = tuple(bb.occupations[rng.integers(len(bb))])
                coeff = merge_coefficient(stats, occ_a, occ_b)
                if coeff == 0.0:
                    continue
                composed = compose_product_state(
                    basis_state(ba, occ_a), basis_state(bb, occ_b)
                )
                image = apply_annihilation_product(composed, occ_a)
                assert image.amplitude(occ_b) == pytest.approx(coeff**2)


class TestSpUnitary:
    def test_identity(self):
        state = basis_state(enumerate_basis(B, 3, 2), (1, 1, 0))
        out = apply_sp_unitary(state, SpUnitary(np.eye(3)))
        assert np.abs(out.amplitudes - state.amplitudes).max() < 1e-12

    def test_two_mode_swap(self):
        state = basis_state(enumerate_basis(F, 2, 1), (1, 0))
        swap = SpUnitary(np.array([[0, 1], [1, 0]], dtype=complex))
        out = apply_sp_unitary(state, swap)
        assert out.amplitude((0, 1)) == pytest.approx(1.0)

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError):
            SpUnitary(np.array([[1, 1], [0, 1]], dtype=complex))

    @pytest.mark.parametrize("stats", [B, F])
    def test_schmidt_spectrum_invariant(self, stats):
        from schmidtfock.bipartite import schmidt_of_state

        rng = np.random.default_rng(5)
        state = random_state(enumerate_basis(stats, 4, 3), rng)
        x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        q, _ = np.linalg.qr(x)
        rotated = apply_sp_unitary(state, SpUnitary(q))
        assert abs(rotated.norm() - 1.0) < 1e-10
        for M in (1, 2):
            s1 = schmidt_of_state(state, M).sigma
            s2 = schmidt_of_state(rotated, M).sigma
            size = max(len(s1), len(s2))
            s1 = np.pad(s1, (0, size - len(s1)))
            s2 = np.pad(s2, (0, size - len(s2)))
            assert np.abs(s1 - s2).max() < 1e-9

    def test_inner_products_preserved(self):
        rng = np.random.default_rng(6)
        basis = enumerate_basis(B, 3, 2)
        a, b = random_state(basis, rng), random_state(basis, rng)
        x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        q, _ = np.linalg.qr(x)
        u = SpUnitary(q)
        before = np.vdot(a.amplitudes, b.amplitudes)
        after = np.vdot(apply_sp_unitary(a, u).amplitudes, apply_sp_unitary(b, u).amplitudes)
        assert abs(before - after) < 1e-10


class TestOperatorString:
    def test_creation_string_normalizes_fock_state(self):
        occ, coeff = apply_operator_string(B, (0, 0), ((0, 1), (0, 1), (0, 1)))
        assert occ == (3, 0)
        assert coeff == pytest.approx(np.sqrt(6))  # sqrt(1 * 2 * 3)

    def test_fermion_string_sign(self):
        res = apply_operator_string(F, (0, 1, 0), ((0, 1),))
        assert res == ((1, 1, 0), 1.0)
        res2 = apply_operator_string(F, (1, 0, 0), ((1, 1),))
        assert res2 == ((1, 1, 0), -1.0)

    def test_killed_string(self):
        assert apply_operator_string(F, (1, 0), ((0, 1),)) is None
        assert apply_operator_string(B, (0, 0), ((0, -1),)) is None


class TestStateFiles:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(9)
        state = random_state(enumerate_basis(F, 4, 2), rng)
        path = tmp_path / "state.json"
        save_state(state, path)
        loaded = load_state(path)
        assert loaded.basis.key == state.basis.key
        assert np.abs(loaded.amplitudes - state.amplitudes).max() < 1e-15

    def test_unlisted_states_are_zero(self):
        payload = {
            "statistics": "boson",
            "modes": 2,
            "particles": 2,
            "amplitudes": [{"occ": [2, 0], "re": 1.0, "im": 0.0}],
        }
        state = state_from_dict(payload)
        assert state.amplitude((1, 1)) == 0.0

    def test_malformed_occupation_rejected(self):
        payload = {
            "statistics": "fermion",
            "modes": 2,
            "particles": 2,
            "amplitudes": [{"occ": [2, 0], "re": 1.0, "im": 0.0}],
        }
        with pytest.raises(ValueError):
            state_from_dict(payload)

    def test_wrong_particle_count_rejected(self):
        payload = {
            "statistics": "boson",
            "modes": 2,
            "particles": 3,
            "amplitudes": [{"occ": [2, 0], "re": 1.0, "im": 0.0}],
        }
        with pytest.raises(ValueError):
            state_from_dict(payload)

    def test_missing_field_rejected(self):
        with pytest.raises(ValueError):
            state_from_dict({"statistics": "boson"})

    def test_dict_form_matches_schema(self):
        state = basis_state(enumerate_basis(B, 2, 2), (1, 1))
        payload = state_to_dict(state)
        assert set(payload) == {"statistics", "modes", "particles", "amplitudes"}
        assert payload["amplitudes"] == [{"occ": [1, 1], "re": 1.0, "im": 0.0}]
