"""Occupation bases: dimensions, canonical order, merging, phases."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schmidtfock.fock import (
    BasisCapExceeded,
    OccupationVector,
    Statistics,
    basis_dimension,
    enumerate_basis,
    merge_coefficient,
    merge_occupations,
    split_occupation,
)

B, F = Statistics.BOSON, Statistics.FERMION


def occ(stats, *ns):
    return OccupationVector(tuple(ns), stats)


class TestDimensions:
    def test_reference_values(self):
        assert basis_dimension(B, 4, 2) == 10
        assert basis_dimension(F, 4, 2) == 6
        assert basis_dimension(B, 7, 0) == 1

    def test_pauli_exclusion(self):
        assert basis_dimension(F, 2, 3) == 0
        assert len(enumerate_basis(F, 2, 3)) == 0

    def test_matches_enumeration(self):
        for stats in (B, F):
            for d in range(1, 5):
                for M in range(0, 5):
                    assert len(enumerate_basis(stats, d, M)) == basis_dimension(stats, d, M)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            basis_dimension(B, 0, 2)
        with pytest.raises(ValueError):
            basis_dimension(B, 3, -1)


class TestEnumeration:
    def test_canonical_order_fermion(self):
        basis = enumerate_basis(F, 3, 2)
        assert basis.occupations.tolist() == [[1, 1, 0], [1, 0, 1], [0, 1, 1]]

    def test_canonical_order_boson(self):
        basis = enumerate_basis(B, 2, 2)
        assert basis.occupations.tolist() == [[2, 0], [1, 1], [0, 2]]

    def test_order_is_descending_lexicographic(self):
        basis = enumerate_basis(B, 3, 3)
        rows = [tuple(r) for r in basis.occupations.tolist()]
        assert rows == sorted(rows, reverse=True)

    def test_index_roundtrip(self):
        basis = enumerate_basis(F, 5, 3)
        for i in range(len(basis)):
            assert basis.index_of(tuple(basis.occupations[i])) == i

    def test_fermion_bitmasks_match_occupations(self):
        basis = enumerate_basis(F, 6, 3)
        assert basis.bitmasks is not None
        for i, row in enumerate(basis.occupations.tolist()):
            expected = sum(1 << j for j, n in enumerate(row) if n)
            assert int(basis.bitmasks[i]) == expected

    def test_cap_enforced(self, monkeypatch):
        monkeypatch.setenv("SCHMIDTFOCK_BASIS_CAP", "5")
        with pytest.raises(BasisCapExceeded):
            enumerate_basis(B, 4, 3)
        monkeypatch.setenv("SCHMIDTFOCK_BASIS_CAP", "1000000")
        assert len(enumerate_basis(B, 4, 3)) == 20


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([B, F]), st.integers(1, 5), st.integers(0, 4), st.data())
def test_unrank_rank_roundtrip(stats, d, M, data):
    if basis_dimension(stats, d, M) == 0:
        return
    basis = enumerate_basis(stats, d, M)
    i = data.draw(st.integers(0, len(basis) - 1))
    assert basis.index_of(basis.state(i)) == i


class TestMerge:
    def test_boson_normalization(self):
        merged, coeff = merge_occupations(occ(B, 1, 0), occ(B, 1, 0))
        assert merged.occ == (2, 0)
        assert coeff == pytest.approx(np.sqrt(2))

    def test_single_anticommutation(self):
        merged, coeff = merge_occupations(occ(F, 0, 1, 0), occ(F, 1, 0, 0))
        assert merged.occ == (1, 1, 0)
        assert coeff == -1.0

    def test_pauli_exclusion_returns_none(self):
        assert merge_occupations(occ(F, 1, 0), occ(F, 1, 0)) is None

    def test_mode_count_mismatch(self):
        with pytest.raises(ValueError):
            merge_occupations(occ(B, 1, 0), occ(B, 1, 0, 0))

    def test_statistics_mismatch(self):
        with pytest.raises(ValueError):
            merge_occupations(occ(B, 1, 0), occ(F, 1, 0))

    def test_fermion_swap_parity(self):
        # swapping the two factors changes the sign by (-1)^(M * (N-M))
        rng = np.random.default_rng(0)
        for _ in range(40):
            d = int(rng.integers(2, 7))
            occupied = rng.permutation(d)
            M = int(rng.integers(1, d))
            cut = int(rng.integers(1, min(M + 1, d)))
            a = np.zeros(d, dtype=int)
            b = np.zeros(d, dtype=int)
            a[occupied[:cut]] = 1
            b[occupied[cut:M + 1]] = 1
            ca = merge_coefficient(F, tuple(a), tuple(b))
            cb = merge_coefficient(F, tuple(b), tuple(a))
            assert ca == cb * (-1) ** (int(a.sum()) * int(b.sum()))


class TestSplit:
    def test_split_covers_all_submultisets(self):
        for stats in (B, F):
            for occ_t in [(2, 1, 0), (1, 1, 1)]:
                if stats is F and max(occ_t) > 1:
                    continue
                N = sum(occ_t)
                for M in range(0, N + 1):
                    splits = list(split_occupation(stats, occ_t, M))
                    alphas = {a for a, _, _ in splits}
                    assert len(alphas) == len(splits)
                    for alpha, beta, coeff in splits:
                        assert tuple(x + y for x, y in zip(alpha, beta)) == occ_t
                        assert coeff != 0.0

    def test_split_coefficient_is_merge_coefficient(self):
        for stats in (B, F):
            occ_t = (1, 1, 0) if stats is F else (2, 1, 0)
            for alpha, beta, coeff in split_occupation(stats, occ_t, 1):
                assert coeff == merge_coefficient(stats, alpha, beta)


class TestOccupationVector:
    def test_fermion_double_occupancy_rejected(self):
        with pytest.raises(ValueError):
            OccupationVector((2, 0), F)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            OccupationVector((-1, 1), B)

    def test_total(self):
        assert occ(B, 2, 0, 1).total() == 3
