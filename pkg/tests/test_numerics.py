"""Eigen/SVD wrappers, entropies, and majorization comparisons."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schmidtfock.numerics import (
    Spectrum,
    clamp_spectrum,
    entropy,
    hermitian_eigen,
    majorization_compare,
    svd,
)


class TestHermitianEigen:
    def test_identity(self):
        spec, vecs = hermitian_eigen(np.eye(3))
        assert np.allclose(spec.values, [1, 1, 1])

    def test_diagonal_descending(self):
        spec, vecs = hermitian_eigen(np.diag([2.0, 1.0]))
        assert spec.values.tolist() == [2.0, 1.0]
        assert abs(vecs[0, 0]) == pytest.approx(1.0)

    def test_reconstruction_residual(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        a = (a + a.conj().T) / 2
        spec, vecs = hermitian_eigen(a)
        rebuilt = (vecs * spec.values) @ vecs.conj().T
        assert np.abs(rebuilt - a).max() < 1e-9 * max(1, np.abs(a).max())

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            hermitian_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestSvd:
    def test_diagonal(self):
        u, spec, v = svd(np.diag([-3.0, 2.0]))
        assert np.allclose(spec.values, [3.0, 2.0])

    def test_rank_one(self):
        x = np.array([1.0, 2.0])
        y = np.array([3.0, 4.0, 0.0])
        u, spec, v = svd(np.outer(x, y))
        assert spec.values[0] == pytest.approx(np.linalg.norm(x) * np.linalg.norm(y))
        assert np.all(spec.values[1:] < 1e-12)

    def test_factorization_and_gram_crosscheck(self):
        rng = np.random.default_rng(2)
        a = rng.standard_normal((5, 7)) + 1j * rng.standard_normal((5, 7))
        u, spec, v = svd(a)
        assert np.abs(u @ np.diag(spec.values) @ v.conj().T - a).max() < 1e-9
        gram_spec, _ = hermitian_eigen(a @ a.conj().T)
        assert np.abs(np.sort(gram_spec.values)[::-1] - spec.values**2).max() < 1e-8


class TestEntropy:
    def test_pure(self):
        assert entropy([1.0]) == 0.0

    def test_pair(self):
        assert entropy([0.5, 0.5]) == pytest.approx(1.0)

    def test_uniform_log2(self):
        for n in (2, 5, 10):
            vals = np.full(2 * n, 1.0 / (2 * n))
            assert entropy(vals) == pytest.approx(np.log2(2 * n))

    def test_linear(self):
        assert entropy([0.5, 0.5], "linear") == pytest.approx(0.5)
        assert entropy([1.0], "linear") == 0.0

    def test_trace_form_hook(self):
        # f(p) = p(1-p) reproduces the linear entropy
        vals = [0.7, 0.2, 0.1]
        assert entropy(vals, lambda p: p * (1 - p)) == pytest.approx(entropy(vals, "linear"))

    def test_clamps_small_negatives(self):
        assert entropy([1.0 + 5e-10, -5e-10], check_normalized=True) == pytest.approx(0.0, abs=1e-7)

    def test_rejects_below_floor(self):
        with pytest.raises(ValueError):
            clamp_spectrum([1.0, -1e-6])

    def test_normalization_guard(self):
        with pytest.raises(ValueError):
            entropy([0.5, 0.4])
        entropy([0.5, 0.4], check_normalized=False)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            entropy([1.0], "renyi")


class TestMajorization:
    def test_pure_majorizes_mixed(self):
        result = majorization_compare([0.5, 0.5], [1.0, 0.0])
        assert result.relation == "majorized_by"
        assert result.min_margin >= 0

    def test_equal(self):
        assert majorization_compare([0.3, 0.7], [0.7, 0.3]).relation == "equal"

    def test_incomparable(self):
        # partial sums: 0.6 > 0.5 but 0.85 < 0.9
        result = majorization_compare([0.6, 0.25, 0.15], [0.5, 0.4, 0.1])
        assert result.relation == "incomparable"

    def test_zero_padding(self):
        result = majorization_compare([0.5, 0.5], [0.5, 0.3, 0.2])
        assert result.relation == "majorizes"

    def test_total_mismatch(self):
        with pytest.raises(ValueError):
            majorization_compare([1.0], [0.5])


def _t_transform(rng, p):
    # Robin Hood operation: moves mass from a larger to a smaller entry,
    # producing a vector majorized by the input.
    q = np.array(p, dtype=float)
    i, j = rng.choice(len(q), size=2, replace=False)
    if q[i] < q[j]:
        i, j = j, i
    t = rng.uniform(0, 0.5)
    delta = t * (q[i] - q[j])
    q[i] -= delta
    q[j] += delta
    return q


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10**6), st.sampled_from(["von_neumann", "linear"]))
def test_entropy_is_schur_concave(size, seed, kind):
    rng = np.random.default_rng(seed)
    q = rng.dirichlet(np.ones(size))
    p = q
    for _ in range(4):
        p = _t_transform(rng, p)
    result = majorization_compare(p, q)
    assert result.relation in ("majorized_by", "equal")
    assert entropy(p, kind) >= entropy(q, kind) - 1e-10


def test_spectrum_sorts_and_freezes():
    spec = Spectrum(np.array([1.0, 3.0, 2.0]))
    assert spec.values.tolist() == [3.0, 2.0, 1.0]
    with pytest.raises(ValueError):
        spec.values[0] = 5.0
    assert spec.total() == pytest.approx(6.0)
    assert spec.nonzero().tolist() == [3.0, 2.0, 1.0]
