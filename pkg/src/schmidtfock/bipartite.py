"""Bipartite-like (M, N-M) coefficient matrices and Schmidt decompositions.

For an N-particle pure state, row ``alpha`` of the splitting matrix is the
(N-M)-particle remainder left after annihilating M particles in configuration
``alpha``.  Its SVD yields collective M- and (N-M)-particle normal operators
whose weighted products reconstruct the state exactly; the squared singular
values are the eigenvalues of both the M- and (N-M)-body reduced density
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .fock import FockBasis, Statistics, enumerate_basis, split_occupation
from .numerics import Spectrum, svd
from .states import PureState, compose_weighted_products, overlap_vectors

# Relative rank threshold: singular values below RANK_RTOL * sigma_max are
# treated as zero.  Absolute thresholds fail across the C(N, M) trace scale.
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class GammaMatrix:
    """Splitting coefficient matrix with its row/column basis metadata.

    For a normalized source state the squared Frobenius norm equals C(N, M).
    """

    rows: FockBasis
    cols: FockBasis
    entries: np.ndarray

    def __post_init__(self):
        ent = np.asarray(self.entries, dtype=complex)
        if ent.shape != (len(self.rows), len(self.cols)):
            raise ValueError(f"entries shape {ent.shape} does not match bases")
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    @property
    def statistics(self) -> Statistics:
        return self.rows.statistics

    @property
    def M(self) -> int:
        return self.rows.M

    @property
    def N(self) -> int:
        return self.rows.M + self.cols.M

    def frobenius_squared(self) -> float:
        return float(np.sum(np.abs(self.entries) ** 2))


def build_gamma(state: PureState, M: int) -> GammaMatrix:
    """Coefficient matrix of the (M, N-M) splitting of ``state``.

    Row ``alpha`` equals ``C_alpha |state>`` expressed in the (N-M) basis.
    ``M = N`` is allowed and gives a single-column matrix of the state's
    amplitudes.
    """
    N = state.particles
    if not 1 <= M <= N:
        raise ValueError(f"need 1 <= M <= N={N}, got M={M}")
    rows = enumerate_basis(state.statistics, state.d, M)
    cols = enumerate_basis(state.statistics, state.d, N - M)
    entries = np.zeros((len(rows), len(cols)), dtype=complex)
    occs = state.basis.occupations
    for i in np.flatnonzero(state.amplitudes):
        amp = state.amplitudes[i]
        for alpha, beta, coeff in split_occupation(state.statistics, occs[i], M):
            entries[rows.index_of(alpha), cols.index_of(beta)] += coeff * amp
    return GammaMatrix(rows, cols, entries)


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Singular values with left/right collective-operator coefficients.

    ``left[:, nu]`` are the M-particle coefficients of the nu-th collective
    creation operator, ``right[:, nu]`` the corresponding (N-M)-particle (V)
    column; the (N-M)-particle normal state carries the conjugated column.
    """

    sigma: np.ndarray
    left: np.ndarray
    right: np.ndarray
    statistics: Statistics
    M: int
    N: int
    row_basis: FockBasis
    col_basis: FockBasis

    @property
    def rank(self) -> int:
        return len(self.sigma)

    def eigenvalues(self) -> Spectrum:
        """Squared singular values: the nonzero reduced-density spectrum."""
        return Spectrum(self.sigma**2)


def _deterministic_phase_and_ties(
    u: np.ndarray, s: np.ndarray, v: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fix per-pair phases and order degenerate singular values reproducibly.

    Each left vector is rotated so its dominant-row entry is real positive
    (the matching right column absorbs the conjugate phase), and members of a
    degenerate sigma group are sorted by that dominant row index.  Degenerate
    vectors remain non-unique; only spectra and subspace projectors are
    contract-stable.
    """
    if len(s) == 0:
        return u, s, v
    u = u.copy()
    v = v.copy()
    dominant = np.empty(len(s), dtype=int)
    for nu in range(len(s)):
        r = int(np.argmax(np.abs(u[:, nu])))
        dominant[nu] = r
        pivot = u[r, nu]
        if abs(pivot) > 0.0:
            phase = pivot / abs(pivot)
            u[:, nu] /= phase
            v[:, nu] /= phase
    tol = RANK_RTOL * max(1.0, s[0])
    order = np.arange(len(s))
    start = 0
    while start < len(s):
        stop = start + 1
        while stop < len(s) and abs(s[stop] - s[start]) <= tol:
            stop += 1
        if stop - start > 1:
            group = order[start:stop]
            order[start:stop] = group[np.argsort(dominant[group], kind="stable")]
        start = stop
    return u[:, order], s[order], v[:, order]


def schmidt_decompose(gamma: GammaMatrix) -> SchmidtDecomposition:
    """SVD of the splitting matrix, truncated to its numerical rank."""
    u, spec, v = svd(gamma.entries)
    s = spec.values
    if len(s):
        keep = s > RANK_RTOL * s[0]
        u, s, v = u[:, keep], s[keep], v[:, keep]
    u, s, v = _deterministic_phase_and_ties(u, s, v)
    return SchmidtDecomposition(
        sigma=s,
        left=u,
        right=v,
        statistics=gamma.statistics,
        M=gamma.M,
        N=gamma.N,
        row_basis=gamma.rows,
        col_basis=gamma.cols,
    )


def schmidt_of_state(state: PureState, M: int) -> SchmidtDecomposition:
    """Convenience: Schmidt decomposition of the (M, N-M) splitting."""
    return schmidt_decompose(build_gamma(state, M))


def reconstruct(schmidt: SchmidtDecomposition, k: int | None = None) -> PureState:
    """Rebuild the state from (optionally the leading k) Schmidt terms.

    The full sum reproduces the source state exactly (fidelity 1 within
    1e-10); truncations are renormalized to unit norm.
    """
    if k is None:
        k = schmidt.rank
    if k == 0:
        raise ValueError("truncation must keep at least one term")
    if k > schmidt.rank:
        raise ValueError(f"k={k} exceeds Schmidt rank {schmidt.rank}")
    weights = (schmidt.left[:, :k] * schmidt.sigma[:k]) @ schmidt.right[:, :k].conj().T
    state = compose_weighted_products(
        schmidt.statistics,
        schmidt.row_basis.d,
        schmidt.row_basis.occupations,
        schmidt.col_basis.occupations,
        weights,
    )
    return state.normalized_copy()


def overlap(a: PureState, b: PureState) -> complex:
    """Inner product ``<a|b>`` of states on identical basis metadata."""
    return overlap_vectors(a, b)


def fidelity(a: PureState, b: PureState) -> float:
    """``|<a|b>|`` after normalizing both sides."""
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        raise ValueError("fidelity undefined for the zero vector")
    return abs(overlap_vectors(a, b)) / (na * nb)


def normal_mode_state(schmidt: SchmidtDecomposition, nu: int, side: str) -> PureState:
    """The nu-th collective normal state on the requested side.

    ``side="left"`` returns the M-particle state created by the nu-th
    collective operator; ``side="right"`` the (N-M)-particle partner, which
    satisfies ``A_nu |Psi> = sigma_nu |right_nu>``.
    """
    if not 0 <= nu < schmidt.rank:
        raise ValueError(f"mode index {nu} out of range for rank {schmidt.rank}")
    if side == "left":
        return PureState(schmidt.row_basis, schmidt.left[:, nu].copy(), normalized=True)
    if side == "right":
        return PureState(schmidt.col_basis, schmidt.right[:, nu].conj(), normalized=True)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def apply_collective_annihilator(state: PureState, schmidt: SchmidtDecomposition, nu: int) -> PureState:
    """``A_nu |state>``: the collective annihilator of the nu-th left mode."""
    if not 0 <= nu < schmidt.rank:
        raise ValueError(f"mode index {nu} out of range for rank {schmidt.rank}")
    from .states import apply_annihilation_product  # local import to keep module load light

    target = enumerate_basis(state.statistics, state.d, state.particles - schmidt.M)
    out = np.zeros(len(target), dtype=complex)
    coeffs = schmidt.left[:, nu].conj()
    for a in np.flatnonzero(np.abs(coeffs) > 0.0):
        img = apply_annihilation_product(state, tuple(schmidt.row_basis.occupations[a]))
        out += coeffs[a] * img.amplitudes
    return PureState(target, out)


def check_frobenius_identity(gamma: GammaMatrix) -> float:
    """Deviation of ||Gamma||_F^2 from C(N, M) (0 for a normalized source)."""
    return abs(gamma.frobenius_squared() - comb(gamma.N, gamma.M))
