"""M-body reduced density matrices, reductions, spectra and entropies.

The raw M-body matrix has trace C(N, M); dividing by that trace gives the
normalized form whose mixedness quantifies (M, N-M) entanglement.  The same
matrix-plus-basis pair also represents the M-body density operator: both
carry identical data, so no separate type exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

import numpy as np

from .bipartite import build_gamma
from .fock import FockBasis, OccupationVector, Statistics, enumerate_basis, merge_coefficient
from .numerics import (
    ATOL_CONSTRUCTION,
    Spectrum,
    clamp_spectrum,
    entropy as spectral_entropy,
    hermitian_eigen,
)
from .states import PureState


@dataclass(frozen=True)
class ReducedDensityMatrix:
    """Hermitian M-body covariance matrix over an M-particle basis.

    ``source_particles`` records the particle number N of the originating
    state; the raw trace is C(N, M), the normalized trace is 1.
    """

    basis: FockBasis
    matrix: np.ndarray
    source_particles: int
    normalized: bool = False

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (len(self.basis), len(self.basis)):
            raise ValueError(f"matrix shape {mat.shape} does not match basis size {len(self.basis)}")
        scale = max(1.0, float(np.abs(mat).max()) if mat.size else 0.0)
        if not np.allclose(mat, mat.conj().T, atol=100 * ATOL_CONSTRUCTION * scale, rtol=0.0):
            raise ValueError("reduced density matrix is not Hermitian within tolerance")
        mat = (mat + mat.conj().T) / 2.0
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def M(self) -> int:
        return self.basis.M

    @property
    def N(self) -> int:
        return self.source_particles

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalized_copy(self) -> "ReducedDensityMatrix":
        if self.normalized:
            return self
        return ReducedDensityMatrix(
            self.basis, self.matrix / comb(self.N, self.M), self.N, normalized=True
        )

    def spectrum(self) -> Spectrum:
        spec, _ = hermitian_eigen(self.matrix)
        return Spectrum(clamp_spectrum(spec))

    def eigenbasis(self) -> tuple[Spectrum, np.ndarray]:
        spec, vecs = hermitian_eigen(self.matrix)
        return Spectrum(clamp_spectrum(spec)), vecs


def rdm(state: PureState, M: int) -> ReducedDensityMatrix:
    """Raw M-body reduced density matrix of a pure state (trace C(N, M))."""
    if not 0 < M <= state.particles:
        raise ValueError(f"need 0 < M <= N={state.particles}, got M={M}")
    gamma = build_gamma(state, M)
    return ReducedDensityMatrix(
        gamma.rows, gamma.entries @ gamma.entries.conj().T, state.particles
    )


def fock_rdm_spectrum(occ: OccupationVector | Sequence[int], M: int,
                      statistics: Statistics | str | None = None) -> Spectrum:
    """Analytic M-body spectrum of a single Fock configuration.

    The eigenvalues are the products of per-mode binomials C(n_i, m_i) over
    all M-particle sub-occupations; zeros are dropped.  They match the dense
    construction exactly, and sum to C(N, M).
    """
    if isinstance(occ, OccupationVector):
        stats = occ.statistics
        occ_t = occ.occ
    else:
        if statistics is None:
            raise ValueError("statistics required when passing a bare occupation tuple")
        stats = Statistics.parse(statistics)
        occ_t = tuple(int(n) for n in occ)
    N = sum(occ_t)
    if M > N:
        raise ValueError(f"M={M} exceeds particle count {N}")
    values = []
    sub_basis = enumerate_basis(stats, len(occ_t), M)
    for alpha in sub_basis.occupations:
        if np.any(alpha > np.asarray(occ_t)):
            continue
        lam = 1
        for n_i, m_i in zip(occ_t, alpha.tolist()):
            lam *= comb(n_i, m_i)
        if lam:
            values.append(float(lam))
    return Spectrum(np.asarray(values))


def reduce(rdm_M: ReducedDensityMatrix, L: int) -> ReducedDensityMatrix:
    """Contract an M-body matrix down to L bodies (L <= M).

    Agrees with the direct L-body construction from the source state within
    1e-9, and preserves the trace sum rule Tr = C(N, L).
    """
    if rdm_M.normalized:
        raise ValueError("reduction is defined on the raw (trace C(N, M)) form")
    M, N = rdm_M.M, rdm_M.N
    if L > M:
        raise ValueError(f"cannot reduce {M}-body data to L={L} > M")
    if L == M:
        return rdm_M
    if L < 1:
        raise ValueError("L must be at least 1")
    stats, d = rdm_M.basis.statistics, rdm_M.basis.d
    basis_L = enumerate_basis(stats, d, L)
    basis_rem = enumerate_basis(stats, d, M - L)
    out = np.zeros((len(basis_L), len(basis_L)), dtype=complex)
    occs_L = [tuple(row) for row in basis_L.occupations.tolist()]
    for delta in basis_rem.occupations.tolist():
        delta_t = tuple(delta)
        idx, coeffs = [], []
        for g, occ_g in enumerate(occs_L):
            c = merge_coefficient(stats, occ_g, delta_t)
            if c == 0.0:
                continue
            merged = tuple(a + b for a, b in zip(occ_g, delta_t))
            if not rdm_M.basis.contains(merged):
                continue
            idx.append(g)
            coeffs.append(c)
        if not idx:
            continue
        rows = [rdm_M.basis.index_of(tuple(a + b for a, b in zip(occs_L[g], delta_t))) for g in idx]
        sub = rdm_M.matrix[np.ix_(rows, rows)]
        cvec = np.asarray(coeffs)
        out[np.ix_(idx, idx)] += (cvec[:, None] * cvec[None, :]) * sub
    out /= comb(N - L, N - M)
    return ReducedDensityMatrix(basis_L, out, N)


def normalized_spectrum(state: PureState, L: int) -> Spectrum:
    """Spectrum of the normalized L-body matrix (probabilities summing to 1)."""
    rho = rdm(state, L)
    return Spectrum(clamp_spectrum(rho.spectrum().values) / comb(state.particles, L))


def entanglement_entropy(
    state: PureState,
    L: int,
    entropy_kind: str | Callable[[np.ndarray], np.ndarray] = "von_neumann",
) -> float:
    """Entropy of the normalized L-body spectrum.

    By isospectrality this equals the (N-L)-body value within 1e-8, so it is
    a well-defined (L, N-L) entanglement measure.
    """
    if not 1 <= L <= state.particles:
        raise ValueError(f"need 1 <= L <= N={state.particles}, got L={L}")
    return spectral_entropy(normalized_spectrum(state, L), entropy_kind)


def operator_average(state: PureState, operator: np.ndarray, M: int) -> complex:
    """``Tr[rho^(M) O]`` for an M-body operator in the canonical basis."""
    rho = rdm(state, M)
    op = np.asarray(operator, dtype=complex)
    if op.shape != rho.matrix.shape:
        raise ValueError(f"operator shape {op.shape} does not match {rho.matrix.shape}")
    return complex(np.trace(rho.matrix @ op))
