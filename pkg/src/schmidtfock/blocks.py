"""Blocked reduced densities and reduced exact expansions for sector states.

When every amplitude of a state carries the same particle count inside a mode
subset S, the M-body density splits into M+1 blocks labeled by how many of
the M particles sit in S.  Each block supports its own exact expansion of the
state; the familiar bipartite Schmidt decomposition of distinguishable
subsystems is the (N_S, 0) block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bipartite import GammaMatrix, SchmidtDecomposition, schmidt_decompose
from .fock import Statistics, enumerate_basis, merge_coefficient
from .numerics import (
    Spectrum,
    clamp_spectrum,
    entropy as spectral_entropy,
    hermitian_eigen,
)
from .states import (
    PureState,
    apply_annihilation_product,
    apply_annihilator,
    apply_creator,
    compose_weighted_products,
)

SECTOR_AMPLITUDE_TOL = 1e-12


@dataclass(frozen=True)
class ModeSubspace:
    """A proper nonempty subset of the d modes; the complement is implied."""

    members: tuple[int, ...]

    def __post_init__(self):
        mem = tuple(sorted({int(i) for i in self.members}))
        if not mem:
            raise ValueError("mode subspace must be nonempty")
        if any(i < 0 for i in mem):
            raise ValueError("mode indices must be non-negative")
        object.__setattr__(self, "members", mem)

    def validate(self, d: int) -> None:
        if self.members[-1] >= d:
            raise ValueError(f"mode {self.members[-1]} outside 0..{d - 1}")
        if len(self.members) >= d:
            raise ValueError("subspace must be strictly inside the mode set")

    def complement(self, d: int) -> tuple[int, ...]:
        self.validate(d)
        inside = set(self.members)
        return tuple(i for i in range(d) if i not in inside)


def _as_subspace(S: ModeSubspace | Sequence[int]) -> ModeSubspace:
    return S if isinstance(S, ModeSubspace) else ModeSubspace(tuple(S))


def sector_number(
    state: PureState, S: ModeSubspace | Sequence[int], atol: float = SECTOR_AMPLITUDE_TOL
) -> int | None:
    """Particles in S if sharp across all amplitudes above ``atol``, else None."""
    S = _as_subspace(S)
    S.validate(state.d)
    counts = state.basis.occupations[:, S.members].sum(axis=1)
    support = np.abs(state.amplitudes) > atol
    if not support.any():
        return None
    values = np.unique(counts[support])
    return int(values[0]) if len(values) == 1 else None


class SectorBasis:
    """M-particle configurations with m particles in S and l in its complement.

    Ordered as (S-part, S-bar-part) pairs, each part in canonical descending
    lexicographic order.  ``signs`` holds the fermionic reordering phase
    between the split creation string (S modes first) and the package's
    ascending-mode convention; bosonic signs are all +1.
    """

    __slots__ = ("statistics", "d", "m", "l", "members", "cmembers",
                 "occupations", "signs", "_index")

    def __init__(self, statistics: Statistics, d: int, S: ModeSubspace, m: int, l: int):
        S.validate(d)
        self.statistics = statistics
        self.d = d
        self.m = m
        self.l = l
        self.members = S.members
        self.cmembers = S.complement(d)
        part_s = enumerate_basis(statistics, len(self.members), m)
        part_c = enumerate_basis(statistics, len(self.cmembers), l)
        occs = np.zeros((len(part_s) * len(part_c), d), dtype=np.int64)
        signs = np.ones(len(occs))
        row = 0
        for occ_s in part_s.occupations.tolist():
            ext_s = np.zeros(d, dtype=np.int64)
            ext_s[list(self.members)] = occ_s
            for occ_c in part_c.occupations.tolist():
                ext_c = np.zeros(d, dtype=np.int64)
                ext_c[list(self.cmembers)] = occ_c
                occs[row] = ext_s + ext_c
                signs[row] = merge_coefficient(statistics, tuple(ext_s), tuple(ext_c))
                row += 1
        occs.setflags(write=False)
        signs.setflags(write=False)
        self.occupations = occs
        self.signs = signs
        self._index = {tuple(r): i for i, r in enumerate(occs.tolist())}

    @property
    def M(self) -> int:
        return self.m + self.l

    def __len__(self) -> int:
        return len(self.occupations)

    def index_of(self, occ: Sequence[int]) -> int:
        return self._index[tuple(occ)]

    def __repr__(self) -> str:
        return (f"SectorBasis({self.statistics.value}, d={self.d}, "
                f"m={self.m}, l={self.l}, size={len(self)})")


@dataclass(frozen=True)
class SectorBlock:
    """One (m, l) block of a blocked M-body reduced density matrix."""

    m: int
    l: int
    basis: SectorBasis
    matrix: np.ndarray

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def spectrum(self) -> Spectrum:
        spec, _ = hermitian_eigen(self.matrix)
        return Spectrum(clamp_spectrum(spec))


def _require_sector(state: PureState, S: ModeSubspace, atol: float) -> int:
    ns = sector_number(state, S, atol)
    if ns is None:
        raise ValueError("state does not conserve the particle number in S")
    return ns


def sector_gamma(
    state: PureState,
    S: ModeSubspace | Sequence[int],
    m: int,
    l: int,
    atol: float = SECTOR_AMPLITUDE_TOL,
) -> GammaMatrix:
    """Splitting matrix of the (m, l) block for a sector-diagonal state.

    Rows are M-particle configurations with m particles in S, columns the
    matching (N-M)-particle remainder sector; the Gram matrix of the rows is
    the (m, l) block of the M-body density.
    """
    S = _as_subspace(S)
    ns = _require_sector(state, S, atol)
    nc = state.particles - ns
    if not (0 <= m <= ns and 0 <= l <= nc):
        raise ValueError(f"sector (m={m}, l={l}) incompatible with (N_S={ns}, N_Sbar={nc})")
    rows = SectorBasis(state.statistics, state.d, S, m, l)
    cols = SectorBasis(state.statistics, state.d, S, ns - m, nc - l)
    if len(rows) == 0 or len(cols) == 0:
        raise ValueError(f"empty sector (m={m}, l={l}) for this statistics")
    full_cols = enumerate_basis(state.statistics, state.d, state.particles - rows.M)
    col_ids = np.fromiter(
        (full_cols.index_of(tuple(occ)) for occ in cols.occupations.tolist()),
        dtype=np.int64,
        count=len(cols),
    )
    entries = np.zeros((len(rows), len(cols)), dtype=complex)
    for r in range(len(rows)):
        image = apply_annihilation_product(state, tuple(rows.occupations[r]))
        entries[r] = rows.signs[r] * cols.signs * image.amplitudes[col_ids]
    return GammaMatrix(rows, cols, entries)


def blocked_rdm(
    state: PureState,
    S: ModeSubspace | Sequence[int],
    M: int,
    atol: float = SECTOR_AMPLITUDE_TOL,
) -> list[SectorBlock]:
    """All (m, M-m) blocks of the M-body density of a sector-diagonal state.

    Block (m, l) has trace C(N_S, m) * C(N_Sbar, l); the union of the block
    spectra reproduces the spectrum of the unblocked M-body matrix.
    """
    S = _as_subspace(S)
    ns = _require_sector(state, S, atol)
    nc = state.particles - ns
    if not 0 < M <= state.particles:
        raise ValueError(f"need 0 < M <= N={state.particles}")
    blocks = []
    for m in range(max(0, M - nc), min(M, ns) + 1):
        l = M - m
        if basis_nonempty(state.statistics, S, state.d, m, l):
            gamma = sector_gamma(state, S, m, l, atol)
            matrix = gamma.entries @ gamma.entries.conj().T
            blocks.append(SectorBlock(m, l, gamma.rows, matrix))
    return blocks


def basis_nonempty(statistics: Statistics, S: ModeSubspace, d: int, m: int, l: int) -> bool:
    S = _as_subspace(S)
    ds, dc = len(S.members), d - len(S.members)
    from .fock import basis_dimension

    return basis_dimension(statistics, ds, m) > 0 and basis_dimension(statistics, dc, l) > 0


def sector_schmidt(
    state: PureState, S: ModeSubspace | Sequence[int], m: int, l: int,
    atol: float = SECTOR_AMPLITUDE_TOL,
) -> SchmidtDecomposition:
    """Schmidt decomposition of one sector block's splitting matrix."""
    return schmidt_decompose(sector_gamma(state, S, m, l, atol))


def sector_reconstruct(
    state: PureState,
    S: ModeSubspace | Sequence[int],
    m: int,
    l: int,
    k: int | None = None,
    atol: float = SECTOR_AMPLITUDE_TOL,
) -> PureState:
    """Rebuild the state from the (m, l) block expansion, optionally truncated.

    The full expansion is exact (the block carries the whole state); any
    truncation is renormalized.
    """
    gamma = sector_gamma(state, S, m, l, atol)
    schmidt = schmidt_decompose(gamma)
    if k is None:
        k = schmidt.rank
    if k == 0:
        raise ValueError("truncation must keep at least one term")
    if k > schmidt.rank:
        raise ValueError(f"k={k} exceeds block rank {schmidt.rank}")
    weights = (schmidt.left[:, :k] * schmidt.sigma[:k]) @ schmidt.right[:, :k].conj().T
    # undo the split-operator signs before composing canonical creation strings
    weights = weights * gamma.rows.signs[:, None] * gamma.cols.signs[None, :]
    rebuilt = compose_weighted_products(
        state.statistics, state.d, gamma.rows.occupations, gamma.cols.occupations, weights
    )
    return rebuilt.normalized_copy()


def bipartite_entanglement(
    state: PureState,
    S: ModeSubspace | Sequence[int],
    entropy_kind="von_neumann",
    atol: float = SECTOR_AMPLITUDE_TOL,
) -> float:
    """Standard bipartite entanglement entropy between S and its complement.

    Uses the local density of the N_S particles in S (the (N_S, 0) block of
    the N_S-body density, unit trace); by isospectrality the complement gives
    the same value.
    """
    S = _as_subspace(S)
    ns = _require_sector(state, S, atol)
    nc = state.particles - ns
    if ns == 0 or nc == 0:
        return 0.0
    gamma = sector_gamma(state, S, ns, 0, atol)
    local = gamma.entries @ gamma.entries.conj().T
    spec, _ = hermitian_eigen(local)
    return spectral_entropy(clamp_spectrum(spec), entropy_kind)


def local_purities(
    state: PureState, S: ModeSubspace | Sequence[int], atol: float = SECTOR_AMPLITUDE_TOL
) -> tuple[float, float]:
    """``Tr rho_S^2`` and ``Tr rho_Sbar^2`` of the local sector densities."""
    S = _as_subspace(S)
    ns = _require_sector(state, S, atol)
    gamma = sector_gamma(state, S, ns, 0, atol)
    rho_s = gamma.entries @ gamma.entries.conj().T
    rho_c = gamma.entries.T @ gamma.entries.conj()
    return (
        float(np.trace(rho_s @ rho_s).real),
        float(np.trace(rho_c @ rho_c).real),
    )


def sector_violation(state: PureState, S: ModeSubspace | Sequence[int], M: int) -> float:
    """Largest M-body matrix element that breaks particle conservation in S.

    Zero (within construction tolerance) certifies the blocked structure,
    i.e. the M-body density operator commutes with the S particle number.
    """
    from .rdm import rdm as build_rdm

    S = _as_subspace(S)
    S.validate(state.d)
    rho = build_rdm(state, M)
    counts = rho.basis.occupations[:, S.members].sum(axis=1)
    off = counts[:, None] != counts[None, :]
    if not off.any():
        return 0.0
    return float(np.abs(rho.matrix[off]).max())


@dataclass(frozen=True)
class CollectivePairBlock:
    """The n x n block of pair-to-pair contractions and its spectrum."""

    matrix: np.ndarray
    spectrum: Spectrum

    @property
    def dominant(self) -> float:
        return float(self.spectrum.values[0])


def _validate_pairing(state: PureState, pairing: Sequence[tuple[int, int]]):
    pairs = [(int(a), int(b)) for a, b in pairing]
    left = [a for a, _ in pairs]
    right = [b for _, b in pairs]
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise ValueError("pairing map is not a bijection")
    if set(left) & set(right):
        raise ValueError("pairing map must connect disjoint mode sets")
    for mode in left + right:
        if not 0 <= mode < state.d:
            raise ValueError(f"mode {mode} out of range for d={state.d}")
    return pairs


def collective_pair_block(
    state: PureState, pairing: Sequence[tuple[int, int]]
) -> CollectivePairBlock:
    """Gram matrix of pair annihilations ``c_kbar c_k |state>``.

    Entry (a, b) is the pairing contraction between pairs a and b; the
    dominant eigenvalue of this Hermitian PSD block signals pairing order.
    """
    pairs = _validate_pairing(state, pairing)
    images = []
    for k, kbar in pairs:
        w = apply_annihilator(apply_annihilator(state, k), kbar)
        images.append(w.amplitudes)
    images = np.asarray(images)
    matrix = images.conj() @ images.T
    matrix = (matrix + matrix.conj().T) / 2.0
    spec, _ = hermitian_eigen(matrix)
    return CollectivePairBlock(matrix, Spectrum(clamp_spectrum(spec)))


def pair_number_residual(
    state: PureState, pairing: Sequence[tuple[int, int]]
) -> tuple[float, float]:
    """Expectation of the pair-counting operator and the eigenstate residual."""
    pairs = _validate_pairing(state, pairing)
    total = np.zeros_like(state.amplitudes)
    for k, kbar in pairs:
        w = apply_annihilator(apply_annihilator(state, k), kbar)
        back = apply_creator(apply_creator(w, kbar), k)
        total += back.amplitudes
    expect = float(np.vdot(state.amplitudes, total).real)
    residual = float(np.linalg.norm(total - expect * state.amplitudes))
    return expect, residual


def pair_expansion(
    state: PureState,
    pairing: Sequence[tuple[int, int]],
    k: int | None = None,
) -> PureState:
    """Truncated expansion over collective pair modes (fermions only).

    Valid for states that are eigenstates of the pair-counting operator with
    integer eigenvalue m; the expansion then holds at most n terms and is
    exact at full rank.
    """
    if not state.statistics.is_fermion:
        raise ValueError("the pair-counting expansion applies to fermions only")
    pairs = _validate_pairing(state, pairing)
    expect, residual = pair_number_residual(state, pairing)
    m = round(expect)
    if m < 1 or abs(expect - m) > 1e-8 or residual > 1e-8 * max(1.0, state.norm()):
        raise ValueError(
            f"state is not a pair-number eigenstate (<N_p>={expect:.6f}, residual={residual:.2e})"
        )
    images = []
    for km, kbar in pairs:
        w = apply_annihilator(apply_annihilator(state, km), kbar)
        images.append(w.amplitudes)
    gamma_c = np.asarray(images)
    u, s, vh = np.linalg.svd(gamma_c, full_matrices=False)
    keep = s > 1e-10 * max(1.0, s[0] if len(s) else 0.0)
    u, s, v = u[:, keep], s[keep], vh.conj().T[:, keep]
    rank = len(s)
    if k is None:
        k = rank
    if k == 0:
        raise ValueError("truncation must keep at least one term")
    if k > rank:
        raise ValueError(f"k={k} exceeds expansion rank {rank}")
    rows_occ = np.zeros((len(pairs), state.d), dtype=np.int64)
    for j, (km, kbar) in enumerate(pairs):
        rows_occ[j, km] = 1
        rows_occ[j, kbar] = 1
    cols = enumerate_basis(state.statistics, state.d, state.particles - 2)
    weights = (u[:, :k] * s[:k]) @ v[:, :k].conj().T
    rebuilt = compose_weighted_products(
        state.statistics, state.d, rows_occ, cols.occupations, weights
    )
    return rebuilt.normalized_copy()
