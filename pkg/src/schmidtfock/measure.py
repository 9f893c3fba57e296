"""Annihilation-based measurements, mixture identities and monotonicity checks.

Scaled annihilation products form a complete Kraus family on the N-particle
sector: measuring which (N-M)-particle configuration was removed leaves an
M-particle post-state.  The normalized L-body density of the original state
is the probability mixture of the post-measurement ones, which forces the
majorization relation and the entropy inequality checked here.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .bipartite import build_gamma, normal_mode_state, schmidt_decompose
from .fock import enumerate_basis
from .numerics import (
    ATOL_DECOMPOSITION,
    ENTROPY_KINDS,
    MAJORIZATION_SLACK,
    clamp_spectrum,
    entropy as spectral_entropy,
    hermitian_eigen,
    majorization_compare,
)
from .states import PureState, apply_annihilation_product, compose_weighted_products

# Branch probabilities below this are numerically meaningless post-states.
BRANCH_PROBABILITY_CUTOFF = 1e-14


@dataclass(frozen=True)
class MeasurementBranch:
    label: str
    probability: float
    state: PureState


@dataclass(frozen=True)
class MeasurementEnsemble:
    """Outcome labels, probabilities and normalized post-measurement states."""

    branches: tuple[MeasurementBranch, ...]

    def probabilities(self) -> np.ndarray:
        return np.asarray([b.probability for b in self.branches])

    def total_probability(self) -> float:
        return float(self.probabilities().sum())

    def __len__(self) -> int:
        return len(self.branches)


def annihilation_measurement(state: PureState, M: int) -> MeasurementEnsemble:
    """Measure which (N-M)-particle configuration is annihilated.

    Branch beta occurs with probability ``rho^(N-M)_bb / C(N, M)``; branches
    below the probability cutoff are dropped.  Branch probabilities sum to 1
    by the completeness of the Kraus family.
    """
    N = state.particles
    if not 1 <= M <= N - 1:
        raise ValueError(f"need 1 <= M <= N-1={N - 1}, got M={M}")
    outcome_basis = enumerate_basis(state.statistics, state.d, N - M)
    scale = comb(N, M)
    branches = []
    for beta in range(len(outcome_basis)):
        occ = tuple(outcome_basis.occupations[beta])
        image = apply_annihilation_product(state, occ)
        p = image.norm() ** 2 / scale
        if p < BRANCH_PROBABILITY_CUTOFF:
            continue
        branches.append(
            MeasurementBranch(",".join(map(str, occ)), float(p), image.normalized_copy())
        )
    ensemble = MeasurementEnsemble(tuple(branches))
    total = ensemble.total_probability()
    if abs(total - 1.0) > ATOL_DECOMPOSITION:
        raise RuntimeError(f"Kraus completeness violated: probabilities sum to {total:.12f}")
    return ensemble


def normal_measurement(state: PureState, M: int) -> MeasurementEnsemble:
    """Measurement in the collective normal-operator basis.

    Probabilities are the normalized reduced-density eigenvalues; the
    post-state of outcome nu is the nu-th M-particle normal state.
    """
    N = state.particles
    if not 1 <= M <= N - 1:
        raise ValueError(f"need 1 <= M <= N-1={N - 1}, got M={M}")
    schmidt = schmidt_decompose(build_gamma(state, M))
    scale = comb(N, M)
    branches = []
    for nu in range(schmidt.rank):
        p = float(schmidt.sigma[nu] ** 2 / scale)
        if p < BRANCH_PROBABILITY_CUTOFF:
            continue
        branches.append(
            MeasurementBranch(f"nu={nu}", p, normal_mode_state(schmidt, nu, "left"))
        )
    ensemble = MeasurementEnsemble(tuple(branches))
    total = ensemble.total_probability()
    if abs(total - 1.0) > ATOL_DECOMPOSITION:
        raise RuntimeError(f"normal-mode completeness violated: sum p = {total:.12f}")
    return ensemble


def _normalized_rdm_matrix(state: PureState, L: int) -> np.ndarray:
    from .rdm import rdm

    rho = rdm(state, L)
    return np.asarray(rho.matrix) / comb(state.particles, L)


def _normalized_rdm_spectrum(state: PureState, L: int) -> np.ndarray:
    spec, _ = hermitian_eigen(_normalized_rdm_matrix(state, L))
    return clamp_spectrum(spec)


def verify_mixture_identity(
    state: PureState, M: int, L: int, ensemble: MeasurementEnsemble | None = None
) -> float:
    """Max-abs deviation of the L-body mixture identity (must be < 1e-9).

    Compares the normalized L-body matrix of the state with the probability
    average of the normalized L-body matrices of the post-measurement states.
    """
    if L > M:
        raise ValueError(f"need L <= M, got L={L}, M={M}")
    if ensemble is None:
        ensemble = annihilation_measurement(state, M)
    lhs = _normalized_rdm_matrix(state, L)
    rhs = np.zeros_like(lhs)
    for branch in ensemble.branches:
        rhs += branch.probability * _normalized_rdm_matrix(branch.state, L)
    return float(np.abs(lhs - rhs).max())


@dataclass(frozen=True)
class MajorizationReport:
    """Partial-sum margins and entropy drops of one measurement instance."""

    holds: bool
    min_margin: float
    entropy_before: dict
    entropy_after: dict

    def entropy_decreased(self, kind: str, slack: float = ATOL_DECOMPOSITION) -> bool:
        return self.entropy_before[kind] >= self.entropy_after[kind] - slack


def check_majorization(
    state: PureState,
    M: int,
    L: int,
    ensemble: MeasurementEnsemble | None = None,
    entropy_kinds: Sequence[str] = ENTROPY_KINDS,
) -> MajorizationReport:
    """Does the measured ensemble majorize the pre-measurement L-body spectrum?

    The probability-weighted sum of the sorted post-measurement spectra must
    dominate every descending partial sum of the original spectrum (margin
    >= -1e-10), which implies the average entropy cannot grow.
    """
    if L > M:
        raise ValueError(f"need L <= M, got L={L}, M={M}")
    if ensemble is None:
        ensemble = annihilation_measurement(state, M)
    before = np.sort(_normalized_rdm_spectrum(state, L))[::-1]
    mixed = np.zeros(max(len(before), 1))
    for branch in ensemble.branches:
        spec = np.sort(_normalized_rdm_spectrum(branch.state, L))[::-1]
        if len(spec) < len(mixed):
            spec = np.pad(spec, (0, len(mixed) - len(spec)))
        elif len(spec) > len(mixed):
            mixed = np.pad(mixed, (0, len(spec) - len(mixed)))
        mixed = mixed + branch.probability * spec
    result = majorization_compare(before, mixed)
    holds = result.min_margin >= -MAJORIZATION_SLACK
    e_before = {kind: spectral_entropy(before, kind) for kind in entropy_kinds}
    e_after = {}
    for kind in entropy_kinds:
        e_after[kind] = float(
            sum(
                b.probability * spectral_entropy(_normalized_rdm_spectrum(b.state, L), kind)
                for b in ensemble.branches
            )
        )
    return MajorizationReport(holds, result.min_margin, e_before, e_after)


# --- particle transfer (number-conserving measurement realization) ----------


@dataclass(frozen=True)
class TransferReport:
    """Entropy bound and majorization margins for a particle-transfer family."""

    probabilities: np.ndarray
    entropy_initial: dict
    entropy_final_avg: dict
    min_margin: float
    bound_holds: bool


def _check_transfer_completeness(family: Sequence[np.ndarray], dim: int) -> None:
    total = np.zeros((dim, dim), dtype=complex)
    for t in family:
        total += t.conj().T @ t
    if not np.allclose(total, np.eye(dim), atol=1e-10):
        raise ValueError("transfer family violates completeness sum T^dag T = 1")


def particle_transfer(
    state: PureState,
    transfer: Sequence[np.ndarray],
    target_modes: int,
    M: int,
    entropy_kinds: Sequence[str] = ENTROPY_KINDS,
) -> tuple[MeasurementEnsemble, TransferReport]:
    """Move M particles into ``target_modes`` fresh modes via Kraus matrices.

    Each ``transfer[r]`` maps M-particle configurations of the source modes to
    M-particle configurations of the appended target modes and the family must
    satisfy the completeness sum.  Branch r keeps the remaining N-M particles
    in the source modes, so the post-states carry a sharp particle count in
    the target subspace; the average bipartite entanglement between the two
    groups never exceeds the M-body entropy of the input.
    """
    N = state.particles
    if not 1 <= M <= N - 1:
        raise ValueError(f"need 1 <= M <= N-1={N - 1}, got M={M}")
    if target_modes < 1:
        raise ValueError("need at least one target mode")
    stats = state.statistics
    source_m = enumerate_basis(stats, state.d, M)
    target_m = enumerate_basis(stats, target_modes, M)
    family = [np.asarray(t, dtype=complex) for t in transfer]
    for t in family:
        if t.shape != (len(target_m), len(source_m)):
            raise ValueError(
                f"transfer matrix shape {t.shape} != ({len(target_m)}, {len(source_m)})"
            )
    _check_transfer_completeness(family, len(source_m))

    gamma = build_gamma(state, M)
    scale = comb(N, M)
    d_total = state.d + target_modes
    # target-mode configurations embedded after the source modes
    rows_occ = np.zeros((len(target_m), d_total), dtype=np.int64)
    rows_occ[:, state.d :] = target_m.occupations
    cols_occ = np.zeros((len(gamma.cols), d_total), dtype=np.int64)
    cols_occ[:, : state.d] = gamma.cols.occupations

    branches = []
    probs = []
    branch_spectra = []
    for r, t in enumerate(family):
        gamma_r = (t @ gamma.entries) / np.sqrt(scale)
        p = float(np.sum(np.abs(gamma_r) ** 2))
        probs.append(p)
        if p < BRANCH_PROBABILITY_CUTOFF:
            continue
        spec, _ = hermitian_eigen(gamma_r @ gamma_r.conj().T / p)
        branch_spectra.append((p, clamp_spectrum(spec)))
        post = compose_weighted_products(stats, d_total, rows_occ, cols_occ, gamma_r)
        branches.append(MeasurementBranch(f"r={r}", p, post.normalized_copy()))
    probs_arr = np.asarray(probs)
    if abs(probs_arr.sum() - 1.0) > ATOL_DECOMPOSITION:
        raise RuntimeError(f"transfer probabilities sum to {probs_arr.sum():.12f}")

    initial = clamp_spectrum(hermitian_eigen(gamma.entries @ gamma.entries.conj().T / scale)[0])
    size = max(len(initial), max((len(s) for _, s in branch_spectra), default=1))
    mixed = np.zeros(size)
    for p, spec in branch_spectra:
        mixed[: len(spec)] += p * np.sort(spec)[::-1]
    initial_padded = np.pad(np.sort(initial)[::-1], (0, size - len(initial)))
    result = majorization_compare(initial_padded, mixed)
    e_init = {kind: spectral_entropy(initial, kind) for kind in entropy_kinds}
    e_final = {
        kind: float(sum(p * spectral_entropy(spec, kind) for p, spec in branch_spectra))
        for kind in entropy_kinds
    }
    bound_holds = all(
        e_init[kind] >= e_final[kind] - ATOL_DECOMPOSITION for kind in entropy_kinds
    ) and result.min_margin >= -MAJORIZATION_SLACK
    report = TransferReport(
        probabilities=probs_arr,
        entropy_initial=e_init,
        entropy_final_avg=e_final,
        min_margin=result.min_margin,
        bound_holds=bound_holds,
    )
    return MeasurementEnsemble(tuple(branches)), report


def random_transfer_family(
    target_dim: int, source_dim: int, count: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Random Kraus family with ``sum_r T_r^dag T_r = 1`` (for verification runs).

    Completeness needs the stacked family to span the source space, i.e.
    ``count * target_dim >= source_dim``.
    """
    if count * target_dim < source_dim:
        raise ValueError(
            f"{count} branches of rank <= {target_dim} cannot resolve a "
            f"{source_dim}-dimensional source space"
        )
    raws = [
        rng.standard_normal((target_dim, source_dim))
        + 1j * rng.standard_normal((target_dim, source_dim))
        for _ in range(count)
    ]
    gram = sum(t.conj().T @ t for t in raws)
    w, v = np.linalg.eigh(gram)
    if w.min() <= 1e-10 * w.max():
        return random_transfer_family(target_dim, source_dim, count, rng)
    inv_sqrt = (v * (1.0 / np.sqrt(w))) @ v.conj().T
    return [t @ inv_sqrt for t in raws]


def diagonal_transfer_family(
    target_dim: int, source_dim: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """One branch per source configuration, each with a random unit target column.

    Realizes the annihilation measurement through a particle-number conserving
    map on the enlarged mode set.
    """
    family = []
    for alpha in range(source_dim):
        col = rng.standard_normal(target_dim) + 1j * rng.standard_normal(target_dim)
        col /= np.linalg.norm(col)
        t = np.zeros((target_dim, source_dim), dtype=complex)
        t[:, alpha] = col
        family.append(t)
    return family
