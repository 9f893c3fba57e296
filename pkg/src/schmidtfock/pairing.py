"""Finite pairing model in the seniority-zero subspace, plus reference states.

A system of N = 2m particles on d = 2n modes, where level k pairs with its
partner kbar = n + k.  For attractive uniform coupling the ground state keeps
every particle paired, so the model is solved in the pair-occupation basis
(dimension C(n, m) for fermions, C(n+m-1, m) for bosons) rather than the full
2n-mode space.  All pair-basis matrix elements are derived by applying ladder
operators to the embedded configurations, never hand-coded, and the full-space
construction is retained as a small-n oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.linalg

from .fock import FockBasis, Statistics, enumerate_basis
from .numerics import ATOL_IDENTITY, Spectrum, clamp_spectrum, entropy as spectral_entropy
from .states import PureState, apply_operator_string, make_state


@dataclass(frozen=True)
class PairingModel:
    """Level count n, pair count m, level spacing and pair-coupling strength.

    The single-particle spectrum is uniform and centered at zero:
    ``eps_k = eps * (k - (n - 1) / 2)`` for 0-based level k, identical for a
    level and its partner.  ``coupling`` is either a uniform scalar G or an
    n x n symmetric nonnegative matrix.
    """

    statistics: Statistics
    n: int
    m: int
    eps: float = 1.0
    coupling: float | np.ndarray = 0.0

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics.parse(self.statistics))
        if self.n < 1:
            raise ValueError("need at least one pair level")
        if self.m < 0:
            raise ValueError("pair count must be non-negative")
        if self.statistics.is_fermion and self.m > self.n:
            raise ValueError(f"fermions admit at most n={self.n} pairs, got m={self.m}")
        if isinstance(self.coupling, np.ndarray):
            g = np.asarray(self.coupling, dtype=float)
            if g.shape != (self.n, self.n):
                raise ValueError(f"coupling matrix must be {self.n} x {self.n}")
            if not np.allclose(g, g.T, atol=ATOL_IDENTITY):
                raise ValueError("coupling matrix must be symmetric")
            if g.min() < 0:
                raise ValueError("coupling entries must be nonnegative")
            g.setflags(write=False)
            object.__setattr__(self, "coupling", g)
        elif self.coupling < 0:
            raise ValueError("coupling must be nonnegative")

    @property
    def g(self) -> float:
        """Dimensionless coupling G / eps (uniform coupling only)."""
        if isinstance(self.coupling, np.ndarray):
            raise ValueError("g is defined for uniform scalar coupling")
        return float(self.coupling / self.eps)

    def level_energies(self) -> np.ndarray:
        return self.eps * (np.arange(self.n) - (self.n - 1) / 2.0)

    def coupling_matrix(self) -> np.ndarray:
        if isinstance(self.coupling, np.ndarray):
            return self.coupling
        return np.full((self.n, self.n), float(self.coupling))

    def with_g(self, g: float) -> "PairingModel":
        return replace(self, coupling=float(g) * self.eps)


@dataclass(frozen=True)
class PairAmplitudes:
    """Complex amplitudes over pair-occupation configurations (m_1 ... m_n)."""

    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (len(self.basis),):
            raise ValueError("amplitude length does not match pair basis")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def statistics(self) -> Statistics:
        return self.basis.statistics

    @property
    def n(self) -> int:
        return self.basis.d

    @property
    def m(self) -> int:
        return self.basis.M

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def paired_basis(statistics: Statistics | str, n: int, m: int) -> FockBasis:
    """Pair-occupation configurations: m indistinguishable pairs on n levels."""
    statistics = Statistics.parse(statistics)
    if statistics.is_fermion and m > n:
        raise ValueError(f"fermions admit at most n={n} pairs, got m={m}")
    return enumerate_basis(statistics, n, m)


def uniform_paired_state(statistics: Statistics | str, n: int, m: int) -> PairAmplitudes:
    """Uniform superposition over every pair configuration (maximally paired)."""
    basis = paired_basis(statistics, n, m)
    amps = np.full(len(basis), 1.0 / np.sqrt(len(basis)), dtype=complex)
    return PairAmplitudes(basis, amps)


def projected_bcs_state(
    statistics: Statistics | str, sigmas: Sequence[float], m: int
) -> PairAmplitudes:
    """Number-projected BCS-like state with pair weights sigma_k.

    Amplitudes are ``sigma_1^{m_1} ... sigma_n^{m_n}`` up to normalization;
    the weights must satisfy ``sum sigma_k^2 = 1``.
    """
    sig = np.asarray(sigmas, dtype=float)
    if sig.min() < 0:
        raise ValueError("pair weights must be nonnegative")
    if abs((sig**2).sum() - 1.0) > 1e-8:
        raise ValueError(f"pair weights must satisfy sum sigma^2 = 1, got {(sig**2).sum():.8f}")
    basis = paired_basis(statistics, len(sig), m)
    amps = np.prod(sig[None, :] ** basis.occupations, axis=1)
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise ValueError("all projected amplitudes vanish")
    return PairAmplitudes(basis, amps / norm)


# --- analytic reference values (maximally paired / strong-coupling limits) ---


def _sign(statistics: Statistics) -> int:
    return -1 if statistics.is_fermion else +1


def maximally_paired_lambda1(statistics: Statistics | str, n: int, m: int) -> float:
    """Dominant pair-block eigenvalue of the uniform m-pair state."""
    s = _sign(Statistics.parse(statistics))
    return m * (1.0 + s * (m - 1) / n)


def maximally_paired_lambda2(statistics: Statistics | str, n: int, m: int) -> float:
    """Degenerate two-body eigenvalue of the uniform m-pair state."""
    if m <= 1:
        return 0.0
    s = _sign(Statistics.parse(statistics))
    return m * (m - 1) / (n * (n + s))


def maximally_paired_hop_entries(statistics: Statistics | str, n: int, m: int) -> tuple[float, float]:
    """(diagonal, off-diagonal) entries of the collective pair block."""
    if n == 1:
        return float(m * m), 0.0
    s = _sign(Statistics.parse(statistics))
    diag = m * (n + m - 1 + s * m) / (n * (n + s))
    off = m * (n + s * m) / (n * (n + s))
    return diag, off


def strong_coupling_energy(model: PairingModel) -> float:
    """Ground-state energy in the G/eps -> infinity limit: -mG[n +- (m-1)]."""
    if isinstance(model.coupling, np.ndarray):
        raise ValueError("limit formula applies to uniform coupling")
    s = _sign(model.statistics)
    return -model.m * model.coupling * (model.n + s * (model.m - 1))


def weak_coupling_energy(model: PairingModel) -> float:
    """Ground-state energy in the G/eps -> 0+ limit."""
    if isinstance(model.coupling, np.ndarray):
        raise ValueError("limit formula applies to uniform coupling")
    if model.statistics.is_fermion:
        a, b = model.m, 1.0
    else:
        a, b = 1.0, model.m
    return -model.m * (model.eps * (model.n - a) + b * model.coupling)


# --- embedded configurations and derived pair-operator tables ---------------


def _pair_string(n: int, cfg: Sequence[int]) -> tuple[tuple[int, int], ...]:
    # creation string of the ordered pair product, rightmost operator first
    ops = []
    for k, mk in enumerate(cfg):
        ops.extend([(n + k, +1), (k, +1)] * int(mk))
    return tuple(ops)


@lru_cache(maxsize=32)
def _pair_cache(statistics: Statistics, n: int, m: int):
    """Embedded signs and ladder-derived hop tables for the pair basis.

    For every ordered level pair (to, from) the table holds (source index,
    target index, coefficient) triples of the pair-hopping operator computed
    by explicit ladder application on the embedded 2n-mode configurations.
    """
    basis = paired_basis(statistics, n, m)
    occs = basis.occupations
    fermion = statistics.is_fermion
    embeds = np.concatenate([occs, occs], axis=1)  # mode k and its partner n+k
    signs = np.ones(len(basis))
    norms = np.ones(len(basis))
    for j, cfg in enumerate(occs.tolist()):
        res = apply_operator_string(statistics, (0,) * (2 * n), _pair_string(n, cfg))
        occ_full, coeff = res
        assert occ_full == tuple(embeds[j])
        fact = 1.0
        for mk in cfg:
            for t in range(2, mk + 1):
                fact *= t
        signs[j] = coeff / fact
        norms[j] = fact
    tables = {}
    for kf in range(n):
        for kt in range(n):
            src, tgt, coef = [], [], []
            ops = ((kf, -1), (n + kf, -1), (n + kt, +1), (kt, +1))
            for j in range(len(basis)):
                if occs[j, kf] == 0:
                    continue
                if fermion and kt != kf and occs[j, kt] == 1:
                    continue
                res = apply_operator_string(statistics, tuple(embeds[j]), ops)
                if res is None:
                    continue
                occ_full, c_op = res
                target_cfg = tuple(occ_full[:n])
                i = basis.index_of(target_cfg)
                src.append(j)
                tgt.append(i)
                coef.append(signs[i] * signs[j] * c_op)
            tables[(kt, kf)] = (
                np.asarray(src, dtype=np.int64),
                np.asarray(tgt, dtype=np.int64),
                np.asarray(coef, dtype=float),
            )
    return basis, signs, tables


def embed_paired_state(pa: PairAmplitudes) -> PureState:
    """Lift pair amplitudes to a pure state on the full 2n-mode basis.

    Level k maps to modes (k, n + k); the fermionic reordering phase between
    the pair-product string and the canonical creation order is applied per
    configuration.
    """
    n, m = pa.n, pa.m
    basis, signs, _ = _pair_cache(pa.statistics, n, m)
    full = enumerate_basis(pa.statistics, 2 * n, 2 * m)
    amps = np.zeros(len(full), dtype=complex)
    for j in range(len(basis)):
        # mode k and its partner n+k both hold m_k particles
        occ_full = tuple(basis.occupations[j]) + tuple(basis.occupations[j])
        amps[full.index_of(occ_full)] = signs[j] * pa.amplitudes[j]
    return make_state(full, amps, normalize=False)


def default_pairing_map(n: int) -> tuple[tuple[int, int], ...]:
    """The level-partner bijection of the embedded layout: k <-> n + k."""
    return tuple((k, n + k) for k in range(n))


# --- pair-basis observables ---------------------------------------------------


def occupation_moments(pa: PairAmplitudes) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """First and second moments of the pair occupations.

    Returns ``(mean, second, pair_diag)`` with ``mean[k] = <m_k>``,
    ``second[k, l] = <m_k m_l>`` and ``pair_diag[k] = <m_k (m_k - 1)>``.
    """
    w = np.abs(pa.amplitudes) ** 2
    occ = pa.basis.occupations.astype(float)
    mean = occ.T @ w
    second = occ.T @ (w[:, None] * occ)
    pair_diag = (occ * (occ - 1.0)).T @ w
    return mean, second, pair_diag


def pair_hop_matrix(pa: PairAmplitudes) -> np.ndarray:
    """Collective pair block: entries ``<P^dag_k P_l>`` over the n levels."""
    _, _, tables = _pair_cache(pa.statistics, pa.n, pa.m)
    n = pa.n
    psi = pa.amplitudes
    out = np.zeros((n, n), dtype=complex)
    for (kt, kf), (src, tgt, coef) in tables.items():
        if len(src):
            out[kt, kf] = np.sum(psi[tgt].conj() * coef * psi[src])
    return (out + out.conj().T) / 2.0


def apply_pair_quadratic(pa: PairAmplitudes, weight: np.ndarray) -> np.ndarray:
    """Amplitudes of ``sum_{k,l} weight[k,l] P^dag_k P_l |pa>`` in the pair basis."""
    _, _, tables = _pair_cache(pa.statistics, pa.n, pa.m)
    out = np.zeros(len(pa.amplitudes), dtype=complex)
    psi = pa.amplitudes
    for (kt, kf), (src, tgt, coef) in tables.items():
        wkl = weight[kt, kf]
        if wkl != 0.0 and len(src):
            np.add.at(out, tgt, wkl * coef * psi[src])
    return out


def pair_ladder_expectation(pa: PairAmplitudes, weights: Sequence[float]) -> float:
    """``<A^dag A>`` for the collective pair operator with the given weights."""
    w = np.asarray(weights, dtype=complex)
    rho_c = pair_hop_matrix(pa)
    return float((w.conj() @ rho_c @ w).real)


def one_body_block_spectrum(pa: PairAmplitudes) -> Spectrum:
    """Eigenvalues of the one-body block on the unbarred levels (diagonal)."""
    mean, _, _ = occupation_moments(pa)
    return Spectrum(mean)


def two_body_same_spectrum(pa: PairAmplitudes) -> Spectrum:
    """Eigenvalues of the two-body block inside the unbarred subspace."""
    _, second, pair_diag = occupation_moments(pa)
    n = pa.n
    vals = [second[i, j] for i in range(n) for j in range(i + 1, n)]
    if not pa.statistics.is_fermion:
        vals.extend(0.5 * pair_diag)
    return Spectrum(np.asarray(vals))


def collective_spectrum(pa: PairAmplitudes) -> tuple[Spectrum, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors of the collective pair block."""
    rho_c = pair_hop_matrix(pa)
    w, v = scipy.linalg.eigh(rho_c)
    return Spectrum(clamp_spectrum(w[::-1])), v[:, ::-1]


def cross_block_spectrum(pa: PairAmplitudes) -> Spectrum:
    """Eigenvalues of the mixed two-body block (one particle per subspace).

    The block splits into density eigenvalues ``<m_i m_j>`` (i != j, each
    appearing twice) and the spectrum of the collective pair block.
    """
    _, second, _ = occupation_moments(pa)
    n = pa.n
    vals = [second[i, j] for i in range(n) for j in range(n) if i != j]
    spec_c, _ = collective_spectrum(pa)
    return Spectrum(np.concatenate([np.asarray(vals), spec_c.values]))


def block_traces(pa: PairAmplitudes) -> dict:
    """Traces of the four blocks tracked by the sweep."""
    mean, second, pair_diag = occupation_moments(pa)
    n = pa.n
    same = sum(second[i, j] for i in range(n) for j in range(i + 1, n))
    if not pa.statistics.is_fermion:
        same += 0.5 * pair_diag.sum()
    return {
        "one_body": float(mean.sum()),
        "two_body_same": float(same),
        "two_body_cross": float(pa.m) ** 2,
        "collective": float(np.trace(pair_hop_matrix(pa)).real),
    }


@dataclass(frozen=True)
class DominanceReport:
    """Dominant mixed-block eigenvalue against the projected-BCS bounds."""

    lambda1: float
    lower: float
    upper: float | None
    holds: bool


def dominance_bounds(pa: PairAmplitudes, slack: float = 1e-9) -> DominanceReport:
    """Check the dominant eigenvalue bounds satisfied by projected-BCS states.

    Bosons: lambda_1 >= m(1 + (m-1)/n); fermions: 1 <= lambda_1 <= m(1 - (m-1)/n).
    """
    lam1 = float(cross_block_spectrum(pa).values[0])
    n, m = pa.n, pa.m
    if pa.statistics.is_fermion:
        lower, upper = 1.0, m * (1.0 - (m - 1) / n)
        holds = lower - slack <= lam1 <= upper + slack
    else:
        lower, upper = m * (1.0 + (m - 1) / n), None
        holds = lam1 >= lower - slack
    return DominanceReport(lam1, lower, upper, holds)


# --- Hamiltonian, ground state, oracle ---------------------------------------


def pairing_hamiltonian(model: PairingModel) -> np.ndarray:
    """Pairing Hamiltonian over the pair-occupation basis (Hermitian, real).

    Diagonal entries carry the level energies plus the pair-diagonal
    interaction; off-diagonal entries are ladder-derived pair hops weighted
    by the coupling matrix.
    """
    basis, _, tables = _pair_cache(model.statistics, model.n, model.m)
    eps_k = model.level_energies()
    gmat = model.coupling_matrix()
    dim = len(basis)
    h = np.zeros((dim, dim))
    occ = basis.occupations.astype(float)
    h[np.arange(dim), np.arange(dim)] = 2.0 * occ @ eps_k
    for (kt, kf), (src, tgt, coef) in tables.items():
        if gmat[kt, kf] != 0.0 and len(src):
            np.add.at(h, (tgt, src), -gmat[kt, kf] * coef)
    if not np.allclose(h, h.T, atol=1e-12 * max(1.0, np.abs(h).max())):
        raise RuntimeError("assembled pairing Hamiltonian is not symmetric")
    return (h + h.T) / 2.0


def ground_state(model: PairingModel) -> tuple[float, PairAmplitudes]:
    """Lowest eigenpair of the pairing Hamiltonian in the pair basis.

    The eigenvector phase is fixed by making its largest-magnitude amplitude
    real positive.
    """
    h = pairing_hamiltonian(model)
    w, v = scipy.linalg.eigh(h, subset_by_index=[0, 0])
    vec = v[:, 0]
    pivot = vec[int(np.argmax(np.abs(vec)))]
    if pivot != 0:
        vec = vec * (abs(pivot) / pivot)
    basis = paired_basis(model.statistics, model.n, model.m)
    return float(w[0]), PairAmplitudes(basis, vec.astype(complex))


def full_space_hamiltonian(
    model: PairingModel, restrict_to_sector: bool = True
) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """Small-n oracle: the Hamiltonian on the full 2n-mode Fock basis.

    Built by applying the level energies and every pair-hop string to each
    configuration in turn.  With ``restrict_to_sector`` the basis keeps only
    states with m particles on the unbarred levels (the symmetry sector that
    contains the paired subspace).
    """
    n, m = model.n, model.m
    stats = model.statistics
    full = enumerate_basis(stats, 2 * n, 2 * m)
    occs = [tuple(row) for row in full.occupations.tolist()]
    if restrict_to_sector:
        occs = [occ for occ in occs if sum(occ[:n]) == m]
    index = {occ: i for i, occ in enumerate(occs)}
    eps_k = model.level_energies()
    gmat = model.coupling_matrix()
    dim = len(occs)
    h = np.zeros((dim, dim))
    for j, occ in enumerate(occs):
        h[j, j] = sum(eps_k[k] * (occ[k] + occ[n + k]) for k in range(n))
        for kf in range(n):
            if occ[kf] == 0 or occ[n + kf] == 0:
                continue
            for kt in range(n):
                if gmat[kt, kf] == 0.0:
                    continue
                res = apply_operator_string(
                    stats, occ, ((kf, -1), (n + kf, -1), (n + kt, +1), (kt, +1))
                )
                if res is None:
                    continue
                occ2, coeff = res
                h[index[occ2], j] += -gmat[kt, kf] * coeff
    return occs, (h + h.T) / 2.0


# --- truncated expansions and the experiment sweep ---------------------------


def _cross_block_modes(pa: PairAmplitudes):
    """Eigenmodes of the mixed block, sorted descending with deterministic ties.

    Collective modes carry their level-space eigenvector; density modes are
    labeled by the ordered level pair (i, j) they occupy.
    """
    spec_c, vecs = collective_spectrum(pa)
    _, second, _ = occupation_moments(pa)
    n = pa.n
    modes = [("collective", nu, float(spec_c.values[nu])) for nu in range(len(spec_c))]
    modes.extend(
        ("density", (i, j), float(second[i, j].real))
        for i in range(n)
        for j in range(n)
        if i != j
    )
    modes.sort(key=lambda entry: (-entry[2], 0 if entry[0] == "collective" else 1, str(entry[1])))
    return modes, vecs


def truncated_overlap(pa: PairAmplitudes, k: int, expansion: str | None = None) -> float:
    """Overlap between the state and its k-term collective expansion.

    ``expansion="collective"`` keeps only pair-ladder modes (the fermionic
    n-term expansion); ``"cross_block"`` ranks all modes of the mixed block.
    Each kept term contributes the corresponding projector applied to the
    state, so the full sum is exact.
    """
    if k < 1:
        raise ValueError("truncation must keep at least one term")
    if expansion is None:
        expansion = "collective" if pa.statistics.is_fermion else "cross_block"
    psi = pa.amplitudes
    rank_tol = 1e-10
    accum = np.zeros_like(psi)
    if expansion == "collective":
        spec_c, vecs = collective_spectrum(pa)
        lam_max = spec_c.values[0] if len(spec_c) else 0.0
        keep = [nu for nu in range(len(spec_c)) if spec_c.values[nu] > rank_tol * max(1.0, lam_max)]
        chosen = keep[: min(k, len(keep))]
        if not chosen:
            raise ValueError("expansion has no nonzero terms")
        weight = sum(np.outer(vecs[:, nu], vecs[:, nu].conj()) for nu in chosen)
        accum = apply_pair_quadratic(pa, weight)
    elif expansion == "cross_block":
        modes, vecs = _cross_block_modes(pa)
        lam_max = modes[0][2] if modes else 0.0
        modes = [mode for mode in modes if mode[2] > rank_tol * max(1.0, lam_max)]
        chosen = modes[: min(k, len(modes))]
        if not chosen:
            raise ValueError("expansion has no nonzero terms")
        weight = np.zeros((pa.n, pa.n), dtype=complex)
        occ = pa.basis.occupations
        density_scale = np.zeros(len(psi))
        for kind, label, _ in chosen:
            if kind == "collective":
                weight += np.outer(vecs[:, label], vecs[:, label].conj())
            else:
                i, j = label
                density_scale = density_scale + occ[:, i] * occ[:, j]
        accum = apply_pair_quadratic(pa, weight) + density_scale * psi
    else:
        raise ValueError(f"unknown expansion {expansion!r}")
    norm = np.linalg.norm(accum)
    if norm == 0.0:
        raise ValueError("truncated expansion vanished")
    return float(abs(np.vdot(psi, accum)) / (np.linalg.norm(psi) * norm))


def default_g_grid(points: int = 60, lo: float = 1e-2, hi: float = 1e2) -> np.ndarray:
    """Log-spaced coupling grid plus the free point g = 0."""
    return np.concatenate([[0.0], np.logspace(np.log10(lo), np.log10(hi), points)])


SWEEP_OBSERVABLES = (
    "spectrum1",
    "spectrum2_blocks",
    "entropy_increments",
    "block_entropies",
    "overlap_k",
)


@dataclass(frozen=True)
class SweepTable:
    """Column-labeled sweep output, one row per coupling value."""

    columns: tuple[str, ...]
    rows: np.ndarray
    statistics: Statistics
    n: int
    m: int

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def _block_entropies(pa: PairAmplitudes) -> dict:
    traces = block_traces(pa)
    out = {}
    out["S1"] = spectral_entropy(
        one_body_block_spectrum(pa).values / traces["one_body"], "von_neumann"
    )
    same = two_body_same_spectrum(pa)
    out["S2_S"] = (
        spectral_entropy(same.values / traces["two_body_same"], "von_neumann")
        if traces["two_body_same"] > 1e-14
        else 0.0
    )
    cross = cross_block_spectrum(pa)
    out["S2_SSbar"] = spectral_entropy(cross.values / traces["two_body_cross"], "von_neumann")
    spec_c, _ = collective_spectrum(pa)
    out["S2_c"] = spectral_entropy(spec_c.values / traces["collective"], "von_neumann")
    return out


def sweep(
    model: PairingModel,
    g_values: Sequence[float] | None = None,
    observables: Sequence[str] = SWEEP_OBSERVABLES,
    k_list: Sequence[int] = (1,),
    jobs: int = 1,
) -> SweepTable:
    """Ground-state observables across a coupling grid (uniform coupling).

    Supported observables: ``spectrum1`` (one-body block eigenvalues),
    ``spectrum2_blocks`` (two-body same-subspace, mixed and collective block
    eigenvalues), ``entropy_increments`` (entropy minus its g = 0 value, per
    block), ``block_entropies`` (absolute normalized-block entropies) and
    ``overlap_k`` (truncated-expansion overlaps for each k in ``k_list``).
    Rows are ordered by g regardless of execution order.
    """
    unknown = set(observables) - set(SWEEP_OBSERVABLES)
    if unknown:
        raise ValueError(f"unknown observables: {sorted(unknown)}")
    if isinstance(model.coupling, np.ndarray):
        raise ValueError("sweep varies a uniform scalar coupling")
    gs = np.asarray(default_g_grid() if g_values is None else list(g_values), dtype=float)
    gs = np.sort(gs)
    n, m = model.n, model.m

    columns: list[str] = ["g", "energy"]
    if "spectrum1" in observables:
        columns += [f"lambda1_{i + 1}" for i in range(n)]
    if "spectrum2_blocks" in observables:
        n_same = n * (n - 1) // 2 + (0 if model.statistics.is_fermion else n)
        columns += [f"lambda2_S_{i + 1}" for i in range(n_same)]
        columns += [f"lambda2_SSbar_{i + 1}" for i in range(n * n)]
        columns += [f"lambda2_c_{i + 1}" for i in range(n)]
    wants_increments = "entropy_increments" in observables
    if wants_increments:
        columns += ["dS1", "dS2_S", "dS2_SSbar", "dS2_c"]
    if "block_entropies" in observables:
        columns += ["S1", "S2_S", "S2_SSbar", "S2_c"]
    if "overlap_k" in observables:
        columns += [f"overlap_k{k}" for k in k_list]

    reference = _block_entropies(ground_state(model.with_g(0.0))[1]) if wants_increments else None

    def one_point(g: float) -> list[float]:
        energy, pa = ground_state(model.with_g(g))
        row = [g, energy]
        if "spectrum1" in observables:
            row += list(one_body_block_spectrum(pa).values)
        if "spectrum2_blocks" in observables:
            row += list(two_body_same_spectrum(pa).values)
            row += list(cross_block_spectrum(pa).values)
            row += list(collective_spectrum(pa)[0].values)
        if wants_increments:
            ent = _block_entropies(pa)
            row += [ent[key] - reference[key] for key in ("S1", "S2_S", "S2_SSbar", "S2_c")]
        if "block_entropies" in observables:
            ent = _block_entropies(pa)
            row += [ent[key] for key in ("S1", "S2_S", "S2_SSbar", "S2_c")]
        if "overlap_k" in observables:
            row += [truncated_overlap(pa, k) for k in k_list]
        return row

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one_point, gs.tolist()))
    else:
        rows = [one_point(g) for g in gs.tolist()]
    return SweepTable(tuple(columns), np.asarray(rows, dtype=float), model.statistics, n, m)
