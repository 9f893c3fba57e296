"""Randomized invariant suites behind the ``verify`` command.

Every suite draws its instances from a seeded generator, checks a family of
identities through two independent routes, and reports the failures plus the
smallest margin (tolerance minus observed deviation, or the raw majorization
margin).  A nonnegative ``min_margin`` with an empty failure list is a pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb
from typing import Callable

import numpy as np

from . import bipartite, blocks, measure, pairing
from .rdm import fock_rdm_spectrum, rdm as build_rdm
from .fock import Statistics, enumerate_basis
from .states import PureState, apply_annihilation_product, compose_weighted_products, make_state, random_state

_BOTH = (Statistics.BOSON, Statistics.FERMION)


@dataclass
class SuiteResult:
    check: str
    seed: int
    instances: int
    failures: list = field(default_factory=list)
    min_margin: float = math.inf

    def record(self, margin: float, description: str) -> None:
        self.min_margin = min(self.min_margin, margin)
        if margin < 0.0:
            self.failures.append(description)

    def as_report(self) -> dict:
        margin = self.min_margin if self.min_margin != math.inf else 0.0
        return {
            "check": self.check,
            "seed": self.seed,
            "instances": self.instances,
            "failures": list(self.failures),
            "min_margin": float(margin),
        }


def _random_system(rng: np.random.Generator, statistics: Statistics,
                   d_max: int = 6, n_max: int = 5) -> PureState:
    d = int(rng.integers(2, d_max + 1))
    n_hi = min(n_max, d) if statistics.is_fermion else n_max
    N = int(rng.integers(1, n_hi + 1))
    return random_state(enumerate_basis(statistics, d, N), rng)


def suite_traces(instances: int, seed: int) -> SuiteResult:
    """Trace and Frobenius identities: both equal C(N, M) for every M."""
    result = SuiteResult("traces", seed, instances)
    rng = np.random.default_rng(seed)
    for stats in _BOTH:
        for i in range(instances):
            state = _random_system(rng, stats)
            N = state.particles
            for M in range(1, N + 1):
                expected = comb(N, M)
                gamma = bipartite.build_gamma(state, M)
                dev_f = abs(gamma.frobenius_squared() - expected)
                dev_t = abs(build_rdm(state, M).trace() - expected)
                label = f"{stats.value} instance {i} M={M}"
                result.record(1e-9 - dev_f, f"frobenius {label}: dev={dev_f:.3e}")
                result.record(1e-9 - dev_t, f"trace {label}: dev={dev_t:.3e}")
    return result


def _padded_spectra_gap(a: np.ndarray, b: np.ndarray) -> float:
    size = max(len(a), len(b))
    a = np.pad(np.sort(a)[::-1], (0, size - len(a)))
    b = np.pad(np.sort(b)[::-1], (0, size - len(b)))
    return float(np.abs(a - b).max()) if size else 0.0


def suite_isospectrality(instances: int, seed: int) -> SuiteResult:
    """Nonzero spectra of the M- and (N-M)-body matrices coincide."""
    result = SuiteResult("isospectrality", seed, instances)
    rng = np.random.default_rng(seed)
    for stats in _BOTH:
        for i in range(instances):
            state = _random_system(rng, stats)
            N = state.particles
            for M in range(1, N):
                sa = build_rdm(state, M).spectrum().nonzero(1e-10)
                sb = build_rdm(state, N - M).spectrum().nonzero(1e-10)
                gap = _padded_spectra_gap(sa, sb)
                result.record(
                    1e-8 - gap,
                    f"{stats.value} instance {i} M={M}: spectra gap {gap:.3e}",
                )
    return result


def _random_sector_state(rng: np.random.Generator, statistics: Statistics):
    d = int(rng.integers(3, 6))
    size_s = int(rng.integers(1, d))
    S = blocks.ModeSubspace(tuple(range(size_s)))
    d_c = d - size_s
    if statistics.is_fermion:
        ns = int(rng.integers(1, size_s + 1))
        nc = int(rng.integers(1, d_c + 1))
    else:
        ns = int(rng.integers(1, 4))
        nc = int(rng.integers(1, 4))
    if ns + nc > 5:
        nc = max(1, 5 - ns)
    basis = enumerate_basis(statistics, d, ns + nc)
    counts = basis.occupations[:, S.members].sum(axis=1)
    mask = counts == ns
    if not mask.any():
        return None
    amps = np.where(
        mask,
        rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis)),
        0.0,
    )
    return make_state(basis, amps, normalize=True), S, ns, nc


def suite_reconstruction(instances: int, seed: int) -> SuiteResult:
    """Full Schmidt and sector expansions reproduce their source state."""
    result = SuiteResult("reconstruction", seed, instances)
    rng = np.random.default_rng(seed)
    for stats in _BOTH:
        for i in range(instances):
            state = _random_system(rng, stats)
            N = state.particles
            for M in range(1, N + 1):
                rebuilt = bipartite.reconstruct(bipartite.schmidt_of_state(state, M))
                fid = bipartite.fidelity(state, rebuilt)
                result.record(
                    fid - (1.0 - 1e-10),
                    f"{stats.value} instance {i} M={M}: fidelity {fid:.12f}",
                )
            drawn = _random_sector_state(rng, stats)
            if drawn is None:
                continue
            sector_state, S, ns, nc = drawn
            N = sector_state.particles
            for M in (1, 2):
                if M > N - 1:
                    continue
                for m in range(max(0, M - nc), min(M, ns) + 1):
                    l = M - m
                    if not blocks.basis_nonempty(stats, S, sector_state.d, m, l):
                        continue
                    if not blocks.basis_nonempty(stats, S, sector_state.d, ns - m, nc - l):
                        continue
                    rebuilt = blocks.sector_reconstruct(sector_state, S, m, l)
                    fid = bipartite.fidelity(sector_state, rebuilt)
                    result.record(
                        fid - (1.0 - 1e-10),
                        f"{stats.value} sector ({m},{l}) instance {i}: fidelity {fid:.12f}",
                    )
    return result


def suite_fock_spectra(instances: int, seed: int) -> SuiteResult:
    """Analytic Fock-state spectra match the dense construction exactly."""
    result = SuiteResult("fock-spectra", seed, instances)
    rng = np.random.default_rng(seed)
    for stats in _BOTH:
        for i in range(instances):
            d = int(rng.integers(3, 6))
            if stats.is_fermion:
                N = int(rng.integers(1, d + 1))
                occ = np.zeros(d, dtype=int)
                occ[rng.choice(d, size=N, replace=False)] = 1
            else:
                N = int(rng.integers(1, 6))
                occ = rng.multinomial(N, np.full(d, 1.0 / d))
            occ_t = tuple(int(x) for x in occ)
            basis = enumerate_basis(stats, d, N)
            from .states import basis_state

            state = basis_state(basis, occ_t)
            M = int(rng.integers(1, N + 1))
            dense = build_rdm(state, M).spectrum().values
            analytic = fock_rdm_spectrum(occ_t, M, stats).values
            gap = _padded_spectra_gap(dense[dense > 1e-12], analytic)
            result.record(
                1e-10 - gap,
                f"{stats.value} occ={occ_t} M={M}: spectra gap {gap:.3e}",
            )
    return result


def suite_paired_analytics(instances: int, seed: int) -> SuiteResult:
    """Maximally paired eigenvalues and the pair-contraction formulas.

    The half-filled n = 10 reference values are checked at 1e-9, and for
    every n <= 8 the pair-basis contractions of the uniform state match the
    closed forms entrywise at 1e-10.  Small systems are cross-checked against
    the dense mode-space route.
    """
    result = SuiteResult("paired-analytics", seed, instances)
    for stats, lam2_ref, lam1_ref in (
        (Statistics.FERMION, 2.0 / 9.0, 3.0),
        (Statistics.BOSON, 2.0 / 11.0, 7.0),
    ):
        pa = pairing.uniform_paired_state(stats, 10, 5)
        mean, second, _ = pairing.occupation_moments(pa)
        dev = float(np.abs(mean - 0.5).max())
        result.record(1e-9 - dev, f"{stats.value} n=10 one-body dev {dev:.3e}")
        spec_c, _ = pairing.collective_spectrum(pa)
        dev1 = abs(spec_c.values[0] - lam1_ref)
        dev2 = float(np.abs(spec_c.values[1:] - lam2_ref).max())
        result.record(1e-9 - dev1, f"{stats.value} n=10 lambda1 dev {dev1:.3e}")
        result.record(1e-9 - dev2, f"{stats.value} n=10 lambda2 dev {dev2:.3e}")
        same = pairing.two_body_same_spectrum(pa).values
        dev3 = float(np.abs(same - lam2_ref).max())
        result.record(1e-9 - dev3, f"{stats.value} n=10 same-block dev {dev3:.3e}")
    for stats in _BOTH:
        m_cap = 6 if not stats.is_fermion else 4
        for n in range(1, 9):
            for m in range(1, min(n if stats.is_fermion else n + m_cap, m_cap) + 1):
                if stats.is_fermion and m > n:
                    continue
                pa = pairing.uniform_paired_state(stats, n, m)
                mean, second, _ = pairing.occupation_moments(pa)
                rho_c = pairing.pair_hop_matrix(pa).real
                lam2 = pairing.maximally_paired_lambda2(stats, n, m)
                diag_ref, off_ref = pairing.maximally_paired_hop_entries(stats, n, m)
                devs = [float(np.abs(mean - m / n).max())]
                if n > 1:
                    off_mask = ~np.eye(n, dtype=bool)
                    devs.append(float(np.abs(second[off_mask] - lam2).max()))
                    devs.append(float(np.abs(rho_c[off_mask] - off_ref).max()))
                devs.append(float(np.abs(np.diag(rho_c) - diag_ref).max()))
                dev = max(devs)
                result.record(
                    1e-10 - dev, f"{stats.value} contractions n={n} m={m}: dev {dev:.3e}"
                )
    # dense cross-check of the pair-basis contraction route at small sizes
    for stats in _BOTH:
        for n, m in ((2, 1), (2, 2), (3, 1), (3, 2)):
            pa = pairing.uniform_paired_state(stats, n, m)
            state = pairing.embed_paired_state(pa)
            block = blocks.collective_pair_block(state, pairing.default_pairing_map(n))
            dev = float(np.abs(block.matrix - pairing.pair_hop_matrix(pa)).max())
            result.record(
                1e-10 - dev, f"{stats.value} dense hop cross-check n={n} m={m}: dev {dev:.3e}"
            )
            dense1 = build_rdm(state, 1).spectrum().values[: n]
            dev1 = float(np.abs(dense1 - m / n).max())
            result.record(
                1e-10 - dev1, f"{stats.value} dense one-body n={n} m={m}: dev {dev1:.3e}"
            )
    return result


def suite_bcs_bounds(instances: int, seed: int) -> SuiteResult:
    """Dominant-eigenvalue bounds and the ladder average of projected-BCS states."""
    result = SuiteResult("bcs-bounds", seed, instances)
    rng = np.random.default_rng(seed)
    n, m = 6, 3
    for stats in _BOTH:
        for i in range(instances):
            sig = np.abs(rng.standard_normal(n)) + 1e-3
            sig /= np.linalg.norm(sig)
            pa = pairing.projected_bcs_state(stats, sig, m)
            report = pairing.dominance_bounds(pa)
            margin = report.lambda1 - report.lower + 1e-9
            if report.upper is not None:
                margin = min(margin, report.upper - report.lambda1 + 1e-9)
            result.record(
                margin,
                f"{stats.value} instance {i}: lambda1={report.lambda1:.9f} "
                f"outside [{report.lower}, {report.upper}]",
            )
            mean, _, _ = pairing.occupation_moments(pa)
            sgn = -1.0 if stats.is_fermion else 1.0
            reference = m + sgn * (m - 1) * float((sig**2) @ mean)
            direct = pairing.pair_ladder_expectation(pa, sig)
            dev = abs(direct - reference)
            result.record(1e-10 - dev, f"{stats.value} instance {i}: ladder dev {dev:.3e}")
    return result


def suite_majorization(instances: int, seed: int) -> SuiteResult:
    """Mixture identity, majorization and entropy monotonicity for measurements."""
    result = SuiteResult("majorization", seed, instances)
    rng = np.random.default_rng(seed)
    for i in range(instances):
        stats = _BOTH[i % 2]
        state = _random_system(rng, stats)
        N = state.particles
        if N < 2:
            continue
        M = int(rng.integers(1, N))
        L = int(rng.integers(1, M + 1))
        ensemble = measure.annihilation_measurement(state, M)
        residual = measure.verify_mixture_identity(state, M, L, ensemble)
        result.record(
            1e-9 - residual,
            f"{stats.value} instance {i} (N={N}, M={M}, L={L}): mixture residual {residual:.3e}",
        )
        report = measure.check_majorization(state, M, L, ensemble)
        result.record(
            report.min_margin + 1e-10,
            f"{stats.value} instance {i} (N={N}, M={M}, L={L}): "
            f"majorization margin {report.min_margin:.3e}",
        )
        for kind in ("von_neumann", "linear"):
            gap = report.entropy_before[kind] - report.entropy_after[kind]
            result.record(
                gap + 1e-9,
                f"{stats.value} instance {i}: entropy ({kind}) increased by {-gap:.3e}",
            )
    return result


def suite_transfer(instances: int, seed: int) -> SuiteResult:
    """Appendix-style particle-transfer entropy bound on random Kraus families."""
    result = SuiteResult("transfer", seed, instances)
    rng = np.random.default_rng(seed)
    for i in range(instances):
        stats = _BOTH[i % 2]
        d0 = int(rng.integers(3, 5))
        n_hi = min(4, d0) if stats.is_fermion else 4
        N = int(rng.integers(2, n_hi + 1))
        M = int(rng.integers(1, N))
        d_target = int(rng.integers(M if stats.is_fermion else 1, d0 + 1))
        state = random_state(enumerate_basis(stats, d0, N), rng)
        source_dim = len(enumerate_basis(stats, d0, M))
        target_dim = len(enumerate_basis(stats, d_target, M))
        if target_dim == 0:
            continue
        if i % 3 == 0:
            family = measure.diagonal_transfer_family(target_dim, source_dim, rng)
        else:
            needed = -(-source_dim // target_dim)  # ceil
            count = int(rng.integers(needed, needed + 3))
            family = measure.random_transfer_family(target_dim, source_dim, count, rng)
        _, report = measure.particle_transfer(state, family, d_target, M)
        result.record(
            report.min_margin + 1e-10,
            f"{stats.value} instance {i}: transfer majorization margin {report.min_margin:.3e}",
        )
        for kind in ("von_neumann", "linear"):
            gap = report.entropy_initial[kind] - report.entropy_final_avg[kind]
            result.record(
                gap + 1e-9,
                f"{stats.value} instance {i}: transfer entropy ({kind}) rose by {-gap:.3e}",
            )
    return result


def suite_operator_sum(instances: int, seed: int) -> SuiteResult:
    """Summed annihilation products resolve the identity times C(N, M)."""
    result = SuiteResult("operator-sum", seed, instances)
    rng = np.random.default_rng(seed)
    for stats in _BOTH:
        for i in range(instances):
            state = _random_system(rng, stats, d_max=5, n_max=4)
            N = state.particles
            for M in range(1, N + 1):
                total = np.zeros_like(state.amplitudes)
                m_basis = enumerate_basis(stats, state.d, M)
                for a in range(len(m_basis)):
                    occ_a = tuple(m_basis.occupations[a])
                    image = apply_annihilation_product(state, occ_a)
                    back = compose_weighted_products(
                        stats,
                        state.d,
                        m_basis.occupations[a : a + 1],
                        image.basis.occupations,
                        image.amplitudes[None, :],
                    )
                    total += back.amplitudes
                dev = float(np.linalg.norm(total - comb(N, M) * state.amplitudes))
                result.record(
                    1e-9 - dev,
                    f"{stats.value} instance {i} M={M}: operator-sum residual {dev:.3e}",
                )
    return result


def suite_pairing_oracle(instances: int, seed: int) -> SuiteResult:
    """Pair-basis Hamiltonian and spectrum agree with the full-space build."""
    result = SuiteResult("pairing-oracle", seed, instances)
    for stats in _BOTH:
        for n in (2, 3, 4):
            for m in range(1, min(3, n) + 1):
                for g in (0.0, 0.7, 2.5):
                    model = pairing.PairingModel(stats, n, m, eps=1.0, coupling=g)
                    h_pair = pairing.pairing_hamiltonian(model)
                    pa_basis, signs, _ = pairing._pair_cache(stats, n, m)
                    occs, h_full = pairing.full_space_hamiltonian(model)
                    index = {occ: i for i, occ in enumerate(occs)}
                    ids = [
                        index[tuple(row) + tuple(row)]
                        for row in pa_basis.occupations.tolist()
                    ]
                    restricted = h_full[np.ix_(ids, ids)] * np.outer(signs, signs)
                    dev = float(np.abs(h_pair - restricted).max())
                    result.record(
                        1e-10 - dev,
                        f"{stats.value} n={n} m={m} g={g}: matrix dev {dev:.3e}",
                    )
                    e_pair = float(np.linalg.eigvalsh(h_pair)[0])
                    e_full = float(np.linalg.eigvalsh(h_full)[0])
                    gap = abs(e_pair - e_full)
                    result.record(
                        1e-8 - gap,
                        f"{stats.value} n={n} m={m} g={g}: energy gap {gap:.3e}",
                    )
    return result


SUITES: dict[str, Callable[[int, int], SuiteResult]] = {
    "traces": suite_traces,
    "isospectrality": suite_isospectrality,
    "reconstruction": suite_reconstruction,
    "fock-spectra": suite_fock_spectra,
    "paired-analytics": suite_paired_analytics,
    "bcs-bounds": suite_bcs_bounds,
    "majorization": suite_majorization,
    "transfer": suite_transfer,
    "operator-sum": suite_operator_sum,
    "pairing-oracle": suite_pairing_oracle,
}


def run_suite(name: str, instances: int, seed: int) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)} or 'all'")
    return SUITES[name](instances, seed)
