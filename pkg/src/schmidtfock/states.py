"""Pure N-particle states and second-quantized operator application.

Operators act by direct index arithmetic on occupation vectors; no operator
matrices are materialized.  Unnormalized vectors are first class: applying an
annihilator or a product of annihilators returns the raw image, whose squared
norm is itself meaningful (a reduced-density-matrix diagonal element).
Normalization is always explicit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse
from scipy.sparse.linalg import expm_multiply

from .fock import (
    FockBasis,
    OccupationVector,
    Statistics,
    enumerate_basis,
    merge_coefficient,
)
from .numerics import ATOL_IDENTITY


class PureState:
    """Complex amplitude vector over a :class:`FockBasis`.

    ``normalized`` records whether the vector is known to be unit norm;
    operator images keep it False until :meth:`normalized_copy` is called.
    """

    __slots__ = ("basis", "amplitudes", "normalized")

    def __init__(self, basis: FockBasis, amplitudes: np.ndarray, normalized: bool = False):
        amps = np.asarray(amplitudes, dtype=complex)
        if amps.shape != (len(basis),):
            raise ValueError(f"amplitude length {amps.shape} does not match basis size {len(basis)}")
        self.basis = basis
        self.amplitudes = amps
        self.normalized = normalized

    @property
    def statistics(self) -> Statistics:
        return self.basis.statistics

    @property
    def d(self) -> int:
        return self.basis.d

    @property
    def particles(self) -> int:
        return self.basis.M

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized_copy(self) -> "PureState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return PureState(self.basis, self.amplitudes / n, normalized=True)

    def amplitude(self, occ: Sequence[int] | OccupationVector) -> complex:
        return complex(self.amplitudes[self.basis.index_of(occ)])

    def __repr__(self) -> str:
        return f"PureState({self.basis!r}, norm={self.norm():.6f})"


def make_state(
    basis: FockBasis, amplitudes: Iterable[complex], normalize: bool = False
) -> PureState:
    """Build a PureState, optionally normalizing; rejects the zero vector."""
    amps = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes,
                      dtype=complex)
    state = PureState(basis, amps)
    n = state.norm()
    if n == 0.0:
        raise ValueError("state amplitudes are all zero")
    if normalize:
        return state.normalized_copy()
    state.normalized = bool(abs(n - 1.0) <= ATOL_IDENTITY)
    return state


def basis_state(basis: FockBasis, occ: Sequence[int] | OccupationVector) -> PureState:
    """The single Fock configuration ``occ`` as a unit state."""
    amps = np.zeros(len(basis), dtype=complex)
    amps[basis.index_of(occ)] = 1.0
    return PureState(basis, amps, normalized=True)


def random_state(basis: FockBasis, rng: np.random.Generator) -> PureState:
    """Normalized state with complex-Gaussian amplitudes (seeded via ``rng``)."""
    amps = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    return make_state(basis, amps, normalize=True)


def _check_mode(state: PureState, mode: int) -> None:
    if not 0 <= mode < state.d:
        raise ValueError(f"mode {mode} out of range for d={state.d}")


def apply_annihilator(state: PureState, mode: int) -> PureState:
    """``c_mode |state>`` as an unnormalized vector over the (N-1)-basis."""
    _check_mode(state, mode)
    if state.particles < 1:
        raise ValueError("cannot annihilate on the vacuum sector")
    target = enumerate_basis(state.statistics, state.d, state.particles - 1)
    out = np.zeros(len(target), dtype=complex)
    occs = state.basis.occupations
    fermion = state.statistics.is_fermion
    for i in np.flatnonzero(state.amplitudes):
        n = occs[i, mode]
        if n == 0:
            continue
        occ = occs[i].copy()
        occ[mode] = n - 1
        j = target.index_of(tuple(occ))
        if fermion:
            phase = -1.0 if (occs[i, :mode].sum() & 1) else 1.0
            out[j] += phase * state.amplitudes[i]
        else:
            out[j] += np.sqrt(n) * state.amplitudes[i]
    return PureState(target, out)


def apply_creator(state: PureState, mode: int) -> PureState:
    """``c^dag_mode |state>`` as an unnormalized vector over the (N+1)-basis."""
    _check_mode(state, mode)
    target = enumerate_basis(state.statistics, state.d, state.particles + 1)
    out = np.zeros(len(target), dtype=complex)
    occs = state.basis.occupations
    fermion = state.statistics.is_fermion
    for i in np.flatnonzero(state.amplitudes):
        n = occs[i, mode]
        if fermion and n == 1:
            continue
        occ = occs[i].copy()
        occ[mode] = n + 1
        j = target.index_of(tuple(occ))
        if fermion:
            phase = -1.0 if (occs[i, :mode].sum() & 1) else 1.0
            out[j] += phase * state.amplitudes[i]
        else:
            out[j] += np.sqrt(n + 1.0) * state.amplitudes[i]
    return PureState(target, out)


def apply_operator_string(
    statistics: Statistics,
    occ: Sequence[int],
    ops: Sequence[tuple[int, int]],
) -> tuple[tuple[int, ...], float] | None:
    """Apply a ladder-operator string to a single Fock configuration.

    ``ops`` lists ``(mode, +1)`` for a creator and ``(mode, -1)`` for an
    annihilator, *in application order* (i.e. the rightmost operator of the
    product comes first).  Returns ``(new_occ, coefficient)`` under the
    package's creation-string convention, or None when the string kills the
    configuration.
    """
    occ = list(occ)
    coeff = 1.0
    fermion = statistics.is_fermion
    for mode, kind in ops:
        n = occ[mode]
        if kind == -1:
            if n == 0:
                return None
            if fermion:
                if sum(occ[:mode]) & 1:
                    coeff = -coeff
            else:
                coeff *= np.sqrt(n)
            occ[mode] = n - 1
        elif kind == +1:
            if fermion:
                if n == 1:
                    return None
                if sum(occ[:mode]) & 1:
                    coeff = -coeff
            else:
                coeff *= np.sqrt(n + 1.0)
            occ[mode] = n + 1
        else:
            raise ValueError(f"operator kind must be +1 or -1, got {kind}")
    return tuple(occ), float(coeff)


def apply_annihilation_product(
    state: PureState, alpha: OccupationVector | Sequence[int]
) -> PureState:
    """Normalized annihilation product ``C_alpha |state>`` over the (N-M)-basis.

    The squared norm of the result is the corresponding diagonal element of
    the M-body reduced density matrix.
    """
    occ_a = tuple(alpha.occ if isinstance(alpha, OccupationVector) else alpha)
    if isinstance(alpha, OccupationVector):
        if alpha.statistics is not state.statistics:
            raise ValueError("statistics mismatch between state and occupation")
    if len(occ_a) != state.d:
        raise ValueError(f"occupation has {len(occ_a)} modes, state has {state.d}")
    M = sum(occ_a)
    if M > state.particles:
        raise ValueError(f"cannot annihilate {M} particles from an {state.particles}-particle state")
    target = enumerate_basis(state.statistics, state.d, state.particles - M)
    out = np.zeros(len(target), dtype=complex)
    occs = state.basis.occupations
    stats = state.statistics
    alpha_arr = np.asarray(occ_a)
    for i in np.flatnonzero(state.amplitudes):
        res = occs[i] - alpha_arr
        if res.min() < 0:
            continue
        coeff = merge_coefficient(stats, occ_a, tuple(res))
        if coeff != 0.0:
            out[target.index_of(tuple(res))] += coeff * state.amplitudes[i]
    return PureState(target, out)


def compose_weighted_products(
    statistics: Statistics,
    d: int,
    rows: Sequence[Sequence[int]],
    cols: Sequence[Sequence[int]],
    weights: np.ndarray,
) -> PureState:
    """``sum_{a,b} W[a,b] C^dag_{rows[a]} C^dag_{cols[b]} |0>`` on the (Ma+Mb)-basis.

    Shared kernel behind state composition and Schmidt reconstruction; rows
    and cols are occupation tuples over the same d modes.
    """
    if not len(rows) or not len(cols):
        raise ValueError("empty row or column basis")
    N = sum(rows[0]) + sum(cols[0])
    target = enumerate_basis(statistics, d, N)
    out = np.zeros(len(target), dtype=complex)
    nz_rows, nz_cols = np.nonzero(np.abs(weights) > 0.0)
    for a, b in zip(nz_rows.tolist(), nz_cols.tolist()):
        occ_a, occ_b = tuple(rows[a]), tuple(cols[b])
        coeff = merge_coefficient(statistics, occ_a, occ_b)
        if coeff == 0.0:
            continue
        merged = tuple(x + y for x, y in zip(occ_a, occ_b))
        out[target.index_of(merged)] += coeff * weights[a, b]
    return PureState(target, out)


def compose_product_state(left: PureState, right: PureState) -> PureState:
    """Bilinear composition ``A^dag B^dag |0>`` from coefficient vectors.

    On basis elements this agrees with :func:`schmidtfock.fock.merge_occupations`.
    """
    if left.statistics is not right.statistics or left.d != right.d:
        raise ValueError("left and right factors live on different mode spaces")
    weights = np.outer(left.amplitudes, right.amplitudes)
    return compose_weighted_products(
        left.statistics, left.d, left.basis.occupations, right.basis.occupations, weights
    )


@dataclass(frozen=True)
class SpUnitary:
    """A d x d unitary acting on single-particle mode space."""

    matrix: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.matrix, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"expected a square matrix, got {u.shape}")
        if not np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=ATOL_IDENTITY):
            raise ValueError("matrix is not unitary within 1e-10")
        u.setflags(write=False)
        object.__setattr__(self, "matrix", u)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]


def _one_body_operator_matrix(basis: FockBasis, h: np.ndarray) -> scipy.sparse.csr_matrix:
    """Sparse matrix of ``sum_ij h[i,j] c^dag_i c_j`` on an N-particle basis."""
    d = basis.d
    fermion = basis.statistics.is_fermion
    occs = basis.occupations
    rows, cols, vals = [], [], []
    for idx in range(len(basis)):
        occ = occs[idx]
        for j in range(d):
            nj = occ[j]
            if nj == 0:
                continue
            for i in range(d):
                if h[i, j] == 0.0:
                    continue
                res = apply_operator_string(basis.statistics, occ, ((j, -1), (i, +1)))
                if res is None:
                    continue
                new_occ, coeff = res
                rows.append(basis.index_of(new_occ))
                cols.append(idx)
                vals.append(h[i, j] * coeff)
    return scipy.sparse.csr_matrix(
        (vals, (rows, cols)), shape=(len(basis), len(basis)), dtype=complex
    )


def apply_sp_unitary(state: PureState, u: SpUnitary) -> PureState:
    """Apply the Fock-space lift of a single-particle unitary.

    Each creator transforms as ``c^dag_i -> sum_k U[k,i] c^dag_k``.  Realized
    through the one-body generator ``h = i log U`` and the exact action of
    ``exp(-i h_hat)`` on the N-particle sector; Schmidt spectra are invariant
    under this map.
    """
    if u.d != state.d:
        raise ValueError(f"unitary acts on {u.d} modes, state has {state.d}")
    if state.particles == 0:
        return PureState(state.basis, state.amplitudes.copy(), state.normalized)
    h = 1j * scipy.linalg.logm(np.asarray(u.matrix, dtype=complex))
    h = (h + h.conj().T) / 2.0  # project out the anti-Hermitian roundoff part
    k = _one_body_operator_matrix(state.basis, h)
    amps = expm_multiply(-1j * k, state.amplitudes)
    return PureState(state.basis, amps, normalized=state.normalized)


# --- JSON state files -------------------------------------------------------
#
# Schema: { "statistics": "boson"|"fermion", "modes": d, "particles": N,
#           "amplitudes": [ { "occ": [int x d], "re": float, "im": float } ] }
# Occupations follow the package creation-string convention; basis states not
# listed have amplitude zero.


def state_to_dict(state: PureState, cutoff: float = 0.0) -> dict:
    """JSON-serializable form of a state (amplitudes above ``cutoff`` only)."""
    entries = []
    for i in np.flatnonzero(np.abs(state.amplitudes) > cutoff):
        amp = state.amplitudes[i]
        entries.append(
            {
                "occ": [int(n) for n in state.basis.occupations[i]],
                "re": float(amp.real),
                "im": float(amp.imag),
            }
        )
    return {
        "statistics": state.statistics.value,
        "modes": state.d,
        "particles": state.particles,
        "amplitudes": entries,
    }


def state_from_dict(payload: dict, normalize: bool = False) -> PureState:
    """Parse the JSON state schema; unlisted basis states get amplitude 0."""
    try:
        statistics = Statistics.parse(payload["statistics"])
        d = int(payload["modes"])
        N = int(payload["particles"])
        entries = payload["amplitudes"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state file: {exc}") from exc
    basis = enumerate_basis(statistics, d, N)
    amps = np.zeros(len(basis), dtype=complex)
    for entry in entries:
        occ = tuple(int(n) for n in entry["occ"])
        if len(occ) != d:
            raise ValueError(f"occupation {occ} does not have {d} modes")
        if sum(occ) != N:
            raise ValueError(f"occupation {occ} does not hold {N} particles")
        if statistics.is_fermion and any(n > 1 for n in occ):
            raise ValueError(f"fermionic occupation above 1 in {occ}")
        amps[basis.index_of(occ)] += complex(float(entry["re"]), float(entry.get("im", 0.0)))
    return make_state(basis, amps, normalize=normalize)


def save_state(state: PureState, path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_dict(state), fh, indent=1)
        fh.write("\n")


def load_state(path, normalize: bool = False) -> PureState:
    with open(path) as fh:
        payload = json.load(fh)
    return state_from_dict(payload, normalize=normalize)


def overlap_vectors(a: PureState, b: PureState) -> complex:
    """``<a|b>`` for states on identical bases (helper shared with bipartite)."""
    if a.basis.key != b.basis.key:
        raise ValueError(f"basis mismatch: {a.basis.key} vs {b.basis.key}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))
