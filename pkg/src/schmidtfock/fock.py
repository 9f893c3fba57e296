"""Occupation-number bases for bosons and fermions.

Conventions used throughout the package:

* Modes are 0-indexed, ``0 .. d-1``.
* A basis state is created by the normalized string
  ``(c^dag_0)^{n_0}/sqrt(n_0!) ... (c^dag_{d-1})^{n_{d-1}}/sqrt(n_{d-1}!)``
  applied to the vacuum, modes ascending left to right.  All fermionic phases
  in the package derive from this single convention.
* Basis order is descending lexicographic in the occupation tuple (mode 0
  most significant), so e.g. the two-boson basis on two modes is
  ``(2,0), (1,1), (0,2)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

import numpy as np

DEFAULT_BASIS_CAP = 10**6
_BASIS_CAP_ENV = "SCHMIDTFOCK_BASIS_CAP"


class BasisCapExceeded(RuntimeError):
    """Raised when a requested basis would exceed the configured size cap."""


def basis_cap() -> int:
    """Active basis-size cap (default 10^6, overridable via SCHMIDTFOCK_BASIS_CAP)."""
    raw = os.environ.get(_BASIS_CAP_ENV)
    if raw is None:
        return DEFAULT_BASIS_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{_BASIS_CAP_ENV} must be an integer, got {raw!r}") from exc


class Statistics(Enum):
    """Particle statistics: bosonic or fermionic mode occupancy rules."""

    BOSON = "boson"
    FERMION = "fermion"

    @property
    def is_fermion(self) -> bool:
        return self is Statistics.FERMION

    @classmethod
    def parse(cls, value: "Statistics | str") -> "Statistics":
        if isinstance(value, Statistics):
            return value
        try:
            return cls(str(value).lower())
        except ValueError as exc:
            raise ValueError(f"unknown statistics {value!r}; expected 'boson' or 'fermion'") from exc


@dataclass(frozen=True)
class OccupationVector:
    """Per-mode particle counts together with the statistics they obey."""

    occ: tuple[int, ...]
    statistics: Statistics

    def __post_init__(self):
        object.__setattr__(self, "occ", tuple(int(n) for n in self.occ))
        if len(self.occ) < 1:
            raise ValueError("occupation vector needs at least one mode")
        if any(n < 0 for n in self.occ):
            raise ValueError(f"negative occupation in {self.occ}")
        if self.statistics.is_fermion and any(n > 1 for n in self.occ):
            raise ValueError(f"fermionic occupation above 1 in {self.occ}")

    @property
    def d(self) -> int:
        return len(self.occ)

    def total(self) -> int:
        return sum(self.occ)

    def __len__(self) -> int:
        return len(self.occ)

    def __iter__(self):
        return iter(self.occ)


def basis_dimension(statistics: Statistics | str, d: int, M: int) -> int:
    """Number of M-particle occupation vectors on d modes."""
    statistics = Statistics.parse(statistics)
    if d < 1:
        raise ValueError(f"need at least one mode, got d={d}")
    if M < 0:
        raise ValueError(f"particle number must be non-negative, got M={M}")
    if statistics.is_fermion:
        return comb(d, M) if M <= d else 0
    return comb(d + M - 1, M)


def _occupation_tuples(d: int, M: int, per_mode_max: int) -> Iterator[tuple[int, ...]]:
    # Descending lexicographic order, first mode most significant.
    if d == 1:
        if M <= per_mode_max:
            yield (M,)
        return
    for head in range(min(M, per_mode_max), -1, -1):
        for tail in _occupation_tuples(d - 1, M - head, per_mode_max):
            yield (head,) + tail


class FockBasis:
    """Ordered, indexable enumeration of all M-particle occupation vectors.

    The canonical order is descending lexicographic; ``index_of`` is the
    inverse of positional access, so ``basis.index_of(basis.occupations[i]) == i``.
    """

    __slots__ = ("statistics", "d", "M", "occupations", "_index", "bitmasks")

    def __init__(self, statistics: Statistics, d: int, M: int, occupations: np.ndarray):
        self.statistics = statistics
        self.d = d
        self.M = M
        occupations.setflags(write=False)
        self.occupations = occupations
        self._index = {tuple(row): i for i, row in enumerate(occupations.tolist())}
        # Machine-word bitmask mirror for fermions (d <= 64): identical
        # semantics to the integer rows, used for fast subset/phase logic.
        if statistics.is_fermion and d <= 64 and len(occupations):
            weights = (1 << np.arange(d, dtype=np.uint64)).astype(np.uint64)
            self.bitmasks = (occupations.astype(np.uint64) * weights).sum(axis=1)
            self.bitmasks.setflags(write=False)
        else:
            self.bitmasks = None

    @property
    def key(self) -> tuple:
        """Identity of the basis: statistics, mode count, particle count."""
        return (self.statistics, self.d, self.M)

    def __len__(self) -> int:
        return len(self.occupations)

    @property
    def size(self) -> int:
        return len(self.occupations)

    def index_of(self, occ: Sequence[int] | OccupationVector) -> int:
        key = tuple(occ.occ if isinstance(occ, OccupationVector) else occ)
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"occupation {key} not in basis {self.key}") from None

    def contains(self, occ: Sequence[int]) -> bool:
        return tuple(occ) in self._index

    def state(self, i: int) -> OccupationVector:
        return OccupationVector(tuple(self.occupations[i]), self.statistics)

    def __iter__(self) -> Iterator[OccupationVector]:
        for i in range(len(self)):
            yield self.state(i)

    def __repr__(self) -> str:
        return f"FockBasis({self.statistics.value}, d={self.d}, M={self.M}, size={len(self)})"


@lru_cache(maxsize=256)
def _enumerate_cached(statistics: Statistics, d: int, M: int) -> FockBasis:
    per_mode = 1 if statistics.is_fermion else M
    occs = list(_occupation_tuples(d, M, per_mode)) if M >= 0 else []
    arr = np.array(occs, dtype=np.int64) if occs else np.zeros((0, d), dtype=np.int64)
    return FockBasis(statistics, d, M, arr)


def enumerate_basis(statistics: Statistics | str, d: int, M: int) -> FockBasis:
    """All M-particle occupation vectors on d modes, in canonical order."""
    statistics = Statistics.parse(statistics)
    dim = basis_dimension(statistics, d, M)
    cap = basis_cap()
    if dim > cap:
        raise BasisCapExceeded(
            f"basis ({statistics.value}, d={d}, M={M}) has {dim} states, "
            f"exceeding the cap of {cap} (override with {_BASIS_CAP_ENV})"
        )
    return _enumerate_cached(statistics, d, M)


def _check_compatible(a: OccupationVector, b: OccupationVector) -> None:
    if a.statistics is not b.statistics:
        raise ValueError(f"statistics mismatch: {a.statistics} vs {b.statistics}")
    if a.d != b.d:
        raise ValueError(f"mode-count mismatch: {a.d} vs {b.d}")


def _merge_coeff_boson(occ_a: Sequence[int], occ_b: Sequence[int]) -> float:
    coeff = 1.0
    for na, nb in zip(occ_a, occ_b):
        if na and nb:
            coeff *= comb(na + nb, na)
        # comb(n, 0) = comb(0, n') = 1: nothing to do
    return float(np.sqrt(coeff)) if coeff != 1.0 else 1.0


def _merge_sign_fermion(occ_a: Sequence[int], occ_b: Sequence[int]) -> int:
    # Parity of the permutation sorting (ascending modes of a, ascending
    # modes of b) into global ascending order = crossings of b-modes under
    # a-modes above them.
    inversions = 0
    seen_a = 0
    total_a = sum(occ_a)
    for na, nb in zip(occ_a, occ_b):
        seen_a += na
        if nb:
            inversions += total_a - seen_a
    return -1 if inversions & 1 else 1


def merge_occupations(
    a: OccupationVector, b: OccupationVector
) -> tuple[OccupationVector, float] | None:
    """Combine creation strings: ``C^dag_a C^dag_b |0> = coeff * |a + b>``.

    For fermions the result is None when any mode is doubly occupied,
    otherwise the coefficient is the +-1 parity of sorting the concatenated
    mode list of a followed by b into ascending order.  For bosons the
    coefficient is ``prod_i sqrt(C(n_i + n'_i, n_i))``.
    """
    _check_compatible(a, b)
    merged = tuple(na + nb for na, nb in zip(a.occ, b.occ))
    if a.statistics.is_fermion:
        if any(n > 1 for n in merged):
            return None
        coeff = float(_merge_sign_fermion(a.occ, b.occ))
    else:
        coeff = _merge_coeff_boson(a.occ, b.occ)
    return OccupationVector(merged, a.statistics), coeff


def merge_coefficient(statistics: Statistics, occ_a: Sequence[int], occ_b: Sequence[int]) -> float:
    """Plain-tuple fast path of :func:`merge_occupations` (0.0 when forbidden)."""
    if statistics.is_fermion:
        if any(na and nb for na, nb in zip(occ_a, occ_b)):
            return 0.0
        return float(_merge_sign_fermion(occ_a, occ_b))
    return _merge_coeff_boson(occ_a, occ_b)


def split_occupation(
    statistics: Statistics, occ: Sequence[int], M: int
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], float]]:
    """All ways to remove M particles from ``occ``.

    Yields ``(alpha, beta, coeff)`` with ``alpha + beta = occ`` and
    ``C_alpha |occ> = coeff |beta>``; the coefficient equals the merge
    coefficient of (alpha, beta), which is the same matrix element read
    backwards.
    """
    occ = tuple(occ)
    d = len(occ)

    def rec(i: int, remaining: int, prefix: list[int]):
        if i == d:
            if remaining == 0:
                alpha = tuple(prefix)
                yield alpha
            return
        cap = min(occ[i], remaining)
        for take in range(cap, -1, -1):
            prefix.append(take)
            yield from rec(i + 1, remaining - take, prefix)
            prefix.pop()

    for alpha in rec(0, M, []):
        beta = tuple(n - m for n, m in zip(occ, alpha))
        coeff = merge_coefficient(statistics, alpha, beta)
        if coeff != 0.0:
            yield alpha, beta, coeff
