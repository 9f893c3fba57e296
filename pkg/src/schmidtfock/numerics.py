"""Dense Hermitian eigensolvers, SVD, entropies, and majorization comparisons.

This module also owns the package-wide tolerance ledger.  Every other module
refers to these constants instead of redefining its own numbers:

* ``ATOL_CONSTRUCTION`` (1e-12): exact-by-construction quantities (amplitude
  support tests, Hermiticity of assembled matrices).
* ``ATOL_IDENTITY`` (1e-10): operator identities and norm checks.
* ``ATOL_DECOMPOSITION`` (1e-9): residuals of eigen/SVD factorizations and
  quantities built from one decomposition.
* ``ATOL_SPECTRUM`` (1e-8): comparisons between spectra obtained along
  different numerical routes (accumulated SVD/eigensolver error).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

ATOL_CONSTRUCTION = 1e-12
ATOL_IDENTITY = 1e-10
ATOL_DECOMPOSITION = 1e-9
ATOL_SPECTRUM = 1e-8

# Eigenvalues of positive-semidefinite matrices may dip slightly negative due
# to roundoff; values in [EIGENVALUE_FLOOR, 0) are clamped to 0, values below
# the floor are a hard error.
EIGENVALUE_FLOOR = -1e-9

# Majorization partial sums are nonnegative in exact arithmetic; this slack
# absorbs eigensolver noise.
MAJORIZATION_SLACK = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """A real spectrum stored in descending order."""

    values: np.ndarray
    tol: float = ATOL_SPECTRUM

    def __post_init__(self):
        vals = np.sort(np.asarray(self.values, dtype=float))[::-1]
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def total(self) -> float:
        return float(self.values.sum())

    def nonzero(self, threshold: float | None = None) -> np.ndarray:
        """Values above ``threshold`` (default: tol relative to the maximum)."""
        if len(self.values) == 0:
            return self.values
        cut = threshold if threshold is not None else self.tol * max(1.0, self.values[0])
        return self.values[self.values > cut]


def hermitian_eigen(matrix: np.ndarray) -> tuple[Spectrum, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(spectrum, vectors)`` with ``vectors[:, i]`` the eigenvector of
    ``spectrum.values[i]``.  Raises ValueError if the input is not Hermitian
    within ATOL_DECOMPOSITION relative to its scale.
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max()) if a.size else 0.0)
    if not np.allclose(a, a.conj().T, atol=ATOL_DECOMPOSITION * scale, rtol=0.0):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = scipy.linalg.eigh(a)
    return Spectrum(w[::-1]), v[:, ::-1]


def svd(matrix: np.ndarray) -> tuple[np.ndarray, Spectrum, np.ndarray]:
    """Thin SVD ``A = U diag(s) V^dag`` with singular values descending.

    Returns ``(U, Spectrum(s), V)`` (note: V, not its adjoint).
    """
    a = np.asarray(matrix)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return u, Spectrum(s), vh.conj().T


def clamp_spectrum(values: Sequence[float] | Spectrum) -> np.ndarray:
    """Clamp small negative eigenvalues of PSD matrices to zero.

    Entries in ``[EIGENVALUE_FLOOR, 0)`` become 0; entries below the floor
    raise, since they signal a genuinely non-PSD input rather than roundoff.
    """
    vals = np.asarray(values.values if isinstance(values, Spectrum) else values, dtype=float)
    if vals.size and vals.min() < EIGENVALUE_FLOOR:
        raise ValueError(f"eigenvalue {vals.min():.3e} below PSD floor {EIGENVALUE_FLOOR:.0e}")
    return np.where(vals < 0.0, 0.0, vals)


def entropy(
    values: Sequence[float] | Spectrum,
    kind: str | Callable[[np.ndarray], np.ndarray] = "von_neumann",
    check_normalized: bool = True,
) -> float:
    """Trace-form entropy of a probability spectrum (base-2 logarithms).

    ``kind`` is ``"von_neumann"`` (-sum p log2 p), ``"linear"`` (1 - sum p^2),
    or a callable f applied elementwise with S_f = sum f(p); f must satisfy
    f(0) = f(1) = 0 for the monotonicity results to apply.  ``0 log 0 = 0``.
    """
    p = clamp_spectrum(values)
    if check_normalized and abs(p.sum() - 1.0) > 1e-6:
        raise ValueError(f"spectrum sums to {p.sum():.8f}, expected 1 within 1e-6")
    if callable(kind):
        return float(np.sum(kind(p)))
    if kind == "von_neumann":
        pos = p[p > 0.0]
        return float(-(pos * np.log2(pos)).sum())
    if kind == "linear":
        return float(1.0 - (p * p).sum())
    raise ValueError(f"unknown entropy kind {kind!r}")


ENTROPY_KINDS = ("von_neumann", "linear")


@dataclass(frozen=True)
class MajorizationResult:
    """Outcome of comparing two spectra by descending partial sums."""

    relation: str  # "equal" | "majorized_by" (p < q) | "majorizes" | "incomparable"
    margins: np.ndarray = field(repr=False)  # cumsum(q) - cumsum(p), per position

    @property
    def min_margin(self) -> float:
        return float(self.margins.min())


def majorization_compare(
    p: Sequence[float] | Spectrum,
    q: Sequence[float] | Spectrum,
    slack: float = MAJORIZATION_SLACK,
) -> MajorizationResult:
    """Compare spectra: is p majorized by q (p < q), the reverse, equal, or neither?

    The shorter list is zero-padded; totals must agree within ATOL_SPECTRUM.
    ``margins[k] = sum(q[:k+1]) - sum(p[:k+1])``: all >= -slack means p < q.
    """
    pv = np.sort(np.asarray(p.values if isinstance(p, Spectrum) else p, dtype=float))[::-1]
    qv = np.sort(np.asarray(q.values if isinstance(q, Spectrum) else q, dtype=float))[::-1]
    size = max(len(pv), len(qv))
    pv = np.pad(pv, (0, size - len(pv)))
    qv = np.pad(qv, (0, size - len(qv)))
    if abs(pv.sum() - qv.sum()) > ATOL_SPECTRUM:
        raise ValueError(f"spectra totals differ: {pv.sum():.10f} vs {qv.sum():.10f}")
    margins = np.cumsum(qv) - np.cumsum(pv)
    if np.max(np.abs(pv - qv)) <= slack:
        relation = "equal"
    elif margins.min() >= -slack:
        relation = "majorized_by"
    elif margins.max() <= slack:
        relation = "majorizes"
    else:
        relation = "incomparable"
    return MajorizationResult(relation, margins)
