"""Shannon entropy primitives over finite distributions.

All logarithms are base 2 and ``0 * log 0`` is taken as 0. Distributions are
validated before use: entries must be non-negative and sum to one within
``SUM_TOL``. Inputs inside that tolerance are renormalized, anything outside
is rejected with :class:`DistributionError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

SUM_TOL = 1e-12


class DistributionError(ValueError):
    """Raised for a probability vector or grid that is not a distribution."""


class DomainError(ValueError):
    """Raised when a scalar probability parameter is outside its domain."""


def check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise DomainError(f"{name}={p!r} is not in [0, 1]")
    return p


@dataclass(frozen=True)
class BinaryParam:
    """Success probability ``p`` of a binary channel with ``q = 1 - p``."""

    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", check_probability(self.p))

    @property
    def q(self) -> float:
        return 1.0 - self.p


def as_distribution(probs) -> np.ndarray:
    """Validate ``probs`` and return it as a float array summing to one.

    Works for vectors and for grids of any shape (joint distributions).
    """
    arr = np.asarray(probs, dtype=float)
    if arr.size == 0:
        raise DistributionError("empty distribution")
    if not np.all(np.isfinite(arr)):
        raise DistributionError("distribution has non-finite entries")
    if np.any(arr < 0):
        raise DistributionError("distribution has negative entries")
    total = math.fsum(arr.ravel().tolist())
    if abs(total - 1.0) > SUM_TOL:
        raise DistributionError(f"entries sum to {total!r}, not 1")
    if total != 1.0:
        arr = arr / total
    return arr


def _entropy_unchecked(arr: np.ndarray) -> float:
    flat = np.sort(arr.ravel())
    flat = flat[flat > 0]
    if flat.size == 0:
        return 0.0
    terms = -flat * np.log2(flat)
    # fsum is exactly rounded, so the result does not depend on term order
    return max(math.fsum(terms.tolist()), 0.0)


def entropy(probs) -> float:
    """Shannon entropy in bits of a finite distribution.

    Parameters
    ----------
    probs : array_like
        Probability vector (or grid; all cells are treated as atoms).

    Returns
    -------
    float
        ``-sum p_k log2 p_k``.
    """
    return _entropy_unchecked(as_distribution(probs))


def binary_entropy(p: float) -> float:
    """Binary entropy ``h(p) = H(p, 1 - p)`` in bits."""
    p = check_probability(p)
    if p == 0.0 or p == 1.0:
        return 0.0
    q = 1.0 - p
    return -(p * math.log2(p) + q * math.log2(q))


def _as_joint(j) -> np.ndarray:
    arr = as_distribution(j)
    if arr.ndim != 2:
        raise DistributionError(f"joint distribution must be 2-D, got shape {arr.shape}")
    return arr


def joint_entropy(j) -> float:
    """Entropy ``H(X, Y)`` of a joint grid with rows indexed by X, columns by Y."""
    return _entropy_unchecked(_as_joint(j))


def marginals(j) -> tuple[np.ndarray, np.ndarray]:
    """Row (X) and column (Y) marginals of a joint grid."""
    arr = _as_joint(j)
    return arr.sum(axis=1), arr.sum(axis=0)


def conditional_entropy(j) -> float:
    """``H(X | Y) = H(X, Y) - H(Y)`` where Y indexes the columns."""
    arr = _as_joint(j)
    return _entropy_unchecked(arr) - _entropy_unchecked(arr.sum(axis=0))


def mutual_information(j) -> float:
    """``I(X; Y) = H(X) - H(X | Y)``."""
    arr = _as_joint(j)
    hx = _entropy_unchecked(arr.sum(axis=1))
    return hx - (_entropy_unchecked(arr) - _entropy_unchecked(arr.sum(axis=0)))


def grouping_axiom_rhs(ps: Sequence[float], qs: Sequence[float]) -> float:
    """Right-hand side of the grouping axiom for the split ``ps | qs``.

    Returns ``H(p, q) + p H(ps / p) + q H(qs / q)`` with ``p = sum(ps)`` and
    ``q = sum(qs)``. This equals ``entropy(ps + qs)`` whenever both groups
    carry positive mass.
    """
    ps = np.asarray(ps, dtype=float)
    qs = np.asarray(qs, dtype=float)
    if ps.size == 0 or qs.size == 0:
        raise DistributionError("both groups must be non-empty")
    as_distribution(np.concatenate([ps, qs]))
    p = math.fsum(ps.tolist())
    q = math.fsum(qs.tolist())
    if p <= 0.0 or q <= 0.0:
        raise DistributionError("grouping axiom needs both group masses positive")
    outer = _entropy_unchecked(np.array([p, q]))
    return outer + p * _entropy_unchecked(ps / p) + q * _entropy_unchecked(qs / q)
