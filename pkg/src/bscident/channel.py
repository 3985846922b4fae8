"""Binary symmetric channels and their n-th extensions.

Words of an n-fold extension are integers ``0 .. 2**n - 1``; bit ``i`` of the
integer is the symbol carried by copy ``i``. The channel entry for input word
``u`` and output word ``v`` is ``p**(n - d) * q**d`` with ``d`` the Hamming
distance between ``u`` and ``v``, so nothing needs an explicit Kronecker
product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import (
    binary_entropy,
    check_probability,
    conditional_entropy,
    mutual_information,
    _entropy_unchecked,
)

MAX_QUERY_N = 20  # per-entry queries
MAX_MATRIX_N = 10  # materialized 2**n x 2**n matrices (8 MiB at n=10)
MAX_BRUTE_N = 8  # joint-entropy enumeration


class CapacityGuardError(ValueError):
    """Raised when an extension order exceeds a memory/time guard."""


@dataclass(frozen=True)
class ExtensionSpec:
    base_p: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "base_p", check_probability(self.base_p, "base_p"))
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))


def _guard(n: int, limit: int, what: str) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if n > limit:
        raise CapacityGuardError(f"{what} limited to n <= {limit}, got n={n}")


def bsc(p: float) -> np.ndarray:
    """Channel matrix ``[[p, q], [q, p]]`` of a binary symmetric channel."""
    p = check_probability(p)
    q = 1.0 - p
    return np.array([[p, q], [q, p]])


def hamming_distances(n: int) -> np.ndarray:
    words = np.arange(2**n, dtype=np.uint32)
    return np.bitwise_count(words[:, None] ^ words[None, :]).astype(np.int64)


def extension_entry(p: float, n: int, u: int, v: int) -> float:
    """``P(output v | input u)`` for the n-th extension, without building the matrix."""
    p = check_probability(p)
    _guard(n, MAX_QUERY_N, "extension entry")
    if not (0 <= u < 2**n and 0 <= v < 2**n):
        raise ValueError(f"words must lie in [0, 2**{n})")
    d = (u ^ v).bit_count()
    return p ** (n - d) * (1.0 - p) ** d


def extension(p: float, n: int) -> np.ndarray:
    """The ``2**n x 2**n`` channel matrix of ``n`` independent parallel BSCs."""
    p = check_probability(p)
    _guard(n, MAX_MATRIX_N, "materialized extension")
    d = hamming_distances(n)
    return np.power(p, n - d) * np.power(1.0 - p, d)


def uniform_input_joint(spec: ExtensionSpec) -> np.ndarray:
    """Joint ``P(X = x, Y = y)`` of the extension driven by a uniform input word."""
    _guard(spec.n, MAX_BRUTE_N, "joint enumeration")
    return extension(spec.base_p, spec.n) / 2**spec.n


@dataclass(frozen=True)
class Pair:
    analytic: float
    brute_force: float | None

    @property
    def diff(self) -> float | None:
        if self.brute_force is None:
            return None
        return abs(self.analytic - self.brute_force)


@dataclass(frozen=True)
class Theorem1Report:
    spec: ExtensionSpec
    H_X: Pair
    H_Y: Pair
    H_X_given_Y: Pair
    capacity: Pair
    H_Y_given_X: float | None = None

    @property
    def analytic_only(self) -> bool:
        return self.H_X.brute_force is None

    def to_record(self) -> dict:
        rec = {"p": self.spec.base_p, "n": self.spec.n, "analytic_only": self.analytic_only}
        for name in ("H_X", "H_Y", "H_X_given_Y", "capacity"):
            pair = getattr(self, name)
            rec[name] = {"analytic": pair.analytic, "brute_force": pair.brute_force,
                         "abs_diff": pair.diff}
        return rec


def theorem1(spec: ExtensionSpec, brute_force: bool = True) -> Theorem1Report:
    """Input/output entropies and capacity of the n-th extension under uniform input.

    Analytic values are ``n``, ``n``, ``n h(p)`` and ``n (1 - h(p))``. For
    ``n <= 8`` they are paired with values computed from the full joint; above
    that the brute-force side is ``None``.
    """
    n, p = spec.n, spec.base_p
    h = binary_entropy(p)
    analytic = dict(H_X=float(n), H_Y=float(n), H_X_given_Y=n * h, capacity=n * (1.0 - h))
    if not brute_force or n > MAX_BRUTE_N:
        return Theorem1Report(spec, **{k: Pair(v, None) for k, v in analytic.items()})

    joint = uniform_input_joint(spec)
    brute = dict(
        H_X=_entropy_unchecked(joint.sum(axis=1)),
        H_Y=_entropy_unchecked(joint.sum(axis=0)),
        H_X_given_Y=conditional_entropy(joint),
        capacity=mutual_information(joint),
    )
    return Theorem1Report(
        spec,
        **{k: Pair(analytic[k], brute[k]) for k in analytic},
        H_Y_given_X=conditional_entropy(joint.T),
    )
