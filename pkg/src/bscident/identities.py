"""Both sides of the parity-grouping entropy identities.

Every identity here comes from splitting ``H(X | Y)`` for an extension of a
binary symmetric channel into the uncertainty of the error parity and the
uncertainty of the error pattern given its parity. Each function returns an
:class:`IdentityReport` whose ``terms`` are the individual right-hand-side
summands, so callers can see where the bits go and not only that they balance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .entropy import DomainError, binary_entropy, check_probability, entropy


@dataclass(frozen=True)
class IdentityReport:
    name: str
    lhs: float
    terms: dict[str, float]
    params: dict[str, object] = field(default_factory=dict)

    @property
    def rhs(self) -> float:
        return math.fsum(self.terms.values())

    @property
    def abs_diff(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_record(self) -> dict:
        return {
            "identity": self.name,
            **self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_diff": self.abs_diff,
            "terms": dict(self.terms),
        }


@dataclass(frozen=True)
class ParityDecomposition:
    """``n h(p) = H(Z | Y) + H(X | Y, Z)`` for a block of ``n`` positions, Z the parity."""

    n: int
    p: float
    H_Z_given_Y: float
    H_X_given_YZ: float
    even_mass: float
    # weight-entropy parts of H(X|Y,Z) for each parity class
    weight_terms: dict[str, float]
    # P(weight k) * log2 C(n, k): the equal-atom terms such as 3pq log2 3
    extra_terms: dict[str, float]

    @property
    def total(self) -> float:
        return self.H_Z_given_Y + self.H_X_given_YZ

    @property
    def abs_diff(self) -> float:
        return abs(self.total - self.n * binary_entropy(self.p))

    def to_record(self) -> dict:
        return {
            "identity": "general",
            "p": self.p,
            "n": self.n,
            "lhs": self.n * binary_entropy(self.p),
            "rhs": self.total,
            "abs_diff": self.abs_diff,
            "H_Z_given_Y": self.H_Z_given_Y,
            "H_X_given_YZ": self.H_X_given_YZ,
            "even_mass": self.even_mass,
            "terms": {**self.weight_terms, **self.extra_terms},
        }


def _open_unit(p: float, name: str = "p") -> float:
    p = check_probability(p, name)
    if p == 0.0 or p == 1.0:
        raise DomainError(f"{name}={p} is degenerate; identity terms are 0/0 at the endpoints")
    return p


def _h2(u: float, v: float) -> float:
    return entropy([u, v])


def identity_size2(p: float) -> IdentityReport:
    """``2h(p) = (p²+q²) h(p²/(p²+q²)) + 2pq + H(p²+q², 2pq)``."""
    p = _open_unit(p)
    q = 1.0 - p
    even = p * p + q * q
    odd = 2 * p * q
    terms = {
        "(p^2+q^2)H(p^2/(p^2+q^2), q^2/(p^2+q^2))": even * _h2(p * p / even, q * q / even),
        "2pq": odd,
        "H(p^2+q^2, 2pq)": _h2(even, odd),
    }
    return IdentityReport("size2", 2 * binary_entropy(p), terms, {"p": p})


def identity_size3(p: float) -> IdentityReport:
    """Blocks of three: parity entropy, two conditional terms and ``3pq log2 3``."""
    p = _open_unit(p)
    q = 1.0 - p
    even = p**3 + 3 * p * q * q
    odd = q**3 + 3 * q * p * p
    terms = {
        "H(p^3+3pq^2, q^3+3qp^2)": _h2(even, odd),
        "(p^3+3pq^2)H(p^3/., 3pq^2/.)": even * _h2(p**3 / even, 3 * p * q * q / even),
        "(q^3+3qp^2)H(q^3/., 3qp^2/.)": odd * _h2(q**3 / odd, 3 * q * p * p / odd),
        "3pq log2(3)": 3 * p * q * math.log2(3),
    }
    return IdentityReport("size3", 3 * binary_entropy(p), terms, {"p": p})


def f_term(p: float, q: float) -> float:
    """``f(p, q)``: the even-parity share of ``H(X | Y, Z)`` for blocks of three.

    Evaluated from its four-atom definition, before grouping; the grouped form
    is ``(p³+3pq²) H(p³/., 3pq²/.) + 3pq² log2 3``.
    """
    m = p**3 + 3 * p * q * q
    a = p * q * q / m
    return m * entropy([p**3 / m, a, a, a])


def identity_capacity_form(p: float) -> IdentityReport:
    """Blocks of two restated with capacities: ``2(1-h(p))`` as parity and kept-bit parts."""
    p = _open_unit(p)
    q = 1.0 - p
    even = p * p + q * q
    terms = {
        "1-H(p^2+q^2, 2pq)": 1.0 - _h2(even, 2 * p * q),
        "(p^2+q^2)(1-H(p^2/(p^2+q^2), q^2/(p^2+q^2)))": even
        * (1.0 - _h2(p * p / even, q * q / even)),
    }
    return IdentityReport("capacity", 2 * (1.0 - binary_entropy(p)), terms, {"p": p})


def _addition_terms(p1: float, p2: float) -> tuple[float, float, float, float]:
    """Mass and posterior arguments of the two-channel split.

    Returns ``(s, a, t, b)`` with ``s = p1p2 + q1q2``, ``a = p1p2/s``,
    ``t = p1q2 + p2q1`` and ``b = p1q2/t``.
    """
    q1, q2 = 1.0 - p1, 1.0 - p2
    s = p1 * p2 + q1 * q2
    t = p1 * q2 + p2 * q1
    return s, p1 * p2 / s, t, p1 * q2 / t


def addition_formula(p1: float, p2: float) -> IdentityReport:
    """``h(p1) + h(p2)`` split through two parallel BSCs with different parameters."""
    p1 = _open_unit(p1, "p1")
    p2 = _open_unit(p2, "p2")
    s, a, t, b = _addition_terms(p1, p2)
    terms = {
        "h(p1p2+q1q2)": binary_entropy(s),
        "(p1p2+q1q2)h(p1p2/(p1p2+q1q2))": s * binary_entropy(a),
        "(p1q2+p2q1)h(p1q2/(p1q2+p2q1))": t * binary_entropy(b),
    }
    return IdentityReport(
        "addition", binary_entropy(p1) + binary_entropy(p2), terms, {"p1": p1, "p2": p2}
    )


def addition_formula_chain(ps: Sequence[float]) -> IdentityReport:
    """``h(p1) + ... + h(pn)`` by folding the two-term formula from the left.

    After folding ``k`` parameters the decomposition is
    ``h(c_k) + (conditional terms)``, where ``c_k`` is the probability that the
    first ``k`` error bits have even parity. Folding in ``p_{k+1}`` applies the
    two-term formula to ``h(c_k) + h(p_{k+1})``, which replaces the head term
    ``h(c_k)`` by ``h(c_{k+1})`` and two new conditional terms.
    """
    ps = [_open_unit(p, f"ps[{i}]") for i, p in enumerate(ps)]
    if len(ps) < 2:
        raise ValueError("need at least two parameters")
    terms: dict[str, float] = {}
    c = ps[0]
    for k, p in enumerate(ps[1:], start=2):
        s, a, t, b = _addition_terms(c, p)
        terms[f"step{k}: s*h(a)"] = s * binary_entropy(a)
        terms[f"step{k}: t*h(b)"] = t * binary_entropy(b)
        c = s
    terms[f"h(c_{len(ps)})"] = binary_entropy(c)
    lhs = math.fsum(binary_entropy(p) for p in ps)
    return IdentityReport("addition_chain", lhs, terms, {"ps": list(ps)})


def even_mass_closed(p: float, n: int) -> float:
    """Probability of an even number of flips in ``n`` positions, ``(1 + (p - q)**n) / 2``."""
    return (1.0 + (2.0 * p - 1.0) ** n) / 2.0


def even_mass_sum(p: float, n: int) -> float:
    q = 1.0 - p
    return math.fsum(math.comb(n, k) * p ** (n - k) * q**k for k in range(0, n + 1, 2))


def general_block_decomposition(p: float, n: int) -> ParityDecomposition:
    """Parity split of ``n h(p)`` for blocks of ``n`` positions.

    Error patterns are grouped by Hamming weight ``k``; within a weight class
    the ``C(n, k)`` patterns are equally likely, which contributes
    ``P(weight k) log2 C(n, k)`` (for ``n = 3`` these sum to ``3pq log2 3``).
    The cost is O(n) instead of O(2**n).
    """
    p = _open_unit(p)
    if int(n) != n or not 2 <= n <= 20:
        raise ValueError(f"block size must be an integer in 2..20, got {n!r}")
    n = int(n)
    q = 1.0 - p
    weight_mass = [math.comb(n, k) * p ** (n - k) * q**k for k in range(n + 1)]
    even = math.fsum(weight_mass[0::2])
    odd = math.fsum(weight_mass[1::2])

    weight_terms = {}
    extra_terms = {}
    for label, mass, ks in (("even", even, range(0, n + 1, 2)), ("odd", odd, range(1, n + 1, 2))):
        # mass * H(weight | parity class)
        weight_terms[f"{label}: mass*H(weight|{label})"] = mass * entropy(
            [weight_mass[k] / mass for k in ks]
        )
        for k in ks:
            if math.comb(n, k) > 1:
                extra_terms[f"C({n},{k}) atoms: P(w={k})log2 C({n},{k})"] = weight_mass[
                    k
                ] * math.log2(math.comb(n, k))

    h_zy = entropy([even, odd])
    h_xyz = math.fsum([*weight_terms.values(), *extra_terms.values()])
    return ParityDecomposition(n, p, h_zy, h_xyz, even, weight_terms, extra_terms)


def milder_argument(p_star: float) -> float:
    """The ``p`` with ``p²/(p²+q²) = p_star``; it lies strictly between 1/2 and ``p_star``."""
    s = check_probability(p_star, "p_star")
    if not 0.5 < s < 1.0:
        raise DomainError(f"p_star={s} must lie in (0.5, 1)")
    r = math.sqrt(s / (1.0 - s))
    return r / (1.0 + r)


def refine_entropy_near_extreme(p_star: float, depth: int = 1) -> float:
    """``h(p_star)`` for ``p_star`` near 1, from entropies at a milder argument.

    Solves the blocks-of-two identity for its ``h(p²/(p²+q²))`` term. With
    ``depth > 1`` the entropy at the milder argument is itself refined the same
    way, moving each step closer to 1/2.
    """
    p = milder_argument(p_star)
    q = 1.0 - p
    even = p * p + q * q
    if depth > 1 and p > 0.5:
        hp = refine_entropy_near_extreme(p, depth - 1)
    else:
        hp = binary_entropy(p)
    return (2 * hp - 2 * p * q - _h2(even, 2 * p * q)) / even
