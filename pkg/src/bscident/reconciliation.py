"""Parity-exchange reconciliation of two correlated bit strings.

Both parties split their strings into blocks of ``t`` bits and publish each
block's parity. Blocks whose parities differ are thrown away; from a block
whose parities match, each party keeps only the first bit. Repeating this
drives the agreement probability of surviving positions towards one.

Alongside the Monte Carlo simulation every round carries the analytic
prediction and an information ledger: ``n (1 - h(p))`` bits of mutual
information before the round split into what the survivors still share,
what the disclosed parities used up, and (for ``t > 2``) what went out with
the discarded bits.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .entropy import DomainError, binary_entropy, check_probability, entropy
from .identities import IdentityReport, even_mass_closed

DEFAULT_SEED = 20240101
DEFAULT_THRESHOLD = 0.01
DEFAULT_T_MAX = 64


@dataclass(frozen=True)
class CorrelationModel:
    p: float
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        object.__setattr__(self, "p", check_probability(self.p))
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True, eq=False)
class BitPair:
    """Two equal-length bit arrays; ``p`` is the nominal agreement probability, if known."""

    a: np.ndarray
    b: np.ndarray
    p: float | None = None

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.uint8)
        b = np.asarray(self.b, dtype=np.uint8)
        if a.ndim != 1 or a.shape != b.shape:
            raise ValueError(f"bit arrays must be 1-D and equal length, got {a.shape} and {b.shape}")
        if a.size and (a.max() > 1 or b.max() > 1):
            raise ValueError("bit arrays may only contain 0 and 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if self.p is not None:
            object.__setattr__(self, "p", check_probability(self.p))

    @property
    def length(self) -> int:
        return int(self.a.size)

    def __len__(self) -> int:
        return self.length

    def disagreements(self) -> int:
        return int(np.count_nonzero(self.a != self.b))


def _rng(seed: int) -> np.random.Generator:
    # Philox is counter based: the stream is a pure function of (seed, position)
    return np.random.Generator(np.random.Philox(key=int(seed)))


def generate_pair(n: int, model: CorrelationModel) -> BitPair:
    """Uniform random ``a`` and a copy ``b`` with each bit flipped w.p. ``1 - p``."""
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    rng = _rng(model.seed)
    a = rng.integers(0, 2, size=int(n), dtype=np.uint8)
    flips = (rng.random(int(n)) >= model.p).astype(np.uint8)
    return BitPair(a, a ^ flips, model.p)


def spawn_seeds(master_seed: int, count: int) -> list[int]:
    """Independent 64-bit seeds for repeated runs, derived from one master seed."""
    ss = np.random.SeedSequence(int(master_seed))
    return [int(s.generate_state(1, np.uint64)[0]) for s in ss.spawn(count)]


def keep_probability(p: float, t: int) -> float:
    """``E_t``: chance that a block of ``t`` positions has matching parities."""
    return even_mass_closed(p, t)


def posterior(p: float, t: int) -> float:
    """Agreement probability of a kept first bit, ``p E_{t-1} / E_t``."""
    return p * keep_probability(p, t - 1) / keep_probability(p, t)


@dataclass
class RoundReport:
    t: int
    n_in: int
    n_out: float
    blocks_total: float
    blocks_kept: float
    p_in: float
    p_out_analytic: float
    p_out_empirical: float
    expected_blocks_kept: float
    info_before_analytic: float
    info_after_analytic: float
    wastage_parity_analytic: float
    wastage_discarded_analytic: float
    disagreements_in: int | None = None
    disagreements_out: int | None = None

    @property
    def wastage_bits_analytic(self) -> float:
        return self.wastage_parity_analytic + self.wastage_discarded_analytic

    @property
    def kept_fraction(self) -> float:
        return self.blocks_kept / self.blocks_total if self.blocks_total else math.nan

    def to_record(self) -> dict:
        rec = asdict(self)
        rec["kept_fraction"] = self.kept_fraction
        rec["wastage_bits_analytic"] = self.wastage_bits_analytic
        return rec


def _prediction(p: float, n_in: float, blocks: float, t: int) -> dict:
    """Analytic fields of a round over ``blocks`` full blocks taken from ``n_in`` positions."""
    if p is None:
        nan = math.nan
        return dict(p_out_analytic=nan, expected_blocks_kept=nan, info_before_analytic=nan,
                    info_after_analytic=nan, wastage_parity_analytic=nan,
                    wastage_discarded_analytic=nan)
    e_t = keep_probability(p, t)
    p_out = posterior(p, t) if e_t > 0 else math.nan
    before = n_in * (1.0 - binary_entropy(p))
    after = blocks * e_t * (1.0 - binary_entropy(p_out)) if e_t > 0 else 0.0
    parity = blocks * (1.0 - entropy([e_t, 1.0 - e_t]))
    return dict(
        p_out_analytic=p_out,
        expected_blocks_kept=blocks * e_t,
        info_before_analytic=before,
        info_after_analytic=after,
        wastage_parity_analytic=parity,
        wastage_discarded_analytic=before - after - parity,
    )


def analytic_round(p: float, n: float, t: int) -> RoundReport:
    """Expected statistics and information ledger of one round on ``n`` positions.

    Uses ``n / t`` blocks (not rounded down), matching the closed-form
    accounting. At ``t = 2`` the discarded-bit term is zero up to rounding.
    """
    p = check_probability(p)
    if p in (0.0, 1.0):
        raise DomainError(f"p={p} is degenerate")
    _check_t(t)
    blocks = n / t
    pred = _prediction(p, n, blocks, t)
    return RoundReport(
        t=t, n_in=n, n_out=pred["expected_blocks_kept"], blocks_total=blocks,
        blocks_kept=pred["expected_blocks_kept"], p_in=p, p_out_empirical=math.nan, **pred,
    )


def _check_t(t) -> None:
    if int(t) != t or t < 2:
        raise ValueError(f"block size must be an integer >= 2, got {t!r}")


def parity_round(pair: BitPair, t: int) -> tuple[BitPair, RoundReport]:
    """One round of parity comparison with blocks of ``t`` bits.

    Trailing positions that do not fill a block are dropped. Returns the
    surviving pair (its nominal ``p`` is the analytic posterior) and a report
    comparing empirical and analytic statistics.
    """
    _check_t(t)
    n = pair.length
    if t > n:
        raise ValueError(f"block size {t} exceeds array length {n}")
    m = n // t
    blocks_a = pair.a[: m * t].reshape(m, t)
    blocks_b = pair.b[: m * t].reshape(m, t)
    match = np.bitwise_xor.reduce(blocks_a, axis=1) == np.bitwise_xor.reduce(blocks_b, axis=1)
    a_out = blocks_a[match, 0].copy()
    b_out = blocks_b[match, 0].copy()
    kept = int(a_out.size)

    pred = _prediction(pair.p, n, m, t)
    dis_out = int(np.count_nonzero(a_out != b_out))
    p_emp = 1.0 - dis_out / kept if kept else math.nan
    report = RoundReport(
        t=int(t), n_in=n, n_out=kept, blocks_total=m, blocks_kept=kept, p_in=pair.p,
        p_out_empirical=p_emp, disagreements_in=pair.disagreements(),
        disagreements_out=dis_out, **pred,
    )
    p_next = pred["p_out_analytic"]
    return BitPair(a_out, b_out, None if p_next is None or math.isnan(p_next) else p_next), report


@dataclass
class OptimizeResult:
    p: float
    t_best: int
    rates: dict[int, float] = field(default_factory=dict)

    def to_record(self) -> dict:
        return {"p": self.p, "t_best": self.t_best,
                "rates": {str(t): r for t, r in self.rates.items()}}


def retained_rate(p: float, t: int) -> float:
    """Information kept per input position, ``(E_t / t) (1 - h(p'))``."""
    e_t = keep_probability(p, t)
    return e_t / t * (1.0 - binary_entropy(posterior(p, t)))


def optimize_block_size(p: float, t_max: int) -> OptimizeResult:
    """Block size in ``2..t_max`` maximizing the retained information rate.

    Ties go to the smaller block size.
    """
    p = check_probability(p)
    if not 0.5 < p < 1.0:
        raise DomainError(f"p={p} outside the reconciliation regime (0.5, 1)")
    if int(t_max) != t_max or t_max < 2:
        raise ValueError(f"t_max must be an integer >= 2, got {t_max!r}")
    rates = {t: retained_rate(p, t) for t in range(2, int(t_max) + 1)}
    best = max(rates, key=lambda t: (rates[t], -t))
    return OptimizeResult(p, best, rates)


@dataclass
class ProtocolRun:
    rounds: list[RoundReport]
    final_length: int
    residual_disagreements: int
    initial_length: int = 0
    final_pair: BitPair | None = field(default=None, repr=False)

    def to_record(self) -> dict:
        return {
            "initial_length": self.initial_length,
            "final_length": self.final_length,
            "residual_disagreements": self.residual_disagreements,
            "rounds": [r.to_record() for r in self.rounds],
        }


def _adaptive_block_size(p: float | None, length: int, t_max: int) -> int:
    if p is None or not 0.5 < p < 1.0:
        return 2
    return optimize_block_size(p, max(2, min(t_max, length))).t_best


def run_protocol(
    pair: BitPair,
    schedule: Sequence[int] | None = None,
    *,
    adaptive: bool = False,
    threshold: float = DEFAULT_THRESHOLD,
    t_max: int = DEFAULT_T_MAX,
) -> ProtocolRun:
    """Run parity rounds on ``pair``.

    With an explicit ``schedule`` each listed block size is applied in turn.
    In adaptive mode the block size is re-optimized from the current analytic
    agreement probability every round, and the run stops once the expected
    number of remaining disagreements ``n_k (1 - p_k)`` drops below
    ``threshold``. Either way the run ends early when the array becomes too
    short for the next block.
    """
    if adaptive == (schedule is not None):
        raise ValueError("give exactly one of a schedule or adaptive=True")
    if schedule is not None:
        schedule = list(schedule)
        if not schedule:
            raise ValueError("schedule is empty")
        for t in schedule:
            _check_t(t)
    elif adaptive and pair.p is None:
        raise ValueError("adaptive mode needs the nominal agreement probability of the pair")

    rounds: list[RoundReport] = []
    current = pair
    steps: Iterable[int | None] = schedule if schedule is not None else _forever()
    for t in steps:
        n = current.length
        if adaptive:
            if current.p is not None and n * (1.0 - current.p) < threshold:
                break
            t = _adaptive_block_size(current.p, n, t_max)
        if n == 0 or t > n:
            break
        current, report = parity_round(current, t)
        rounds.append(report)
    return ProtocolRun(rounds, current.length, current.disagreements(), pair.length, current)


def _forever():
    while True:
        yield None


def ledger_check(p: float, n: float) -> IdentityReport:
    """Capacity of ``n`` positions against what one round with pairs keeps and wastes.

    ``n (1 - h(p))`` on the left; on the right the information still shared by
    the ``(n/2)(p² + q²)`` survivors and the wastage ``(n/2)(1 - H(p²+q², 2pq))``.
    """
    p = check_probability(p)
    if p in (0.0, 1.0):
        raise DomainError(f"p={p} is degenerate")
    q = 1.0 - p
    even = p * p + q * q
    terms = {
        "retained": n / 2 * even * (1.0 - entropy([p * p / even, q * q / even])),
        "wastage": n / 2 * (1.0 - entropy([even, 2 * p * q])),
    }
    return IdentityReport("ledger", n * (1.0 - binary_entropy(p)), terms, {"p": p, "n": n})
