"""Deterministic local-hidden-variable strategies and their bad-word counts.

A deterministic strategy fixes, per station, the result it would report for
either setting. Its predictions on every configuration depend only on two
aggregates (the product of the ``l`` answers and the set of stations whose two
answers disagree), so the 4^q raw strategies collapse to 2^(q+1) canonical
classes. A word whose predicted total differs from its eigenvalue is a bad
word; the minimal bad-word count over all strategies is the classical floor
on the failure rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .configs import (
    ENUMERATION_LIMIT,
    Configuration,
    enumerate_words,
    word_count,
    word_eigenvalue,
)
from .errors import CapacityError, DomainError

#: Raw strategy spaces up to this q (4^q entries) stay brute-forceable.
BRUTE_FORCE_LIMIT = 8


@dataclass(frozen=True)
class DeterministicStrategy:
    """Per-station answer table: ``answers[k] = (a, b)`` for settings l and r."""

    q: int
    answers: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.q != len(self.answers):
            raise DomainError(
                f"expected {self.q} answer pairs, got {len(self.answers)}"
            )
        for k, (a, b) in enumerate(self.answers):
            if a not in (+1, -1) or b not in (+1, -1):
                raise DomainError(
                    f"answers must be +1 or -1, station {k + 1} has {(a, b)}"
                )

    @classmethod
    def all_plus(cls, q: int) -> "DeterministicStrategy":
        """The strategy answering +1 everywhere."""
        return cls(q=q, answers=((+1, +1),) * q)

    @classmethod
    def from_masks(cls, q: int, a_mask: int, b_mask: int) -> "DeterministicStrategy":
        """Build from sign bit masks (bit k set means station k+1 answers -1)."""
        return cls(
            q=q,
            answers=tuple(
                (1 - 2 * (a_mask >> k & 1), 1 - 2 * (b_mask >> k & 1))
                for k in range(q)
            ),
        )

    def predict_total(self, config: Configuration) -> int:
        """Product of the per-station answers selected by `config`."""
        if config.q != self.q:
            raise DomainError(
                f"strategy has {self.q} stations, configuration has {config.q}"
            )
        total = 1
        for k, (a, b) in enumerate(self.answers):
            total *= b if config.r_mask >> k & 1 else a
        return total


@dataclass(frozen=True)
class CanonicalStrategy:
    """Prediction-equivalent reduction of a deterministic strategy.

    `a_sign` is the product of all l answers; bit k of `t_mask` is set when
    station k+1 answers differently under the two settings. The predicted
    total for a configuration is ``a_sign * (-1)**|r_mask & t_mask|``.
    """

    q: int
    a_sign: int
    t_mask: int

    def __post_init__(self) -> None:
        if self.a_sign not in (+1, -1):
            raise DomainError(f"a_sign must be +1 or -1, got {self.a_sign}")
        if not 0 <= self.t_mask < (1 << self.q):
            raise DomainError(
                f"t_mask {self.t_mask:#x} has bits outside the {self.q} stations"
            )


@dataclass(frozen=True)
class BadWordReport:
    """A strategy together with how many words it gets wrong."""

    strategy: CanonicalStrategy
    bad_count: int
    probability: Fraction
    bad_words: Optional[tuple[Configuration, ...]] = None


def canonicalize(strategy: DeterministicStrategy) -> CanonicalStrategy:
    """Reduce a raw strategy to its canonical class."""
    a_sign = 1
    t_mask = 0
    for k, (a, b) in enumerate(strategy.answers):
        a_sign *= a
        if a * b == -1:
            t_mask |= 1 << k
    return CanonicalStrategy(q=strategy.q, a_sign=a_sign, t_mask=t_mask)


def predict_total(strategy: CanonicalStrategy, config: Configuration) -> int:
    """Predicted total result, ``a_sign * (-1)**|r_mask & t_mask|``."""
    if strategy.q != config.q:
        raise DomainError(
            f"strategy has {strategy.q} stations, configuration has {config.q}"
        )
    overlap = (strategy.t_mask & config.r_mask).bit_count()
    return strategy.a_sign if overlap % 2 == 0 else -strategy.a_sign


def bad_word_count_naive(
    strategy: CanonicalStrategy, list_words: bool = True
) -> BadWordReport:
    """Count bad words by walking every word of the strategy's q.

    The enumeration is deliberately direct; it is the reference the
    closed-form counter is checked against. Capped at q <= 24.
    """
    if strategy.q > ENUMERATION_LIMIT:
        raise CapacityError(
            f"naive counting supports q <= {ENUMERATION_LIMIT}, got {strategy.q}"
        )
    bad: list[Configuration] = []
    count = 0
    for config, eigenvalue in enumerate_words(strategy.q):
        if predict_total(strategy, config) != eigenvalue:
            count += 1
            if list_words:
                bad.append(config)
    return BadWordReport(
        strategy=strategy,
        bad_count=count,
        probability=Fraction(count, 1 << strategy.q),
        bad_words=tuple(bad) if list_words else None,
    )


def bad_word_count_analytic(q: int, a_sign: int, m: int) -> int:
    """Bad words of any strategy with |t_mask| = m and the given a_sign.

    Words are grouped by their r count R and by the overlap j between the
    r stations and the m disagreeing stations; the prediction on such a word
    is ``a_sign * (-1)**j`` and there are C(m, j) * C(q - m, R - j) of them.
    Exact integer arithmetic, O(q^2) terms.
    """
    if a_sign not in (+1, -1):
        raise DomainError(f"a_sign must be +1 or -1, got {a_sign}")
    if not 0 <= m <= q:
        raise DomainError(f"m must be between 0 and q={q}, got {m}")
    if q < 1:
        raise DomainError(f"station count must be at least 1, got {q}")
    total = 0
    for r in range(1, q + 1, 2):
        eigenvalue = word_eigenvalue(r)
        for j in range(0, min(m, r) + 1):
            if r - j > q - m:
                continue
            prediction = a_sign if j % 2 == 0 else -a_sign
            if prediction != eigenvalue:
                total += math.comb(m, j) * math.comb(q - m, r - j)
    return total


def minimize_bad_words(q: int) -> BadWordReport:
    """Strategy class minimizing the bad-word count, searched in closed form.

    Scans a_sign and m = |t_mask| (the only aggregates the count depends on)
    and breaks ties deterministically: smallest m first, then a_sign = +1,
    with the t_mask realized on the lowest m stations.
    """
    if q < 1:
        raise DomainError(f"station count must be at least 1, got {q}")
    best: Optional[tuple[int, int, int]] = None
    for m in range(q + 1):
        for a_sign in (+1, -1):
            count = bad_word_count_analytic(q, a_sign, m)
            if best is None or count < best[0]:
                best = (count, m, a_sign)
    count, m, a_sign = best
    strategy = CanonicalStrategy(q=q, a_sign=a_sign, t_mask=(1 << m) - 1)
    return BadWordReport(
        strategy=strategy,
        bad_count=count,
        probability=Fraction(count, 1 << q),
    )


def minimize_bad_words_brute_force(q: int) -> BadWordReport:
    """Minimum bad-word count over all 4^q raw strategies, evaluated directly.

    Every (a, b) answer table is scored against every word without going
    through the canonical reduction, so this is an independent check of the
    closed-form minimizer. Vectorized; q <= 8.
    """
    if not 1 <= q <= BRUTE_FORCE_LIMIT:
        raise CapacityError(
            f"brute force supports 1 <= q <= {BRUTE_FORCE_LIMIT}, got {q}"
        )
    masks = np.arange(1 << q, dtype=np.uint32)
    r = np.bitwise_count(masks)
    word_masks = masks[r % 2 == 1]
    eigen_bits = ((np.bitwise_count(word_masks) - 1) >> 1) & 1

    station_bits = (1 << q) - 1
    # parity of a answers on l stations, per (a_mask, word)
    l_part = np.bitwise_count(masks[:, None] & ~word_masks[None, :] & station_bits) & 1
    # parity of b answers on r stations, per (b_mask, word)
    r_part = np.bitwise_count(masks[:, None] & word_masks[None, :]) & 1
    # predicted sign bit for every (a_mask, b_mask, word)
    prediction = l_part[:, None, :] ^ r_part[None, :, :]
    bad_counts = (prediction != eigen_bits[None, None, :]).sum(axis=2)

    flat = int(np.argmin(bad_counts))
    a_mask, b_mask = divmod(flat, 1 << q)
    winner = DeterministicStrategy.from_masks(q, a_mask, b_mask)
    return BadWordReport(
        strategy=canonicalize(winner),
        bad_count=int(bad_counts.flat[flat]),
        probability=Fraction(int(bad_counts.flat[flat]), 1 << q),
    )


def mermin_bound(q: int) -> int:
    """Minimal bad-word count attainable by deterministic strategies.

    Exact integer, with separate even/odd branches:
    2^(q-2) - 2^((q-2)/2) for even q, 2^(q-2) - 2^((q-3)/2) for odd q.
    Both branches vanish through q = 2; q = 1 returns 0 by the same
    cancellation (the formal branch value 1/2 - 1/2).
    """
    if q < 1:
        raise DomainError(f"station count must be at least 1, got {q}")
    if q == 1:
        return 0
    if q % 2 == 0:
        return (1 << (q - 2)) - (1 << ((q - 2) // 2))
    return (1 << (q - 2)) - (1 << ((q - 3) // 2))


def mermin_sum(strategy: CanonicalStrategy, method: str = "auto") -> int:
    """Sum over words of eigenvalue times predicted total.

    `method` picks the route: "enumerate" walks every word (q <= 24),
    "analytic" uses the identity with the closed-form bad-word count,
    "auto" enumerates while capacity allows.
    """
    if method not in ("auto", "enumerate", "analytic"):
        raise DomainError(f"unknown method {method!r}")
    if method == "auto":
        method = "enumerate" if strategy.q <= ENUMERATION_LIMIT else "analytic"
    if method == "enumerate":
        if strategy.q > ENUMERATION_LIMIT:
            raise CapacityError(
                f"enumeration supports q <= {ENUMERATION_LIMIT}, got {strategy.q}"
            )
        return sum(
            eigenvalue * predict_total(strategy, config)
            for config, eigenvalue in enumerate_words(strategy.q)
        )
    bad = bad_word_count_analytic(
        strategy.q, strategy.a_sign, strategy.t_mask.bit_count()
    )
    return word_count(strategy.q) - 2 * bad


def max_classical_mermin_sum(q: int) -> int:
    """Largest mermin_sum any deterministic strategy can reach."""
    return word_count(q) - 2 * mermin_bound(q)


def all_canonical_strategies(q: int) -> Iterator[CanonicalStrategy]:
    """All 2^(q+1) canonical classes, ascending t_mask, a_sign +1 first."""
    if not 1 <= q <= ENUMERATION_LIMIT:
        raise CapacityError(
            f"enumeration supports 1 <= q <= {ENUMERATION_LIMIT}, got {q}"
        )
    for t_mask in range(1 << q):
        for a_sign in (+1, -1):
            yield CanonicalStrategy(q=q, a_sign=a_sign, t_mask=t_mask)
