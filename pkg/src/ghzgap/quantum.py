"""Quantum predictions for the entangled q-station measurement scenario.

Outcome statistics follow a parity law that needs no state vector: on a word
the q results are uniform over the sign tuples whose product equals the
word's eigenvalue, on a string they are uniform over all tuples, and each
station's result is then flipped independently with the per-station error
probability. A 2^q state-vector oracle (small q only) cross-checks both the
eigenvalue taxonomy and this sampling law from first principles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .configs import Configuration, classify, Word
from .errors import CapacityError, DomainError

#: State-vector construction stays affordable up to this q.
ORACLE_LIMIT = 8

#: Switch point above which (1 - 2*eps)**q is evaluated in the log domain.
_LOG_DOMAIN_Q = 1000.0


@dataclass(frozen=True)
class NoiseModel:
    """Independent per-station probability of reporting the wrong result."""

    epsilon: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 0.5:
            raise DomainError(
                f"error probability must lie in [0, 1/2], got {self.epsilon}"
            )


@dataclass(frozen=True)
class OutcomeTuple:
    """The q per-station results of one observation, each +1 or -1."""

    results: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.results:
            raise DomainError("an outcome needs at least one station result")
        for k, s in enumerate(self.results):
            if s not in (+1, -1):
                raise DomainError(f"results must be +1 or -1, station {k + 1} has {s}")

    @property
    def q(self) -> int:
        return len(self.results)

    @property
    def total(self) -> int:
        """Product of the per-station results."""
        return math.prod(self.results)

    def flipped(self, flip_mask: int) -> "OutcomeTuple":
        """Copy with the results of the masked stations negated."""
        if not 0 <= flip_mask < (1 << self.q):
            raise DomainError(f"flip mask {flip_mask:#x} exceeds {self.q} stations")
        return OutcomeTuple(
            results=tuple(
                -s if flip_mask >> k & 1 else s for k, s in enumerate(self.results)
            )
        )


def parity_attenuation(q: float, noise: NoiseModel) -> float:
    """Expected sign retention (1 - 2*eps)**q of a q-fold product under flips.

    Each independent flip inverts the product's sign, so its expectation is
    attenuated by this factor. Evaluated in the log domain for large q to
    avoid spurious under/overflow in intermediate powers.
    """
    base = 1.0 - 2.0 * noise.epsilon
    if q <= _LOG_DOMAIN_Q:
        return base**q
    if base == 0.0:
        return 0.0
    return math.exp(q * math.log1p(-2.0 * noise.epsilon))


def failure_probability_sum(q: int, noise: NoiseModel) -> float:
    """Failure probability as the explicit odd-error binomial sum.

    Half the configurations are words; on those, a failure occurs exactly
    when an odd number of stations err, hence the 1/2 prefactor and the sum
    over odd error counts j.
    """
    if q < 1:
        raise DomainError(f"station count must be at least 1, got {q}")
    eps = noise.epsilon
    terms = [
        math.comb(q, j) * eps**j * (1.0 - eps) ** (q - j) for j in range(1, q + 1, 2)
    ]
    return 0.5 * math.fsum(terms)


def failure_probability_closed(q: float, noise: NoiseModel) -> float:
    """Closed form 1/4 - (1/4)(1 - 2*eps)^q of the odd-error sum.

    Accepts real q so that astronomically large station counts evaluate
    stably; agrees with the sum form to better than 1e-12 for integer q.
    """
    if q < 1:
        raise DomainError(f"station count must be at least 1, got {q}")
    return 0.25 - 0.25 * parity_attenuation(q, noise)


def failure_probability_exact(q: int, epsilon: Fraction) -> Fraction:
    """Closed form evaluated in exact rational arithmetic."""
    if q < 1:
        raise DomainError(f"station count must be at least 1, got {q}")
    if not 0 <= epsilon <= Fraction(1, 2):
        raise DomainError(f"error probability must lie in [0, 1/2], got {epsilon}")
    return Fraction(1, 4) - Fraction(1, 4) * (1 - 2 * epsilon) ** q


def sample_result_bits(
    config_bits: np.ndarray, noise: NoiseModel, rng: np.random.Generator
) -> np.ndarray:
    """Draw result bits for a batch of configurations given as bit rows.

    `config_bits` has shape (n, q) with entry 1 where the station applies
    ``r``. The returned array has the same shape with entry 1 meaning the
    station reported -1. Rows with an odd r count get their last station
    adjusted so the noiseless total matches the word eigenvalue, which keeps
    the draw uniform over the parity-consistent tuples; even rows stay
    uniform over all tuples. Station errors are then applied as independent
    bit flips.
    """
    n, q = config_bits.shape
    r = config_bits.sum(axis=1, dtype=np.int64)
    is_word = (r & 1).astype(np.uint8)
    eigen_bits = (((r - 1) >> 1) & 1).astype(np.uint8)

    bits = rng.integers(0, 2, size=(n, q), dtype=np.uint8)
    parity = (bits.sum(axis=1, dtype=np.int64) & 1).astype(np.uint8)
    bits[:, -1] ^= (parity ^ eigen_bits) & is_word
    if noise.epsilon > 0.0:
        bits ^= (rng.random(size=(n, q)) < noise.epsilon).astype(np.uint8)
    return bits


def sample_outcome_batch(
    config: Configuration, noise: NoiseModel, rng: np.random.Generator, size: int
) -> np.ndarray:
    """`size` independent draws for one configuration, as a (size, q) sign matrix."""
    if size < 1:
        raise DomainError(f"sample size must be at least 1, got {size}")
    row = np.array(
        [config.r_mask >> k & 1 for k in range(config.q)], dtype=np.uint8
    )
    bits = sample_result_bits(np.tile(row, (size, 1)), noise, rng)
    return (1 - 2 * bits.astype(np.int8)).astype(np.int8)


def sample_outcomes(
    config: Configuration, noise: NoiseModel, rng: np.random.Generator
) -> OutcomeTuple:
    """One observation of the entangled state under the given configuration."""
    signs = sample_outcome_batch(config, noise, rng, size=1)[0]
    return OutcomeTuple(results=tuple(int(s) for s in signs))


# ---------------------------------------------------------------------------
# State-vector oracle
# ---------------------------------------------------------------------------

_SIGMA_L = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_R = np.array([[0, -1j], [1j, 0]], dtype=complex)

# Rows are the measurement-basis bras for outcome +1 and -1.
_BASIS_L = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_BASIS_R = np.array([[1, -1j], [1, 1j]], dtype=complex) / math.sqrt(2)


@dataclass(frozen=True)
class OracleEntry:
    """Oracle result for a single configuration."""

    configuration: Configuration
    kind: str
    eigenvalue: int | None
    expectation: float
    expectation_error: float
    law_error: float


@dataclass(frozen=True)
class OracleReport:
    """State-vector verification of every configuration at one q."""

    q: int
    entries: tuple[OracleEntry, ...]
    max_expectation_error: float
    max_law_error: float


def entangled_state(q: int) -> np.ndarray:
    """Amplitude tensor of the q-station entangled state, shape (2,)*q."""
    if not 1 <= q <= ORACLE_LIMIT:
        raise CapacityError(f"state vector supports 1 <= q <= {ORACLE_LIMIT}, got {q}")
    psi = np.zeros((2,) * q, dtype=complex)
    psi[(0,) * q] = 1.0 / math.sqrt(2.0)
    psi[(1,) * q] = 1.0j / math.sqrt(2.0)
    return psi


def _apply_per_station(state: np.ndarray, mats: list[np.ndarray]) -> np.ndarray:
    out = state
    for axis, mat in enumerate(mats):
        out = np.moveaxis(np.tensordot(mat, out, axes=(1, axis)), 0, axis)
    return out


def product_observable_expectation(config: Configuration) -> float:
    """Exact expectation of the product observable on the entangled state."""
    psi = entangled_state(config.q)
    mats = [
        _SIGMA_R if config.r_mask >> k & 1 else _SIGMA_L for k in range(config.q)
    ]
    value = np.vdot(psi, _apply_per_station(psi, mats))
    if abs(value.imag) > 1e-12:
        raise AssertionError(f"expectation unexpectedly complex: {value}")
    return float(value.real)


def joint_outcome_probabilities(config: Configuration) -> np.ndarray:
    """Exact joint law of the q results, shape (2,)*q.

    Axis k is station k+1; index 0 along an axis is the +1 outcome. Computed
    by rotating the state into the per-station measurement eigenbases.
    """
    psi = entangled_state(config.q)
    mats = [
        _BASIS_R if config.r_mask >> k & 1 else _BASIS_L for k in range(config.q)
    ]
    amplitudes = _apply_per_station(psi, mats)
    return np.abs(amplitudes) ** 2


def _parity_law(config: Configuration) -> np.ndarray:
    """The sampling law the analytic sampler implements, shape (2,)*q."""
    q = config.q
    cls = classify(config)
    index_parity = np.zeros((2,) * q, dtype=np.uint8)
    for axis in range(q):
        shape = [1] * q
        shape[axis] = 2
        index_parity ^= np.arange(2, dtype=np.uint8).reshape(shape)
    if isinstance(cls, Word):
        eigen_bit = 0 if cls.eigenvalue == +1 else 1
        return np.where(index_parity == eigen_bit, 2.0 ** (1 - q), 0.0)
    return np.full((2,) * q, 2.0**-q)


def statevector_oracle(q: int) -> OracleReport:
    """Check every configuration of q stations against the state vector.

    For each configuration the oracle compares (a) the product-observable
    expectation with the word eigenvalue (or 0 for strings) and (b) the
    exact joint outcome law with the parity law used by the sampler.
    """
    if not 1 <= q <= ORACLE_LIMIT:
        raise CapacityError(f"oracle supports 1 <= q <= {ORACLE_LIMIT}, got {q}")
    entries = []
    for mask in range(1 << q):
        config = Configuration(q=q, r_mask=mask)
        cls = classify(config)
        eigenvalue = cls.eigenvalue if isinstance(cls, Word) else None
        expectation = product_observable_expectation(config)
        expectation_error = abs(expectation - (eigenvalue or 0))
        law_error = float(
            np.max(np.abs(joint_outcome_probabilities(config) - _parity_law(config)))
        )
        entries.append(
            OracleEntry(
                configuration=config,
                kind=cls.kind,
                eigenvalue=eigenvalue,
                expectation=expectation,
                expectation_error=expectation_error,
                law_error=law_error,
            )
        )
    return OracleReport(
        q=q,
        entries=tuple(entries),
        max_expectation_error=max(e.expectation_error for e in entries),
        max_law_error=max(e.law_error for e in entries),
    )
