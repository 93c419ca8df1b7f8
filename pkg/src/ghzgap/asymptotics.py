"""Quantum-classical failure gap: exact values, large-q limits, thresholds.

The best deterministic strategy still fails on a fraction of configurations
that approaches 1/4 from below as q grows, while the quantum failure
probability rises toward 1/4 from below once per-station errors act on more
and more stations. Their difference decays like (1/4)(1-2*eps)^q, so for any
error level a station count exists beyond which no experiment of a given
resolution can separate the two models. These helpers evaluate all of that
stably up to station counts of order 10^27 (a few kilograms of matter).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError
from .quantum import NoiseModel, failure_probability_closed, parity_attenuation
from .strategies import mermin_bound

#: 2022 SI definition, exact.
AVOGADRO = 6.02214076e23

#: Molar mass of water in kg/mol.
WATER_MOLAR_MASS_KG = 0.018015

#: Countable constituents per water molecule under each convention.
CONSTITUENT_FACTORS = {
    "electrons-nucleons": 28,  # 10 electrons + 18 nucleons
    "atoms": 3,
    "molecules": 1,
}

#: Published reference value for the per-station error below which a 4 kg
#: water-based system would still show a >1e-2 failure-rate difference.
#: Juxtaposed in reports with the threshold this module derives, which
#: comes out lower; the discrepancy is reported, not resolved.
REFERENCE_EPSILON = 6e-28


@dataclass(frozen=True)
class GapReport:
    """Failure probabilities of both models at one (q, epsilon) point.

    Exact fields are filled only on the integer-q path; for real q (the
    macroscopic regime) only the asymptotic gap is meaningful.
    """

    q: float
    epsilon: float
    p_qm: float
    p_classical_exact: Optional[float]
    p_classical_limit: float
    gap_exact: Optional[float]
    gap_asymptotic: float


@dataclass(frozen=True)
class MacroscopicReport:
    """Constituent count and error thresholds for a mass of water."""

    mass_kg: float
    convention: str
    q: float
    delta: float
    epsilon_derived: float
    epsilon_reference: float
    gap_at_derived: float
    gap_at_reference: float


def classical_failure_probability(q: int) -> Fraction:
    """Failure probability of the best deterministic strategy, exact.

    Equals the minimal bad-word count over 2^q configurations; float() of
    the result is the real value (exact for q ≤ 50 or so).
    """
    if q < 2:
        raise DomainError(f"classical failure probability needs q >= 2, got {q}")
    return Fraction(mermin_bound(q), 1 << q)


def gap_asymptotic(q: float, noise: NoiseModel) -> float:
    """Leading-order gap (1/4)(1 - 2*eps)^q, stable for huge q."""
    if q < 1:
        raise DomainError(f"station count must be at least 1, got {q}")
    return 0.25 * parity_attenuation(q, noise)


def gap(q: float, noise: NoiseModel) -> GapReport:
    """Full gap report at one point.

    Integer q ≥ 2 fills the exact classical probability and exact gap; any
    real q ≥ 1 (e.g. 4e27) fills the asymptotic fields only.
    """
    asymptotic = gap_asymptotic(q, noise)
    p_qm = failure_probability_closed(q, noise)
    if isinstance(q, int) and not isinstance(q, bool):
        p_classical = float(classical_failure_probability(q))
        return GapReport(
            q=q,
            epsilon=noise.epsilon,
            p_qm=p_qm,
            p_classical_exact=p_classical,
            p_classical_limit=0.25,
            gap_exact=p_classical - p_qm,
            gap_asymptotic=asymptotic,
        )
    return GapReport(
        q=q,
        epsilon=noise.epsilon,
        p_qm=p_qm,
        p_classical_exact=None,
        p_classical_limit=0.25,
        gap_exact=None,
        gap_asymptotic=asymptotic,
    )


def gap_exact_fraction(q: int, epsilon: Fraction) -> Fraction:
    """Exact rational gap: classical failure probability minus quantum."""
    p_qm = Fraction(1, 4) - Fraction(1, 4) * (1 - 2 * epsilon) ** q
    return classical_failure_probability(q) - p_qm


def gap_asymptotic_fraction(q: int, epsilon: Fraction) -> Fraction:
    """Exact rational value of the asymptotic gap (1/4)(1 - 2*eps)^q."""
    if q < 1:
        raise DomainError(f"station count must be at least 1, got {q}")
    return Fraction(1, 4) * (1 - 2 * epsilon) ** q


def epsilon_threshold(q: float, delta: float) -> float:
    """Per-station error at which the asymptotic gap equals delta.

    Inverts (1/4)(1 - 2*eps)^q = delta as eps = (1 - (4*delta)^(1/q))/2,
    evaluated as -expm1(log(4*delta)/q)/2 so that q ~ 1e27 loses no
    precision. delta = 1/4 returns 0; larger delta has no solution.
    """
    if q < 1:
        raise DomainError(f"station count must be at least 1, got {q}")
    if not 0.0 < delta <= 0.25:
        raise DomainError(
            f"gap target must lie in (0, 1/4] for a nonnegative threshold, got {delta}"
        )
    return -0.5 * math.expm1(math.log(4.0 * delta) / q)


def particles_in_mass(mass_kg: float, convention: str = "electrons-nucleons") -> float:
    """Constituent count of a mass of water under the chosen convention.

    The default counts 10 electrons plus 18 nucleons per molecule (28), the
    convention under which 4 kg lands on ~4e27.
    """
    if mass_kg <= 0:
        raise DomainError(f"mass must be positive, got {mass_kg}")
    try:
        factor = CONSTITUENT_FACTORS[convention]
    except KeyError:
        options = ", ".join(sorted(CONSTITUENT_FACTORS))
        raise DomainError(f"unknown convention {convention!r}; options: {options}")
    return (mass_kg / WATER_MOLAR_MASS_KG) * AVOGADRO * factor


def macroscopic_report(
    mass_kg: float,
    delta: float,
    convention: str = "electrons-nucleons",
    reference_epsilon: float = REFERENCE_EPSILON,
) -> MacroscopicReport:
    """Thresholds and gaps for a macroscopic mass treated as one entangled system.

    Reports the error threshold derived from the gap formula next to the
    published reference value, with the asymptotic gap evaluated at both.
    """
    q = particles_in_mass(mass_kg, convention)
    derived = epsilon_threshold(q, delta)
    return MacroscopicReport(
        mass_kg=mass_kg,
        convention=convention,
        q=q,
        delta=delta,
        epsilon_derived=derived,
        epsilon_reference=reference_epsilon,
        gap_at_derived=gap_asymptotic(q, NoiseModel(derived)),
        gap_at_reference=gap_asymptotic(q, NoiseModel(reference_epsilon)),
    )
