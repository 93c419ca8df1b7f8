"""Measurement configurations of q stations and their word/string taxonomy.

A configuration records which of the two local settings each station applies:
``l`` or ``r``. Configurations with an odd number of ``r`` settings are words
(the entangled state is an eigenvector of the product observable, with a
definite total result); the rest are strings (the total result is an unbiased
coin). Station 1 is the leftmost letter in text form and bit 0 internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .errors import CapacityError, ConfigParseError, DomainError

#: Hard cap for bit-packed configurations.
MAX_STATIONS = 64
#: Cap for operations that walk all 2^(q-1) words of a given q.
ENUMERATION_LIMIT = 24

_LETTERS = {"l": 0, "r": 1}


@dataclass(frozen=True)
class Configuration:
    """Bit-packed choice of settings: bit k set means station k+1 applies ``r``."""

    q: int
    r_mask: int

    def __post_init__(self) -> None:
        if not 1 <= self.q <= MAX_STATIONS:
            raise CapacityError(
                f"station count must be between 1 and {MAX_STATIONS}, got {self.q}"
            )
        if not 0 <= self.r_mask < (1 << self.q):
            raise DomainError(
                f"r_mask {self.r_mask:#x} has bits outside the {self.q} stations"
            )

    @property
    def r_count(self) -> int:
        """Number of stations applying ``r``."""
        return self.r_mask.bit_count()

    @property
    def is_word(self) -> bool:
        return self.r_count % 2 == 1

    def text(self) -> str:
        """Letter form, station 1 first."""
        return "".join("r" if self.r_mask >> k & 1 else "l" for k in range(self.q))

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class Word:
    """Classification of a configuration whose total result is determined."""

    eigenvalue: int

    def __post_init__(self) -> None:
        if self.eigenvalue not in (+1, -1):
            raise DomainError(f"eigenvalue must be +1 or -1, got {self.eigenvalue}")

    kind = "word"


@dataclass(frozen=True)
class String:
    """Classification of a configuration whose total result is a fair coin."""

    kind = "string"


ConfigurationClass = Union[Word, String]


def parse_configuration(text: str) -> Configuration:
    """Parse a configuration from its letter form, e.g. ``"llr"``.

    Station 1 is the leftmost letter. Raises CapacityError for empty or
    overlong input and ConfigParseError (with the 1-based position) for any
    character other than ``l`` or ``r``.
    """
    if not text:
        raise CapacityError("configuration text is empty")
    if len(text) > MAX_STATIONS:
        raise CapacityError(
            f"configuration text has {len(text)} letters, limit is {MAX_STATIONS}"
        )
    mask = 0
    for k, ch in enumerate(text):
        bit = _LETTERS.get(ch)
        if bit is None:
            raise ConfigParseError(
                f"invalid letter {ch!r} at station {k + 1}; expected 'l' or 'r'",
                position=k + 1,
            )
        mask |= bit << k
    return Configuration(q=len(text), r_mask=mask)


def word_eigenvalue(r_count: int) -> int:
    """Total result of a word with `r_count` stations on ``r``: +1 or -1.

    Defined only for odd r_count, where the nominally imaginary unit raised
    to (r_count - 1) is real.
    """
    if r_count % 2 != 1:
        raise DomainError(f"eigenvalue is defined for odd r counts, got {r_count}")
    return +1 if r_count % 4 == 1 else -1


def classify(config: Configuration) -> ConfigurationClass:
    """Word (with eigenvalue) for odd r count, String for even."""
    r = config.r_count
    if r % 2 == 1:
        return Word(eigenvalue=word_eigenvalue(r))
    return String()


def enumerate_configurations(q: int) -> Iterator[Configuration]:
    """All 2^q configurations in ascending r_mask order."""
    _check_enumeration_capacity(q)
    for mask in range(1 << q):
        yield Configuration(q=q, r_mask=mask)


def enumerate_words(q: int) -> Iterator[tuple[Configuration, int]]:
    """All configurations with odd r count, with eigenvalues, ascending r_mask."""
    _check_enumeration_capacity(q)
    for mask in range(1 << q):
        r = mask.bit_count()
        if r % 2 == 1:
            yield Configuration(q=q, r_mask=mask), word_eigenvalue(r)


def word_count(q: int) -> int:
    """Number of words among the 2^q configurations: exactly 2^(q-1).

    Returns an exact (arbitrary-precision) integer for any q >= 1.
    """
    if q < 1:
        raise DomainError(f"station count must be at least 1, got {q}")
    return 1 << (q - 1)


def _check_enumeration_capacity(q: int) -> None:
    if not 1 <= q <= ENUMERATION_LIMIT:
        raise CapacityError(
            f"enumeration supports 1 <= q <= {ENUMERATION_LIMIT}, got {q}"
        )
