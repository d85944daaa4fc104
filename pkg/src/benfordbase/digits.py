"""Leading digits in arbitrary integer bases and closed-form Benford quantities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_BASES = range(6, 71)


class DomainError(ValueError):
    """Input outside the domain where a digit quantity is defined."""


def _check_base(b: int) -> None:
    if int(b) != b or b < 2:
        raise DomainError(f"base must be an integer >= 2, got {b!r}")


def leading_digit(n: int, b: int) -> int:
    """Most significant digit of ``n`` written in base ``b``.

    Uses exact integer division, so arbitrarily large ``n`` is fine.

    >>> leading_digit(255, 16)
    15
    >>> leading_digit(729, 3)
    1
    """
    _check_base(b)
    n = int(n)
    if n < 1:
        raise DomainError(f"leading digit undefined for {n}")
    while n >= b:
        n //= b
    return n


def leading_digits(values: np.ndarray, b: int) -> np.ndarray:
    """Vectorised :func:`leading_digit` over an integer array.

    Object arrays holding Python ints are handled with the same code path,
    which keeps the arithmetic exact beyond the int64 range.
    """
    _check_base(b)
    v = np.array(values, copy=True)
    if v.size and (v < 1).any():
        raise DomainError("leading digit undefined for values < 1")
    mask = v >= b
    while mask.any():
        v[mask] //= b
        mask = v >= b
    return v.astype(np.int64)


@dataclass(frozen=True)
class BenfordPmf:
    """First-digit probabilities for one base; ``probs[d - 1]`` is P(d)."""

    base: int
    probs: np.ndarray

    def __getitem__(self, d: int) -> float:
        if not 1 <= d < self.base:
            raise DomainError(f"digit {d} not in 1..{self.base - 1}")
        return float(self.probs[d - 1])

    def __len__(self) -> int:
        return len(self.probs)


def benford_pmf(b: int) -> BenfordPmf:
    _check_base(b)
    d = np.arange(1, b, dtype=float)
    probs = np.log1p(1.0 / d) / math.log(b)
    probs.setflags(write=False)
    return BenfordPmf(int(b), probs)


def theoretical_ratio(d1: int, d2: int) -> float:
    """P(d1)/P(d2) under Benford's law; the ln(b) factors cancel."""
    if d1 < 1 or d2 < 1:
        raise DomainError(f"digits must be >= 1, got {d1}, {d2}")
    return math.log1p(1.0 / d1) / math.log1p(1.0 / d2)


def first_two_mass(b: int) -> float:
    """Probability that the leading digit is 1 or 2 in base ``b`` (b >= 4)."""
    _check_base(b)
    if b <= 3:
        raise DomainError(f"first_two_mass needs b > 3, got {b}")
    return (math.log(2.0) + math.log(1.5)) / math.log(b)
