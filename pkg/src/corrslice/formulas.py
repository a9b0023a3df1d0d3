"""Closed-form volume-ratio curves for the triangle, square and cycle graphs.

These analytic formulas serve as oracles for the exact polyhedral pipeline:
every value they produce is also recomputed from vertex enumeration and
triangulation in the test suite.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial


class DomainError(ValueError):
    """Parameter outside the formula's domain."""


def _check(t: Fraction, lo: Fraction, hi: Fraction, lo_open=True, hi_open=True):
    if (t <= lo if lo_open else t < lo) or (t >= hi if hi_open else t > hi):
        raise DomainError(f"t={t} outside the supported range")


def k3_symmetric_ratio(t) -> Fraction:
    """Ratio of the triangle's symmetric slice volumes, piecewise in t."""
    t = Fraction(t)
    _check(t, Fraction(0), Fraction(1))
    if t > Fraction(1, 2):
        t = 1 - t
    if t <= Fraction(1, 3):
        return Fraction(1, 2)
    s = 3 - Fraction(1) / t
    return Fraction(1, 2) - s**3 / 6


def k3_skewed_ratio(t) -> Fraction:
    """Triangle ratio for marginals (t, t, 1/2 - t), 0 < t < 1/2."""
    t = Fraction(t)
    _check(t, Fraction(0), Fraction(1, 2))
    if t <= Fraction(1, 6):
        return Fraction(2, 3)
    if t <= Fraction(1, 4):
        s = 3 - Fraction(1) / (2 * t)
        return Fraction(2, 3) - s**3 / 6
    return 1 - (Fraction(1) / (2 * t) - 1) / 2


def k22_ratio(t) -> Fraction:
    """Ratio for the square graph's symmetric slices, piecewise in t."""
    t = Fraction(t)
    _check(t, Fraction(0), Fraction(1), hi_open=False)
    if t > Fraction(1, 2):
        t = 1 - t
    if t <= Fraction(1, 3):
        return Fraction(5, 6)
    s = 3 - Fraction(1) / t
    return (5 - s**4) / 6


def cn_ratio(n: int, t) -> Fraction:
    """Symmetric-slice ratio for the n-cycle, n >= 3, on 0 < t <= 1/2.

    Each odd-size set of sign flips cuts one scaled simplex out of the unit
    box once t passes its activation point; the max(0, .) form subsumes the
    per-window case analysis.
    """
    if n < 3:
        raise DomainError("cycle formula needs n >= 3")
    t = Fraction(t)
    _check(t, Fraction(0), Fraction(1, 2), hi_open=False)
    total = Fraction(1)
    for k in range(1, n + 1, 2):
        cut = k - Fraction(k - 1) / (2 * t)
        if cut > 0:
            total -= Fraction(comb(n, k), factorial(n)) * cut**n
    return total


def cn_parameters(n: int) -> tuple[Fraction, Fraction, Fraction]:
    """(fall-off, initial ratio, middle ratio) for the n-cycle."""
    if n < 3:
        raise DomainError("cycle parameters need n >= 3")
    return (
        Fraction(1, 3),
        1 - Fraction(1, factorial(n - 1)),
        1 - Fraction(2 ** (n - 1), factorial(n)),
    )
