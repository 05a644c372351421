"""Exact interval and refutation-point formulas for the k-law machinery.

All outputs are exact rationals over arbitrary-precision integers; (s+1)^k
overflows 64 bits already for modest k, so nothing here ever touches floats.
The bracket [s/t] is floor(s/t), and the binomial convention is C(n, r) = 0
for r > n (as math.comb provides).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, gcd

from .errors import DomainError

Interval = tuple[Fraction, Fraction]


def _check_fraction(t: int, s: int) -> None:
    if not (0 < t < s):
        raise DomainError(f"need 0 < t < s, got t/s = {t}/{s}")
    if gcd(t, s) != 1:
        raise DomainError(f"t/s = {t}/{s} must be in lowest terms")


def q_basic(k: int, s: int) -> Fraction:
    """q = ((s+1)^k - 1) / s; always an integer value."""
    if k < 1 or s < 1:
        raise DomainError("need k >= 1 and s >= 1")
    return Fraction((s + 1) ** k - 1, s)


def q_i_basic(k: int, s: int, i: int) -> Fraction:
    """q_i = q - ((s+1)^(k-i) - 1) / s, increasing from q_0 = 0 to q_k = q."""
    if not 0 <= i <= k:
        raise DomainError(f"need 0 <= i <= k, got i={i}")
    return q_basic(k, s) - Fraction((s + 1) ** (k - i) - 1, s)


def bracket(t: int, s: int) -> int:
    """[s/t] = floor(s/t)."""
    _check_fraction(t, s)
    return s // t


def strong_m(k: int, t: int, s: int) -> int:
    """m = C([s/t], k-2) + 1, the clique budget of the strengthened bound."""
    _check_fraction(t, s)
    if k < 4:
        raise DomainError("need k >= 4")
    return comb(k - 2, bracket(t, s)) + 1


def q_strong(k: int, t: int, s: int) -> Fraction:
    """q = ((s+1)^(k-2) * (1 + s*m) - 1) / s with m = strong_m(k, t, s)."""
    m = strong_m(k, t, s)
    return Fraction((s + 1) ** (k - 2) * (1 + s * m) - 1, s)


def q_i_strong(k: int, t: int, s: int, i: int) -> Fraction:
    """Strong-variant q_i, defined for 0 <= i <= k-2."""
    if not 0 <= i <= k - 2:
        raise DomainError(f"need 0 <= i <= k-2, got i={i}")
    m = strong_m(k, t, s)
    return q_strong(k, t, s) - Fraction((s + 1) ** (k - 2 - i) * (1 + s * m) - 1, s)


def _interval_from_q(q: Fraction, t: int, s: int) -> Interval:
    left = Fraction(t) * q / (s * q + 1)
    right = Fraction(t, s)
    return (left, right)


def interval_basic(k: int, t: int, s: int) -> Interval:
    """The k-critical-point-free interval (t*q/(s*q+1), t/s) with the basic q.

    Its width is exactly t / (s * (s+1)^k).
    """
    _check_fraction(t, s)
    if k < 4:
        raise DomainError("need k >= 4")
    return _interval_from_q(q_basic(k, s), t, s)


def interval_strong(k: int, t: int, s: int) -> Interval:
    """Same interval shape with the strengthened q; wider than the basic
    interval exactly when strong_improves(k, t, s)."""
    _check_fraction(t, s)
    if k < 4:
        raise DomainError("need k >= 4")
    return _interval_from_q(q_strong(k, t, s), t, s)


def strong_improves(k: int, t: int, s: int) -> bool:
    """True iff C([s/t], k-2) < s + 1, i.e. the strong interval is wider."""
    _check_fraction(t, s)
    if k < 4:
        raise DomainError("need k >= 4")
    return comb(k - 2, bracket(t, s)) < s + 1


def refutation_k1(m: int, k: int) -> int:
    """k1 = k - 10m + 8; requires k >= 10m - 5 so that k1 >= 3."""
    if m < 2:
        raise DomainError("need m >= 2")
    if k < 10 * m - 5:
        raise DomainError(f"need k >= 10m - 5 = {10 * m - 5}, got k={k}")
    return k - 10 * m + 8


def refutation_alpha(m: int, k: int) -> Fraction:
    """alpha = 2/m - 1 / (2^k1 * m * (m-1)): left of 2/m, the k-law fails here."""
    k1 = refutation_k1(m, k)
    return Fraction(2, m) - Fraction(1, 2 ** k1 * m * (m - 1))


def refutation_position(m: int, k: int) -> dict:
    """Report where the refutation point sits relative to the law intervals
    with right end 2/m (computed, not asserted: no universal ordering holds).
    """
    alpha = refutation_alpha(m, k)
    point = Fraction(2, m)
    t, s = point.numerator, point.denominator
    report: dict = {"alpha": alpha, "right_end": point}
    if 0 < point < 1:
        basic = interval_basic(k, t, s)
        strong = interval_strong(k, t, s)
        report["basic_interval"] = basic
        report["strong_interval"] = strong
        report["inside_basic"] = basic[0] < alpha < basic[1]
        report["inside_strong"] = strong[0] < alpha < strong[1]
    return report


@dataclass(frozen=True)
class LawParams:
    """Bundle of the derived law quantities for a target point t/s and depth k.

    t/s must be in lowest terms inside (0, 1); k >= 4.  The refutation-side
    quantity k1 uses the derived m and is only meaningful when k >= 10m - 5
    (see k1_valid).
    """

    t: int
    s: int
    k: int

    def __post_init__(self) -> None:
        _check_fraction(self.t, self.s)
        if self.k < 4:
            raise DomainError("need k >= 4")

    @cached_property
    def q(self) -> Fraction:
        return q_basic(self.k, self.s)

    @cached_property
    def q_i(self) -> tuple[Fraction, ...]:
        return tuple(q_i_basic(self.k, self.s, i) for i in range(self.k + 1))

    @cached_property
    def m(self) -> int:
        return strong_m(self.k, self.t, self.s)

    @cached_property
    def q_strong(self) -> Fraction:
        return q_strong(self.k, self.t, self.s)

    @cached_property
    def q_i_strong(self) -> tuple[Fraction, ...]:
        return tuple(q_i_strong(self.k, self.t, self.s, i)
                     for i in range(self.k - 1))

    @property
    def k1_valid(self) -> bool:
        return self.k >= 10 * self.m - 5

    @cached_property
    def k1(self) -> int:
        return refutation_k1(self.m, self.k)

    @property
    def basic_interval(self) -> Interval:
        return interval_basic(self.k, self.t, self.s)

    @property
    def strong_interval(self) -> Interval:
        return interval_strong(self.k, self.t, self.s)
