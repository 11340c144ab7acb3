"""Dominant root of x^r = x^(r-1) + ... + 1 and effective caps on m and sum(n_i)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .sequence import SequenceParams, params_for_k, terms
from .valuation import nu

DEFAULT_PHI_TOL = Fraction(1, 10**25)

# float comparisons closer than this are redone in high precision
DECISION_MARGIN = 1e-6
HIGH_PRECISION_DIGITS = 60

# consecutive failures that end the upward scan for m_max
SCAN_CUTOFF = 64

# Published m-bounds for 2 <= k <= 5 (rows) and 1 <= d <= 10 (columns).
REFERENCE_M_BOUNDS = {
    2: (11, 19, 27, 35, 43, 51, 59, 67, 75, 84),
    3: (13, 22, 31, 40, 50, 59, 68, 77, 87, 96),
    4: (11, 19, 28, 36, 44, 52, 60, 68, 76, 84),
    5: (14, 25, 35, 46, 56, 67, 77, 88, 98, 109),
}


def characteristic(r: int, x):
    """``x^r - x^(r-1) - ... - x - 1`` by Horner's rule."""
    acc = 1
    for _ in range(r):
        acc = acc * x - 1
    return acc


@dataclass(frozen=True)
class PhiApprox:
    r: int
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)


def phi_root(r: int, tol=DEFAULT_PHI_TOL) -> PhiApprox:
    """Bracket the real root in (1, 2) by bisection over exact rationals."""
    if r < 2:
        raise DomainError(f"order must be >= 2, got r={r}")
    tol = Fraction(tol)
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    lo, hi = 2 * (1 - Fraction(1, 2**r)), Fraction(2)
    if not characteristic(r, lo) < 0 < characteristic(r, hi):
        raise ArithmeticError(f"no sign change on the initial bracket for r={r}")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if characteristic(r, mid) < 0:
            lo = mid
        else:
            hi = mid
    return PhiApprox(r, lo, hi)


@lru_cache(maxsize=None)
def _phi(r: int) -> PhiApprox:
    return phi_root(r)


@dataclass(frozen=True)
class Cor25Constants:
    """Constants making the finiteness argument effective for the 2k-nacci sequence.

    For ``n >= n0``: ``nu_2(t_n) <= K1 * n**C_exp`` and ``log2 t_n >= K2 * n``.
    """

    n0: int
    C_exp: Fraction
    K1: Fraction
    K2: Fraction

    def combined(self, d: int) -> Fraction:
        """``K2 / (2 d K1)^(1/C)`` for ``C = 1/2``."""
        return self.K2 / (2 * d * self.K1) ** 2


def cor25_constants(params: SequenceParams) -> Cor25Constants:
    k = params.require_even()
    n0 = max(2 * (2 * k + 1), 2 ** (2 * max(2, nu(2, k - 1))))
    lo = _phi(params.r).lo
    # one ulp toward zero keeps K2 an underestimate despite float rounding
    k2 = Fraction(math.nextafter(0.5 * math.log2(lo), 0.0))
    return Cor25Constants(n0, Fraction(1, 2), Fraction(1), k2)


# --- refined bound on m -----------------------------------------------------

def _log2_phi(params: SequenceParams) -> float:
    return math.log2(_phi(params.r).lo)


def _sides_float(k: int, d: int, m: int, log2_phi: float) -> tuple[float, float]:
    lm = math.log2(m)
    lhs = m - lm - 1 - d * (nu(2, k - 1) + 2)
    rhs = d * math.log2(m * (lm - 1) / (d * log2_phi) + (2 * k - 1))
    return lhs, rhs


def _sides_decimal(k: int, d: int, m: int, phi_lo: Fraction) -> tuple[Decimal, Decimal]:
    with localcontext() as ctx:
        ctx.prec = HIGH_PRECISION_DIGITS
        ln2 = Decimal(2).ln()
        lm = Decimal(m).ln() / ln2
        log2_phi = (Decimal(phi_lo.numerator) / Decimal(phi_lo.denominator)).ln() / ln2
        lhs = m - lm - 1 - d * (nu(2, k - 1) + 2)
        inner = m * (lm - 1) / (d * log2_phi) + (2 * k - 1)
        rhs = d * (inner.ln() / ln2)
        return +lhs, +rhs


def ineq11_holds(params: SequenceParams, d: int, m: int) -> bool:
    """Strict inequality bounding m, with the real-valued log2 m."""
    k = params.require_even()
    lhs, rhs = _sides_float(k, d, m, _log2_phi(params))
    if abs(lhs - rhs) > DECISION_MARGIN:
        return lhs < rhs
    hl, hr = _sides_decimal(k, d, m, _phi(params.r).lo)
    return hl < hr


def ineq11_margin(params: SequenceParams, d: int, m: int) -> float:
    """``rhs - lhs`` in double precision (positive when the inequality holds)."""
    k = params.require_even()
    lhs, rhs = _sides_float(k, d, m, _log2_phi(params))
    return rhs - lhs


def m_upper_bound(params: SequenceParams, d: int) -> int:
    """Largest ``m >= 6`` for which the bounding inequality still holds."""
    params.require_even()
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    best, misses, m = None, 0, 6
    while misses < SCAN_CUTOFF:
        if ineq11_holds(params, d, m):
            best, misses = m, 0
        else:
            misses += 1
        m += 1
    if best is None:
        raise ArithmeticError(f"bounding inequality fails already at m=6 (k={params.k}, d={d})")
    return best


def n_sum_upper_bound(params: SequenceParams, d: int, m: int) -> int:
    """``floor(m (log2 m - 1) / log2 phi_lo) + d (2k - 1)``."""
    k = params.require_even()
    if m < 6:
        raise DomainError(f"m must be >= 6, got {m}")
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    quotient = m * (math.log2(m) - 1) / _log2_phi(params)
    base = math.floor(quotient)
    if min(quotient - base, base + 1 - quotient) <= DECISION_MARGIN:
        phi_lo = _phi(params.r).lo
        with localcontext() as ctx:
            ctx.prec = HIGH_PRECISION_DIGITS
            ln2 = Decimal(2).ln()
            log2_phi = (Decimal(phi_lo.numerator) / Decimal(phi_lo.denominator)).ln() / ln2
            base = int((m * (Decimal(m).ln() / ln2 - 1) / log2_phi).to_integral_value(rounding="ROUND_FLOOR"))
    return base + d * (2 * k - 1)


@dataclass(frozen=True)
class BoundRow:
    k: int
    d: int
    m_max: int
    n_sum_max: int

    def to_json(self) -> dict:
        return {"k": self.k, "d": self.d, "m_max": self.m_max, "n_sum_max": self.n_sum_max}


def bound_row(k: int, d: int) -> BoundRow:
    params = params_for_k(k)
    m_max = m_upper_bound(params, d)
    return BoundRow(k, d, m_max, n_sum_upper_bound(params, d, m_max))


def bounds_table(k_lo: int, k_hi: int, d_lo: int, d_hi: int) -> list[BoundRow]:
    if k_lo < 2:
        raise DomainError(f"k must be >= 2, got {k_lo}")
    if k_hi < k_lo or d_hi < d_lo:
        raise DomainError("empty parameter range")
    if d_lo < 1:
        raise DomainError(f"d must be >= 1, got {d_lo}")
    return [bound_row(k, d) for k in range(k_lo, k_hi + 1) for d in range(d_lo, d_hi + 1)]


# --- growth facts used by the bounds ----------------------------------------

def first_growth_violation(params: SequenceParams, n_max: int, phi_lo: Fraction | None = None) -> int | None:
    """First ``1 <= n <= n_max`` with ``t_n < phi_lo^(n-r-1)``, or None.

    Compared exactly as ``t_n * q^e >= p^e`` for ``phi_lo = p/q``.
    """
    if phi_lo is None:
        phi_lo = _phi(params.r).lo
    p, q = phi_lo.numerator, phi_lo.denominator
    r = params.r
    t = terms(params, n_max + 1)
    p_pow, q_pow = 1, 1
    for n in range(1, n_max + 1):
        e = n - r - 1
        if e > 0:
            p_pow *= p
            q_pow *= q
        # negative exponents give phi_lo^e < 1 <= t_n
        if e > 0 and t[n] * q_pow < p_pow:
            return n
        if e <= 0 and t[n] < 1:
            return n
    return None


def factorial_below_half_power(m: int) -> bool:
    """``m! < (m/2)^m``, i.e. ``m! * 2^m < m^m``."""
    return math.factorial(m) << m < m**m
