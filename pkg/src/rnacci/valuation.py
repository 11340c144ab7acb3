"""p-adic valuations of integers, factorials and 2k-nacci numbers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .sequence import SequenceParams, term_mod_pow2, terms, MAX_WIDTH


class _Infinity:
    """Valuation of zero.  Deliberately supports no arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def is_infinite(v) -> bool:
    return v is INFINITY


def nu(p: int, x: int):
    """Exponent of the largest power of ``p`` dividing ``x``."""
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    if x == 0:
        return INFINITY
    x = abs(x)
    if p == 2:
        return (x & -x).bit_length() - 1
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def legendre_factorial(p: int, m: int) -> int:
    """``nu_p(m!)`` via Legendre's formula."""
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    total = 0
    q = m // p
    while q:
        total += q
        q //= p
    return total


def floor_log(m: int, p: int) -> int:
    """``floor(log m / log p)`` computed in integers."""
    e, power = 0, p
    while power <= m:
        power *= p
        e += 1
    return e


@dataclass(frozen=True)
class LegendreBounds:
    lower: Fraction
    upper: Fraction
    exact: int

    @property
    def holds(self) -> bool:
        return self.lower <= self.exact <= self.upper


def legendre_bounds(p: int, m: int) -> LegendreBounds:
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    lower = Fraction(m, p - 1) - floor_log(m, p) - 1
    upper = Fraction(m - 1, p - 1)
    return LegendreBounds(lower, upper, legendre_factorial(p, m))


def nu2_closed_form(params: SequenceParams, n: int):
    """``nu_2(t_n)`` for the 2k-nacci sequence, k >= 2, without computing t_n."""
    k = params.require_even()
    if n < 0:
        raise DomainError(f"index must be >= 0, got n={n}")
    period = 2 * k + 1
    if n % period:
        return 0
    if n % (2 * period):
        return 1
    if n == 0:
        return INFINITY
    return nu(2, n) + nu(2, k - 1) + 2


def _oracle_start_width(params: SequenceParams, n: int) -> int:
    # n.bit_length() == ceil(log2(n + 1)) for n >= 1
    return n.bit_length() + nu(2, params.k - 1) + 4


def nu2_oracle(params: SequenceParams, n: int) -> int:
    """``nu_2(t_n)`` from residues ``t_n mod 2^W``, doubling W until nonzero.

    Independent of :func:`nu2_closed_form`; only the starting width is
    chosen so that one round normally suffices.
    """
    params.require_even()
    if n < 1:
        raise DomainError(f"oracle needs n >= 1, got n={n}")
    w = _oracle_start_width(params, n)
    while True:
        residue = term_mod_pow2(params, n, min(w, MAX_WIDTH))
        if residue:
            return nu(2, residue)
        if w >= MAX_WIDTH:
            raise RuntimeError(f"t_{n} vanishes mod 2^{MAX_WIDTH}")
        w *= 2


def nu2_oracle_table(params: SequenceParams, n_max: int) -> list[int]:
    """Oracle valuations for every ``1 <= n <= n_max`` in one modular sweep.

    Same residues as :func:`nu2_oracle` but with a single shared width,
    doubled whenever some residue vanishes.
    """
    params.require_even()
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    w = _oracle_start_width(params, n_max)
    r = params.r
    while True:
        mask = (1 << w) - 1
        seq = [0] + [1] * (r - 1) + [r - 1]
        for _ in range(r + 1, n_max + 1):
            seq.append((2 * seq[-1] - seq[-1 - r]) & mask)
        residues = [x & mask for x in seq[1:n_max + 1]]
        if all(residues):
            return [nu(2, x) for x in residues]
        if w >= MAX_WIDTH:
            raise RuntimeError(f"some t_n vanishes mod 2^{MAX_WIDTH}")
        w = min(2 * w, MAX_WIDTH)


def nu2_exact(params: SequenceParams, n: int):
    """``nu_2(t_n)`` from the full-precision term; for small n only."""
    return nu(2, terms(params, n + 1)[n])
