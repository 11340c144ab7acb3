"""Exact and modular generation of r-nacci numbers.

The order-r sequence starts ``0, 1, ..., 1`` (r initial values) and every
later term is the sum of the r preceding ones.  For even ``r = 2k`` the
state vector ``T_n``, the Hankel window ``B_n`` and the companion matrix
``C`` are also available.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError

#: Largest supported modulus exponent for :func:`term_mod_pow2`.
MAX_WIDTH = 4096

# Below this index plain iteration beats modular matrix powering.
_ITERATION_CUTOFF = 4096


@dataclass(frozen=True)
class SequenceParams:
    r: int
    k: int | None = None

    def __post_init__(self) -> None:
        if self.r < 2:
            raise DomainError(f"order must be >= 2, got r={self.r}")
        expected = self.r // 2 if self.r % 2 == 0 else None
        if self.k is None and expected is not None:
            object.__setattr__(self, "k", expected)
        elif self.k != expected:
            raise DomainError(f"k must be {expected} for r={self.r}, got {self.k}")

    @property
    def even(self) -> bool:
        return self.k is not None

    def require_even(self) -> int:
        """Return k, rejecting odd orders and r = 2."""
        if self.k is None or self.k < 2:
            raise DomainError(f"operation needs even order r = 2k >= 4, got r={self.r}")
        return self.k


@dataclass(frozen=True)
class StateVector:
    base_index: int
    entries: tuple[int, ...]


@dataclass(frozen=True)
class HankelWindow:
    base_index: int
    entries: tuple[tuple[int, ...], ...]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]


@dataclass(frozen=True)
class CompanionMatrix:
    entries: tuple[tuple[int, ...], ...]

    def apply(self, vector):
        return tuple(sum(c * x for c, x in zip(row, vector)) for row in self.entries)

    def apply_matrix(self, matrix):
        cols = list(zip(*matrix))
        return tuple(
            tuple(sum(c * x for c, x in zip(row, col)) for col in cols)
            for row in self.entries
        )


def make_params(r: int) -> SequenceParams:
    if r < 2:
        raise DomainError(f"order must be >= 2, got r={r}")
    return SequenceParams(r, r // 2 if r % 2 == 0 else None)


def params_for_k(k: int) -> SequenceParams:
    """Parameters of the 2k-nacci sequence."""
    return make_params(2 * k)


def _check_index(n: int) -> None:
    if n < 0:
        raise DomainError(f"index must be >= 0, got n={n}")


def terms(params: SequenceParams, count: int) -> list[int]:
    """Return ``[t_0, ..., t_{count-1}]``."""
    r = params.r
    out = [0] + [1] * (r - 1)
    if count <= r:
        return out[:max(count, 0)]
    out.append(r - 1)
    # t_{n} = 2 t_{n-1} - t_{n-1-r}, valid once n >= r + 1
    for _ in range(r + 1, count):
        out.append(2 * out[-1] - out[-1 - r])
    return out


def term(params: SequenceParams, n: int) -> int:
    _check_index(n)
    return terms(params, n + 1)[n]


def _companion_rows(r: int) -> list[list[int]]:
    rows = [[1 if j == i + 1 else 0 for j in range(r)] for i in range(r - 1)]
    rows.append([1] * r)
    return rows


def _matmul_mod(a, b, mask):
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) & mask for col in cols] for row in a]


def matrix_power_mod(matrix, e: int, mask: int):
    """``matrix**e`` with entries reduced by ``& mask`` (mask = 2^w - 1)."""
    size = len(matrix)
    result = [[int(i == j) for j in range(size)] for i in range(size)]
    base = [[x & mask for x in row] for row in matrix]
    while e:
        if e & 1:
            result = _matmul_mod(result, base, mask)
        e >>= 1
        if e:
            base = _matmul_mod(base, base, mask)
    return result


def state_mod_pow2(params: SequenceParams, n: int, w: int) -> list[int]:
    """``[t_n, ..., t_{n+r-1}]`` reduced mod ``2^w``.

    Uses iteration for small n and companion-matrix powering otherwise;
    no intermediate exceeds ``2^w`` times a small factor.
    """
    _check_index(n)
    _check_width(w)
    r = params.r
    mask = (1 << w) - 1
    if n < _ITERATION_CUTOFF:
        window = [0] + [1] * (r - 1)
        total = r - 1
        for _ in range(n):
            nxt = total & mask
            total += nxt - window[0]
            window = window[1:] + [nxt]
        return [x & mask for x in window]
    power = matrix_power_mod(_companion_rows(r), n, mask)
    start = [0] + [1] * (r - 1)
    return [sum(c * x for c, x in zip(row, start)) & mask for row in power]


def _check_width(w: int) -> None:
    if not 1 <= w <= MAX_WIDTH:
        raise DomainError(f"width must lie in [1, {MAX_WIDTH}], got w={w}")


def term_mod_pow2(params: SequenceParams, n: int, w: int) -> int:
    """``t_n mod 2^w`` without computing ``t_n`` in full precision."""
    return state_mod_pow2(params, n, w)[0]


def state_vector(params: SequenceParams, n: int) -> StateVector:
    k = params.require_even()
    _check_index(n)
    return StateVector(n, tuple(terms(params, n + 2 * k)[n:]))


def hankel_window(params: SequenceParams, n: int) -> HankelWindow:
    k = params.require_even()
    _check_index(n)
    size = 2 * k
    seq = terms(params, n + 2 * size - 1)[n:]
    return HankelWindow(n, tuple(tuple(seq[i:i + size]) for i in range(size)))


def companion(params: SequenceParams) -> CompanionMatrix:
    params.require_even()
    return CompanionMatrix(tuple(tuple(row) for row in _companion_rows(params.r)))
