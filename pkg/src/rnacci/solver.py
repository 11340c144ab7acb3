"""Exhaustive search for factorials that are products of d terms of a 2k-nacci sequence."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .bounds import m_upper_bound, n_sum_upper_bound
from .errors import DomainError
from .sequence import SequenceParams, params_for_k, terms


@dataclass(frozen=True, order=True)
class Solution:
    m: int
    indices: tuple[int, ...]

    def to_json(self, k: int, d: int) -> dict:
        return {"k": k, "d": d, "m": self.m, "indices": list(self.indices)}


@dataclass(frozen=True)
class SearchConfig:
    """Caps for :func:`solve`.

    ``n_cap`` limits each index separately; by default only the sum cap
    applies (every index is then at most ``n_sum_cap - (d-1) r``).
    """

    m_cap: int
    n_sum_cap: int
    d: int
    n_cap: int | None = None

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DomainError(f"d must be >= 1, got {self.d}")
        if self.m_cap < 1 or self.n_sum_cap < 1:
            raise DomainError("caps must be positive")


def is_factorial(x: int) -> int | None:
    """Return m with ``m! == x`` (the smallest, so 1 for x == 1), else None."""
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    m = 1
    while x > 1:
        m += 1
        x, rem = divmod(x, m)
        if rem:
            return None
    return m


def search_config(params: SequenceParams, d: int) -> SearchConfig:
    params.require_even()
    m_cap = m_upper_bound(params, d)
    return SearchConfig(m_cap, n_sum_upper_bound(params, d, m_cap), d)


def _candidates(params: SequenceParams, config: SearchConfig) -> list[tuple[int, int]]:
    """Indices whose term could appear in a solution: t_n > 1 and t_n | m_cap!."""
    r = params.r
    top = config.n_sum_cap - (config.d - 1) * r
    if config.n_cap is not None:
        top = min(top, config.n_cap)
    if top < r:
        return []
    limit = math.factorial(config.m_cap)
    t = terms(params, top + 1)
    return [(n, t[n]) for n in range(r, top + 1) if limit % t[n] == 0]


def _search_branch(args) -> list[Solution]:
    """All solutions whose smallest index is ``cands[first][0]``."""
    cands, first, d, n_sum_cap, m_cap = args
    limit = math.factorial(m_cap)
    found: list[Solution] = []
    chosen: list[int] = []

    def extend(start: int, remaining: int, product: int, index_sum: int) -> None:
        if remaining == 0:
            m = is_factorial(product)
            if m is not None and m <= m_cap:
                found.append(Solution(m, tuple(chosen)))
            return
        for pos in range(start, len(cands)):
            n, value = cands[pos]
            # indices only grow from here, so the cheapest completion repeats n
            if index_sum + n * remaining > n_sum_cap:
                break
            new_product = product * value
            if new_product > limit or limit % new_product:
                continue
            chosen.append(n)
            extend(pos, remaining - 1, new_product, index_sum + n)
            chosen.pop()

    n, value = cands[first]
    if n * d <= n_sum_cap and limit % value == 0:
        chosen.append(n)
        extend(first, d - 1, value, n)
    return found


def solve(params: SequenceParams, d: int, config: SearchConfig | None = None, workers: int = 1) -> list[Solution]:
    """Every nondecreasing index tuple whose term product is a factorial within the caps.

    Indices start at r so every factor exceeds 1.  Partial products must
    divide ``m_cap!``, which also settles small m (below 6) directly.
    """
    params.require_even()
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if config is None:
        config = search_config(params, d)
    elif config.d != d:
        raise DomainError(f"config is for d={config.d}, not d={d}")
    cands = _candidates(params, config)
    tasks = [(cands, i, d, config.n_sum_cap, config.m_cap) for i in range(len(cands))]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_search_branch, tasks))
    else:
        parts = [_search_branch(task) for task in tasks]
    return sorted(itertools.chain.from_iterable(parts))


def solve_grid(k_lo: int, k_hi: int, d_lo: int, d_hi: int, workers: int = 1) -> list[tuple[int, int, list[Solution]]]:
    if k_lo < 2:
        raise DomainError(f"k must be >= 2, got {k_lo}")
    if k_hi < k_lo or d_hi < d_lo:
        raise DomainError("empty parameter range")
    if d_lo < 1:
        raise DomainError(f"d must be >= 1, got {d_lo}")
    return [
        (k, d, solve(params_for_k(k), d, workers=workers))
        for k in range(k_lo, k_hi + 1)
        for d in range(d_lo, d_hi + 1)
    ]


def brute_force_solve(params: SequenceParams, d: int, n_cap: int, m_cap: int) -> list[Solution]:
    """Unpruned reference: every d-multiset over ``[r, n_cap]`` against ``2!, ..., m_cap!``."""
    r = params.r
    t = terms(params, max(n_cap, r) + 1)
    factorials = {math.factorial(m): m for m in range(2, m_cap + 1)}
    out = []
    for combo in itertools.combinations_with_replacement(range(r, n_cap + 1), d):
        product = math.prod(t[n] for n in combo)
        if product in factorials:
            out.append(Solution(factorials[product], combo))
    return sorted(out)


def oracle_config(params: SequenceParams, d: int, n_cap: int, m_cap: int) -> SearchConfig:
    """Caps under which :func:`solve` covers exactly the brute-force domain."""
    return SearchConfig(m_cap=m_cap, n_sum_cap=d * n_cap, d=d, n_cap=n_cap)
