"""Executable checks of the congruences behind the closed form for nu_2(t_n).

Every ``verify_*`` function returns a :class:`VerificationReport`; a failed
check is data (with the first counterexample), not an exception.  Only
out-of-domain parameters raise :class:`~rnacci.errors.DomainError`.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .errors import DomainError
from .linalg import bareiss_det, det_and_adjugate, matpow
from .sequence import (
    SequenceParams,
    companion,
    hankel_window,
    params_for_k,
    state_mod_pow2,
    terms,
)
from .valuation import nu


@dataclass(frozen=True)
class VerificationReport:
    check_name: str
    parameter_range: str
    passed: bool
    counterexample: dict | None = None

    def __post_init__(self) -> None:
        if self.passed != (self.counterexample is None):
            raise ValueError("a report passes exactly when it has no counterexample")

    def to_json(self) -> dict:
        return {
            "check": self.check_name,
            "range": self.parameter_range,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


def _report(name: str, rng: str, counterexample: dict | None = None) -> VerificationReport:
    return VerificationReport(name, rng, counterexample is None, counterexample)


@dataclass(frozen=True)
class CongruenceWitness:
    l: int
    s: int
    A: tuple[int, ...]
    l0: int


# --- binomial vectors -------------------------------------------------------

def ones_vector(k: int) -> list[int]:
    return [1] * (2 * k)


def binomial_vector(k: int, m: int) -> list[int]:
    """Column with entry i equal to ``C(m+i, m) * 2^i`` for ``0 <= i < 2k``."""
    return [comb(m + i, m) << i for i in range(2 * k)]


def binom_identity_a(m: int, w: int) -> tuple[int, int]:
    lhs = sum(comb(m + i, m) for i in range(w + 1))
    return lhs, comb(m + w + 1, m + 1)


def binom_identity_b(m: int, w: int) -> tuple[int, int]:
    lhs = sum(comb(m + i, m) << i for i in range(w + 1))
    rhs = (-1) ** (m + 1) + (1 << (w + 1)) * sum(
        comb(m + w + 1, m - j) * (-2) ** j for j in range(m + 1)
    )
    return lhs, rhs


def _verify_binomial(name: str, identity, limit: int) -> VerificationReport:
    for m in range(limit + 1):
        for w in range(limit + 1):
            lhs, rhs = identity(m, w)
            if lhs != rhs:
                return _report(name, f"0<=m,w<={limit}", {"m": m, "w": w, "lhs": lhs, "rhs": rhs})
    return _report(name, f"0<=m,w<={limit}")


def verify_binom_identity_a(limit: int = 40) -> VerificationReport:
    return _verify_binomial("binomial_identity_a", binom_identity_a, limit)


def verify_binom_identity_b(limit: int = 40) -> VerificationReport:
    return _verify_binomial("binomial_identity_b", binom_identity_b, limit)


# --- Hankel window B_0 ------------------------------------------------------

@lru_cache(maxsize=None)
def _b0_det_adjugate(params: SequenceParams):
    det, adj = det_and_adjugate(hankel_window(params, 0).entries)
    return det, tuple(map(tuple, adj))


def verify_det_b0_odd(params: SequenceParams, window=None) -> VerificationReport:
    """Check that ``det B_0`` is odd.

    ``window`` replaces ``B_0`` (used to confirm that defects are caught).
    """
    k = params.require_even()
    if window is None:
        window = hankel_window(params, 0).entries
    det = bareiss_det(window)
    if det % 2 == 1:
        return _report("det_b0_odd", f"k={k}")
    return _report("det_b0_odd", f"k={k}", {"k": k, "det": det, "det_mod_2": det % 2, "expected_mod_2": 1})


def verify_reduction_formula(params: SequenceParams, n: int, w: int) -> VerificationReport:
    """``det(B_0) t_{n+w} == T_n^T adj(B_0) T_w`` in integer arithmetic."""
    k = params.require_even()
    if n < 1 or w < 1:
        raise DomainError(f"indices must be >= 1, got n={n}, w={w}")
    return _reduction_pairs(params, [(n, w)], f"k={k}, n={n}, w={w}")


def _reduction_pairs(params: SequenceParams, pairs, rng: str) -> VerificationReport:
    size = 2 * params.k
    det, adj = _b0_det_adjugate(params)
    top = max(max(n, w) for n, w in pairs)
    t = terms(params, max(2 * top + 1, top + size))
    for n, w in pairs:
        t_n, t_w = t[n:n + size], t[w:w + size]
        rhs = sum(t_n[i] * sum(adj[i][j] * t_w[j] for j in range(size)) for i in range(size))
        lhs = det * t[n + w]
        if lhs != rhs:
            return _report("reduction_formula", rng, {"n": n, "w": w, "lhs": lhs, "rhs": rhs})
    return _report("reduction_formula", rng)


def verify_reduction_formula_random(
    params: SequenceParams, pairs: int = 200, index_max: int = 300, seed: int = 0
) -> VerificationReport:
    k = params.require_even()
    rand = random.Random(seed * 1000 + k)
    sample = [(rand.randint(1, index_max), rand.randint(1, index_max)) for _ in range(pairs)]
    return _reduction_pairs(params, sample, f"k={k}, {pairs} random pairs, 1<=n,w<={index_max}")


# --- companion matrix power -------------------------------------------------

def companion_power_formula(k: int, *, transpose_lower: bool = False) -> list[list[int]]:
    """Closed form of ``C^(2k+1)``: row i is ``2^(i+1)`` minus ``2^(i-j)`` for j <= i.

    ``transpose_lower`` builds a deliberately wrong variant for defect tests.
    """
    size = 2 * k

    def lower(i, j):
        if transpose_lower:
            i, j = j, i
        return 1 << (i - j) if i >= j else 0

    return [[(2 << i) - lower(i, j) for j in range(size)] for i in range(size)]


def verify_companion_power(params: SequenceParams, expected=None) -> VerificationReport:
    k = params.require_even()
    if expected is None:
        expected = companion_power_formula(k)
    power = matpow(companion(params).entries, 2 * k + 1)
    for i, (got_row, exp_row) in enumerate(zip(power, expected)):
        for j, (got, exp) in enumerate(zip(got_row, exp_row)):
            if got != exp:
                return _report("companion_power", f"k={k}", {"row": i, "col": j, "power": got, "formula": exp})
    return _report("companion_power", f"k={k}")


# --- T_{m(2k+1)} modulo 2^(2k+1) --------------------------------------------

def whole_push_prediction(k: int, m: int, width: int) -> list[int]:
    """``w + (-1)^(m+1) [4(k-1) sum_{i<m} v_i + v_{m-1}]`` reduced mod ``2^width``."""
    size = 2 * k
    acc = [0] * size
    for i in range(m):
        acc = [a + b for a, b in zip(acc, binomial_vector(k, i))]
    last = binomial_vector(k, m - 1)
    sign = 1 if m % 2 else -1
    mask = (1 << width) - 1
    return [(1 + sign * (4 * (k - 1) * a + b)) & mask for a, b in zip(acc, last)]


def verify_whole_push(params: SequenceParams, m: int) -> VerificationReport:
    params.require_even()
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    return _whole_push_range(params, m, m)


def _whole_push_range(params: SequenceParams, m_lo: int, m_hi: int) -> VerificationReport:
    k = params.k
    width = 2 * k + 1
    rng = f"k={k}, m={m_lo}" if m_lo == m_hi else f"k={k}, {m_lo}<=m<={m_hi}"
    for m in range(m_lo, m_hi + 1):
        got = state_mod_pow2(params, m * (2 * k + 1), width)
        want = whole_push_prediction(k, m, width)
        if got != want:
            return _report("whole_push", rng, {"m": m, "modulus": f"2^{width}", "state": got, "formula": want})
    return _report("whole_push", rng)


def verify_whole_push_range(params: SequenceParams, m_max: int) -> VerificationReport:
    params.require_even()
    if m_max < 1:
        raise DomainError(f"m_max must be >= 1, got {m_max}")
    return _whole_push_range(params, 1, m_max)


# --- congruence tower -------------------------------------------------------

def tower_base(k: int) -> int:
    """``l0 = nu_2(k-1) + 2``."""
    return nu(2, k - 1) + 2


def congruence_witness(params: SequenceParams) -> CongruenceWitness:
    """The vector A read off ``T_{2^l0 (2k+1)}``."""
    k = params.require_even()
    l0 = tower_base(k)
    v = nu(2, k - 1)
    width = l0 + v + 3
    mask = (1 << width) - 1
    state = state_mod_pow2(params, (2 * k + 1) << l0, width)
    start = state_mod_pow2(params, 0, width)
    diffs = [(a - b) & mask for a, b in zip(state, start)]
    if any(x % (1 << (l0 + 1)) for x in diffs):
        raise ArithmeticError(f"T_(2^{l0}(2k+1)) - T_0 is not divisible by 2^{l0 + 1}")
    a_mod = (1 << (v + 2)) - 1
    return CongruenceWitness(l0, 1, tuple((x >> (l0 + 1)) & a_mod for x in diffs), l0)


def verify_congruence_tower(
    params: SequenceParams, l_max: int, s_max: int, *, probe_shift: int = 0
) -> VerificationReport:
    """Check the tower ``T_{s 2^l (2k+1)} == s 2^(l+1) A + T_0`` modulo powers of 2.

    First ``T_{2^l(2k+1)} == T_0 (mod 2^(l+1+probe_shift))`` for ``l <= l_max``,
    then the refined congruence for ``l0 <= l <= l_max`` and odd ``s <= s_max``.
    A positive ``probe_shift`` tightens the first modulus to test strictness.
    """
    k = params.require_even()
    l0 = tower_base(k)
    if l_max < l0:
        raise DomainError(f"l_max must be >= l0={l0}, got {l_max}")
    if s_max < 1:
        raise DomainError(f"s_max must be >= 1, got {s_max}")
    v = nu(2, k - 1)
    period = 2 * k + 1
    rng = f"k={k}, 0<=l<={l_max}, odd 1<=s<={s_max}"

    for l in range(l_max + 1):
        width = l + 1 + probe_shift
        got = state_mod_pow2(params, period << l, width)
        want = state_mod_pow2(params, 0, width)
        if got != want:
            return _report("congruence_tower", rng, {"part": "base", "l": l, "modulus": f"2^{width}",
                                                     "state": got, "initial": want})

    witness = congruence_witness(params)
    for l in range(l0, l_max + 1):
        width = l + v + 3
        mask = (1 << width) - 1
        start = state_mod_pow2(params, 0, width)
        for s in range(1, s_max + 1, 2):
            got = state_mod_pow2(params, (s * period) << l, width)
            want = [(((s * a) << (l + 1)) + t) & mask for a, t in zip(witness.A, start)]
            if got != want:
                return _report("congruence_tower", rng, {"part": "refined", "l": l, "s": s,
                                                         "modulus": f"2^{width}", "state": got, "formula": want})
    return _report("congruence_tower", rng)


# --- first coordinate -------------------------------------------------------

def verify_super_formula(params: SequenceParams, m_max: int) -> VerificationReport:
    """``t_{m(2k+1)} == 1 + (-1)^(m+1) (4m(k-1) + 1) (mod 2^(2 nu_2(k-1) + 5))``."""
    k = params.require_even()
    if m_max < 1:
        raise DomainError(f"m_max must be >= 1, got {m_max}")
    width = 2 * nu(2, k - 1) + 5
    mask = (1 << width) - 1
    period = 2 * k + 1
    r = params.r
    seq = [0] + [1] * (r - 1) + [r - 1]
    while len(seq) <= m_max * period:
        seq.append((2 * seq[-1] - seq[-1 - r]) & mask)
    rng = f"k={k}, 1<=m<={m_max}"
    for m in range(1, m_max + 1):
        sign = 1 if m % 2 else -1
        want = (1 + sign * (4 * m * (k - 1) + 1)) & mask
        got = seq[m * period] & mask
        if got != want:
            return _report("super_formula", rng, {"m": m, "modulus": f"2^{width}", "term": got, "formula": want})
    return _report("super_formula", rng)


# --- suite ------------------------------------------------------------------

SUITES = {
    "lemma31": ("det_b0_odd", "reduction_formula"),
    "lemma32": ("congruence_tower",),
    "lemma33": ("companion_power",),
    "lemma34": ("binomial_identity_a", "binomial_identity_b"),
    "lemma35": ("whole_push",),
    "super": ("super_formula",),
}
ALL_CHECKS = tuple(name for names in SUITES.values() for name in names)


@dataclass(frozen=True)
class SuiteLimits:
    binom_max: int = 40
    reduction_pairs: int = 200
    reduction_index_max: int = 300
    seed: int = 0
    whole_push_m_max: int = 50
    tower_l_max: int = 10
    tower_s_max: int = 9
    super_m_max: int = 200
    checks: frozenset = field(default_factory=lambda: frozenset(ALL_CHECKS))


def _run_task(task) -> VerificationReport:
    name, k, limits = task
    if name == "binomial_identity_a":
        return verify_binom_identity_a(limits.binom_max)
    if name == "binomial_identity_b":
        return verify_binom_identity_b(limits.binom_max)
    params = params_for_k(k)
    if name == "det_b0_odd":
        return verify_det_b0_odd(params)
    if name == "reduction_formula":
        return verify_reduction_formula_random(
            params, limits.reduction_pairs, limits.reduction_index_max, limits.seed)
    if name == "companion_power":
        return verify_companion_power(params)
    if name == "whole_push":
        return verify_whole_push_range(params, limits.whole_push_m_max)
    if name == "congruence_tower":
        return verify_congruence_tower(params, max(limits.tower_l_max, tower_base(k)), limits.tower_s_max)
    if name == "super_formula":
        return verify_super_formula(params, limits.super_m_max)
    raise DomainError(f"unknown check {name!r}")


def suite_tasks(k_range, limits: SuiteLimits) -> list[tuple]:
    ks = list(k_range)
    if not ks:
        raise DomainError("k_range must be nonempty")
    if min(ks) < 2:
        raise DomainError(f"every k must be >= 2, got {min(ks)}")
    tasks = [(name, None, limits) for name in ("binomial_identity_a", "binomial_identity_b")
             if name in limits.checks]
    per_k = [name for name in ALL_CHECKS if not name.startswith("binomial") and name in limits.checks]
    tasks += [(name, k, limits) for k in ks for name in per_k]
    return tasks


def run_suite(k_range, limits: SuiteLimits | None = None, workers: int = 1) -> list[VerificationReport]:
    """Run the selected checks over ``k_range``; report order is fixed."""
    tasks = suite_tasks(k_range, limits or SuiteLimits())
    if workers <= 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks))
