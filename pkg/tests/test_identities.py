import random
from math import comb

import pytest
import sympy
from hypothesis import given, strategies as st

from rnacci import DomainError
from rnacci.identities import (
    ALL_CHECKS,
    SuiteLimits,
    VerificationReport,
    binom_identity_a,
    binom_identity_b,
    binomial_vector,
    companion_power_formula,
    congruence_witness,
    run_suite,
    verify_companion_power,
    verify_congruence_tower,
    verify_det_b0_odd,
    verify_reduction_formula,
    verify_reduction_formula_random,
    verify_super_formula,
    verify_whole_push,
    whole_push_prediction,
)
from rnacci.linalg import bareiss_det, det_and_adjugate, matpow
from rnacci.sequence import hankel_window, make_params, params_for_k, terms


# --- exact linear algebra against sympy -------------------------------------

@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_and_adjugate_match_sympy(rows):
    m = sympy.Matrix(rows)
    det, adj = det_and_adjugate(rows)
    assert det == bareiss_det(rows) == m.det()
    assert sympy.Matrix(adj) == m.adjugate()


@pytest.mark.parametrize("k, det", [(2, -3), (3, 655), (4, -205667), (8, -135517096574805315)])
def test_b0_determinant_frozen(k, det):
    # values from sympy's Matrix.det on the Hankel window
    assert bareiss_det(hankel_window(params_for_k(k), 0).entries) == det


# --- binomial identities ----------------------------------------------------

@pytest.mark.parametrize("m, w, value", [(2, 3, 20), (0, 5, 6), (3, 0, 1)])
def test_binom_a_examples(m, w, value):
    assert binom_identity_a(m, w) == (value, value)


@pytest.mark.parametrize("m, w, value", [(1, 2, 17), (0, 3, 15), (2, 0, 1)])
def test_binom_b_examples(m, w, value):
    assert binom_identity_b(m, w) == (value, value)


def test_binomial_identities_exhaustive():
    for m in range(41):
        for w in range(41):
            a, b = binom_identity_a(m, w)
            assert a == b
            a, b = binom_identity_b(m, w)
            assert a == b


def test_binomial_vector():
    assert binomial_vector(3, 0) == [1, 2, 4, 8, 16, 32]
    assert binomial_vector(2, 2) == [comb(2 + i, 2) * 2**i for i in range(4)]
    assert all(x > 0 for m in range(10) for x in binomial_vector(4, m))


# --- det B_0 ----------------------------------------------------------------

@pytest.mark.parametrize("k", range(2, 9))
def test_det_b0_odd(k):
    report = verify_det_b0_odd(params_for_k(k))
    assert report.passed and report.counterexample is None


def test_det_b0_detects_mutated_window():
    p = params_for_k(2)
    window = [[x + 1 if i + j == 5 else x for j, x in enumerate(row)]
              for i, row in enumerate(hankel_window(p, 0).entries)]
    report = verify_det_b0_odd(p, window)
    assert not report.passed
    assert report.counterexample["det_mod_2"] == 0


def test_odd_order_rejected():
    for check in (verify_det_b0_odd, verify_companion_power):
        with pytest.raises(DomainError):
            check(make_params(5))
    with pytest.raises(DomainError):
        verify_reduction_formula(make_params(7), 1, 1)


# --- reduction formula ------------------------------------------------------

def test_reduction_formula_example_k2():
    p = params_for_k(2)
    report = verify_reduction_formula(p, 3, 4)
    assert report.passed
    det, adj = det_and_adjugate(hankel_window(p, 0).entries)
    t = terms(p, 20)
    rhs = sum(t[3 + i] * adj[i][j] * t[4 + j] for i in range(4) for j in range(4))
    assert rhs == det * 21 == -63


@pytest.mark.parametrize("k, n, w", [(2, 1, 1), (3, 10, 17), (6, 300, 299)])
def test_reduction_formula_examples(k, n, w):
    assert verify_reduction_formula(params_for_k(k), n, w).passed


def test_reduction_formula_rational_oracle():
    # the same identity through an explicit rational inverse
    p = params_for_k(3)
    inv = sympy.Matrix(hankel_window(p, 0).entries).inv()
    t = terms(p, 100)
    for n, w in [(5, 9), (17, 30), (40, 41)]:
        tn = sympy.Matrix(t[n:n + 6])
        tw = sympy.Matrix(t[w:w + 6])
        assert (tn.T * inv * tw)[0, 0] == t[n + w]


@pytest.mark.parametrize("k", range(2, 7))
def test_reduction_formula_random_pairs(k):
    assert verify_reduction_formula_random(params_for_k(k), 200, 300).passed


# --- C^(2k+1) ----------------------------------------------------------------

@pytest.mark.parametrize("k", range(2, 9))
def test_companion_power(k):
    assert verify_companion_power(params_for_k(k)).passed


def test_companion_power_formula_k2_literal():
    assert matpow([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1]], 5) == companion_power_formula(2)
    assert companion_power_formula(2) == [[1, 2, 2, 2], [2, 3, 4, 4], [4, 6, 7, 8], [8, 12, 14, 15]]


def test_companion_power_detects_transposed_formula():
    report = verify_companion_power(params_for_k(2), companion_power_formula(2, transpose_lower=True))
    assert not report.passed
    assert set(report.counterexample) == {"row", "col", "power", "formula"}


# --- T_{m(2k+1)} mod 2^(2k+1) ----------------------------------------------

def test_whole_push_example_k2_m1():
    t = terms(params_for_k(2), 9)
    assert t[5:9] == [6, 11, 21, 41]
    assert whole_push_prediction(2, 1, 5) == [x % 32 for x in t[5:9]]


@pytest.mark.parametrize("k, m", [(2, 1), (2, 50), (6, 3)])
def test_whole_push_examples(k, m):
    assert verify_whole_push(params_for_k(k), m).passed


@pytest.mark.parametrize("k", range(2, 7))
def test_whole_push_against_exact_terms(k):
    p = params_for_k(k)
    t = terms(p, 51 * (2 * k + 1) + 2 * k)
    mod = 2 ** (2 * k + 1)
    for m in range(1, 51):
        n = m * (2 * k + 1)
        assert whole_push_prediction(k, m, 2 * k + 1) == [x % mod for x in t[n:n + 2 * k]]


# --- congruence tower -------------------------------------------------------

@pytest.mark.parametrize("k, l_max, s_max", [(2, 6, 5), (3, 5, 3)])
def test_congruence_tower_examples(k, l_max, s_max):
    assert verify_congruence_tower(params_for_k(k), l_max, s_max).passed


def test_tower_base_level():
    assert congruence_witness(params_for_k(3)).l0 == 3
    assert congruence_witness(params_for_k(2)).l0 == 2


def test_witness_first_entry_matches_closed_form():
    # the first entry of A is 2(k-1) modulo 2^(nu_2(k-1)+2)
    for k in range(2, 9):
        w = congruence_witness(params_for_k(k))
        v = (k - 1 & -(k - 1)).bit_length() - 1
        assert w.A[0] == (2 * (k - 1)) % 2 ** (v + 2)


def test_congruence_tower_strictness_probe():
    report = verify_congruence_tower(params_for_k(2), 6, 5, probe_shift=1)
    assert not report.passed
    assert report.counterexample["part"] == "base"


def test_congruence_tower_domain():
    with pytest.raises(DomainError):
        verify_congruence_tower(params_for_k(3), 2, 3)


def test_congruence_tower_exact_small_case():
    # k = 2, l = 3, s = 3: index 120, checked in full precision
    p = params_for_k(2)
    w = congruence_witness(p)
    t = terms(p, 130)
    mod = 2 ** (3 + 0 + 3)
    start = t[0:4]
    assert [x % mod for x in t[120:124]] == [(3 * 2**4 * a + s) % mod for a, s in zip(w.A, start)]


@pytest.mark.parametrize("k", range(2, 7))
def test_congruence_tower_full_range(k):
    assert verify_congruence_tower(params_for_k(k), 10, 9).passed


# --- first-coordinate congruence --------------------------------------------

@pytest.mark.parametrize("k, m_max", [(2, 100), (4, 50), (3, 50)])
def test_super_formula_examples(k, m_max):
    assert verify_super_formula(params_for_k(k), m_max).passed


def test_super_formula_k2_m2_value():
    # t_10 = 152 and 1 - (8 + 1) = -8 = 24 (mod 32)
    assert 152 % 32 == (1 - 9) % 32


# --- suite ------------------------------------------------------------------

def test_report_invariant():
    with pytest.raises(ValueError):
        VerificationReport("x", "y", True, {"a": 1})
    with pytest.raises(ValueError):
        VerificationReport("x", "y", False, None)


def test_run_suite_default_range():
    reports = run_suite(range(2, 7))
    assert all(r.passed for r in reports)
    assert len(reports) == 2 + 5 * 6
    assert [r.check_name for r in reports[:2]] == ["binomial_identity_a", "binomial_identity_b"]


def test_run_suite_minimal():
    limits = SuiteLimits(binom_max=1, reduction_pairs=1, reduction_index_max=1,
                         whole_push_m_max=1, tower_l_max=0, tower_s_max=1, super_m_max=1)
    reports = run_suite([2], limits)
    assert all(r.passed for r in reports)
    assert {r.check_name for r in reports} == set(ALL_CHECKS)


def test_run_suite_rejects_empty_and_small_k():
    with pytest.raises(DomainError):
        run_suite([])
    with pytest.raises(DomainError):
        run_suite([1, 2])


def test_run_suite_parallel_is_deterministic():
    limits = SuiteLimits(super_m_max=20, whole_push_m_max=5, tower_l_max=5)
    assert run_suite(range(2, 5), limits, workers=3) == run_suite(range(2, 5), limits)
