"""Generalized Fibonacci (r-nacci) numbers, their 2-adic valuations, and the
factorial product equation ``m! = t_{n_1} * ... * t_{n_d}``."""

from .errors import DomainError
from .sequence import (
    CompanionMatrix,
    HankelWindow,
    SequenceParams,
    StateVector,
    companion,
    hankel_window,
    make_params,
    params_for_k,
    state_vector,
    term,
    term_mod_pow2,
    terms,
)
from .valuation import (
    INFINITY,
    LegendreBounds,
    legendre_bounds,
    legendre_factorial,
    nu,
    nu2_closed_form,
    nu2_oracle,
    nu2_oracle_table,
)
from .bounds import BoundRow, PhiApprox, bounds_table, cor25_constants, m_upper_bound, n_sum_upper_bound, phi_root
from .solver import SearchConfig, Solution, brute_force_solve, is_factorial, solve, solve_grid
from .identities import VerificationReport, run_suite

__version__ = "0.1.0"
