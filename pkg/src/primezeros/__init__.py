"""Detect zeta zeros from primes via a Hermite-weighted explicit formula."""

__version__ = "0.1.0"

from .errors import (CoverageError, DomainError, PrimeZerosError, QuadratureError,
                     ResolutionError, TruncationInfeasible, UnsupportedRegime)
from .explicit_formula import (FormulaBreakdown, g_chi, identity_residual, j_integral,
                               perron_m1_oracle, pole_term, prime_side_S, smooth_term,
                               zero_side_exact, zero_side_S)
from .numerics import ExtendedReal, compensated_sum, digamma, hermite_scaled, log_gamma
from .scan import (KPolicy, ScanProfile, ZeroCandidate, detect_zeros,
                   required_primes_estimate, scan_profile)
from .sieve import LambdaSegment, prime_power_iter, sieve_lambda
from .tables import ZeroTable, read_zero_table, write_zero_table
from .weights import (WeightParams, c1_log, c2_log, tau_truncation, w_hat, weight_w_exact,
                      weight_w_tilde)
from .zeta_oracle import (ZetaEvaluation, chi_factor, find_zeros, gamma_n_estimate,
                          zeta_em)
