"""Both sides of the explicit formula and the exact contour identity behind it.

Zero side::

    S(xi, k) = sqrt(alpha / 2pi) * sum_n exp(-2 alpha (gamma_n - xi)^2)

Prime side::

    S(xi, k) ~ log(xi / 2pi) / (4pi) - sum_n Lambda(n) w(n) + w_hat(1)

The exact identity obtained by moving the Perron integral for
``m(1) = sum Lambda(n) w(n)`` across the critical strip reads::

    m(1) = w_hat(1) - c1 sum_n gamma_n^(2k) exp(-alpha gamma_n^2) - J / (4pi)

with ``J = int w_hat(1/2 + it) g(1/2 + it) dt`` and ``g = chi'/chi``.  One
copy of ``w_hat(1)`` is the residue of ``zeta'/zeta`` at ``s = 1``; the other
comes from the pole of ``g`` at ``s = 1`` when its line integral is moved
from ``Re s = 2`` to the critical line.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import CoverageError, DomainError, TruncationInfeasible, UnsupportedRegime
from .numerics import LOG_2PI, ExtendedReal, _tan_array, digamma_array, integrate
from .sieve import PrimePowerTable, default_table
from .tables import ZeroTable
from .weights import (K_EXACT_MAX, WINDOW, WeightParams, c1_log, critical_line_integral,
                      eps_floor, tau_truncation, w_hat, weight_w_exact, weight_w_tilde)
from .zeta_oracle import log_derivative_array

# Largest truncation length a prime sum will attempt.
DEFAULT_MAX_TAU = 1e10
# Zero tables must cover xi +- COVERAGE / sqrt(alpha).
COVERAGE = 8.0
# Sign with which J / (2 pi) enters 2 m(1); fixed against the Perron oracle.
J_SIGN = -1
PERRON_K_MAX = 64

__all__ = [
    "FormulaBreakdown", "ZeroTable", "zero_side_S", "zero_side_exact", "smooth_term",
    "pole_term", "g_chi", "j_integral", "prime_sum", "prime_side_S",
    "identity_residual", "perron_m1_oracle", "error_bound",
]


@dataclass(frozen=True)
class FormulaBreakdown:
    """Pieces of a prime-side evaluation; ``total = smooth_term - prime_sum + pole_term``."""

    xi: float
    k: int
    smooth_term: float
    prime_sum: float
    pole_term: float
    error_bound: float
    total: float
    terms_used: int
    eps_requested: float
    tau: float


def _check_coverage(p: WeightParams, zt: ZeroTable) -> None:
    if not len(zt):
        return
    half = COVERAGE / math.sqrt(p.alpha)
    lo, hi = p.xi - half, p.xi + half
    if not zt.covers(lo, hi):
        raise CoverageError(
            f"zero table is complete on [{zt.complete_from:g}, {zt.complete_to:g}] "
            f"but xi={p.xi:g} needs gammas in [{max(lo, 0.0):g}, {hi:g}]",
            needed=(max(lo, 0.0), hi))


def zero_side_S(p: WeightParams, zt: ZeroTable) -> float:
    """Gaussian-weighted sum over the zero ordinates in ``zt``."""
    _check_coverage(p, zt)
    g = zt.gammas
    a = p.alpha
    terms = math.sqrt(a / (2.0 * math.pi)) * np.exp(-2.0 * a * (g - p.xi) ** 2)
    return math.fsum(terms.tolist())


def coverage_tail_bound(p: WeightParams) -> float:
    """Size of one zero term just outside the coverage window."""
    a = p.alpha
    return math.sqrt(a / (2.0 * math.pi)) * math.exp(-2.0 * COVERAGE ** 2)


def zero_side_exact(p: WeightParams, zt: ZeroTable) -> float:
    """``c1 sum gamma^(2k) exp(-alpha gamma^2)``, i.e. ``sum w_hat(1/2 + i gamma)``."""
    _check_coverage(p, zt)
    g = zt.gammas
    if not g.size:
        return 0.0
    log_terms = c1_log(p).log_magnitude + 2 * p.k * np.log(g) - p.alpha * g * g
    with np.errstate(under="ignore"):
        return math.fsum(np.exp(log_terms).tolist())


def smooth_term(xi: float) -> float:
    if not xi > 0:
        raise DomainError("xi must be positive")
    return math.log(xi / (2.0 * math.pi)) / (4.0 * math.pi)


def pole_term_log(p: WeightParams) -> ExtendedReal:
    """``w_hat(1) = c1 (-1)^k 4^-k exp(alpha/4)`` as an :class:`ExtendedReal`."""
    c1 = c1_log(p)
    return ExtendedReal(-1 if p.k % 2 else 1,
                        c1.log_magnitude - p.k * math.log(4.0) + 0.25 * p.alpha)


def pole_term(p: WeightParams) -> float:
    """Contribution of the pole of zeta at ``s = 1``: ``w_hat(1)``."""
    return float(pole_term_log(p))


def g_chi_array(s):
    s = np.asarray(s, dtype=complex)
    r = np.round(s.real)
    near_int = (np.abs(s.real - r) < 1e-8) & (np.abs(s.imag) < 1e-8)
    if np.any(near_int & ((r % 2 == 1) | (r <= 0))):
        raise DomainError("g(s) has poles at odd integers and non-positive integers")
    return LOG_2PI + 0.5 * math.pi * _tan_array(0.5 * math.pi * s) - digamma_array(s)


def g_chi(s: complex) -> complex:
    """Logarithmic derivative of chi: ``log 2pi + (pi/2) tan(pi s/2) - psi(s)``."""
    return complex(g_chi_array(np.array([s]))[0])


def j_integral(p: WeightParams, tol: float = 1e-10, return_complex: bool = False):
    """``J = int w_hat(1/2 - it) g(1/2 - it) dt`` over the mass of w_hat.

    Its imaginary part cancels between ``t`` and ``-t``; only the real part
    is returned unless ``return_complex``.
    """
    if p.xi < 1:
        raise DomainError("j_integral needs xi >= 1")
    val = complex(critical_line_integral(p, lambda t: g_chi_array(0.5 - 1j * t), tol=tol))
    return val if return_complex else val.real


def error_bound(p: WeightParams, eps: float = 0.0) -> float:
    """Uncalibrated error scale ``(sqrt(k)/xi^2 + exp(-sqrt(k)/xi)) log(xi)``, plus ``eps``."""
    rk = math.sqrt(p.k)
    return (rk / p.xi ** 2 + math.exp(-rk / p.xi)) * math.log(max(p.xi, math.e)) + eps


def _tree_sum(parts: list[float]) -> float:
    # fixed pairwise reduction over segment index
    while len(parts) > 1:
        parts = [math.fsum(parts[i:i + 2]) for i in range(0, len(parts), 2)]
    return parts[0] if parts else 0.0


def _resolve_tau(p: WeightParams, eps: float, max_tau: float) -> float:
    tr = tau_truncation(p, eps)
    if tr.infeasible or tr.tau > max_tau:
        floor = eps_floor(p, max_tau)
        raise TruncationInfeasible(
            f"xi={p.xi:g}, k={p.k}: eps={eps:g} needs tau={tr.tau:.3g} > {max_tau:.3g}; "
            f"smallest feasible eps is about {floor:.3g}",
            tau=tr.tau, eps_floor=floor, xi=p.xi)
    return tr.tau


def prime_sum(p: WeightParams, limit: float, exact: bool = True,
              table: PrimePowerTable | None = None, workers: int = 1,
              printed_phase: bool = False) -> tuple[float, int]:
    """``sum_{n <= limit} Lambda(n) w(n)`` and the number of non-zero terms.

    Each sieve segment is summed exactly (``math.fsum``) and the segment
    totals are combined in a fixed pairwise order, so the result does not
    depend on ``workers``.
    """
    if exact and p.k > K_EXACT_MAX:
        raise UnsupportedRegime(
            f"k={p.k} exceeds K_EXACT_MAX={K_EXACT_MAX}; pass exact=False for the asymptotic weight")
    table = table or default_table()
    segments = list(table.segments_upto(int(limit)))

    def seg_sum(seg):
        ns, lam = seg
        if not ns.size:
            return 0.0
        x = ns.astype(float)
        w = weight_w_exact(p, x) if exact else weight_w_tilde(p, x, printed_phase=printed_phase)
        return math.fsum((lam * w).tolist())

    if workers > 1 and len(segments) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(seg_sum, segments))
    else:
        parts = [seg_sum(seg) for seg in segments]
    terms = sum(seg[0].size for seg in segments)
    return _tree_sum(parts), terms


def prime_side_S(p: WeightParams, eps: float, use_exact_weight: bool = True,
                 max_tau: float = DEFAULT_MAX_TAU, table: PrimePowerTable | None = None,
                 workers: int = 1, printed_phase: bool = False) -> FormulaBreakdown:
    """Estimate S(xi, k) from primes alone.

    The prime sum runs up to the truncation length for ``eps``.  With
    ``use_exact_weight`` the Hermite weight is used (``k <= K_EXACT_MAX``
    required), otherwise its cosine approximation.
    """
    tau = _resolve_tau(p, eps, max_tau)
    if use_exact_weight and p.k > K_EXACT_MAX:
        raise UnsupportedRegime(
            f"k={p.k} exceeds K_EXACT_MAX={K_EXACT_MAX}; use the asymptotic weight")
    m1, terms = prime_sum(p, tau, exact=use_exact_weight, table=table, workers=workers,
                          printed_phase=printed_phase)
    smooth = smooth_term(p.xi)
    pole = pole_term(p)
    total = smooth - m1 + pole
    return FormulaBreakdown(
        xi=p.xi, k=p.k, smooth_term=smooth, prime_sum=m1, pole_term=pole,
        error_bound=error_bound(p, eps), total=total, terms_used=terms,
        eps_requested=eps, tau=tau)


def identity_parts(p: WeightParams, zt: ZeroTable, eps: float,
                   max_tau: float = DEFAULT_MAX_TAU, table=None, workers: int = 1) -> dict:
    tau = _resolve_tau(p, eps, max_tau)
    m1, _ = prime_sum(p, tau, exact=True, table=table, workers=workers)
    return {
        "m1": m1,
        "pole": pole_term(p),
        "zero_sum": zero_side_exact(p, zt),
        "J": j_integral(p, tol=1e-12),
    }


def assemble_residual(parts: dict, j_sign: int = J_SIGN) -> float:
    """``2 m1 - (2 pole - 2 zero_sum + j_sign J / 2pi)``."""
    rhs = 2.0 * parts["pole"] - 2.0 * parts["zero_sum"] + j_sign * parts["J"] / (2.0 * math.pi)
    return 2.0 * parts["m1"] - rhs


def identity_residual(p: WeightParams, zt: ZeroTable, eps: float,
                      max_tau: float = DEFAULT_MAX_TAU, table=None, workers: int = 1) -> float:
    """Residual of the exact contour identity for ``2 m(1)``; small when every piece is right."""
    return assemble_residual(identity_parts(p, zt, eps, max_tau, table, workers))


def perron_m1_oracle(p: WeightParams, tol: float = 1e-12) -> float:
    """``m(1)`` from the Perron integral on ``Re s = 2`` using the zeta oracle.

    ``m(1) = -(1/2pi) int w_hat(2+it) zeta'/zeta(2+it) dt``; no primes involved.
    """
    if p.k > PERRON_K_MAX:
        raise DomainError(f"perron_m1_oracle supports k <= {PERRON_K_MAX}")
    half = math.sqrt(p.xi ** 2 + 2.25) + (WINDOW + 2.0) / math.sqrt(p.alpha)

    def integrand(t):
        s = 2.0 + 1j * t
        return (w_hat(p, s) * log_derivative_array(s)).real

    return -float(integrate(integrand, -half, half, tol=tol)) / (2.0 * math.pi)
