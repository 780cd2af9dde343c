"""The Gaussian-times-power weight, its inverse Mellin transform and truncation lengths.

The weight is defined through its Mellin transform

    w_hat(s) = c1 (-1)^k (s - 1/2)^(2k) exp(alpha (s - 1/2)^2),
    c1 = alpha^(k + 1/2) / Gamma(k + 1/2),  alpha = k / xi^2,

which on the critical line is a probability density in ``t`` with its mass
split evenly between ``t ~ +xi`` and ``t ~ -xi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, UnsupportedRegime
from .numerics import ExtendedReal, hermite_log_array, integrate, log_gamma

K_EXACT_MAX = 10_000
TAU_CAP = float(2 ** 63)
# half-width, in units of 1/sqrt(alpha), of the windows holding the mass of w_hat
WINDOW = 12.0


@dataclass(frozen=True)
class WeightParams:
    """``xi`` centres the spectral mass, ``k`` sets the Hermite degree ``2k``."""

    xi: float
    k: int

    def __post_init__(self):
        if not self.xi > 0 or not math.isfinite(self.xi):
            raise DomainError(f"xi must be a positive finite number, got {self.xi!r}")
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"k must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "xi", float(self.xi))

    @property
    def alpha(self) -> float:
        return self.k / (self.xi * self.xi)

    @classmethod
    def from_real_k(cls, xi: float, k: float) -> "WeightParams":
        """Round a real-valued ``k`` to the nearest integer (at least 1)."""
        return cls(xi, max(1, int(round(k))))

    @classmethod
    def from_alpha(cls, xi: float, alpha: float) -> "WeightParams":
        return cls.from_real_k(xi, alpha * xi * xi)


def c1_log(p: WeightParams) -> ExtendedReal:
    """Normalising constant of w_hat, positive."""
    return ExtendedReal(1, (p.k + 0.5) * math.log(p.alpha) - log_gamma(p.k + 0.5))


def c2_log(p: WeightParams) -> ExtendedReal:
    """Constant in front of the Hermite weight, ``(1/(2 sqrt(pi))) (-1/4)^k / Gamma(k+1/2)``."""
    mag = -math.log(2.0 * math.sqrt(math.pi)) - p.k * math.log(4.0) - log_gamma(p.k + 0.5)
    return ExtendedReal(-1 if p.k % 2 else 1, mag)


def w_hat(p: WeightParams, s):
    """Evaluate w_hat at complex ``s`` (scalar or array)."""
    s = np.asarray(s, dtype=complex)
    u = s - 0.5
    lc1 = c1_log(p).log_magnitude
    with np.errstate(divide="ignore", invalid="ignore"):
        log_val = lc1 + 2 * p.k * np.log(u) + p.alpha * u * u
    val = np.where(u == 0, 0.0, np.exp(log_val))
    if p.k % 2:
        val = -val
    return val[()] if val.ndim == 0 else val


def w_hat_critical(p: WeightParams, t):
    """``w_hat(1/2 + i t)`` for real ``t``; real and non-negative."""
    t = np.asarray(t, dtype=float)
    lc1 = c1_log(p).log_magnitude
    with np.errstate(divide="ignore"):
        log_val = lc1 + 2 * p.k * np.log(np.abs(t)) - p.alpha * t * t
    val = np.exp(log_val)
    return val[()] if val.ndim == 0 else val


def mass_windows(p: WeightParams) -> list[tuple[float, float]]:
    """Disjoint ``t``-intervals that carry all of w_hat's mass on the critical line."""
    half = WINDOW / math.sqrt(p.alpha)
    lo = max(0.0, p.xi - half)
    hi = p.xi + half
    if lo == 0.0:
        return [(-hi, hi)]
    return [(-hi, -lo), (lo, hi)]


def critical_line_integral(p: WeightParams, f, tol: float = 1e-10):
    """``int w_hat(1/2+it) f(t) dt`` over the mass windows."""
    def integrand(t):
        return w_hat_critical(p, t) * f(t)

    return sum(integrate(integrand, a, b, tol=tol) for a, b in mass_windows(p))


def log_weight_w_exact(p: WeightParams, x):
    """Sign and log-magnitude of the exact weight at ``x`` (array)."""
    if p.k > K_EXACT_MAX:
        raise UnsupportedRegime(
            f"k={p.k} exceeds K_EXACT_MAX={K_EXACT_MAX}; use weight_w_tilde instead")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("weight needs x > 0")
    L = np.log(x)
    c2 = c2_log(p)
    h_sign, h_log = hermite_log_array(2 * p.k, L / (2.0 * math.sqrt(p.alpha)))
    log_mag = c2.log_magnitude - 0.5 * L - L * L / (4.0 * p.alpha) + h_log
    return c2.sign * h_sign, log_mag


def weight_w_exact(p: WeightParams, x):
    """Inverse Mellin transform of w_hat.

    ``w(x) = c2 x^(-1/2) exp(-log(x)^2 / (4 alpha)) H_2k(log(x) / (2 sqrt(alpha)))``,
    with ``c2`` and the Hermite value combined in log space so that only
    the O(1) product is ever formed as a float.
    """
    sign, log_mag = log_weight_w_exact(p, x)
    with np.errstate(under="ignore"):
        val = sign * np.exp(log_mag)
    return val[()] if np.ndim(val) == 0 else val


def weight_w_tilde(p: WeightParams, x, printed_phase: bool = False):
    """Asymptotic form of the weight from the Hermite cosine approximation.

    ``(1/2pi) x^(-1/2) exp(-log(x)^2 / (8 alpha)) cos(xi log x)``.  With
    ``printed_phase`` the cosine argument is shifted by ``-k pi``, which
    flips the sign for odd ``k`` and no longer matches the exact weight.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("weight needs x > 0")
    L = np.log(x)
    phase = p.xi * L
    val = np.exp(-0.5 * L - L * L / (8.0 * p.alpha)) * np.cos(phase) / (2.0 * math.pi)
    if printed_phase and p.k % 2:
        val = -val
    return val[()] if val.ndim == 0 else val


def inverse_mellin_w(p: WeightParams, x: float, tol: float = 1e-12) -> float:
    """Numerical inverse Mellin transform of w_hat at ``x``.

    Integrates ``w_hat(s) x^(-s) / (2 pi i)`` along ``Re s = (1 + log(x)/alpha) / 2``,
    the saddle line on which the integrand does not oscillate in modulus.
    """
    L = math.log(x)
    sigma0 = 0.5 * (1.0 + L / p.alpha)
    u0 = sigma0 - 0.5
    half = math.sqrt(p.k / p.alpha + u0 * u0) + (WINDOW + 4.0) / math.sqrt(p.alpha)

    def integrand(t):
        s = sigma0 + 1j * t
        return (w_hat(p, s) * np.exp(-s * L)).real

    return float(integrate(integrand, -half, half, tol=tol)) / (2.0 * math.pi)


class Truncation(NamedTuple):
    """Number of prime-sum terms for a tail below ``eps``; capped at 2**63."""

    tau: float
    infeasible: bool


def _log_tau(p: WeightParams, eps: float) -> float:
    a = p.alpha
    inner = a + 0.5 * math.log(4.0 * p.k / (eps * p.xi))
    if inner < 0:
        inner = 0.0
    return 4.0 * (a + math.sqrt(a) * math.sqrt(inner))


def tau_truncation(p: WeightParams, eps: float) -> Truncation:
    """Truncation length beyond which ``sum Lambda(n) |w_tilde(n)| <= eps``."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    log_tau = _log_tau(p, eps)
    if log_tau >= math.log(TAU_CAP):
        return Truncation(TAU_CAP, True)
    return Truncation(math.exp(log_tau), False)


def eps_floor(p: WeightParams, max_tau: float) -> float:
    """Smallest ``eps`` whose truncation length stays within ``max_tau``."""
    a = p.alpha
    r = (math.log(max_tau) / 4.0 - a) / math.sqrt(a)
    inner = r * r - a
    return 4.0 * p.k / p.xi * math.exp(-2.0 * inner)

