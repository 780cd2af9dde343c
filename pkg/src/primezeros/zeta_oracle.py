"""Independent evaluation of zeta, its functional equation, and critical-line zeros.

Nothing here touches primes: zeta comes from Euler-Maclaurin summation and
zeros from sign changes of the Riemann-Siegel Z function.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IncompleteTableWarning, PrimeZerosError
from .numerics import log_gamma_array
from .tables import ZeroTable, riemann_von_mangoldt

# B_2, B_4, ..., B_20
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
              -3617 / 510, 43867 / 798, -174611 / 330)
CORRECTION_TERMS = 8
GRID_STEP = 0.05
T_MAX_LIMIT = 1000.0
_CHUNK = 1 << 21


class ZetaToleranceError(PrimeZerosError, ArithmeticError):
    pass


@dataclass(frozen=True)
class ZetaEvaluation:
    s: complex
    value: complex
    derivative: complex
    terms: int
    est_error: float


def default_terms(t: float) -> int:
    return max(20, math.ceil(2.0 * abs(t)))


def _em_block(s: np.ndarray, N: int, M: int):
    """zeta, zeta' and an error estimate at each of ``s`` using ``N`` terms."""
    n = np.arange(1, N, dtype=float)
    logn = np.log(n)
    val = np.empty(s.shape, dtype=complex)
    der = np.empty(s.shape, dtype=complex)
    mag = np.empty(s.shape, dtype=float)
    step = max(1, _CHUNK // max(N, 1))
    for i in range(0, s.size, step):
        ss = s[i:i + step]
        pw = np.exp(-np.outer(ss, logn))
        val[i:i + step] = pw.sum(axis=1)
        der[i:i + step] = -(pw @ logn)
        mag[i:i + step] = np.abs(pw).sum(axis=1)
    logN = math.log(N)
    Ns = np.exp(-s * logN)  # N^{-s}
    sm1 = s - 1.0
    val += N * Ns / sm1 + 0.5 * Ns
    der += N * Ns * (-logN / sm1 - 1.0 / (sm1 * sm1)) - 0.5 * logN * Ns
    # T_j = B_2j/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    P = s.copy()
    dP = np.ones_like(s)
    fact = 2.0
    Npow = Ns / N
    for j in range(1, M + 1):
        coef = _BERNOULLI[j - 1] / fact
        val += coef * P * Npow
        der += coef * Npow * (dP - logN * P)
        # advance to j+1: multiply by (s+2j-1)(s+2j)
        for a in (2 * j - 1, 2 * j):
            dP = dP * (s + a) + P
            P = P * (s + a)
        fact *= (2 * j + 1) * (2 * j + 2)
        Npow = Npow / (N * N)
    nxt = abs(_BERNOULLI[M] / fact) * np.abs(P * Npow)
    sigma = s.real + 2 * M + 1
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(sigma > 0, np.abs(s + 2 * M + 1) / sigma, np.inf)
    roundoff = 4.0 * np.finfo(float).eps * (mag + np.abs(val))
    return val, der, nxt * ratio + roundoff


def zeta_em_array(s, N: int | None = None, M: int = CORRECTION_TERMS):
    """Vectorised Euler-Maclaurin zeta; returns ``(zeta, zeta', est_error)``."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(np.abs(s - 1.0) < 1e-15):
        raise DomainError("zeta has a pole at s = 1")
    if N is None:
        N = default_terms(float(np.max(np.abs(s.imag), initial=0.0)))
    return _em_block(s, N, M)


def zeta_em(s: complex, tol: float = 1e-10) -> ZetaEvaluation:
    """zeta(s) and zeta'(s) by Euler-Maclaurin summation.

    Starts with ``max(20, 2|Im s|)`` terms and 8 correction terms and doubles
    the term count until the remainder estimate is below ``tol``.
    """
    s = complex(s)
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    if abs(s.imag) > T_MAX_LIMIT:
        raise DomainError(f"|Im s| must be <= {T_MAX_LIMIT:g}")
    N = default_terms(s.imag)
    for _ in range(8):
        val, der, err = _em_block(np.array([s]), N, CORRECTION_TERMS)
        if err[0] <= tol:
            return ZetaEvaluation(s, complex(val[0]), complex(der[0]), N, float(err[0]))
        N *= 2
    raise ZetaToleranceError(f"could not reach tol={tol:g} at s={s}; estimate {err[0]:.3g}")


def zeta(s: complex) -> complex:
    return zeta_em(s).value


def log_derivative_array(s):
    """zeta'(s)/zeta(s) on an array of points."""
    val, der, _ = zeta_em_array(s)
    return der / val


def chi_factor_array(s):
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    right = s.real >= 0.5
    out = np.empty_like(s)
    if np.any(right):
        sr = s[right]
        c = np.cos(0.5 * math.pi * sr)
        if np.any(np.abs(c) < 1e-14):
            raise DomainError("chi has poles at the odd positive integers")
        # (2 pi)^s / (2 cos(pi s / 2) Gamma(s))
        out[right] = np.exp(sr * math.log(2 * math.pi) - log_gamma_array(sr)) / (2.0 * c)
    if np.any(~right):
        sl = s[~right]
        # 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s)
        out[~right] = (np.exp(sl * math.log(2.0) + (sl - 1.0) * math.log(math.pi)
                              + log_gamma_array(1.0 - sl)) * np.sin(0.5 * math.pi * sl))
    return out


def chi_factor(s: complex) -> complex:
    """The factor in ``zeta(s) = chi(s) zeta(1 - s)``.

    Uses ``(2 pi)^s / (2 cos(pi s/2) Gamma(s))`` for ``Re s >= 1/2`` and the
    sine form otherwise, so the removable singularities at even positive
    integers never appear as 0 * inf.
    """
    return complex(chi_factor_array(np.array([s]))[0])


def functional_equation_residual(s: complex) -> float:
    return abs(zeta_em(s).value - chi_factor(s) * zeta_em(1.0 - s).value)


def riemann_siegel_theta(t):
    t = np.asarray(t, dtype=float)
    lg = log_gamma_array(0.25 + 0.5j * t)
    return lg.imag - 0.5 * t * math.log(math.pi)


def hardy_z(t):
    """Riemann-Siegel Z(t), real for real t."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(t.shape)
    # group points of similar height so each block uses a sensible term count
    order = np.argsort(np.abs(t))
    ts = t[order]
    block = 512
    for i in range(0, ts.size, block):
        tb = ts[i:i + block]
        val, _, _ = zeta_em_array(0.5 + 1j * tb)
        out[order[i:i + block]] = (np.exp(1j * riemann_siegel_theta(tb)) * val).real
    return out


def _bisect(t_lo: float, t_hi: float, z_lo: float, tol: float) -> float:
    while t_hi - t_lo > tol:
        mid = 0.5 * (t_lo + t_hi)
        z_mid = hardy_z(mid)[0]
        if z_mid == 0.0:
            return mid
        if (z_mid > 0) == (z_lo > 0):
            t_lo, z_lo = mid, z_mid
        else:
            t_hi = mid
    return 0.5 * (t_lo + t_hi)


def _brackets(t: np.ndarray, z: np.ndarray, depth: int):
    """Sign-change brackets on a grid, refining around suspicious |Z| dips."""
    out = []
    for i in range(t.size - 1):
        if z[i] == 0.0:
            out.append((t[i], t[i], z[i]))
        elif (z[i] > 0) != (z[i + 1] > 0) and z[i + 1] != 0.0:
            out.append((t[i], t[i + 1], z[i]))
    if depth > 0:
        for i in range(1, t.size - 1):
            same = (z[i - 1] > 0) == (z[i] > 0) == (z[i + 1] > 0)
            if same and abs(z[i]) < abs(z[i - 1]) and abs(z[i]) < abs(z[i + 1]):
                fine = np.linspace(t[i - 1], t[i + 1], 21)
                zf = hardy_z(fine)
                out.extend(_brackets(fine, zf, depth - 1))
    return out


def find_zeros(t_max: float, step: float = GRID_STEP, tol: float = 1e-9) -> ZeroTable:
    """All zeros ``1/2 + i gamma`` with ``0 < gamma <= t_max``.

    Scans Z(t) on a grid of ``step``, looks more closely wherever |Z| dips
    without changing sign, and bisects every bracket down to ``tol``.  Warns
    with :class:`IncompleteTableWarning` if the count strays more than 2
    from the smooth counting function.
    """
    if not 0 < t_max <= T_MAX_LIMIT:
        raise DomainError(f"t_max must lie in (0, {T_MAX_LIMIT:g}]")
    n = max(2, math.ceil(t_max / step) + 1)
    grid = np.linspace(0.0, t_max, n)
    z = hardy_z(grid)
    found = set()
    zeros = []
    for lo, hi, zlo in sorted(_brackets(grid, z, depth=2)):
        key = (round(lo, 12), round(hi, 12))
        if key in found:
            continue
        found.add(key)
        zeros.append(lo if lo == hi else _bisect(lo, hi, zlo, tol))
    zeros = np.array(sorted(g for g in zeros if g > 0))
    if zeros.size > 1:
        keep = np.concatenate([[True], np.diff(zeros) > 10 * tol])
        zeros = zeros[keep]
    if t_max > 14.0 and abs(zeros.size - riemann_von_mangoldt(t_max)) > 2.0:
        warnings.warn(
            f"found {zeros.size} zeros up to {t_max}, smooth count is "
            f"{riemann_von_mangoldt(t_max):.2f}; table may be incomplete",
            IncompleteTableWarning, stacklevel=2)
    return ZeroTable(zeros, complete_to=float(t_max), complete_from=0.0)


def gamma_n_estimate(n: int) -> float:
    """Asymptotic size ``2 pi n / log n`` of the n-th zero ordinate."""
    if n < 2:
        raise DomainError("gamma_n_estimate needs n >= 2")
    return 2.0 * math.pi * n / math.log(n)
