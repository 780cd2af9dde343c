"""Extended-range arithmetic and special functions.

Everything here works on Python scalars; the ``*_array`` variants accept
numpy arrays and are what the formula evaluators use in their inner loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError, QuadratureError

LOG_2PI = math.log(2.0 * math.pi)
EULER_GAMMA = 0.57721566490153286061

# B_{2j} / (2j (2j-1)), j = 1..7
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)
# B_{2j} / (2j), j = 1..3: the digamma tail through z^-6
_DIGAMMA_TAIL = (1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0)

_SHIFT_TO = 10.0


@dataclass(frozen=True)
class ExtendedReal:
    """A real number stored as ``sign * exp(log_magnitude)``.

    Used for factors such as ``Gamma(k + 1/2)`` or ``H_{2k}(x)`` whose
    magnitude leaves the double range long before the products they enter
    do.
    """

    sign: int
    log_magnitude: float = -math.inf

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign!r}")
        if self.sign == 0:
            object.__setattr__(self, "log_magnitude", -math.inf)

    @classmethod
    def from_float(cls, value: float) -> "ExtendedReal":
        if value == 0.0:
            return cls(0)
        if not math.isfinite(value):
            raise ValueError("cannot represent a non-finite value")
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    @classmethod
    def from_log(cls, log_magnitude: float, sign: int = 1) -> "ExtendedReal":
        return cls(sign, log_magnitude)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log_magnitude > 709.78:
            return math.copysign(math.inf, self.sign)
        return self.sign * math.exp(self.log_magnitude)

    to_float = __float__

    def __mul__(self, other):
        if not isinstance(other, ExtendedReal):
            other = ExtendedReal.from_float(float(other))
        if self.sign == 0 or other.sign == 0:
            return ExtendedReal(0)
        return ExtendedReal(self.sign * other.sign, self.log_magnitude + other.log_magnitude)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ExtendedReal):
            other = ExtendedReal.from_float(float(other))
        if other.sign == 0:
            raise ZeroDivisionError("division by an ExtendedReal zero")
        if self.sign == 0:
            return ExtendedReal(0)
        return ExtendedReal(self.sign * other.sign, self.log_magnitude - other.log_magnitude)

    def __neg__(self):
        return ExtendedReal(-self.sign, self.log_magnitude)

    def __abs__(self):
        return ExtendedReal(abs(self.sign), self.log_magnitude)


def _stirling_tail(z):
    zi = 1.0 / z
    z2 = zi * zi
    acc = 0.0
    for coef in reversed(_STIRLING):
        acc = acc * z2 + coef
    return acc * zi


def log_gamma_array(z):
    """Principal branch of log Gamma for arrays with ``Re z > 0``.

    Shifts upward to ``Re z >= 10`` and applies Stirling's series through
    the ``z^-13`` term.  Real input gives real output.
    """
    z = np.asarray(z)
    is_real = not np.iscomplexobj(z)
    z = z.astype(complex if not is_real else float)
    if np.any(z.real <= 0):
        raise DomainError("log_gamma_array requires Re z > 0")
    shift = np.maximum(0, np.ceil(_SHIFT_TO - z.real)).astype(np.int64)
    correction = np.zeros_like(z)
    w = z.copy()
    for j in range(int(shift.max(initial=0))):
        active = shift > j
        correction = correction + np.where(active, np.log(np.where(active, w, 1.0)), 0.0)
        w = np.where(active, w + 1.0, w)
    out = (w - 0.5) * np.log(w) - w + 0.5 * LOG_2PI + _stirling_tail(w) - correction
    return out


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for real ``x > 0``."""
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x!r}")
    if x == 1.0 or x == 2.0:
        return 0.0
    shift = 0.0
    w = float(x)
    while w < _SHIFT_TO:
        shift += math.log(w)
        w += 1.0
    return (w - 0.5) * math.log(w) - w + 0.5 * LOG_2PI + _stirling_tail(w) - shift


def log_gamma_complex(z: complex) -> complex:
    return complex(log_gamma_array(np.array([complex(z)]))[0])


def _check_digamma_poles(z):
    r = np.round(z.real)
    bad = (r <= 0) & (np.abs(z.real - r) < 1e-14) & (np.abs(z.imag) < 1e-14)
    if np.any(bad):
        raise DomainError("digamma has poles at the non-positive integers")


def digamma_array(z):
    """psi(z) for complex arrays.

    Points with ``Re z < 1/2`` are reflected; the rest are shifted upward
    by ``psi(z+1) = psi(z) + 1/z`` until ``Re z >= 10`` and finished with
    the asymptotic series through ``z^-6``.
    """
    z = np.asarray(z, dtype=complex)
    _check_digamma_poles(z)
    left = z.real < 0.5
    zr = np.where(left, 1.0 - z, z)
    shift = np.maximum(0, np.ceil(_SHIFT_TO - zr.real)).astype(np.int64)
    acc = np.zeros_like(zr)
    w = zr.copy()
    for j in range(int(shift.max(initial=0))):
        active = shift > j
        acc = acc + np.where(active, 1.0 / w, 0.0)
        w = np.where(active, w + 1.0, w)
    wi2 = 1.0 / (w * w)
    tail = 0.0
    for coef in reversed(_DIGAMMA_TAIL):
        tail = tail * wi2 + coef
    psi = np.log(w) - 0.5 / w - tail * wi2 - acc
    if np.any(left):
        psi = np.where(left, psi - math.pi / _tan_array(math.pi * np.where(left, z, 0.25)), psi)
    return psi


def digamma(z: complex) -> complex:
    """Digamma ``psi(z) = Gamma'(z)/Gamma(z)``; absolute error below 1e-10."""
    value = complex(digamma_array(np.array([z]))[0])
    return value


def _tan_array(z):
    # tan(x+iy) = (sin 2x + i sinh 2y) / (cos 2x + cosh 2y), rescaled by cosh 2y
    # so |y| in the hundreds does not overflow.
    z = np.asarray(z, dtype=complex)
    x2 = 2.0 * z.real
    y2 = 2.0 * z.imag
    big = np.abs(y2) > 700.0
    y2c = np.where(big, 0.0, y2)
    denom = np.cos(x2) + np.cosh(y2c)
    re = np.where(big, 0.0, np.sin(x2) / denom)
    im = np.where(big, np.sign(y2), np.sinh(y2c) / denom)
    return re + 1j * im


def hermite_log_array(n: int, x):
    """Sign and log-magnitude of the physicists' Hermite polynomial H_n.

    The three-term recurrence ``H_{j+1} = 2x H_j - 2j H_{j-1}`` runs on a
    float mantissa pair that is renormalised by a power of two after every
    step; the accumulated exponent is carried separately.

    Returns
    -------
    sign : ndarray of int
    log_abs : ndarray of float
        ``-inf`` where the value is exactly zero.
    """
    if n < 0:
        raise ValueError("Hermite degree must be non-negative")
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = x.ravel()
    if n == 0:
        return np.ones(shape, dtype=np.int64), np.zeros(shape)
    prev = np.ones_like(x)
    cur = 2.0 * x
    exponent = np.zeros(x.shape, dtype=np.int64)
    two_x = 2.0 * x
    for j in range(1, n):
        nxt = two_x * cur - (2.0 * j) * prev
        # scale by the larger of the two so neither leaves the double range
        _, e = np.frexp(np.maximum(np.abs(nxt), np.abs(cur)))
        prev = np.ldexp(cur, -e)
        cur = np.ldexp(nxt, -e)
        exponent += e
    sign = np.sign(cur).astype(np.int64)
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(cur)) + exponent * math.log(2.0)
    return sign.reshape(shape), log_abs.reshape(shape)


def hermite_scaled(n: int, x: float) -> ExtendedReal:
    """H_n(x) as an :class:`ExtendedReal`."""
    sign, log_abs = hermite_log_array(n, np.array([x], dtype=float))
    s = int(sign[0])
    return ExtendedReal(s, float(log_abs[0]) if s else -math.inf)


def compensated_sum(values: Iterable[float]) -> float:
    """Correctly rounded sum of ``values``; the result does not depend on length.

    Overflow of the exact sum gives ``inf``.
    """
    try:
        return math.fsum(values)
    except OverflowError:
        vals = list(values)
        return math.copysign(math.inf, sum(vals))


# ----------------------------------------------------------------------------
# quadrature

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _composite_gl(f, a, b, panels):
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    vals = np.asarray(f(t)).reshape(panels, _GL_NODES.size)
    return np.sum((vals @ _GL_WEIGHTS) * half)


def integrate(f, a: float, b: float, tol: float = 1e-10, panels: int = 8,
              max_panels: int = 1 << 14):
    """Composite 20-point Gauss-Legendre on ``[a, b]`` with panel doubling.

    ``f`` must accept a 1-d array of nodes.  Stops when two successive
    refinements agree to ``tol`` (absolute).
    """
    if b == a:
        return 0.0
    prev = _composite_gl(f, a, b, panels)
    while panels < max_panels:
        panels *= 2
        cur = _composite_gl(f, a, b, panels)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise QuadratureError(
        f"quadrature on [{a}, {b}] did not reach tol={tol:g}",
        achieved=float(abs(cur - prev)),
    )
