"""Sweep xi, rebuild S(xi, k) from primes, and pick out half-unit-mass bumps.

A zero at height ``gamma`` shows up in the zero-side sum as the Gaussian
``sqrt(alpha/2pi) exp(-2 alpha (xi - gamma)^2)``, whose integral over
``xi`` is exactly 1/2.  :func:`detect_zeros` looks for bumps of that height
and mass in a profile computed from the prime side alone.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResolutionError, TruncationInfeasible
from .explicit_formula import DEFAULT_MAX_TAU, prime_side_S
from .sieve import PrimePowerTable, default_table
from .weights import WeightParams, _log_tau, eps_floor, tau_truncation

PEAK_FRACTION = 0.5
MASS_BAND = (0.35, 0.65)
# window half-width in units of 1/sqrt(alpha)
MASS_WINDOW = 1.5
# two maxima are separate bumps only if the profile dips below this fraction of the lower one
VALLEY_RATIO = 0.8


@dataclass(frozen=True)
class KPolicy:
    """Rule mapping a scan point ``xi`` to the Hermite parameter ``k``.

    ``fixed_alpha``: ``ceil(alpha0 xi^2)``; ``figure1``: ``ceil(2 xi^2)``;
    ``theorem_remark``: ``ceil(beta (xi log(xi log xi))^2)``.
    """

    kind: str = "fixed_alpha"
    value: float = 1.0

    def __post_init__(self):
        if self.kind not in ("fixed_alpha", "figure1", "theorem_remark"):
            raise ValueError(f"unknown k-policy {self.kind!r}")
        if self.kind == "fixed_alpha" and not self.value > 0:
            raise ValueError("fixed_alpha needs alpha0 > 0")
        if self.kind == "theorem_remark" and not self.value > 1:
            raise ValueError("theorem_remark needs beta_policy > 1")

    @classmethod
    def fixed_alpha(cls, alpha0: float = 1.0) -> "KPolicy":
        return cls("fixed_alpha", alpha0)

    @classmethod
    def figure1(cls) -> "KPolicy":
        return cls("figure1", 2.0)

    @classmethod
    def theorem_remark(cls, beta_policy: float) -> "KPolicy":
        return cls("theorem_remark", beta_policy)

    def k_for(self, xi: float) -> int:
        if self.kind == "fixed_alpha":
            k = self.value * xi * xi
        elif self.kind == "figure1":
            k = 2.0 * xi * xi
        else:
            inner = xi * math.log(xi)
            if inner <= 1:
                raise DomainError("theorem_remark policy needs xi log xi > 1")
            k = self.value * (xi * math.log(inner)) ** 2
        # guard against ceil(4.000000000001) = 5 from float noise
        return max(1, math.ceil(k - 1e-9))

    def params(self, xi: float) -> WeightParams:
        return WeightParams(xi, self.k_for(xi))

    def describe(self) -> str:
        if self.kind == "fixed_alpha":
            return f"fixed_alpha({self.value:g})"
        if self.kind == "figure1":
            return "figure1"
        return f"theorem_remark({self.value:g})"


@dataclass(frozen=True)
class ScanProfile:
    xis: np.ndarray
    values: np.ndarray
    ks: np.ndarray
    terms_used: np.ndarray
    error_bounds: np.ndarray
    policy: KPolicy = field(default_factory=KPolicy)
    eps: float = 0.05

    def __post_init__(self):
        n = len(self.xis)
        for name in ("values", "ks", "terms_used", "error_bounds"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has {len(getattr(self, name))} entries, expected {n}")
        if n > 1:
            d = np.diff(self.xis)
            if np.any(d <= 0) or np.ptp(d) > 1e-9 * max(1.0, abs(d[0])):
                raise ValueError("profile grid must be strictly increasing and uniform")

    @property
    def step(self) -> float:
        return float(self.xis[1] - self.xis[0]) if len(self.xis) > 1 else 0.0

    @property
    def alphas(self) -> np.ndarray:
        return self.ks / self.xis ** 2


@dataclass(frozen=True)
class ZeroCandidate:
    location: float
    mass: float
    window: tuple[float, float]


def scan_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """``lo, lo + step, ...`` up to ``hi`` (inclusive when it lands on the grid)."""
    n = int(math.floor((hi - lo) / step + 1e-9))
    return lo + step * np.arange(n + 1)


def scan_profile(lo: float, hi: float, step: float, policy: KPolicy | None = None,
                 eps: float = 0.05, exact: bool = False, workers: int = 1,
                 max_tau: float = DEFAULT_MAX_TAU,
                 table: PrimePowerTable | None = None) -> ScanProfile:
    """Prime-side S on a uniform grid of ``xi``.

    Every grid point's truncation length is checked before anything is
    summed; the first infeasible point raises :class:`TruncationInfeasible`.
    Grid points are independent and may run on ``workers`` threads; the
    output does not depend on the worker count.
    """
    policy = policy or KPolicy.fixed_alpha(1.0)
    if not 2 <= lo < hi:
        raise DomainError(f"need 2 <= lo < hi, got lo={lo}, hi={hi}")
    if not 0 < step <= 0.1 + 1e-12:
        raise DomainError(f"step must lie in (0, 0.1], got {step}")
    if not eps > 0:
        raise DomainError("eps must be positive")
    xis = scan_grid(lo, hi, step)
    params = [policy.params(float(x)) for x in xis]
    for p in params:
        tr = tau_truncation(p, eps)
        if tr.infeasible or tr.tau > max_tau:
            floor = eps_floor(p, max_tau)
            raise TruncationInfeasible(
                f"at xi={p.xi:g} (k={p.k}) eps={eps:g} needs tau={tr.tau:.3g} > {max_tau:.3g}; "
                f"smallest feasible eps there is about {floor:.3g}",
                tau=tr.tau, eps_floor=floor, xi=p.xi)
    table = table or default_table()

    def one(p):
        return prime_side_S(p, eps, use_exact_weight=exact, max_tau=max_tau, table=table)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, params))
    else:
        rows = [one(p) for p in params]
    return ScanProfile(
        xis=xis,
        values=np.array([r.total for r in rows]),
        ks=np.array([p.k for p in params], dtype=np.int64),
        terms_used=np.array([r.terms_used for r in rows], dtype=np.int64),
        error_bounds=np.array([r.error_bound for r in rows]),
        policy=policy,
        eps=eps,
    )


def _trapezoid(y: np.ndarray, dx: float) -> float:
    if y.size < 2:
        return 0.0
    return float(dx * (y.sum() - 0.5 * (y[0] + y[-1])))


def detect_zeros(profile: ScanProfile) -> list[ZeroCandidate]:
    """Zero candidates: local maxima above half the Gaussian peak height
    whose windowed mass lies in ``MASS_BAND``.

    The mass window is ``+-1.5/sqrt(alpha)`` around the peak, cut short at
    the lowest point between this peak and each neighbouring peak.
    The reported location is the centroid of the profile over the window.
    """
    x, v = profile.xis, profile.values
    n = x.size
    if n < 3:
        return []
    step = profile.step
    alphas = profile.alphas
    limit = 1.0 / (4.0 * np.sqrt(alphas))
    if np.any(step > limit + 1e-12):
        worst = int(np.argmax(step - limit))
        raise ResolutionError(
            f"grid step {step:g} exceeds 1/(4 sqrt(alpha)) = {limit[worst]:.4g} at xi={x[worst]:g}")
    heights = PEAK_FRACTION * np.sqrt(alphas / (2.0 * math.pi))
    raw = [i for i in range(1, n - 1)
           if v[i] > heights[i] and v[i] >= v[i - 1] and v[i] > v[i + 1]]
    # k = ceil(alpha0 xi^2) makes the profile slightly jagged; maxima with no
    # real valley between them belong to the same bump
    peaks: list[int] = []
    for i in raw:
        if peaks:
            prev = peaks[-1]
            valley = v[prev:i + 1].min()
            if valley >= VALLEY_RATIO * min(v[prev], v[i]):
                if v[i] > v[prev]:
                    peaks[-1] = i
                continue
        peaks.append(i)
    out = []
    for j, i in enumerate(peaks):
        half = MASS_WINDOW / math.sqrt(alphas[i])
        lo_i = max(0, int(math.ceil((x[i] - half - x[0]) / step - 1e-9)))
        hi_i = min(n - 1, int(math.floor((x[i] + half - x[0]) / step + 1e-9)))
        # never integrate past the valley towards a neighbouring bump
        if j > 0:
            left = peaks[j - 1]
            lo_i = max(lo_i, left + int(np.argmin(v[left:i + 1])))
        if j + 1 < len(peaks):
            right = peaks[j + 1]
            hi_i = min(hi_i, i + int(np.argmin(v[i:right + 1])))
        seg = v[lo_i:hi_i + 1]
        mass = _trapezoid(seg, step)
        if not MASS_BAND[0] <= mass <= MASS_BAND[1]:
            continue
        location = _trapezoid(seg * x[lo_i:hi_i + 1], step) / mass
        out.append(ZeroCandidate(float(location), mass, (float(x[lo_i]), float(x[hi_i]))))
    return out


def required_primes_estimate(xi0: float, beta_policy: float, eps: float) -> float:
    """Truncation length needed at ``xi0`` under ``k = beta (xi0 log(xi0 log xi0))^2``.

    Returns ``inf`` when the value overflows a float.
    """
    if not xi0 > math.e:
        raise DomainError("xi0 must exceed e")
    if not beta_policy > 1:
        raise DomainError("beta_policy must exceed 1")
    if not eps > 0:
        raise DomainError("eps must be positive")
    k = beta_policy * (xi0 * math.log(xi0 * math.log(xi0))) ** 2
    p = WeightParams.from_real_k(xi0, k)
    log_tau = _log_tau(p, eps)
    return math.exp(log_tau) if log_tau < 709.0 else math.inf
