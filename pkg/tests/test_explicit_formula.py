import math

import mpmath
import numpy as np
import pytest

from primezeros.errors import CoverageError, DomainError, TruncationInfeasible, UnsupportedRegime
from primezeros.explicit_formula import (J_SIGN, K_EXACT_MAX, assemble_residual, error_bound,
                                         g_chi, identity_parts, identity_residual, j_integral,
                                         perron_m1_oracle, pole_term, pole_term_log, prime_side_S,
                                         prime_sum, smooth_term, zero_side_exact, zero_side_S)
from primezeros.sieve import default_table
from primezeros.tables import ZeroTable
from primezeros.weights import WeightParams, c1_log, tau_truncation, w_hat, weight_w_exact

GAMMA1 = 14.134725
SIX_XI = (12.0, 14.134725, 18.0, 21.022040, 25.010858, 30.0)


def w_hat_at(p, t):
    return w_hat(p, 0.5 + 1j * t)


def alpha_one(xi):
    return WeightParams(xi, math.ceil(xi * xi))


class TestZeroSide:
    def test_empty(self):
        assert zero_side_S(WeightParams(5.0, 25), ZeroTable()) == 0.0
        assert zero_side_exact(WeightParams(5.0, 25), ZeroTable()) == 0.0

    def test_single_zero_at_xi(self):
        p = WeightParams(20.0, 333)
        zt = ZeroTable(np.array([20.0]), complete_from=0.0, complete_to=100.0)
        assert zero_side_S(p, zt) == pytest.approx(math.sqrt(p.alpha / (2 * math.pi)), rel=1e-15)

    def test_first_ten(self, zeros100):
        p = WeightParams(GAMMA1, 200)
        val = zero_side_S(p, zeros100.first(10))
        # dominant term sqrt(alpha/2pi) with alpha = 200/xi^2 = 1.00105
        assert val == pytest.approx(0.3991514398, abs=1e-9)
        assert val == pytest.approx(math.sqrt(p.alpha / (2 * math.pi)), abs=2e-4)

    def test_exact_single_zero(self):
        p = WeightParams(1.0, 1)
        zt = ZeroTable(np.array([1.0]), complete_from=0.0, complete_to=20.0)
        assert zero_side_exact(p, zt) == pytest.approx(0.4151075, abs=1e-7)
        assert zero_side_exact(p, zt) == pytest.approx(complex(w_hat_at(p, 1.0)).real, rel=1e-13)

    def test_exact_vs_gaussian(self, zeros100):
        p = WeightParams(GAMMA1, 200)
        zt = zeros100.first(30)
        assert abs(zero_side_exact(p, zt) - zero_side_S(p, zt)) <= 0.01

    def test_coverage(self, zeros100):
        p = WeightParams(60.0, 3600)
        with pytest.raises(CoverageError) as err:
            zero_side_S(p, zeros100.first(10))
        lo, hi = err.value.needed
        assert lo == pytest.approx(52.0) and hi == pytest.approx(68.0)

    def test_half_mass_fixed_alpha_two(self, zeros100):
        g1 = zeros100.gammas[0]
        xs = np.linspace(g1 - 2, g1 + 2, 801)
        vals = np.array([zero_side_S(WeightParams.from_real_k(x, 2 * x * x), zeros100) for x in xs])
        mass = float(np.sum((vals[1:] + vals[:-1]) * np.diff(xs)) / 2)
        assert abs(mass - 0.5) <= 0.02


class TestSmoothAndPole:
    def test_smooth(self):
        assert smooth_term(2 * math.pi) == 0.0
        assert smooth_term(2 * math.pi * math.e) == pytest.approx(1 / (4 * math.pi), rel=1e-15)
        assert smooth_term(GAMMA1) == pytest.approx(0.0645180294, abs=1e-10)
        with pytest.raises(DomainError):
            smooth_term(0.0)

    def test_pole_value(self):
        # w_hat(1) = c1 (-1)^k 4^-k e^(alpha/4)
        p = WeightParams(1.0, 1)
        assert pole_term(p) == pytest.approx(-0.3622168826, abs=1e-10)
        assert pole_term(p) == pytest.approx(complex(w_hat_at(p, -0.5j)).real, rel=1e-13)

    def test_pole_sign(self):
        assert pole_term(WeightParams(1.0, 2)) > 0
        assert pole_term(WeightParams(1.0, 3)) < 0

    def test_pole_tiny_at_scan_scale(self):
        lt = pole_term_log(WeightParams(GAMMA1, 200))
        assert lt.log_magnitude < -100 * math.log(10)


class TestG:
    def test_half(self):
        assert g_chi(0.5).real == pytest.approx(5.3721834, abs=1e-7)
        assert abs(g_chi(0.5).imag) < 1e-15

    def test_large_t(self):
        t = 50.0
        assert abs(g_chi(0.5 + 1j * t).real + math.log(t / (2 * math.pi))) <= 0.02

    def test_conjugate(self):
        s = 0.5 + 3j
        assert g_chi(s.conjugate()) == pytest.approx(g_chi(s).conjugate(), rel=1e-14)

    @pytest.mark.parametrize("s", [0.5 + 14j, 0.25 - 7j, 2.5 + 1j, -0.5 + 20j])
    def test_is_log_derivative_of_chi(self, s):
        chi = lambda z: 2 ** z * mpmath.pi ** (z - 1) * mpmath.sin(mpmath.pi * z / 2) * mpmath.gamma(1 - z)
        ref = complex(mpmath.diff(chi, s) / chi(s))
        assert abs(g_chi(s) - ref) <= 1e-9 * max(1, abs(ref))

    @pytest.mark.parametrize("s", [1.0, 3.0, 0.0, -2.0, 1 + 1e-10j])
    def test_poles(self, s):
        with pytest.raises(DomainError):
            g_chi(s)


class TestJ:
    def test_imaginary_part(self):
        v = j_integral(WeightParams(GAMMA1, 200), return_complex=True)
        assert abs(v.imag) <= 1e-9

    def test_magnitude_is_log_ratio(self):
        # the value is -log(xi/2pi); the sign is pinned by the contour identity below
        p = WeightParams(GAMMA1, 200)
        J = j_integral(p)
        assert J == pytest.approx(-0.8105487, abs=1e-6)
        assert abs(J + math.log(p.xi / (2 * math.pi))) <= 0.05

    def test_domain(self):
        with pytest.raises(DomainError):
            j_integral(WeightParams(0.5, 1))


class TestPrimeSide:
    def test_breakdown_identity(self):
        r = prime_side_S(WeightParams(GAMMA1, 200), 0.05)
        assert r.total == r.smooth_term - r.prime_sum + r.pole_term
        assert r.terms_used <= tau_truncation(WeightParams(GAMMA1, 200), 0.05).tau
        assert r.terms_used == sum(1 for _ in default_table().arrays(int(r.tau))[0])
        assert r.eps_requested == 0.05
        assert r.error_bound == pytest.approx(error_bound(WeightParams(GAMMA1, 200)) + 0.05)

    def test_local_max_near_first_zero(self):
        xs = np.arange(13.9, 14.4 + 1e-9, 0.01)
        vals = [prime_side_S(WeightParams(x, 200), 0.05).total for x in xs]
        i = int(np.argmax(vals))
        assert 0 < i < len(xs) - 1
        assert abs(xs[i] - GAMMA1) <= 0.1

    def test_trough(self):
        p = alpha_one(17.5)
        assert prime_side_S(p, 0.05).total < 0.25 * math.sqrt(p.alpha / (2 * math.pi))

    @pytest.mark.parametrize("n,g", [(1, 14.134725), (2, 21.022040), (3, 25.010858)])
    def test_peak_localization(self, n, g):
        xs = np.round(np.arange(g - 0.3, g + 0.3 + 1e-9, 0.01), 10)
        vals = [prime_side_S(alpha_one(x), 0.05, use_exact_weight=False).total for x in xs]
        assert abs(xs[int(np.argmax(vals))] - g) <= 0.1

    def test_infeasible(self):
        with pytest.raises(TruncationInfeasible) as err:
            prime_side_S(WeightParams(1.0, 50), 1e-3)
        assert err.value.eps_floor > 1e-3

    def test_exact_limit(self):
        p = WeightParams(101.0, K_EXACT_MAX + 200)
        with pytest.raises(UnsupportedRegime):
            prime_side_S(p, 0.5, use_exact_weight=True, max_tau=1e30)

    def test_workers_bit_identical(self):
        p = WeightParams(30.0, 900)
        a, na = prime_sum(p, 3.5e6, exact=False, workers=1)
        b, nb = prime_sum(p, 3.5e6, exact=False, workers=4)
        assert a == b and na == nb

    def test_tilde_matches_exact_path(self):
        p = alpha_one(21.02204)
        a = prime_side_S(p, 0.01).total
        b = prime_side_S(p, 0.01, use_exact_weight=False).total
        assert abs(a - b) <= 0.01


class TestTwoSides:
    @pytest.mark.parametrize("xi", SIX_XI)
    def test_agreement(self, xi, zeros50):
        p = alpha_one(xi)
        assert abs(prime_side_S(p, 0.01).total - zero_side_S(p, zeros50)) <= 0.08


class TestPerron:
    @pytest.mark.parametrize("k,xi,ref", [(1, 1.0, -0.5283101008560), (4, 2.0, -0.0926820637434)])
    def test_against_prime_sum(self, k, xi, ref):
        p = WeightParams(xi, k)
        tau = tau_truncation(p, 1e-8).tau
        direct, _ = prime_sum(p, tau, exact=True)
        oracle = perron_m1_oracle(p)
        assert abs(oracle - direct) <= 1e-6
        assert oracle == pytest.approx(ref, abs=1e-10)

    def test_limit(self):
        with pytest.raises(DomainError):
            perron_m1_oracle(WeightParams(9.0, 81))


class TestIdentity:
    def test_small(self, zeros100):
        assert abs(identity_residual(WeightParams(2.0, 4), zeros100, 1e-6)) <= 1e-4

    def test_moderate(self, zeros100):
        assert abs(identity_residual(WeightParams(8.0, 64), zeros100, 1e-6)) <= 1e-3

    def test_sign_is_pinned(self, zeros100):
        # J_SIGN was chosen against the Perron oracle; the other sign fails by orders of magnitude
        assert J_SIGN == -1
        p = WeightParams(2.0, 4)
        parts = identity_parts(p, zeros100, 1e-6)
        parts["m1"] = perron_m1_oracle(p)
        good = abs(assemble_residual(parts, J_SIGN))
        bad = abs(assemble_residual(parts, -J_SIGN))
        assert good <= 1e-8 and bad > 1e-2

    def test_full_pole_term(self, zeros100):
        # at k=1 the pole term is large; a halved or sign-flipped one breaks the identity
        p = WeightParams(1.0, 1)
        parts = identity_parts(p, zeros100, 1e-8)
        assert abs(assemble_residual(parts)) <= 1e-8
        for scale in (0.5, -1.0):
            wrong = dict(parts, pole=scale * parts["pole"])
            assert abs(assemble_residual(wrong)) > 0.1

    def test_batches(self, zeros100):
        p = WeightParams(2.0, 4)
        parts = identity_parts(p, zeros100, 1e-6)
        tau = tau_truncation(p, 1e-6).tau
        ns, lam = default_table().arrays(int(tau))
        cut = ns.size // 2
        halves = [math.fsum((lam[sl] * weight_w_exact(p, ns[sl].astype(float))).tolist())
                  for sl in (slice(0, cut), slice(cut, None))]
        split = dict(parts, m1=math.fsum(halves))
        assert abs(assemble_residual(split) - assemble_residual(parts)) <= 1e-12

    def test_shrinks_with_eps(self, zeros100):
        p = WeightParams(2.0, 4)
        coarse = abs(identity_residual(p, zeros100, 1e-4))
        fine = abs(identity_residual(p, zeros100, 1e-8))
        assert coarse >= fine - 1e-12

    def test_c1_consistency(self):
        # zero_side_exact uses the same normalising constant as w_hat
        p = WeightParams(3.0, 9)
        zt = ZeroTable(np.array([3.0]), complete_from=0.0, complete_to=50.0)
        expected = float(c1_log(p)) * 3.0 ** 18 * math.exp(-9)
        assert zero_side_exact(p, zt) == pytest.approx(expected, rel=1e-12)
