"""Special functions, adaptive quadrature, and bracketed root finding."""

import math

import mpmath
import pytest

from gpsl_heating.numerics import (
    DomainError,
    NonConvergence,
    NotBracketed,
    QuadratureSpec,
    RootSpec,
    dawson,
    erf,
    erfi_scaled,
    find_root,
    gamma_fn,
    integrate_interval,
    integrate_polar,
    integrate_radial,
)

mpmath.mp.dps = 30


@pytest.mark.parametrize("x", [0.0, 1e-8, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0])
def test_dawson_matches_high_precision(x):
    want = float(mpmath.sqrt(mpmath.pi) / 2
                 * mpmath.exp(-mpmath.mpf(x) ** 2) * mpmath.erfi(x))
    assert dawson(x) == pytest.approx(want, rel=1e-13, abs=1e-300)


@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 2.5, 7.0])
def test_erf_matches_high_precision(x):
    assert erf(x) == pytest.approx(float(mpmath.erf(x)), rel=1e-13, abs=1e-300)


@pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 50.0, 1000.0])
def test_erfi_scaled_matches_high_precision(x):
    want = float(mpmath.exp(-mpmath.mpf(x) ** 2) * mpmath.erfi(x))
    assert erfi_scaled(x) == pytest.approx(want, rel=1e-13)


def test_erfi_scaled_frozen_value():
    assert erfi_scaled(5.0) == pytest.approx(0.1152459618309366, rel=1e-13)


def test_erfi_scaled_large_argument_asymptote():
    # e^(-x^2) erfi(x) -> 1/(sqrt(pi) x) for large x, with no overflow
    val = erfi_scaled(1000.0)
    assert math.isfinite(val)
    assert val == pytest.approx(1.0 / (math.sqrt(math.pi) * 1000.0), rel=1e-5)


@pytest.mark.parametrize("x", [0.3, 0.5, 1.0, 1.5, 3.0 / 1.9, 4.5, 10.0])
def test_gamma_matches_high_precision(x):
    assert gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-13)


def test_gamma_frozen_value():
    assert gamma_fn(3.0 / 1.9) == pytest.approx(0.8913179590810436, rel=1e-13)


def test_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        gamma_fn(0.0)
    with pytest.raises(DomainError):
        gamma_fn(-1.5)


class TestIntervalQuadrature:
    def test_polynomial_exact(self):
        val, err = integrate_interval(lambda r: 3.0 * r * r, 0.0, 1.0)
        assert val == pytest.approx(1.0, rel=1e-12)
        assert err < 1e-10

    def test_split_points_resolve_kink(self):
        # int_0^1 |r - 1/3| dr = 5/18
        val, _ = integrate_interval(lambda r: abs(r - 1.0 / 3.0), 0.0, 1.0,
                                    split_points=(1.0 / 3.0,))
        assert val == pytest.approx(5.0 / 18.0, rel=1e-12)

    def test_split_points_outside_range_ignored(self):
        val, _ = integrate_interval(lambda r: r, 0.0, 1.0,
                                    split_points=(-2.0, 5.0))
        assert val == pytest.approx(0.5, rel=1e-12)

    def test_inverted_interval_rejected(self):
        with pytest.raises(DomainError):
            integrate_interval(lambda r: r, 1.0, 0.0)

    def test_oscillatory_with_one_panel_raises(self):
        spec = QuadratureSpec(max_subdivisions=1)
        with pytest.raises(NonConvergence):
            integrate_interval(lambda r: math.sin(1000.0 * r), 0.0, 1.0, spec)


class TestSemiInfiniteQuadrature:
    @pytest.mark.parametrize("scale", [1.0, 1e-8, 1e5])
    def test_exponential_tail_any_scale(self, scale):
        # the log map keeps the tail panel resolvable far from unit scale
        spec = QuadratureSpec(abs_tol=0.0, transform="semi_infinite_exp_map",
                              transform_scale=scale)
        val, _ = integrate_radial(lambda r: math.exp(-r / scale), spec)
        assert val == pytest.approx(scale, rel=1e-10)

    def test_gaussian_moment_native_mapping(self):
        # int_0^inf r^2 e^(-r^2) dr = sqrt(pi)/4 at unit scale
        val, _ = integrate_radial(lambda r: r * r * math.exp(-r * r))
        assert val == pytest.approx(math.sqrt(math.pi) / 4.0, rel=1e-10)

    def test_unknown_transform_rejected(self):
        with pytest.raises(DomainError):
            QuadratureSpec(transform="bogus")

    def test_nonpositive_transform_scale_rejected(self):
        with pytest.raises(DomainError):
            QuadratureSpec(transform="semi_infinite_exp_map", transform_scale=0.0)

    def test_negative_tolerances_rejected(self):
        with pytest.raises(DomainError):
            QuadratureSpec(rel_tol=-1.0)
        with pytest.raises(DomainError):
            QuadratureSpec(abs_tol=-1e-3)

    def test_subdivision_floor(self):
        with pytest.raises(DomainError):
            QuadratureSpec(max_subdivisions=0)


class TestPolarQuadrature:
    def test_separable_exponential(self):
        # int_0^inf e^(-r) dr * int_0^pi dtheta = pi
        val = integrate_polar(lambda r, th: math.exp(-r))
        assert val == pytest.approx(math.pi, rel=1e-9)

    def test_angular_weight(self):
        # int_0^inf r e^(-r^2) dr = 1/2, int_0^pi cos^2 = pi/2
        val = integrate_polar(lambda r, th: r * math.exp(-r * r) * math.cos(th) ** 2)
        assert val == pytest.approx(math.pi / 4.0, rel=1e-9)

    def test_error_estimate_returned(self):
        val, err = integrate_polar(lambda r, th: math.exp(-r), with_error=True)
        assert val == pytest.approx(math.pi, rel=1e-9)
        assert 0.0 <= err < 1e-6


class TestRootFinding:
    def test_cosine_root(self):
        spec = RootSpec(bracket_lo=1.0, bracket_hi=2.0, tol=1e-14)
        assert find_root(math.cos, spec) == pytest.approx(math.pi / 2.0, abs=1e-13)

    def test_sqrt_two(self):
        spec = RootSpec(bracket_lo=0.0, bracket_hi=2.0)
        root = find_root(lambda x: x * x - 2.0, spec)
        assert root == pytest.approx(math.sqrt(2.0), rel=1e-12)

    def test_endpoint_root_short_circuits(self):
        spec = RootSpec(bracket_lo=0.0, bracket_hi=1.0)
        assert find_root(lambda x: x, spec) == 0.0

    def test_same_sign_bracket_raises(self):
        spec = RootSpec(bracket_lo=-1.0, bracket_hi=1.0)
        with pytest.raises(NotBracketed):
            find_root(lambda x: x * x + 1.0, spec)

    def test_iteration_cap_raises(self):
        spec = RootSpec(bracket_lo=0.0, bracket_hi=2.0, max_iter=3)
        with pytest.raises(NonConvergence):
            find_root(lambda x: x * x - 2.0, spec)

    def test_inverted_bracket_rejected(self):
        with pytest.raises(DomainError):
            RootSpec(bracket_lo=2.0, bracket_hi=1.0)
