"""Radial smearing profiles: normalization, variance, mass fraction, potential."""

import math

import numpy as np
import pytest

from gpsl_heating.numerics import DomainError
from gpsl_heating.smearing import (
    derive,
    load_tabulated_csv,
    make_compact_quartic,
    make_gaussian,
    make_optimal_feedback,
    make_sub_gaussian,
    make_tabulated,
    make_uniform_ball,
    normalization,
    sub_gaussian_alpha,
    variance,
    with_scale,
)

# solved support radius of the optimal feedback profile at r_G = r_C = 1
R_OPT_UNIT = 1.9941552819585908

FAMILIES = [
    pytest.param(make_gaussian(1.0), id="gaussian"),
    pytest.param(make_gaussian(1e-7), id="gaussian-small"),
    pytest.param(make_sub_gaussian(1.5, 1.0), id="subgauss-p1.5"),
    pytest.param(make_sub_gaussian(1.9, 2.0), id="subgauss-p1.9"),
    pytest.param(make_compact_quartic(1.0), id="quartic"),
    pytest.param(make_compact_quartic(3.5), id="quartic-wide"),
    pytest.param(make_uniform_ball(1.0), id="ball"),
    pytest.param(make_uniform_ball(0.02), id="ball-small"),
    pytest.param(make_optimal_feedback(1.0, R_OPT_UNIT, 1.0), id="optimal"),
]


@pytest.mark.parametrize("profile", FAMILIES)
def test_unit_mass(profile):
    assert normalization(profile) == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("profile", FAMILIES)
def test_second_moment_sets_scale(profile):
    # full spatial second moment: int |x|^2 g d3x = 3 scale^2
    assert variance(profile) == pytest.approx(3.0 * profile.scale ** 2, rel=1e-9)


@pytest.mark.parametrize("profile", FAMILIES)
def test_mass_fraction_monotone_zero_to_one(profile):
    q = derive(profile).Q
    assert q(0.0) == pytest.approx(0.0, abs=1e-300)
    radii = profile.scale * np.logspace(-2, 1.2, 40)
    vals = [q(r) for r in radii]
    assert all(0.0 <= v <= 1.0 + 1e-12 for v in vals)
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    if profile.support_radius is not None:
        assert q(profile.support_radius) == pytest.approx(1.0, rel=1e-12)
        assert q(3.0 * profile.support_radius) == pytest.approx(1.0, rel=1e-12)
    else:
        assert q(12.0 * profile.scale) == pytest.approx(1.0, rel=1e-6)


@pytest.mark.parametrize("profile", FAMILIES)
@pytest.mark.parametrize("r_over_scale", [0.3, 1.0, 2.7])
def test_potential_gradient_is_enclosed_mass_law(profile, r_over_scale):
    d = derive(profile)
    r = r_over_scale * profile.scale
    assert d.f_pot_grad(r) == pytest.approx(-d.Q(r) / r ** 2, rel=1e-9, abs=1e-300)


@pytest.mark.parametrize("profile", FAMILIES)
def test_potential_far_field_is_coulomb(profile):
    d = derive(profile)
    r = 12.0 * profile.scale
    if profile.support_radius is not None:
        r = max(r, 1.5 * profile.support_radius)
    assert d.f_pot(r) == pytest.approx(1.0 / r, rel=1e-9)


@pytest.mark.parametrize("profile", FAMILIES)
def test_potential_gradient_matches_difference_quotient(profile):
    d = derive(profile)
    r = 1.3 * profile.scale
    h = 1e-6 * profile.scale
    num = (d.f_pot(r + h) - d.f_pot(r - h)) / (2.0 * h)
    assert d.f_pot_grad(r) == pytest.approx(num, rel=1e-6)


def test_gaussian_mass_fraction_at_one_sigma():
    # erf(1/sqrt(2)) - sqrt(2/pi) e^(-1/2)
    q = derive(make_gaussian(1.0)).Q
    assert q(1.0) == pytest.approx(0.19874804309879915, rel=1e-12)


def test_ball_center_potential():
    ball = make_uniform_ball(2.0)
    radius = math.sqrt(5.0) * 2.0
    assert ball.support_radius == pytest.approx(radius, rel=1e-14)
    assert derive(ball).f_pot(0.0) == pytest.approx(1.5 / radius, rel=1e-12)


def test_gaussian_center_potential():
    assert derive(make_gaussian(1.0)).f_pot(0.0) == pytest.approx(
        math.sqrt(2.0 / math.pi), rel=1e-12)


def test_quartic_support_radius():
    assert make_compact_quartic(1.5).support_radius == pytest.approx(4.5, rel=1e-14)


class TestSubGaussian:
    def test_alpha_at_p2_is_sqrt2(self):
        assert sub_gaussian_alpha(2.0) == pytest.approx(math.sqrt(2.0), rel=1e-12)

    def test_alpha_at_p1(self):
        # sqrt(3 Gamma(3)/Gamma(5)) = 1/2
        assert sub_gaussian_alpha(1.0) == pytest.approx(0.5, rel=1e-12)

    @pytest.mark.parametrize("r", [0.2, 0.7, 1.0, 2.3, 5.0])
    def test_p2_reduces_to_gaussian(self, r):
        sub = derive(make_sub_gaussian(2.0, 1.0))
        gau = derive(make_gaussian(1.0))
        assert sub.Q(r) == pytest.approx(gau.Q(r), rel=1e-10)
        assert sub.f_pot(r) == pytest.approx(gau.f_pot(r), rel=1e-10)
        assert sub.f_pot_grad(r) == pytest.approx(gau.f_pot_grad(r), rel=1e-10)

    def test_rejects_nonpositive_exponent(self):
        with pytest.raises(DomainError):
            make_sub_gaussian(0.0, 1.0)
        with pytest.raises(DomainError):
            make_sub_gaussian(-2.0, 1.0)


@pytest.mark.parametrize("factory", [make_gaussian, make_compact_quartic,
                                     make_uniform_ball])
def test_factories_reject_nonpositive_scale(factory):
    with pytest.raises(DomainError):
        factory(0.0)
    with pytest.raises(DomainError):
        factory(-1.0)


class TestRescaling:
    @pytest.mark.parametrize("profile", FAMILIES)
    def test_mass_fraction_is_scale_free(self, profile):
        scaled = with_scale(profile, 2.5 * profile.scale)
        assert scaled.scale == pytest.approx(2.5 * profile.scale, rel=1e-14)
        q0 = derive(profile).Q
        q1 = derive(scaled).Q
        for r in (0.4, 1.0, 3.1):
            assert q1(2.5 * r * profile.scale) == pytest.approx(
                q0(r * profile.scale), rel=1e-9, abs=1e-300)

    def test_support_radius_scales(self):
        ball = with_scale(make_uniform_ball(1.0), 2.0)
        assert ball.support_radius == pytest.approx(2.0 * math.sqrt(5.0), rel=1e-14)

    def test_rescaled_profile_stays_normalized(self):
        scaled = with_scale(make_sub_gaussian(1.7, 1.0), 3.0)
        assert normalization(scaled) == pytest.approx(1.0, rel=1e-9)
        assert variance(scaled) == pytest.approx(27.0, rel=1e-9)


def _gaussian_samples(n=4000, r_max=12.0):
    r = np.linspace(0.0, r_max, n)
    g = np.exp(-r * r / 2.0) / (2.0 * math.pi) ** 1.5
    return r, g


class TestTabulated:
    def test_round_trip_from_gaussian_samples(self):
        r, g = _gaussian_samples()
        tab = make_tabulated(r, g)
        assert tab.kind == "tabulated"
        assert tab.scale == pytest.approx(1.0, rel=1e-4)
        assert normalization(tab) == pytest.approx(1.0, rel=1e-6)
        q_tab = derive(tab).Q
        q_ref = derive(make_gaussian(1.0)).Q
        for x in (0.5, 1.0, 2.0, 4.0):
            assert q_tab(x) == pytest.approx(q_ref(x), rel=1e-5)

    def test_csv_loader_matches_direct_construction(self, tmp_path):
        r, g = _gaussian_samples(n=800)
        path = tmp_path / "profile.csv"
        lines = ["# sampled radial density", "r,g"]
        lines += [f"{float(ri)!r},{float(gi)!r}" for ri, gi in zip(r, g)]
        path.write_text("\n".join(lines) + "\n")
        loaded = load_tabulated_csv(str(path))
        direct = make_tabulated(r, g)
        q_l = derive(loaded).Q
        q_d = derive(direct).Q
        for x in (0.5, 1.5, 3.0):
            assert q_l(x) == pytest.approx(q_d(x), rel=1e-12)

    def test_too_few_knots_rejected(self):
        with pytest.raises(DomainError):
            make_tabulated(np.array([0.0, 1.0, 2.0]), np.array([1.0, 0.5, 0.1]))

    def test_non_increasing_radii_rejected(self):
        with pytest.raises(DomainError):
            make_tabulated(np.array([0.0, 1.0, 0.5, 2.0]),
                           np.array([1.0, 0.5, 0.2, 0.1]))

    def test_negative_density_rejected(self):
        with pytest.raises(DomainError):
            make_tabulated(np.array([0.0, 1.0, 2.0, 3.0]),
                           np.array([1.0, 0.5, -0.2, 0.1]))

    def test_malformed_csv_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("r,g\n0.0,1.0\n1.0\n2.0,0.1\n3.0,0.05\n")
        with pytest.raises(DomainError):
            load_tabulated_csv(str(bad))


class TestOptimalFeedbackProfile:
    def test_saturates_at_support_radius(self):
        prof = make_optimal_feedback(1.0, R_OPT_UNIT, 1.0)
        q = derive(prof).Q
        assert q(R_OPT_UNIT) == pytest.approx(1.0, rel=1e-12)
        assert q(5.0) == pytest.approx(1.0, rel=1e-12)
        assert prof.support_radius == pytest.approx(R_OPT_UNIT, rel=1e-14)

    def test_rejects_nonpositive_arguments(self):
        with pytest.raises(DomainError):
            make_optimal_feedback(0.0, R_OPT_UNIT, 1.0)
        with pytest.raises(DomainError):
            make_optimal_feedback(1.0, -1.0, 1.0)
