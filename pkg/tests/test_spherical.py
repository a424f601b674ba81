import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from freeradial.errors import DomainError
from freeradial.radial import RadialFunction, TreeFunction, radialize
from freeradial.spherical import (
    SphericalParameter,
    gamma,
    gauss_rule,
    invert,
    parse_parameter,
    parseval_check,
    plancherel_density_r2,
    recurrence_matrix,
    segment_length,
    sphere_weights,
    spherical_values,
    transform,
    transform_angles,
    trapezoid_rule_r2,
)
from freeradial.words import enumerate_ball, multiply


def random_radial(rng, r, nmax):
    """Random radial function with O(1) l^2 mass on every sphere."""
    c = rng.standard_normal(nmax + 1) + 1j * rng.standard_normal(nmax + 1)
    return RadialFunction(r, c / np.sqrt(sphere_weights(r, nmax)))


def averaged_on_tree(p, r, N):
    """Average of t -> p(|t|) over the 2r neighbours s*t, radialized, on |t| < N."""
    ball = enumerate_ball(r, N)
    gens = [s for g in range(1, r + 1) for s in (g, -g)]
    avg = {w: sum(p[len(multiply((s,), w))] for s in gens) / (2 * r) for w in ball.words if len(w) < N}
    return radialize(TreeFunction(r, avg)).values


def test_closed_form_at_zero():
    n = np.arange(61)
    p = spherical_values(SphericalParameter.real(0.0), 60).values
    assert np.max(np.abs(p - (1 + n / 2) * 3.0 ** (-n / 2))) <= 1e-10


def test_first_values():
    theta = 0.7
    p = spherical_values(SphericalParameter.real(theta, 3), 2).values
    g = math.sqrt(5) / 3 * math.cos(theta)
    assert p[0] == 1
    assert p[1] == pytest.approx(g)
    assert p[2] == pytest.approx((6 * g * g - 1) / 5)


@pytest.mark.parametrize("r", [2, 3, 5])
def test_segment_endpoints_are_characters(r):
    n = np.arange(101)
    triv = spherical_values(SphericalParameter.trivial(r), 100).values
    sign = spherical_values(SphericalParameter.sign(r), 100).values
    assert np.max(np.abs(triv - 1)) < 1e-9
    assert np.max(np.abs(sign - (-1.0) ** n)) < 1e-9


@pytest.mark.parametrize("param", [
    SphericalParameter.real(0.4),
    SphericalParameter.real(2.9, 3),
    SphericalParameter.lower(0.2),
    SphericalParameter.upper(0.5, 3),
])
def test_eigenfunction_of_neighbour_averaging(param):
    p = spherical_values(param, 6).values
    assert np.max(np.abs(averaged_on_tree(p, param.r, 6) - gamma(param) * p[:6])) < 1e-12


def test_segment_values_are_real_and_dominate():
    p = spherical_values(SphericalParameter.lower(0.3), 40).values
    assert np.all(p.imag == 0)
    p0 = spherical_values(SphericalParameter.real(0.0), 40).values.real
    for theta in np.linspace(0, math.pi, 17):
        pt = spherical_values(SphericalParameter.real(theta), 40).values
        assert np.all(np.abs(pt) <= p0 + 1e-12)


def test_recurrence_residual_small():
    for param in (SphericalParameter.real(1.3), SphericalParameter.upper(0.1)):
        assert spherical_values(param, 200).recurrence_residual() <= 1e-12


def test_scaled_branch_matches_direct_recurrence():
    c = np.cos(np.linspace(0.01, 3.1, 9))
    direct = recurrence_matrix(c, 2, 650, scaled_threshold=10**6)
    scaled = recurrence_matrix(c, 2, 650, scaled_threshold=600)
    assert np.allclose(direct[:600], scaled[:600], rtol=0, atol=0)
    assert np.allclose(direct[600:], scaled[600:], rtol=1e-8, atol=1e-300)


def test_parameter_validation_and_parsing():
    with pytest.raises(DomainError):
        SphericalParameter.real(4.0)
    with pytest.raises(DomainError):
        SphericalParameter.lower(1.0)
    with pytest.raises(DomainError):
        SphericalParameter("middle", 0.1)
    assert parse_parameter("0.7") == SphericalParameter.real(0.7)
    assert parse_parameter("upper:0.25", 3) == SphericalParameter.upper(0.25, 3)
    assert parse_parameter("trivial").is_endpoint
    assert parse_parameter("sign") == SphericalParameter.sign()
    assert segment_length(2) == pytest.approx(math.log(3) / 2)
    with pytest.raises(DomainError):
        parse_parameter("lower:abc")


def test_plancherel_density_closed_forms_agree():
    t = np.linspace(0.05, math.pi - 0.05, 50)
    assert np.allclose(plancherel_density_r2(t), 6 / (math.pi * (4 + 1 / np.tan(t) ** 2)), rtol=1e-13)


def test_plancherel_integral():
    integral, _ = quad(plancherel_density_r2, 0, math.pi, epsabs=1e-13)
    assert abs(integral - 1) <= 1e-8
    assert abs(trapezoid_rule_r2(2048).weights.sum() - 1) <= 1e-8


@pytest.mark.parametrize("r", [2, 3, 4])
@pytest.mark.parametrize("K", [1, 5, 40, 128])
def test_gauss_weights_sum_to_one(r, K):
    rule = gauss_rule(r, K)
    assert abs(rule.weights.sum() - 1) <= 1e-12
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)


@pytest.mark.parametrize("r", [2, 3])
def test_gauss_orthogonality(r):
    rule = gauss_rule(r, 16)
    P = recurrence_matrix(np.cos(rule.nodes), r, 15)
    G = (P * rule.weights) @ P.T
    assert np.max(np.abs(G - np.diag(1 / sphere_weights(r, 15)))) <= 1e-10


def test_gauss_rule_matches_closed_form_density():
    g = gauss_rule(2, 64)
    f = lambda t: np.cos(t) ** 4 + np.sin(3 * t) ** 2  # noqa: E731
    exact, _ = quad(lambda t: f(t) * plancherel_density_r2(t), 0, math.pi, epsabs=1e-14)
    # smooth but not polynomial in cos: converges fast, not exactly
    assert abs(g.integrate(f(g.nodes)) - exact) < 1e-10


def test_gauss_size_limits():
    with pytest.raises(DomainError):
        gauss_rule(2, 0)
    with pytest.raises(DomainError):
        gauss_rule(2, 10**6)


def test_transform_of_sphere_one_indicator():
    x = RadialFunction.delta(2, 1)
    t = np.linspace(0, math.pi, 9)
    assert np.allclose(transform_angles(x, t), 2 * math.sqrt(3) * np.cos(t))
    assert transform(x, [0.0])[0] == pytest.approx(2 * math.sqrt(3))
    assert transform(x, [SphericalParameter.trivial()])[0] == pytest.approx(4)


def test_transform_of_delta_is_one():
    assert np.allclose(transform_angles(RadialFunction.delta(3), np.linspace(0, 3, 7)), 1)


def test_transform_is_not_multiplicative():
    # the transform turns convolution, not the pointwise product, into products
    x = RadialFunction.delta(2, 1)
    lhs = transform(RadialFunction(2, x.values * x.values), [0.0])[0]
    rhs = transform(x, [0.0])[0] ** 2
    assert lhs == pytest.approx(2 * math.sqrt(3))
    assert rhs == pytest.approx(12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]), st.integers(0, 30))
def test_round_trip_inversion(seed, r, nmax):
    rng = np.random.default_rng(seed)
    x = random_radial(rng, r, nmax)
    back = invert(lambda t: transform_angles(x, t), r, nmax, K=40)
    assert np.max(np.abs(back.values - x.values)) <= 1e-9


def test_round_trip_raw_coefficients_relative_l2():
    # Unit-size values on deep spheres are huge in l^2; the error is relative.
    rng = np.random.default_rng(1)
    for r in (2, 3):
        x = RadialFunction(r, rng.standard_normal(31))
        back = invert(lambda t: transform_angles(x, t), r, 30, K=40)
        w = sphere_weights(r, 30)
        err = np.sqrt(np.sum(w * np.abs(back.values - x.values) ** 2) / np.sum(w * np.abs(x.values) ** 2))
        assert err < 1e-12


def test_invert_from_samples_on_grid_and_nodes():
    rng = np.random.default_rng(2)
    x = random_radial(rng, 2, 10)
    rule = gauss_rule(2, 20)
    back = invert((rule.nodes, transform_angles(x, rule.nodes)), 2, 10, K=20)
    assert np.allclose(back.values, x.values, atol=1e-12)
    grid = np.linspace(0, math.pi, 33)
    back = invert((grid, transform_angles(x, grid)), 2, 10, K=20)
    assert np.allclose(back.values, x.values, atol=1e-9)


def test_invert_needs_enough_nodes():
    with pytest.raises(DomainError):
        invert(lambda t: np.ones_like(t), 2, 10, K=10)


def test_delta_inverts_to_constant_transform():
    back = invert(lambda t: np.ones_like(t, dtype=complex), 2, 5, K=8)
    assert np.allclose(back.values, [1, 0, 0, 0, 0, 0], atol=1e-14)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_parseval(seed, r):
    rng = np.random.default_rng(seed)
    x = random_radial(rng, r, int(rng.integers(0, 25)))
    y = random_radial(rng, r, int(rng.integers(0, 25)))
    assert parseval_check(x, y) <= 1e-9
