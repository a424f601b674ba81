import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeradial.errors import DomainError, ResourceCapError
from freeradial.opnorm import (
    build_rho,
    coefficient_function,
    estimate_opnorm,
    gelfand_norm,
    gram_power_iteration,
    haagerup_check,
    increment_ratios,
    is_free_subset,
    l2eps_tail,
    leinert_experiment,
    opnorm_stats,
)
from freeradial.radial import RadialFunction, TreeFunction
from freeradial.spherical import transform_angles
from freeradial.words import enumerate_ball, inverse, multiply

SQRT3 = math.sqrt(3)


def brute_force_rho(x, vec):
    """(rho(x) v)(h) = sum_g x(g) v(g^-1 h), by multiplying words."""
    out = {}
    for g, a in x.values.items():
        for u, b in vec.items():
            h = multiply(g, u)
            out[h] = out.get(h, 0j) + a * b
    return out


def random_tree_function(rng, r, L):
    words = enumerate_ball(r, L).words
    return TreeFunction(r, {w: complex(rng.standard_normal(), rng.standard_normal()) for w in words if rng.random() < 0.5})


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_rho_matches_word_multiplication(seed, r):
    rng = np.random.default_rng(seed)
    x = random_tree_function(rng, r, 2)
    N = 2
    op = build_rho(x, N)
    v = rng.standard_normal(op.domain.size) + 1j * rng.standard_normal(op.domain.size)
    got = op @ v
    want = brute_force_rho(x, dict(zip(op.domain.words, v)))
    big = enumerate_ball(r, op.codomain_radius)
    dense = np.zeros(big.size, dtype=complex)
    for h, val in want.items():
        dense[big.index(h)] = val
    assert np.max(np.abs(got - dense), initial=0.0) <= 1e-12


def test_adjoint_apply_is_the_hermitian_adjoint():
    rng = np.random.default_rng(5)
    x = random_tree_function(rng, 2, 2)
    op = build_rho(x, 3)
    u = rng.standard_normal(op.shape[1])
    w = rng.standard_normal(op.shape[0])
    assert np.vdot(w, op @ u) == pytest.approx(np.vdot(op.adjoint_apply(w), u))


def test_translations_are_isometries():
    assert estimate_opnorm(build_rho(TreeFunction.delta(2), 3)) == pytest.approx(1.0, abs=1e-12)
    assert estimate_opnorm(build_rho(TreeFunction.delta(3, (1, -2)), 3)) == pytest.approx(1.0, abs=1e-12)


def test_real_radial_compression_is_self_adjoint():
    op = build_rho(RadialFunction(2, [0.5, 1.0, -0.25]), 4)
    C = op.compression()
    assert abs(C - C.T).max() == 0


def test_power_iteration_against_dense_svd():
    rng = np.random.default_rng(1)
    x = random_tree_function(rng, 2, 2)
    op = build_rho(x, 3)
    hist = gram_power_iteration(op, iters=400)
    assert np.all(np.diff(hist) >= -1e-10 * hist[-1])
    exact = np.linalg.svd(op.matrix.toarray(), compute_uv=False)[0]
    assert math.sqrt(hist[-1]) <= exact * (1 + 1e-12)
    assert math.sqrt(hist[-1]) == pytest.approx(exact, rel=1e-6)


def test_gelfand_norm_of_sphere_one_indicator():
    assert abs(gelfand_norm(RadialFunction.delta(2, 1)) - 2 * SQRT3) <= 1e-9
    assert gelfand_norm(RadialFunction.delta(3, 1)) == pytest.approx(2 * math.sqrt(5), rel=1e-12)


def test_gelfand_norm_interior_maximum():
    # |x_hat| peaks strictly inside (0, pi) for this function
    x = RadialFunction(2, [0.0, 0.0, 1.0])
    t = np.linspace(0, math.pi, 200001)
    fine = np.max(np.abs(transform_angles(x, t)))
    assert gelfand_norm(x, grid=65) == pytest.approx(fine, rel=1e-9)


def test_truncated_norms_increase_towards_kesten_bound():
    x = RadialFunction.delta(2, 1)
    ests = [estimate_opnorm(build_rho(x, N), iters=200) for N in (2, 4, 6)]
    assert all(a < b for a, b in zip(ests, ests[1:]))
    assert ests[-1] <= 2 * SQRT3 * (1 + 1e-9)
    assert ests[-1] > 0.93 * 2 * SQRT3


def test_opnorm_stats_and_cap():
    stats = opnorm_stats(RadialFunction.delta(2, 1), 4, iters=50)
    assert stats["ball"] == 161 and stats["N"] == 4
    assert stats["gelfand_norm"] == pytest.approx(2 * SQRT3)
    assert stats["est_norm"] < stats["gelfand_norm"]
    assert opnorm_stats(TreeFunction.delta(2), 2)["gelfand_norm"] is None
    with pytest.raises(ResourceCapError):
        opnorm_stats(RadialFunction.delta(2, 1), 12, cap=10_000)


def test_coefficient_function_matches_definition():
    rng = np.random.default_rng(2)
    r, N = 2, 2
    ball = enumerate_ball(r, N)
    xi_vec = rng.standard_normal(ball.size) + 1j * rng.standard_normal(ball.size)
    eta_vec = rng.standard_normal(ball.size)
    y = coefficient_function(xi_vec, eta_vec, r, N)
    xi_d = dict(zip(ball.words, xi_vec))
    eta_d = dict(zip(ball.words, eta_vec))
    for t in enumerate_ball(r, 2 * N).words[:80]:
        # <rho(t) xi, eta> = sum_u xi(u) conj(eta(t u))
        want = sum(v * np.conj(eta_d.get(multiply(t, u), 0)) for u, v in xi_d.items())
        assert y[t] == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("r,N", [(2, 5), (3, 3)])
def test_haagerup_inequality_random_trials(r, N):
    rng = np.random.default_rng(r)
    size = enumerate_ball(r, N).size
    worst = 0.0
    for _ in range(20):
        xi_vec = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        eta_vec = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        rep = haagerup_check(xi_vec, eta_vec, r, N, 10)
        assert rep.violations == []
        worst = max(worst, rep.worst_ratio)
    assert 0 < worst <= 1


def test_haagerup_is_sharp_for_delta_vectors():
    ball = enumerate_ball(2, 2)
    e = np.zeros(ball.size)
    e[0] = 1.0
    rep = haagerup_check(e, e, 2, 2, 4)
    assert rep.lhs[0] == pytest.approx(1.0) and rep.worst_ratio == pytest.approx(1.0)


def test_free_subsets():
    assert is_free_subset([(1,), (2,)])
    assert is_free_subset([(1, 2), (2, 1)])
    assert not is_free_subset([(1,), (1, 1)])
    assert not is_free_subset([(1,), (-1,)])
    assert not is_free_subset([(1,), ()])


def test_leinert_experiments():
    single = leinert_experiment([(1, 2)], [2.0 - 1j], 2, 3)
    assert single.ratio == pytest.approx(1.0, abs=1e-12)
    pair = leinert_experiment([(1,), (2,)], [1.0, 1.0], 2, 6, iters=300)
    assert pair.free
    # ||lambda(a) + lambda(b)|| = 2 on F_2; truncations approach it from below
    assert 1.9 < pair.opnorm <= 2 + 1e-9
    with pytest.raises(DomainError):
        leinert_experiment([(1,)], [1.0, 2.0], 2, 2)


def test_increment_ratios_skip_zero_terms():
    ratios, levels = increment_ratios(np.array([1.0, 0.0, 0.5, 1e-20, 0.25]))
    assert np.allclose(ratios, [0.5, 0.5])
    assert list(levels) == [2, 4]


@pytest.mark.parametrize("theta", [0.0, math.pi])
def test_l2eps_tail_ratios_decay(theta):
    tail = l2eps_tail(theta, 1.0, 80)
    late = tail.ratios[tail.ratio_levels >= 40]
    assert late.size and np.all(late < 0.9)
    assert np.all(np.diff(tail.partial_sums) >= 0)
    assert tail.last_growth < 40


def test_l2eps_tail_at_right_angle_has_zero_odd_terms():
    tail = l2eps_tail(math.pi / 2, 1.0, 60)
    assert np.all(tail.ratio_levels % 2 == 0)
    assert np.all(tail.ratios[tail.ratio_levels >= 40] < 0.9)


def test_l2_without_eps_is_not_summable_at_zero():
    # eps -> 0 borderline: |S_n| p_n(0)^2 grows linearly, so ratios exceed 1
    tail = l2eps_tail(0.0, 1e-9, 60)
    assert tail.last_growth >= 50
    with pytest.raises(DomainError):
        l2eps_tail(0.0, 0.0, 10)


def test_inverse_pairs_cancel_in_rho():
    g = (1, -2, 1)
    x = TreeFunction(2, {g: 1.0})
    y = TreeFunction(2, {inverse(g): 1.0})
    op_x, op_y = build_rho(x, 4), build_rho(y, 7)
    v = np.random.default_rng(0).standard_normal(op_x.shape[1])
    back = op_y @ np.pad(op_x @ v, (0, op_y.shape[1] - op_x.shape[0]))
    assert np.allclose(back[: v.size], v)
