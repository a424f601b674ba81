"""Executable verification suites, one per module.

Every check compares a library result against an independent route (brute
force on words, closed forms, quadrature, a second algorithm) and records the
achieved residual next to its tolerance.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.integrate import quad

from . import hypergroup as hg
from .config import Config
from .opnorm import (
    build_rho,
    estimate_opnorm,
    gelfand_norm,
    gram_power_iteration,
    haagerup_check,
    increment_ratios,
    l2eps_tail,
    leinert_experiment,
)
from .radial import (
    RadialFunction,
    TreeFunction,
    embed_radial,
    lp_norm,
    pointwise_product,
    radialize,
    sphere_l2_profile,
    tail_estimate_check,
    xi,
    xi_l3_tail,
    xi_l3_terms,
)
from .spherical import (
    SphericalParameter,
    gauss_rule,
    invert,
    parseval_check,
    plancherel_density_r2,
    recurrence_matrix,
    sphere_weights,
    spherical_values,
    transform,
    transform_angles,
    trapezoid_rule_r2,
)
from .words import enumerate_ball, inverse, multiply, reduce_word, sphere_size


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        text = f"[{mark}] {self.suite}.{self.name}: residual={self.residual:.3e} tol={self.tolerance:.3e}"
        if self.detail:
            text += f"  ({self.detail})"
        return text


class _Suite:
    def __init__(self, name: str, cfg: Config):
        self.name = name
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        self.checks: list[Check] = []

    def below(self, name, residual, tol_name=None, tol=None, detail=""):
        tol = self.cfg.tol(tol_name) if tol is None else tol
        residual = float(residual)
        self.checks.append(Check(self.name, name, bool(residual <= tol), residual, tol, detail))

    def holds(self, name, ok, detail=""):
        self.checks.append(Check(self.name, name, bool(ok), 0.0 if ok else 1.0, 0.0, detail))


# ---------------------------------------------------------------- oracles

def naive_reduce(letters):
    """Repeatedly delete the first cancelling pair until none is left."""
    w = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == -w[i + 1]:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


def random_letters(rng, r, n):
    gens = rng.integers(1, r + 1, size=n)
    signs = rng.choice([-1, 1], size=n)
    return [int(g * s) for g, s in zip(gens, signs)]


def random_word(rng, r, max_len):
    return reduce_word(random_letters(rng, r, int(rng.integers(0, max_len + 1))))


def brute_force_rho(x: TreeFunction, vec: dict) -> dict:
    """(rho(x) v)(h) = sum_g x(g) v(g^-1 h), summed over word pairs."""
    out: dict = {}
    for g, a in x.values.items():
        for u, b in vec.items():
            h = multiply(g, u)
            out[h] = out.get(h, 0j) + a * b
    return out


def random_radial_l2(rng, r, nmax, complex_values=True):
    """Random radial function with O(1) mass per sphere in l^2(F_r)."""
    c = rng.standard_normal(nmax + 1)
    if complex_values:
        c = c + 1j * rng.standard_normal(nmax + 1)
    return RadialFunction(r, c / np.sqrt(sphere_weights(r, nmax)))


def averaging_eigen_residual(p: np.ndarray, r: int, N: int, gamma_value: complex) -> float:
    """Embed p on the ball, average over the 2r neighbours with word
    multiplication and compare the radial part with gamma * p inside the ball."""
    ball = enumerate_ball(r, N)
    f = {w: p[len(w)] for w in ball.words}
    gens = [s for g in range(1, r + 1) for s in (g, -g)]
    avg = {}
    for w in ball.words:
        if len(w) >= N:
            continue
        avg[w] = sum(f[multiply((s,), w)] for s in gens) / (2 * r)
    radial = radialize(TreeFunction(r, avg))
    return float(np.max(np.abs(radial.values - gamma_value * p[: N])))


# ---------------------------------------------------------------- suites

def suite_word_core(cfg: Config) -> list[Check]:
    s = _Suite("word_core", cfg)
    rng = s.rng
    bad = 0
    for _ in range(500):
        r = int(rng.integers(2, 5))
        letters = random_letters(rng, r, 20)
        w = reduce_word(letters, r)
        if w != naive_reduce(letters) or reduce_word(w, r) != w:
            bad += 1
    s.holds("reduce_matches_naive_and_idempotent", bad == 0, f"{bad} mismatches / 500")

    bad_assoc = bad_parity = bad_inv = 0
    for _ in range(1000):
        r = int(rng.integers(2, 5))
        a, b, c = (random_word(rng, r, 8) for _ in range(3))
        if multiply(multiply(a, b), c) != multiply(a, multiply(b, c)):
            bad_assoc += 1
        if multiply(a, b) != naive_reduce(a + b):
            bad_assoc += 1
        if (len(multiply(a, b)) - len(a) - len(b)) % 2:
            bad_parity += 1
        if multiply(a, inverse(a)) != () or inverse(inverse(a)) != a:
            bad_inv += 1
    s.holds("multiply_associative", bad_assoc == 0, f"{bad_assoc} failures / 1000")
    s.holds("length_parity", bad_parity == 0, f"{bad_parity} failures / 1000")
    s.holds("inverse_laws", bad_inv == 0)

    bad = []
    for r, N in ((2, 8), (3, 6), (4, 5)):
        ball = enumerate_ball(r, N)
        counts = np.bincount([len(w) for w in ball.words], minlength=N + 1)
        if list(counts) != [sphere_size(r, n) for n in range(N + 1)]:
            bad.append((r, N))
        if len(set(ball.words)) != len(ball.words):
            bad.append((r, N, "dup"))
        if any(ball.index(w) != i for i, w in enumerate(ball.words)):
            bad.append((r, N, "index"))
    s.holds("sphere_counts_bfs", not bad, f"bad: {bad}" if bad else "r=2..4")
    return s.checks


def suite_radial_space(cfg: Config) -> list[Check]:
    s = _Suite("radial_space", cfg)
    rng = s.rng
    r = cfg.rank
    ball = enumerate_ball(r, 3)

    def rand_tree():
        vals = rng.standard_normal(ball.size) + 1j * rng.standard_normal(ball.size)
        mask = rng.random(ball.size) < 0.6
        return TreeFunction(r, {w: v for w, v, m in zip(ball.words, vals, mask) if m})

    worst_idem = worst_contract = worst_module = worst_alg = 0.0
    for _ in range(20):
        f = rand_tree()
        fr = radialize(f)
        worst_idem = max(worst_idem, np.max(np.abs(radialize(embed_radial(fr, 3)).padded(3) - fr.padded(3))))
        prof_f = sphere_l2_profile(f)
        prof_r = sphere_l2_profile(embed_radial(fr, 3))
        k = min(prof_f.size, prof_r.size)
        worst_contract = max(worst_contract, np.max(prof_r[:k] - prof_f[:k]))
        x = RadialFunction(r, rng.standard_normal(4) + 1j * rng.standard_normal(4))
        lhs = radialize(pointwise_product(x, f)).padded(3)
        rhs = pointwise_product(x, radialize(f)).padded(3)
        worst_module = max(worst_module, np.max(np.abs(lhs - rhs)))
        g, h = rand_tree(), rand_tree()
        fg = pointwise_product(f, g)
        gf = pointwise_product(g, f)
        worst_alg = max(worst_alg, max((abs(fg[w] - gf[w]) for w in set(fg.values) | set(gf.values)), default=0.0))
        a = pointwise_product(pointwise_product(f, g), h)
        b = pointwise_product(f, pointwise_product(g, h))
        worst_alg = max(worst_alg, max((abs(a[w] - b[w]) for w in set(a.values) | set(b.values)), default=0.0))
    s.below("radialize_idempotent", worst_idem, tol=1e-12)
    s.below("radialize_sphere_l2_contraction", max(worst_contract, 0.0), tol=1e-12)
    s.below("module_property", worst_module, tol=1e-12)
    s.below("product_commutative_associative", worst_alg, tol=1e-12)

    n = np.arange(0, 200)
    xs = xi(r, n)
    s.holds("xi_strictly_decreasing", bool(np.all(np.diff(xs[1:]) < 0)))
    s.below("xi_closed_form_value", abs(xi(2, 1) - 1.5 / math.sqrt(3)), tol=1e-15)

    tail = xi_l3_tail(2, 80)
    terms = xi_l3_terms(2, 80)
    ratios = terms[1:] / terms[:-1]
    window = ratios[19:]  # term(n) / term(n-1) for n >= 20
    s.holds("xi_l3_increasing", bool(np.all(terms > 0) and np.all(np.diff(tail) >= 0)))
    s.holds("xi_l3_ratio_in_band", bool(np.all((window >= 0.5) & (window <= 0.7))),
            f"ratio range [{window.min():.4f}, {window.max():.4f}] for n >= 20")

    viol = pre = 0
    for _ in range(100):
        xv, yv = {}, {}
        for w in ball.words:
            xv[w] = xi(r, len(w)) * rng.random() * np.exp(2j * np.pi * rng.random())
            yv[w] = complex(rng.standard_normal(), rng.standard_normal())
        y = TreeFunction(r, yv)
        prof = sphere_l2_profile(y)
        scale = {k: math.sqrt(sphere_size(r, k) * xi(r, k) / prof[k]) * rng.random() for k in range(prof.size)}
        y = TreeFunction(r, {w: v * scale[len(w)] for w, v in yv.items()})
        rep = tail_estimate_check(TreeFunction(r, xv), y)
        viol += len(rep.violations)
        pre += len(rep.precondition_failures)
    s.holds("tail_estimate_no_violation", viol == 0 and pre == 0, f"{viol} violations, {pre} precondition failures in 100 trials")

    f = rand_tree()
    s.below("profile_sums_to_l2", abs(sphere_l2_profile(f).sum() - lp_norm(f, 2) ** 2), tol=1e-10)
    return s.checks


def suite_spherical(cfg: Config) -> list[Check]:
    s = _Suite("spherical", cfg)
    rng = s.rng

    n = np.arange(61)
    p0 = spherical_values(SphericalParameter.real(0.0, 2), 60).values
    s.below("closed_form_vs_recurrence", np.max(np.abs(p0 - (1 + n / 2) * 3.0 ** (-n / 2))), "closed_form")

    for r in (2, 3, 4):
        ps = SphericalParameter.trivial(r)
        s.below(f"trivial_endpoint_constant_r{r}", np.max(np.abs(spherical_values(ps, 100).values - 1)), tol=1e-9)

    worst_res = 0.0
    for r in (2, 3):
        for p in [SphericalParameter.real(t, r) for t in np.linspace(0, math.pi, 17)] + [
            SphericalParameter.lower(0.2, r), SphericalParameter.upper(0.3, r)]:
            worst_res = max(worst_res, spherical_values(p, 100).recurrence_residual())
    s.below("recurrence_residual", worst_res, "recurrence")

    grid = np.linspace(0, math.pi, 512)
    excess = 0.0
    for r in (2, 3):
        P = recurrence_matrix(np.cos(grid), r, 100)
        excess = max(excess, float(np.max(np.abs(P) - xi(r, np.arange(101))[:, None])))
    s.below("dominated_by_theta0", max(excess, 0.0), tol=1e-12)

    worst = 0.0
    for r in (2, 3):
        for p in (SphericalParameter.real(0.0, r), SphericalParameter.real(1.3, r),
                  SphericalParameter.lower(0.25, r), SphericalParameter.upper(0.4, r)):
            N = 6 if r == 2 else 4
            seq = spherical_values(p, N).values
            worst = max(worst, averaging_eigen_residual(seq, r, N, complex(np.sqrt(2 * r - 1) / r * np.cos(p.angle))))
    s.below("tree_averaging_eigenfunction", worst, tol=1e-12)

    integral, _ = quad(plancherel_density_r2, 0, math.pi, epsabs=1e-13, epsrel=1e-13, limit=200)
    s.below("plancherel_integral_quad", abs(integral - 1), "plancherel_integral")
    s.below("plancherel_integral_trapezoid", abs(trapezoid_rule_r2(2048).weights.sum() - 1), "plancherel_integral")
    worst = max(abs(gauss_rule(r, K).weights.sum() - 1) for r in (2, 3, 5) for K in (1, 8, 40, 128))
    s.below("gauss_weight_sum", worst, "weight_sum")

    rule = gauss_rule(3, 40)
    P = recurrence_matrix(np.cos(rule.nodes), 3, 10)
    G = (P * rule.weights) @ P.T
    s.below("gauss_orthogonality_r3", np.max(np.abs(G - np.diag(1 / sphere_weights(3, 10)))) * 1.0, "orthogonality")

    g64 = gauss_rule(2, 64)
    exact, _ = quad(lambda t: math.cos(t) ** 2 * plancherel_density_r2(t), 0, math.pi, epsabs=1e-14, epsrel=1e-14)
    s.below("gauss_vs_closed_density_r2", abs(g64.integrate(np.cos(g64.nodes) ** 2) - exact), tol=1e-10)

    worst = 0.0
    for r in (2, 3):
        for _ in range(100):
            L = int(rng.integers(0, 31))
            x = random_radial_l2(rng, r, L)
            back = invert(lambda th, x=x: transform_angles(x, th), r, L, 40)
            worst = max(worst, np.max(np.abs(back.values - x.values)))
    s.below("roundtrip_inversion", worst, "roundtrip", detail="100 random per r in {2,3}, support <= 30, K = 40")

    worst = 0.0
    for _ in range(100):
        L = int(rng.integers(0, 31))
        x, y = random_radial_l2(rng, 2, L), random_radial_l2(rng, 2, L)
        worst = max(worst, parseval_check(x, y))
    s.below("parseval", worst, "parseval")
    s.below("transform_sphere1",
            abs(transform(RadialFunction(2, [0, 1]), [0.4])[0] - 2 * math.sqrt(3) * math.cos(0.4)), tol=1e-12)
    return s.checks


def suite_hypergroup(cfg: Config) -> list[Check]:
    s = _Suite("hypergroup", cfg)
    rng = s.rng
    P = SphericalParameter
    K = cfg.quad or hg.DEFAULT_K

    s.below("kernel_value_pi_half", abs(hg.s_density(math.pi / 2, math.pi / 2, math.pi / 2) - 2 / 3), tol=1e-14)

    t = rng.uniform(0, math.pi, size=(3, 200))
    a, b, c = t
    sym = max(
        np.max(np.abs(hg.s_density(a, b, c) - hg.s_density(c, a, b))),
        np.max(np.abs(hg.s_density(a, b, c) - hg.s_density(b, a, c))),
    )
    s.below("kernel_symmetry", sym, "kernel_symmetry")

    grid = np.linspace(0, math.pi, 2048)
    worst_mass, min_density = 0.0, np.inf
    for t1, t2 in rng.uniform(0, math.pi, size=(20, 2)):
        m = hg.convolve_points(P.real(t1), P.real(t2))
        worst_mass = max(worst_mass, abs(m.total_mass(K) - 1))
        min_density = min(min_density, float(np.min(m.density_at(grid).real)))
        if m.atoms:
            worst_mass = np.inf
    s.below("real_pairs_probability_mass", worst_mass, "probability_mass")
    s.holds("real_pairs_density_nonnegative", min_density >= 0, f"min density {min_density:.3e}")

    trap = trapezoid_rule_r2(2048)
    worst = 0.0
    for t1, t2 in ((0.3, 1.1), (2.5, 0.7)):
        worst = max(worst, abs(trap.integrate(hg.s_density(t1, t2, trap.nodes)) - 1))
    s.below("kernel_mass_trapezoid_crosscheck", worst, "probability_mass")

    angles = (0.3, 1.1, 2.5)
    worst = 0.0
    rule = gauss_rule(2, 128)
    Pn = recurrence_matrix(np.cos(rule.nodes), 2, 20)
    for t1 in angles:
        for t2 in angles:
            integral = Pn @ (rule.weights * hg.s_density(t1, t2, rule.nodes))
            expect = recurrence_matrix(np.cos([t1]), 2, 20)[:, 0] * recurrence_matrix(np.cos([t2]), 2, 20)[:, 0]
            worst = max(worst, np.max(np.abs(integral - expect)))
    s.below("product_formula_real", worst, "product_formula", detail="theta in {0.3,1.1,2.5}^2, n <= 20, K = 128")

    exact = hg.atom_mass(Fraction(3), Fraction(3))
    s.holds("atom_mass_exact_nu3", exact == 1, f"A = {exact}")

    worst = 0.0
    pairs = [(P.lower(0.5), P.lower(0.45)), (P.upper(0.5), P.lower(0.4)),
             (P.upper(0.45), P.upper(0.5)), (P.trivial(), P.trivial()), (P.trivial(), P.lower(0.3))]
    for pa, pb in pairs:
        m = hg.convolve_points(pa, pb)
        if len(m.atoms) != 1:
            worst = np.inf
            continue
        expect = spherical_values(pa, 20).values * spherical_values(pb, 20).values
        worst = max(worst, np.max(np.abs(m.moments(20, K) - expect)))
    s.below("atom_moment_identity", worst, "atom_moment", detail="Im(t1+t2) > ln(3)/2 pairs, n <= 20")

    worst = 0.0
    for pa, pb in [(P.real(0.2), P.real(2.0)), (P.lower(0.3), P.real(1.0)), (P.upper(0.2), P.lower(0.1)),
                   (P.sign(), P.real(0.4)), (P.trivial(), P.real(1.7))]:
        m = hg.convolve_points(pa, pb)
        expect = spherical_values(pa, 20).values * spherical_values(pb, 20).values
        worst = max(worst, np.max(np.abs(m.moments(20, K) - expect)))
    s.below("moment_identity_no_atom", worst, "product_formula")

    worst = 0.0
    for pa, pb, pc in [(P.real(0.3), P.real(1.1), P.real(2.5)), (P.lower(0.4), P.lower(0.35), P.real(0.9))]:
        d = [hg.RadialMeasure.point(p) for p in (pa, pb, pc)]
        left = hg.convolve_measures(hg.convolve_measures(d[0], d[1], K), d[2], K).moments(20, K)
        right = hg.convolve_measures(d[0], hg.convolve_measures(d[1], d[2], K), K).moments(20, K)
        expect = np.prod([spherical_values(p, 20).values for p in (pa, pb, pc)], axis=0)
        worst = max(worst, np.max(np.abs(left - expect)), np.max(np.abs(right - expect)))
    s.below("associativity_in_moments", worst, "product_formula")

    mu = hg.RadialMeasure.from_radial(RadialFunction(2, rng.standard_normal(6)))
    unit = hg.RadialMeasure.point(P.trivial())
    s.below("unit_convolution", np.max(np.abs(hg.convolve_measures(mu, unit, K).moments(12, K) - mu.moments(12, K))),
            "product_formula")
    dm_mom = hg.RadialMeasure.plancherel().moments(10, K)
    s.below("plancherel_moments", np.max(np.abs(dm_mom - np.eye(11)[0])), tol=1e-12)

    worst = 0.0
    for _ in range(50):
        x = RadialFunction(2, rng.standard_normal(11) + 1j * rng.standard_normal(11))
        y = RadialFunction(2, rng.standard_normal(11) + 1j * rng.standard_normal(11))
        worst = max(worst, hg.dual_product_check(x, y, K).residual)
    s.below("dual_product_two_paths", worst, "dual_product", detail="50 random pairs, support <= 10")
    return s.checks


def suite_opnorm(cfg: Config) -> list[Check]:
    s = _Suite("opnorm", cfg)
    rng = s.rng

    worst = 0.0
    for r, N in ((2, 4), (3, 3)):
        ball = enumerate_ball(r, N)
        for _ in range(3):
            support = {random_word(rng, r, 3) for _ in range(5)}
            x = TreeFunction(r, {w: complex(rng.standard_normal(), rng.standard_normal()) for w in support})
            op = build_rho(x, N)
            vec = rng.standard_normal(ball.size) + 1j * rng.standard_normal(ball.size)
            got = op @ vec
            want = brute_force_rho(x, dict(zip(ball.words, vec)))
            big = enumerate_ball(r, N + x.support_radius)
            want_vec = np.zeros(big.size, dtype=complex)
            for h, v in want.items():
                want_vec[big.ordinal[h]] = v
            worst = max(worst, np.max(np.abs(got - want_vec)))
    s.below("rho_matches_brute_force", worst, tol=1e-12)

    x = RadialFunction(2, [0.5, -1.0, 0.25])
    C = build_rho(x, 5).compression()
    s.below("radial_real_self_adjoint", abs(C - C.T).max(), tol=0.0)

    x1 = RadialFunction(2, [0, 1])
    gn = gelfand_norm(x1, cfg.grid)
    s.below("kesten_gelfand_norm", abs(gn - 2 * math.sqrt(3)), "gelfand")
    ests, mono = [], True
    for N in (6, 8, 10, 12):
        op = build_rho(x1, N, cap=max(cfg.ball_cap, 2_000_000))
        h = gram_power_iteration(op, 300, cfg.seed)
        mono = mono and bool(np.all(np.diff(h) >= -1e-12 * h[-1]))
        ests.append(math.sqrt(h.max()))
    rel = (2 * math.sqrt(3) - ests[-1]) / (2 * math.sqrt(3))
    s.below("kesten_truncation_N12", rel, "kesten_truncation", detail=f"estimates {[round(e, 6) for e in ests]}")
    s.holds("kesten_monotone_in_N", all(a < b for a, b in zip(ests, ests[1:])) and all(e <= gn * (1 + 1e-9) for e in ests))
    s.holds("rayleigh_quotients_nondecreasing", mono)

    worst_excess, mono_ok = 0.0, True
    for _ in range(5):
        x = RadialFunction(2, rng.standard_normal(3))
        g = gelfand_norm(x, cfg.grid)
        prev = 0.0
        for N in (2, 4, 6, 8):
            e = estimate_opnorm(build_rho(x, N), 300, cfg.seed)
            worst_excess = max(worst_excess, e / g - 1)
            mono_ok = mono_ok and e >= prev * (1 - 1e-6)
            prev = e
    s.below("opnorm_below_gelfand", max(worst_excess, 0.0), "opnorm_slack")
    s.holds("opnorm_increasing_in_N", mono_ok)

    viol, worst_ratio = 0, 0.0
    for r, N, trials in ((2, 6, 100), (3, 4, 100)):
        size = enumerate_ball(r, N).size
        for _ in range(trials):
            a = rng.standard_normal(size) + 1j * rng.standard_normal(size)
            b = rng.standard_normal(size) + 1j * rng.standard_normal(size)
            a *= rng.random(size) < rng.random()
            rep = haagerup_check(a, b, r, N, 10)
            viol += len(rep.violations)
            worst_ratio = max(worst_ratio, rep.worst_ratio)
    s.holds("haagerup_inequality", viol == 0, f"200 trials, r in {{2,3}}, nmax = 10, worst lhs/rhs = {worst_ratio:.3f}")

    xi_ratios, xi_levels = increment_ratios(xi_l3_terms(2, 80))
    worst = float(np.max(xi_ratios[xi_levels >= 40]))
    s.below("xi_l3_tail_ratio", worst, "tail_ratio")
    worst = 0.0
    for theta in (0.0, math.pi):
        tail = l2eps_tail(theta, 1.0, 80)
        worst = max(worst, float(np.max(tail.ratios[tail.ratio_levels >= 40])))
    s.below("l2eps_tail_ratio", worst, "tail_ratio", detail="theta in {0, pi}, eps = 1")
    half = l2eps_tail(math.pi / 2, 1.0, 80)
    even = half.ratios[half.ratio_levels >= 40]
    s.holds("l2eps_tail_pi_half_even_decay", bool(np.all(half.ratio_levels % 2 == 0) and np.all(even < 0.9)))

    rep = leinert_experiment([()], [1.0], 2, 4)
    s.below("leinert_identity", abs(rep.ratio - 1), tol=1e-12)
    return s.checks


SUITES: dict[str, Callable[[Config], list[Check]]] = {
    "word_core": suite_word_core,
    "radial_space": suite_radial_space,
    "spherical": suite_spherical,
    "hypergroup": suite_hypergroup,
    "opnorm": suite_opnorm,
}


def run(names, cfg: Config | None = None, inject_fault: bool = False, timings: dict | None = None) -> list[Check]:
    cfg = cfg or Config()
    if names in ("all", ["all"]) or names is None:
        names = list(SUITES)
    if isinstance(names, str):
        names = [names]
    checks: list[Check] = []
    for name in names:
        if name not in SUITES:
            raise KeyError(name)
        start = time.perf_counter()
        if inject_fault:
            with hg.perturbed_kernel(1.001):
                got = SUITES[name](cfg)
        else:
            got = SUITES[name](cfg)
        if timings is not None:
            timings[name] = time.perf_counter() - start
        checks.extend(got)
    return checks


def summary(checks: list[Check]) -> dict:
    return {
        "passed": all(c.passed for c in checks),
        "n_checks": len(checks),
        "n_failed": sum(not c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }
