"""Left regular representation on truncated trees and operator norm estimates."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.optimize import golden

from .errors import DomainError, ResourceCapError
from .radial import RadialFunction, TreeFunction, embed_radial
from .spherical import recurrence_matrix, sphere_weights, transform_angles
from .words import (
    DEFAULT_BALL_CAP,
    BallIndex,
    Word,
    ball_size,
    enumerate_ball,
    inverse,
    left_multiply_codes,
    left_multiply_word,
    letter_code,
    multiply,
    reduce_word,
    sphere_offsets,
)


@dataclass
class TreeOperator:
    """rho(x) restricted to l^2(ball N), landing in l^2(ball N + L)."""

    r: int
    domain: BallIndex
    codomain_radius: int
    matrix: sp.csr_matrix = field(repr=False)

    @property
    def shape(self):
        return self.matrix.shape

    def __matmul__(self, v):
        return self.matrix @ v

    def adjoint_apply(self, v):
        return self.matrix.conj().T @ v

    def compression(self) -> sp.csr_matrix:
        """P_N rho(x) P_N as a square matrix on the domain ball."""
        return self.matrix[: self.domain.size, :]


def build_rho(x, N: int, cap: int = DEFAULT_BALL_CAP) -> TreeOperator:
    """Sparse matrix of xi -> sum_g x(g) xi(g^-1 .) on the ball of radius N.

    Column u holds x(g) in row g*u. ``cap`` bounds the domain ball; the
    codomain is indexed arithmetically and never enumerated.
    """
    if isinstance(x, RadialFunction):
        x = embed_radial(x.trimmed(), cap=cap)
    r = x.r
    dom = enumerate_ball(r, N, cap)
    L = x.support_radius
    n0, rank0 = dom.lengths, dom.ranks
    offsets = sphere_offsets(r, N + L)
    cols = np.arange(dom.size, dtype=np.int64)
    rows, data = [], []
    for g, v in x.values.items():
        if v == 0:
            continue
        n, rk = left_multiply_word(g, n0, rank0, r)
        rows.append(offsets[n] + rk)
        data.append(np.full(dom.size, v, dtype=complex))
    size_out = ball_size(r, N + L)
    if rows:
        mat = sp.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.tile(cols, len(rows)))),
            shape=(size_out, dom.size),
        )
    else:
        mat = sp.csr_matrix((size_out, dom.size), dtype=complex)
    if not np.any(np.iscomplex(mat.data)):
        mat = mat.real.tocsr()
    return TreeOperator(r, dom, N + L, mat)


def gram_power_iteration(A, iters: int = 300, seed: int = 0, tol: float = 0.0) -> np.ndarray:
    """Rayleigh quotients <A*A v_k, v_k> of power iteration on A*A.

    The sequence is nondecreasing for a positive semidefinite Gram operator.
    Stops early once the relative increase drops below ``tol``.
    """
    if iters < 1:
        raise DomainError("iters must be >= 1")
    M = A.matrix if isinstance(A, TreeOperator) else A
    rng = np.random.default_rng(seed)
    # positive start: overlaps the Perron vector of nonnegative operators
    v = rng.random(M.shape[1]) + 0.5
    if np.iscomplexobj(M.data if sp.issparse(M) else M):
        v = v + 1j * rng.standard_normal(M.shape[1])
    v /= np.linalg.norm(v)
    MH = M.conj().T.tocsr() if sp.issparse(M) else M.conj().T
    history = []
    for _ in range(iters):
        Av = M @ v
        rq = float(np.vdot(Av, Av).real)
        history.append(rq)
        w = MH @ Av
        nw = np.linalg.norm(w)
        if nw == 0:
            break
        v = w / nw
        if tol and len(history) > 1 and history[-1] - history[-2] <= tol * history[-1]:
            break
    return np.array(history)


def estimate_opnorm(A, iters: int = 300, seed: int = 0, tol: float = 0.0) -> float:
    """sqrt of the largest Rayleigh quotient of A*A (a lower bound for ||A||)."""
    return math.sqrt(max(gram_power_iteration(A, iters, seed, tol).max(), 0.0))


def gelfand_norm(x: RadialFunction, grid: int = 513) -> float:
    """sup over theta in [0, pi] of |x_hat(theta)|, grid search + golden section."""
    thetas = np.linspace(0.0, math.pi, grid)
    vals = np.abs(transform_angles(x, thetas))
    k = int(np.argmax(vals))
    best = float(vals[k])
    if 0 < k < grid - 1:
        f = lambda t: -abs(transform_angles(x, np.array([t]))[0])
        t = golden(f, brack=(thetas[k - 1], thetas[k], thetas[k + 1]), tol=1e-12)
        best = max(best, -f(min(max(t, 0.0), math.pi)))
    return best


@lru_cache(maxsize=8)
def _product_table(r: int, N: int) -> np.ndarray:
    """Index of a*b in the ball of radius 2N, for all a, b in the ball of radius N."""
    ball = enumerate_ball(r, N)
    size = ball.size
    if size * size > 50_000_000:
        raise ResourceCapError(f"pair table for a ball of {size} vertices is too large")
    codes = np.full((size, N), -1, dtype=np.int64)
    for i, w in enumerate(ball.words):
        codes[i, N - len(w):] = [letter_code(s) for s in w]
    n = np.tile(ball.lengths, size)
    rank = np.tile(ball.ranks, size)
    # rows of the table are indexed by a; apply a's letters right to left
    for k in range(N - 1, -1, -1):
        n, rank = left_multiply_codes(n, rank, np.repeat(codes[:, k], size), r)
    return (sphere_offsets(r, 2 * N)[n] + rank).reshape(size, size)


def coefficient_function(xi_vec, eta_vec, r: int, N: int, nmax: int | None = None) -> TreeFunction:
    """y(t) = <rho(t) xi, eta> for vectors on the ball of radius N, |t| <= nmax."""
    ball = enumerate_ball(r, N)
    xi_vec = np.asarray(xi_vec, dtype=complex)
    eta_vec = np.asarray(eta_vec, dtype=complex)
    if xi_vec.shape != (ball.size,) or eta_vec.shape != (ball.size,):
        raise DomainError(f"vectors must have length {ball.size}")
    if nmax is None:
        nmax = 2 * N
    y = _coefficient_array(xi_vec, eta_vec, r, N)
    big = enumerate_ball(r, 2 * N, cap=max(DEFAULT_BALL_CAP, ball_size(r, 2 * N)))
    lim = ball_size(r, min(nmax, 2 * N))
    vals = {}
    for i in np.flatnonzero(y[:lim]):
        vals[big.word(int(i))] = y[i]
    return TreeFunction(r, vals)


def _coefficient_array(xi_vec, eta_vec, r, N) -> np.ndarray:
    # t = v u^-1 pairs xi(u) with eta(v); table[v, u^-1] is the index of t
    ball = enumerate_ball(r, N)
    table = _product_table(r, N)
    inv_idx = np.array([ball.index(inverse(w)) for w in ball.words])
    t_idx = table[:, inv_idx]
    weights = np.conj(eta_vec)[:, None] * xi_vec[None, :]
    size = ball_size(r, 2 * N)
    re = np.bincount(t_idx.ravel(), weights=weights.real.ravel(), minlength=size)
    im = np.bincount(t_idx.ravel(), weights=weights.imag.ravel(), minlength=size)
    return re + 1j * im


@dataclass
class HaagerupReport:
    lhs: np.ndarray
    rhs: np.ndarray

    @property
    def violations(self) -> list[int]:
        return [int(n) for n in np.flatnonzero(self.lhs > self.rhs * (1 + 1e-12))]

    @property
    def worst_ratio(self) -> float:
        return float(np.max(self.lhs / self.rhs))


def haagerup_check(xi_vec, eta_vec, r: int, N: int, nmax: int) -> HaagerupReport:
    """sum_{|t|=n} |y(t)|^2 <= (n+1)^2 ||xi||^2 ||eta||^2 for the coefficient y."""
    y = _coefficient_array(np.asarray(xi_vec, dtype=complex), np.asarray(eta_vec, dtype=complex), r, N)
    offsets = sphere_offsets(r, 2 * N)
    top = min(nmax, 2 * N)
    lhs = np.zeros(nmax + 1)
    sq = np.abs(y) ** 2
    for n in range(top + 1):
        lhs[n] = sq[offsets[n]:offsets[n + 1]].sum()
    bound = np.linalg.norm(xi_vec) ** 2 * np.linalg.norm(eta_vec) ** 2
    rhs = (np.arange(nmax + 1) + 1.0) ** 2 * bound
    return HaagerupReport(lhs, rhs)


def is_free_subset(E, max_length: int = 4) -> bool:
    """Brute force: no nontrivial reduced product of <= max_length letters of E^{+-1} is trivial."""
    E = [tuple(w) for w in E]
    if any(not w for w in E) or len(set(E)) != len(E):
        return False
    gens = [(k, 1) for k in range(len(E))] + [(k, -1) for k in range(len(E))]
    for L in range(1, max_length + 1):
        for seq in itertools.product(gens, repeat=L):
            if any(seq[i][0] == seq[i + 1][0] and seq[i][1] == -seq[i + 1][1] for i in range(L - 1)):
                continue
            w: Word = ()
            for k, e in seq:
                w = multiply(w, E[k] if e > 0 else inverse(E[k]))
            if not w:
                return False
    return True


@dataclass
class LeinertReport:
    size: int
    N: int
    opnorm: float
    coef_norm: float
    free: bool | None

    @property
    def ratio(self) -> float:
        return self.opnorm / self.coef_norm


def leinert_experiment(E, coefs, r: int, N: int, iters: int = 200, seed: int = 0,
                       check_free: bool = True, cap: int = DEFAULT_BALL_CAP) -> LeinertReport:
    """||sum_{t in E} c_t rho(t)|| on the ball of radius N, divided by ||c||_2."""
    E = [reduce_word(w, r) for w in E]
    coefs = np.asarray(coefs, dtype=complex)
    if coefs.shape != (len(E),):
        raise DomainError("need one coefficient per word")
    f = TreeFunction(r, {})
    for w, c in zip(E, coefs):
        f = f + TreeFunction(r, {w: c})
    op = build_rho(f, N, cap)
    norm = estimate_opnorm(op, iters, seed)
    free = is_free_subset(E, max_length=3) if check_free else None
    return LeinertReport(len(E), N, norm, float(np.linalg.norm(coefs)), free)


@dataclass
class TailSummary:
    partial_sums: np.ndarray
    terms: np.ndarray
    ratios: np.ndarray
    ratio_levels: np.ndarray

    @property
    def last_growth(self) -> int:
        """Largest n whose increment is at least the previous nonzero one (-1 if none)."""
        idx = np.flatnonzero(self.ratios >= 1.0)
        return int(self.ratio_levels[idx[-1]]) if idx.size else -1


def increment_ratios(terms: np.ndarray, zero_rtol: float = 1e-12):
    """term(n) / previous nonzero term; numerically zero terms are skipped."""
    scale = np.maximum.accumulate(np.abs(terms))
    nz = np.flatnonzero(np.abs(terms) > zero_rtol * scale)
    if nz.size < 2:
        return np.array([]), np.array([], dtype=int)
    return terms[nz[1:]] / terms[nz[:-1]], nz[1:]


def l2eps_tail(theta: float, eps: float, nmax: int, r: int = 2) -> TailSummary:
    """Partial sums of sum_n |S_n| |p_n(theta)|^(2 + eps)."""
    if eps <= 0:
        raise DomainError("eps must be > 0")
    p = recurrence_matrix(np.array([math.cos(theta)]), r, nmax)[:, 0]
    terms = sphere_weights(r, nmax) * np.abs(p) ** (2 + eps)
    ratios, levels = increment_ratios(terms)
    return TailSummary(np.cumsum(terms), terms, ratios, levels)


def opnorm_stats(x, N: int, iters: int = 300, seed: int = 0, cap: int = DEFAULT_BALL_CAP,
                 grid: int = 513) -> dict:
    op = build_rho(x, N, cap)
    est = estimate_opnorm(op, iters, seed)
    gn = gelfand_norm(x, grid) if isinstance(x, RadialFunction) else None
    return {"N": N, "ball": op.domain.size, "est_norm": est, "gelfand_norm": gn, "iters": iters}
