"""Spherical functions on F_r, the spherical transform and its inversion.

Spectral parameters live on J_1 = [0, pi] plus the two segments
{i*z} and {pi + i*z}, 0 <= z <= ln(2r-1)/2. A parameter acts on the sphere
averaging operator by the eigenvalue

    gamma = sqrt(2r-1)/r * cos(theta)

and the spherical function is the unique radial eigenfunction with value 1 at
the identity:

    p_0 = 1,  p_1 = gamma,  p_{n+1} = (2r*gamma*p_n - p_{n-1}) / (2r-1).

With q = 2r-1 and u_n = q^(n/2) p_n this becomes u_{n+1} = 2 cos(theta) u_n
- u_{n-1}, which is the form used past the underflow threshold.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import BarycentricInterpolator
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError
from .radial import RadialFunction
from .words import sphere_size

KINDS = ("real", "lower", "upper")
MAX_QUAD_NODES = 4096
SCALED_THRESHOLD = 600


def segment_length(r: int) -> float:
    return math.log(2 * r - 1) / 2.0


@dataclass(frozen=True)
class SphericalParameter:
    """Point of J_1: ``real`` angle in [0, pi], or ``lower``/``upper`` segment
    coordinate z standing for i*z resp. pi + i*z."""

    kind: str
    value: float
    r: int = 2

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown parameter kind {self.kind!r}")
        if self.r < 2:
            raise DomainError(f"rank must be >= 2, got {self.r}")
        v = float(self.value)
        if not math.isfinite(v):
            raise DomainError("parameter must be finite")
        if self.kind == "real" and not (0.0 <= v <= math.pi):
            raise DomainError(f"real parameter {v} outside [0, pi]")
        if self.kind != "real" and not (0.0 <= v <= segment_length(self.r) + 1e-15):
            raise DomainError(f"segment parameter {v} outside [0, ln(2r-1)/2]")
        object.__setattr__(self, "value", v)

    @classmethod
    def real(cls, theta: float, r: int = 2) -> "SphericalParameter":
        return cls("real", theta, r)

    @classmethod
    def lower(cls, zeta: float, r: int = 2) -> "SphericalParameter":
        return cls("lower", zeta, r)

    @classmethod
    def upper(cls, zeta: float, r: int = 2) -> "SphericalParameter":
        return cls("upper", zeta, r)

    @classmethod
    def trivial(cls, r: int = 2) -> "SphericalParameter":
        """Endpoint of the lower segment: p_n = 1 for all n."""
        return cls("lower", segment_length(r), r)

    @classmethod
    def sign(cls, r: int = 2) -> "SphericalParameter":
        """Endpoint of the upper segment: p_n = (-1)^n."""
        return cls("upper", segment_length(r), r)

    @property
    def angle(self) -> complex:
        if self.kind == "real":
            return complex(self.value)
        if self.kind == "lower":
            return complex(0.0, self.value)
        return complex(math.pi, self.value)

    @property
    def is_endpoint(self) -> bool:
        return self.kind != "real" and abs(self.value - segment_length(self.r)) <= 1e-12

    def __str__(self):
        return f"{self.kind}:{self.value!r}"


def parse_parameter(text: str, r: int = 2) -> SphericalParameter:
    """``'0.7'`` or ``'real:0.7'``, ``'lower:0.3'``, ``'upper:0.3'``.

    ``'trivial'`` and ``'sign'`` name the two segment endpoints.
    """
    text = text.strip()
    if text == "trivial":
        return SphericalParameter.trivial(r)
    if text == "sign":
        return SphericalParameter.sign(r)
    kind, _, val = text.rpartition(":")
    kind = kind or "real"
    try:
        value = float(val)
    except ValueError:
        raise DomainError(f"cannot parse spectral parameter {text!r}") from None
    return SphericalParameter(kind, value, r)


def as_parameters(params, r: int) -> list[SphericalParameter]:
    out = []
    for p in np.atleast_1d(np.asarray(params, dtype=object)):
        if isinstance(p, SphericalParameter):
            if p.r != r:
                raise DomainError(f"parameter rank {p.r} does not match {r}")
            out.append(p)
        else:
            out.append(SphericalParameter.real(float(p), r))
    return out


def gamma(param: SphericalParameter) -> complex:
    """Eigenvalue of the sphere-1 averaging operator on p(param)."""
    r = param.r
    return math.sqrt(2 * r - 1) / r * cmath.cos(param.angle)


def _cos_of(param: SphericalParameter) -> float:
    # cos of every point of J_1 is real
    if param.kind == "real":
        return math.cos(param.value)
    c = math.cosh(param.value)
    return c if param.kind == "lower" else -c


def recurrence_matrix(cosines: np.ndarray, r: int, nmax: int, scaled_threshold: int = SCALED_THRESHOLD) -> np.ndarray:
    """p_n at each given cos(theta); shape (nmax + 1, len(cosines)).

    Levels past ``scaled_threshold`` are computed from the scaled recurrence
    and rescaled in log space, so they underflow to 0 gracefully instead of
    losing the leading digits.
    """
    c = np.atleast_1d(np.asarray(cosines, dtype=float))
    q = 2 * r - 1
    g = math.sqrt(q) / r * c
    out = np.empty((nmax + 1, c.size))
    out[0] = 1.0
    if nmax == 0:
        return out
    out[1] = g
    top = min(nmax, scaled_threshold)
    for n in range(1, top):
        out[n + 1] = (2 * r * g * out[n] - out[n - 1]) / q
    if nmax > top:
        half = 0.5 * math.log(q)
        u_prev = out[top - 1] * q ** ((top - 1) / 2)
        u = out[top] * q ** (top / 2)
        for n in range(top, nmax):
            u_prev, u = u, 2 * c * u - u_prev
            with np.errstate(divide="ignore"):
                out[n + 1] = np.sign(u) * np.exp(np.log(np.abs(u)) - (n + 1) * half)
    return out


@dataclass
class SphericalSequence:
    param: SphericalParameter
    values: np.ndarray

    @property
    def nmax(self) -> int:
        return self.values.size - 1

    def recurrence_residual(self) -> float:
        """Largest |(2r-1) p_{n+1} - 2r gamma p_n + p_{n-1}| over the stored steps."""
        p = self.values
        if p.size < 3:
            return abs(p[1] - gamma(self.param)) if p.size == 2 else 0.0
        r = self.param.r
        g = gamma(self.param)
        res = (2 * r - 1) * p[2:] - 2 * r * g * p[1:-1] + p[:-2]
        return float(np.max(np.abs(res)))


def spherical_values(param: SphericalParameter, nmax: int) -> SphericalSequence:
    if nmax < 0:
        raise DomainError("nmax must be >= 0")
    vals = recurrence_matrix(np.array([_cos_of(param)]), param.r, nmax)[:, 0]
    return SphericalSequence(param, vals.astype(complex))


def sphere_weights(r: int, nmax: int) -> np.ndarray:
    return np.array([float(sphere_size(r, n)) for n in range(nmax + 1)])


def _cosines(params: Sequence[SphericalParameter]) -> np.ndarray:
    return np.array([_cos_of(p) for p in params])


def transform(x: RadialFunction, params) -> np.ndarray:
    """x_hat(theta) = sum_n x(n) |S_n| p_n(theta) at each parameter.

    ``params`` is a sequence of SphericalParameter or of real angles.
    """
    ps = as_parameters(params, x.r)
    P = recurrence_matrix(_cosines(ps), x.r, x.nmax)
    return (x.values * sphere_weights(x.r, x.nmax)) @ P


def transform_angles(x: RadialFunction, thetas) -> np.ndarray:
    """Vectorized :func:`transform` for real angles."""
    P = recurrence_matrix(np.cos(np.asarray(thetas, dtype=float)), x.r, x.nmax)
    return (x.values * sphere_weights(x.r, x.nmax)) @ P


def plancherel_density_r2(theta):
    """Density of the Plancherel measure of F_2 on [0, pi]:
    6 / (pi (4 + cot^2 theta)) = 6 sin^2 / (pi (1 + 3 sin^2)); 0 at the endpoints."""
    s2 = np.sin(np.asarray(theta, dtype=float)) ** 2
    out = 6.0 * s2 / (math.pi * (1.0 + 3.0 * s2))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class QuadratureRule:
    r: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def K(self) -> int:
        return self.nodes.size

    def integrate(self, values) -> complex:
        return np.asarray(values) @ self.weights


@lru_cache(maxsize=32)
def _gauss(r: int, K: int) -> tuple[np.ndarray, np.ndarray]:
    q = 2 * r - 1
    # Jacobi matrix of q_n = sqrt(|S_n|) p_n in the variable gamma
    off = np.full(K - 1, math.sqrt(q) / (2 * r))
    if K > 1:
        off[0] = 1.0 / math.sqrt(2 * r)
    evals, evecs = eigh_tridiagonal(np.zeros(K), off)
    weights = evecs[0] ** 2
    thetas = np.arccos(np.clip(evals * r / math.sqrt(q), -1.0, 1.0))
    order = np.argsort(thetas)
    return thetas[order], weights[order]


def gauss_rule(r: int, K: int) -> QuadratureRule:
    """K-point Gauss rule for the Plancherel measure of F_r (Golub-Welsch).

    Exact for sum_k w_k p_m(theta_k) p_n(theta_k) = delta_mn / |S_n| when m + n < 2K.
    """
    if r < 2:
        raise DomainError(f"rank must be >= 2, got {r}")
    if K < 1:
        raise DomainError("K must be >= 1")
    if K > MAX_QUAD_NODES:
        raise DomainError(f"K = {K} exceeds the quadrature cap {MAX_QUAD_NODES}")
    nodes, weights = _gauss(r, K)
    return QuadratureRule(r, nodes.copy(), weights.copy())


def trapezoid_rule_r2(M: int = 2048) -> QuadratureRule:
    """Uniform-grid rule with the closed-form density; independent of the Gauss path."""
    theta = np.linspace(0.0, math.pi, M + 1)
    h = math.pi / M
    w = plancherel_density_r2(theta) * h
    w[0] *= 0.5
    w[-1] *= 0.5
    return QuadratureRule(2, theta, w)


def default_quad_size(nmax: int) -> int:
    return max(64, nmax + 8)


def _interpolate_in_gamma(thetas, values, r: int) -> Callable:
    # uniform theta grids are Chebyshev-Lobatto points in cos(theta)
    c = np.cos(np.asarray(thetas, dtype=float))
    order = np.argsort(c)
    c, v = c[order], np.asarray(values, dtype=complex)[order]
    if np.any(np.diff(c) <= 0):
        raise DomainError("transform samples must be at distinct angles")
    re = BarycentricInterpolator(c, v.real)
    im = BarycentricInterpolator(c, v.imag)
    return lambda th: re(np.cos(th)) + 1j * im(np.cos(th))


def invert(xhat, r: int, nmax: int, K: int | None = None) -> RadialFunction:
    """Recover x(0..nmax) from its transform by Gauss quadrature.

    ``xhat`` is either a callable on real angles or a pair ``(thetas, values)``.
    Samples that sit exactly on the K-point Gauss nodes are used as-is;
    anything else is interpolated as a polynomial in cos(theta).
    """
    if K is None:
        K = default_quad_size(nmax)
    if K <= nmax:
        raise DomainError(f"K = {K} must exceed nmax = {nmax}")
    rule = gauss_rule(r, K)
    if callable(xhat):
        vals = np.asarray(xhat(rule.nodes), dtype=complex)
    else:
        thetas, samples = xhat
        thetas = np.asarray(thetas, dtype=float)
        if thetas.shape == rule.nodes.shape and np.allclose(thetas, rule.nodes, rtol=0, atol=1e-14):
            vals = np.asarray(samples, dtype=complex)
        else:
            vals = _interpolate_in_gamma(thetas, samples, r)(rule.nodes)
    P = recurrence_matrix(np.cos(rule.nodes), r, nmax)
    return RadialFunction(r, P @ (rule.weights * vals))


def parseval_check(x: RadialFunction, y: RadialFunction, K: int | None = None) -> float:
    """|sum_n |S_n| x(n) conj y(n) - integral of x_hat conj(y_hat) dm|."""
    if x.r != y.r:
        raise DomainError("rank mismatch")
    nmax = max(x.nmax, y.nmax)
    if K is None:
        K = default_quad_size(nmax)
    if K <= nmax:
        raise DomainError(f"K = {K} must exceed nmax = {nmax}")
    lhs = np.sum(sphere_weights(x.r, nmax) * x.padded(nmax) * np.conj(y.padded(nmax)))
    rule = gauss_rule(x.r, K)
    rhs = rule.integrate(transform_angles(x, rule.nodes) * np.conj(transform_angles(y, rule.nodes)))
    return float(abs(lhs - rhs))
