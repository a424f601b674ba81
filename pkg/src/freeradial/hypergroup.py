"""Dual convolution of spectral measures for F_2.

Pointwise multiplication of radial functions on F_2 corresponds, under the
spherical transform, to a convolution of measures on J_1 determined by

    delta_a * delta_b = s(a, b, .) dm  (+ an atom when Im(a + b) > ln(3)/2)

where dm is the Plancherel measure and

    s(t1, t2, t3) = prod_j (4 - 3 cos^2 t_j) / (6 prod_{e2,e3 = +-1} (2 - sqrt3 cos(t1 + e2 t2 + e3 t3))).

Measures carry their absolutely continuous part as a density with respect
to dm, so the n-th moment of a measure is the value at level n of the radial
function it represents.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError
from .radial import RadialFunction, pointwise_product
from .spherical import (
    MAX_QUAD_NODES,
    SphericalParameter,
    _interpolate_in_gamma,
    gauss_rule,
    recurrence_matrix,
    segment_length,
    spherical_values,
    transform_angles,
)

LN3_HALF = math.log(3.0) / 2.0
DEFAULT_K = 128
BOUNDARY_TOL = 1e-12

# kernel constant; perturbed only by the verification harness self-test
_kernel = {"sqrt3": math.sqrt(3.0)}


@contextlib.contextmanager
def perturbed_kernel(factor: float):
    old = _kernel["sqrt3"]
    _kernel["sqrt3"] = old * factor
    try:
        yield
    finally:
        _kernel["sqrt3"] = old


def _angle(t):
    if isinstance(t, SphericalParameter):
        if t.r != 2:
            raise DomainError("the explicit convolution kernel is only available for r = 2")
        return t.angle
    return t


def s_density(t1, t2, t3):
    """Convolution kernel s(t1, t2, t3); broadcasts over numpy arrays.

    Arguments may be complex angles or SphericalParameter (r = 2).
    """
    t1, t2, t3 = (np.asarray(_angle(t), dtype=complex) for t in (t1, t2, t3))
    if np.any(np.abs(np.imag(t1 + t2) - LN3_HALF) <= BOUNDARY_TOL):
        raise DomainError("Im(theta1 + theta2) = ln(3)/2 is a singular boundary case")
    sq3 = _kernel["sqrt3"]
    num = (4 - 3 * np.cos(t1) ** 2) * (4 - 3 * np.cos(t2) ** 2) * (4 - 3 * np.cos(t3) ** 2)
    den = 6.0
    for e2 in (1, -1):
        for e3 in (1, -1):
            den = den * (2 - sq3 * np.cos(t1 + e2 * t2 + e3 * t3))
    if np.any(np.abs(den) < 1e-300):
        raise DomainError("kernel denominator vanishes")
    out = num / den
    if np.all(np.imag(out) == 0) and all(np.all(np.imag(t) == 0) for t in (t1, t2, t3)):
        out = np.real(out)
    return out.item() if out.ndim == 0 else out


def atom_mass(nu1, nu2):
    """Mass of the atom in delta_a * delta_b with nu_j = exp(2 Im t_j).

    Pure arithmetic, so Fraction inputs give an exact rational result.
    """
    return ((3 * nu1 - 1) * (3 * nu2 - 1) * (nu1 * nu2 - 3)) / (
        12 * (nu1 - 1) * (nu2 - 1) * (nu1 * nu2 - 1)
    )


def fold_to_j1(angle: complex, r: int = 2, tol: float = 1e-9) -> SphericalParameter:
    """Represent a complex angle (mod 2 pi, up to sign) as a point of J_1.

    cos is even and 2 pi periodic, so the fold preserves every p_n.
    """
    re = math.fmod(angle.real, 2 * math.pi)
    if re < 0:
        re += 2 * math.pi
    im = angle.imag
    if abs(im) <= tol:
        theta = re if re <= math.pi else 2 * math.pi - re
        return SphericalParameter.real(min(max(theta, 0.0), math.pi), r)
    zeta = min(abs(im), segment_length(r))
    if abs(re) <= tol or abs(re - 2 * math.pi) <= tol:
        return SphericalParameter.lower(zeta, r)
    if abs(re - math.pi) <= tol:
        return SphericalParameter.upper(zeta, r)
    raise DomainError(f"angle {angle} does not fold onto J_1")


def reflect(param: SphericalParameter) -> SphericalParameter:
    """Parameter with p_n(reflect(a)) = (-1)^n p_n(a)."""
    if param.kind == "real":
        return SphericalParameter.real(math.pi - param.value, param.r)
    other = "upper" if param.kind == "lower" else "lower"
    return SphericalParameter(other, param.value, param.r)


@dataclass
class RadialMeasure:
    """Finite atoms on J_1 plus a density on (0, pi) relative to dm (r = 2).

    ``min_nodes`` is the smallest Gauss rule that resolves the density; rules
    requested below it are silently enlarged.
    """

    atoms: list[tuple[SphericalParameter, complex]] = field(default_factory=list)
    density: Callable | None = None
    samples: dict[int, np.ndarray] = field(default_factory=dict, repr=False)
    min_nodes: int = 0

    def __post_init__(self):
        merged: dict[SphericalParameter, complex] = {}
        for p, m in self.atoms:
            if p.r != 2:
                raise DomainError("measures are only implemented for r = 2")
            merged[p] = merged.get(p, 0j) + complex(m)
        self.atoms = [(p, m) for p, m in merged.items() if m != 0]

    @classmethod
    def point(cls, param: SphericalParameter, mass: complex = 1.0) -> "RadialMeasure":
        return cls([(param, mass)])

    @classmethod
    def plancherel(cls) -> "RadialMeasure":
        return cls(density=lambda th: np.ones_like(np.asarray(th, dtype=float)))

    @classmethod
    def from_radial(cls, x: RadialFunction) -> "RadialMeasure":
        """x_hat dm: the measure whose moments are the values of x."""
        if x.r != 2:
            raise DomainError("measures are only implemented for r = 2")
        x = RadialFunction(2, x.values.copy())
        return cls(density=lambda th: transform_angles(x, th))

    def density_at(self, thetas) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float)
        if self.density is None:
            return np.zeros(thetas.shape, dtype=complex)
        return np.asarray(self.density(thetas), dtype=complex)

    def density_on_rule(self, K: int) -> np.ndarray:
        if K not in self.samples:
            self.samples[K] = self.density_at(gauss_rule(2, K).nodes)
        return self.samples[K]

    def nodes_for(self, K: int) -> int:
        return max(K, min(self.min_nodes, MAX_QUAD_NODES))

    def moments(self, nmax: int, K: int = DEFAULT_K) -> np.ndarray:
        """moment_n = sum_atoms A p_n(atom) + integral of p_n * density dm, n <= nmax."""
        K = self.nodes_for(K)
        out = np.zeros(nmax + 1, dtype=complex)
        for p, m in self.atoms:
            out += m * spherical_values(p, nmax).values
        if self.density is not None:
            rule = gauss_rule(2, K)
            P = recurrence_matrix(np.cos(rule.nodes), 2, nmax)
            out += P @ (rule.weights * self.density_on_rule(K))
        return out

    def total_mass(self, K: int = DEFAULT_K) -> complex:
        return complex(self.moments(0, K)[0])


def _boundary(a: SphericalParameter, b: SphericalParameter) -> bool:
    return abs((a.angle + b.angle).imag - LN3_HALF) <= BOUNDARY_TOL


def _has_atom(a: SphericalParameter, b: SphericalParameter) -> bool:
    return (a.angle + b.angle).imag > LN3_HALF + BOUNDARY_TOL


def _nodes_to_resolve(a: SphericalParameter, b: SphericalParameter, digits: float = 14.0) -> int:
    # s(a, b, .) has poles at imaginary distance delta = |Im(a + b) - ln(3)/2|
    # from [0, pi]; Gauss quadrature converges like exp(-2 K delta).
    delta = abs((a.angle + b.angle).imag - LN3_HALF)
    return int(math.ceil(digits * math.log(10) / (2 * delta)))


def _endpoint_product(a: SphericalParameter, b: SphericalParameter) -> RadialMeasure:
    # the two segment endpoints are characters: p_n = 1 and p_n = (-1)^n
    if not a.is_endpoint:
        a, b = b, a
    target = b if a.kind == "lower" else reflect(b)
    return RadialMeasure.point(target)


def convolve_points(a: SphericalParameter, b: SphericalParameter) -> RadialMeasure:
    """delta_a * delta_b for r = 2.

    Absolutely continuous with density s(a, b, .) when Im(a + b) < ln(3)/2;
    the same density plus one atom when Im(a + b) > ln(3)/2. On the boundary
    only the products with a segment endpoint are defined (they are exact
    translations); anything else raises DomainError.

    Close to the boundary the density develops a sharp peak; the returned
    measure asks for enough Gauss nodes to resolve it (capped at the
    quadrature limit).
    """
    for p in (a, b):
        if p.r != 2:
            raise DomainError("the explicit convolution kernel is only available for r = 2")
    if _boundary(a, b):
        if a.is_endpoint or b.is_endpoint:
            return _endpoint_product(a, b)
        raise DomainError(f"Im(theta1 + theta2) = ln(3)/2 for {a}, {b}: boundary case is not defined")
    ta, tb = a.angle, b.angle
    dens = lambda th: s_density(ta, tb, np.asarray(th, dtype=float))
    atoms = []
    if _has_atom(a, b):
        nu1 = math.exp(2 * ta.imag)
        nu2 = math.exp(2 * tb.imag)
        where = fold_to_j1(ta + tb - 1j * LN3_HALF)
        atoms.append((where, atom_mass(nu1, nu2)))
    return RadialMeasure(atoms, dens, min_nodes=_nodes_to_resolve(a, b))


def _kernel_mix(coef: np.ndarray, left: np.ndarray, right: np.ndarray, thetas: np.ndarray, block: int = 64):
    """sum_ij coef_ij s(left_i, right_j, theta) for each theta."""
    out = np.empty(thetas.size, dtype=complex)
    L = left[:, None, None]
    R = right[None, :, None]
    for start in range(0, thetas.size, block):
        th = thetas[None, None, start:start + block]
        S = s_density(L, R, th)
        out[start:start + block] = np.tensordot(coef, S, axes=([0, 1], [0, 1]))
    return out


def convolve_measures(mu: RadialMeasure, nu: RadialMeasure, K: int = DEFAULT_K) -> RadialMeasure:
    """Bilinear extension of :func:`convolve_points`; densities are integrated
    with the K-point Gauss rule in the free slot."""
    rule = gauss_rule(2, K)
    nodes, w = rule.nodes, rule.weights
    atoms: list[tuple[SphericalParameter, complex]] = []
    parts: list[Callable] = []

    for pa, ma in mu.atoms:
        for pb, mb in nu.atoms:
            m = convolve_points(pa, pb)
            atoms.extend((p, ma * mb * mm) for p, mm in m.atoms)
            if m.density is not None:
                parts.append(lambda th, m=m, c=ma * mb: c * m.density_at(th))

    def atom_times_density(pa, ma, other):
        if pa.is_endpoint:
            if pa.kind == "lower":
                return lambda th: ma * other.density_at(th)
            return lambda th: ma * other.density_at(math.pi - np.asarray(th, dtype=float))
        g = other.density_on_rule(K) * w
        return lambda th: ma * _kernel_mix(g[None, :], np.array([pa.angle]), nodes.astype(complex), np.atleast_1d(np.asarray(th, dtype=float)))

    if nu.density is not None:
        parts.extend(atom_times_density(pa, ma, nu) for pa, ma in mu.atoms)
    if mu.density is not None:
        parts.extend(atom_times_density(pb, mb, mu) for pb, mb in nu.atoms)
    if mu.density is not None and nu.density is not None:
        f = mu.density_on_rule(K) * w
        g = nu.density_on_rule(K) * w
        coef = np.outer(f, g)
        z = nodes.astype(complex)
        parts.append(lambda th: _kernel_mix(coef, z, z, np.atleast_1d(np.asarray(th, dtype=float))))

    def density(th):
        th = np.asarray(th, dtype=float)
        flat = np.atleast_1d(th)
        total = np.zeros(flat.shape, dtype=complex)
        for part in parts:
            total += np.broadcast_to(part(flat), flat.shape)
        return total.reshape(th.shape)

    return RadialMeasure(atoms, density if parts else None)


def measure_from_samples(atoms, thetas, values) -> RadialMeasure:
    """Rebuild a measure from stored density samples (polynomial in cos theta)."""
    thetas = np.asarray(thetas, dtype=float)
    values = np.asarray(values, dtype=complex)
    density = None
    samples = {}
    if thetas.size:
        interp = _interpolate_in_gamma(thetas, values, 2)
        density = lambda th: interp(np.asarray(th, dtype=float))
        rule = gauss_rule(2, thetas.size)
        if np.allclose(rule.nodes, thetas, rtol=0, atol=1e-14):
            samples[thetas.size] = values
    return RadialMeasure(list(atoms), density, samples, min_nodes=len(samples) and thetas.size)


@dataclass
class DualProductReport:
    pointwise: np.ndarray
    via_measures: np.ndarray

    @property
    def residual(self) -> float:
        return float(np.max(np.abs(self.pointwise - self.via_measures)))


def dual_product_check(x: RadialFunction, y: RadialFunction, K: int = DEFAULT_K) -> DualProductReport:
    """Compare x*y computed levelwise with the moments of (x_hat dm) * (y_hat dm)."""
    if x.r != 2 or y.r != 2:
        raise DomainError("the measure path needs r = 2")
    z = pointwise_product(x, y)
    conv = convolve_measures(RadialMeasure.from_radial(x), RadialMeasure.from_radial(y), K)
    return DualProductReport(z.values, conv.moments(z.nmax, K))
