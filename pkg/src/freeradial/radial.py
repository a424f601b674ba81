"""Finitely supported functions on F_r and their radial parts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .words import Word, enumerate_ball, reduce_word, sphere_size, DEFAULT_BALL_CAP


@dataclass
class TreeFunction:
    """Sparse complex function on F_r keyed by reduced words."""

    r: int
    values: dict[Word, complex] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for w, v in self.values.items():
            w = tuple(w)
            if reduce_word(w, self.r) != w:
                raise DomainError(f"key {w} is not a reduced word")
            cleaned[w] = complex(v)
        self.values = cleaned

    @classmethod
    def delta(cls, r: int, w: Word = ()) -> "TreeFunction":
        return cls(r, {tuple(w): 1.0})

    def __getitem__(self, w: Word) -> complex:
        return self.values.get(tuple(w), 0j)

    def __len__(self):
        return len(self.values)

    @property
    def support_radius(self) -> int:
        return max((len(w) for w in self.values), default=0)

    def scale(self, c) -> "TreeFunction":
        return TreeFunction(self.r, {w: c * v for w, v in self.values.items()})

    def __add__(self, other: "TreeFunction") -> "TreeFunction":
        _same_rank(self, other)
        out = dict(self.values)
        for w, v in other.values.items():
            out[w] = out.get(w, 0j) + v
        return TreeFunction(self.r, out)


@dataclass
class RadialFunction:
    """The function t -> values[|t|] on F_r (zero beyond the stored levels)."""

    r: int
    values: np.ndarray

    def __post_init__(self):
        if self.r < 2:
            raise DomainError(f"rank must be >= 2, got {self.r}")
        self.values = np.atleast_1d(np.asarray(self.values, dtype=complex))
        if self.values.ndim != 1 or self.values.size == 0:
            raise DomainError("radial values must be a non-empty 1-d sequence")

    @classmethod
    def delta(cls, r: int, n: int = 0) -> "RadialFunction":
        v = np.zeros(n + 1, dtype=complex)
        v[n] = 1.0
        return cls(r, v)

    @property
    def nmax(self) -> int:
        return self.values.size - 1

    def __call__(self, n: int) -> complex:
        return complex(self.values[n]) if 0 <= n <= self.nmax else 0j

    def padded(self, nmax: int) -> np.ndarray:
        out = np.zeros(max(nmax, self.nmax) + 1, dtype=complex)
        out[: self.values.size] = self.values
        return out[: nmax + 1]

    def trimmed(self) -> "RadialFunction":
        nz = np.flatnonzero(self.values)
        last = int(nz[-1]) if nz.size else 0
        return RadialFunction(self.r, self.values[: last + 1].copy())

    def weights(self) -> np.ndarray:
        """Sphere sizes for the stored levels (as float)."""
        return np.array([float(sphere_size(self.r, n)) for n in range(self.nmax + 1)])


def _same_rank(f, g):
    if f.r != g.r:
        raise DomainError(f"rank mismatch: {f.r} vs {g.r}")


def radialize(f: TreeFunction) -> RadialFunction:
    """Sphere-wise mean: level n gets (1/|S_n|) * sum of f over words of length n."""
    nmax = f.support_radius
    sums = np.zeros(nmax + 1, dtype=complex)
    for w, v in f.values.items():
        sums[len(w)] += v
    sizes = np.array([float(sphere_size(f.r, n)) for n in range(nmax + 1)])
    return RadialFunction(f.r, sums / sizes)


def embed_radial(x: RadialFunction, N: int | None = None, cap: int = DEFAULT_BALL_CAP) -> TreeFunction:
    """Materialize t -> x(|t|) on the ball of radius N (zeros are not stored)."""
    x = x.trimmed()
    if N is None:
        N = x.nmax
    if N < x.nmax and np.any(x.values[N + 1:]):
        raise DomainError(f"radius {N} is below the support of x ({x.nmax})")
    ball = enumerate_ball(x.r, N, cap)
    vals = {}
    for w in ball.words:
        v = x(len(w))
        if v != 0:
            vals[w] = v
    return TreeFunction(x.r, vals)


def pointwise_product(f, g):
    """Pointwise product; radial times radial stays radial."""
    _same_rank(f, g)
    if isinstance(f, RadialFunction) and isinstance(g, RadialFunction):
        n = min(f.nmax, g.nmax)
        return RadialFunction(f.r, f.values[: n + 1] * g.values[: n + 1])
    if isinstance(f, RadialFunction):
        f, g = g, f
    if isinstance(g, RadialFunction):
        out = {w: v * g(len(w)) for w, v in f.values.items()}
    else:
        out = {w: v * g.values[w] for w, v in f.values.items() if w in g.values}
    return TreeFunction(f.r, {w: v for w, v in out.items() if v != 0})


def lp_norm(f, p: float = 2.0) -> float:
    if p < 1:
        raise DomainError("p must be >= 1")
    if isinstance(f, RadialFunction):
        mods = np.abs(f.values)
        if math.isinf(p):
            return float(mods.max())
        sizes = f.weights()
        return float(np.sum(sizes * mods**p) ** (1.0 / p))
    mods = np.abs(np.fromiter(f.values.values(), dtype=complex, count=len(f)))
    if mods.size == 0:
        return 0.0
    if math.isinf(p):
        return float(mods.max())
    return float(np.sum(mods**p) ** (1.0 / p))


def xi(r: int, n):
    """Sup of |x(t)| over the unit ball of the radial Fourier algebra at |t| = n:
    (1 + n(r-1)/r) * (2r-1)^(-n/2). Accepts an int or an integer array."""
    if r < 2:
        raise DomainError(f"rank must be >= 2, got {r}")
    n = np.asarray(n, dtype=float)
    out = (1.0 + n * (r - 1) / r) * (2 * r - 1) ** (-n / 2.0)
    return float(out) if out.ndim == 0 else out


def xi_l3_terms(r: int, nmax: int) -> np.ndarray:
    """|S_n| * xi(r, n)^3 for n = 0..nmax."""
    sizes = np.array([float(sphere_size(r, k)) for k in range(nmax + 1)])
    return sizes * xi(r, np.arange(nmax + 1)) ** 3


def xi_l3_tail(r: int, nmax: int) -> np.ndarray:
    """Partial sums of sum_{n<=N} |S_n| * xi(r, n)^3 for N = 0..nmax."""
    return np.cumsum(xi_l3_terms(r, nmax))


def sphere_l2_profile(f) -> np.ndarray:
    """n -> sum over |t| = n of |f(t)|^2."""
    if isinstance(f, RadialFunction):
        return f.weights() * np.abs(f.values) ** 2
    prof = np.zeros(f.support_radius + 1)
    for w, v in f.values.items():
        prof[len(w)] += abs(v) ** 2
    return prof


@dataclass
class TailReport:
    lhs: np.ndarray
    rhs: np.ndarray
    violations: list[int]
    precondition_failures: list[str]

    @property
    def margin(self) -> float:
        """Smallest rhs - lhs over all spheres (>= 0 when the bound holds)."""
        return float(np.min(self.rhs - self.lhs))

    @property
    def ok(self) -> bool:
        return not self.violations


def tail_estimate_check(x: TreeFunction, y: TreeFunction, rtol: float = 1e-12) -> TailReport:
    """Check sum_{|t|=n} |x y|^2 <= |S_n| xi(n)^3 sphere by sphere.

    Hypotheses: |x(t)| <= xi(|t|) and sum_{|t|=n} |y|^2 <= |S_n| xi(n).
    Hypothesis failures are reported separately and do not count as
    violations of the bound.
    """
    _same_rank(x, y)
    r = x.r
    nmax = max(x.support_radius, y.support_radius)
    sizes = np.array([float(sphere_size(r, n)) for n in range(nmax + 1)])
    xis = xi(r, np.arange(nmax + 1))

    pre = []
    for w, v in x.values.items():
        if abs(v) > xis[len(w)] * (1 + rtol):
            pre.append(f"|x({w})| = {abs(v):.6g} exceeds xi = {xis[len(w)]:.6g}")
    yprof = np.zeros(nmax + 1)
    yprof[: y.support_radius + 1] = sphere_l2_profile(y)
    for n in np.flatnonzero(yprof > sizes * xis * (1 + rtol)):
        pre.append(f"sphere {n}: l2 mass of y {yprof[n]:.6g} exceeds {sizes[n] * xis[n]:.6g}")

    lhs = np.zeros(nmax + 1)
    prod = pointwise_product(x, y)
    lhs[: prod.support_radius + 1] = sphere_l2_profile(prod) if len(prod) else 0.0
    rhs = sizes * xis**3
    violations = [int(n) for n in np.flatnonzero(lhs > rhs * (1 + rtol))]
    return TailReport(lhs, rhs, violations, pre)
