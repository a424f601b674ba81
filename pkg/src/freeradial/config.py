from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError
from .words import DEFAULT_BALL_CAP

# Default tolerances, one per verification check family.
TOLERANCES = {
    "closed_form": 1e-10,
    "recurrence": 1e-12,
    "plancherel_integral": 1e-8,
    "weight_sum": 1e-12,
    "orthogonality": 1e-10,
    "roundtrip": 1e-9,
    "parseval": 1e-9,
    "kernel_symmetry": 1e-12,
    "probability_mass": 1e-8,
    "product_formula": 1e-6,
    "atom_moment": 1e-6,
    "gelfand": 1e-9,
    "kesten_truncation": 0.02,
    "opnorm_slack": 1e-9,
    "dual_product": 1e-7,
    "tail_ratio": 0.9,
}


@dataclass
class Config:
    rank: int = 2
    quad: int | None = None
    grid: int = 513
    seed: int = 0
    ball_cap: int = DEFAULT_BALL_CAP
    out: str | None = None
    tolerances: dict[str, float] = field(default_factory=lambda: dict(TOLERANCES))

    def __post_init__(self):
        if self.rank < 2:
            raise DomainError(f"rank must be >= 2, got {self.rank}")
        if self.quad is not None and self.quad < 1:
            raise DomainError("quadrature size must be >= 1")
        if self.grid < 2:
            raise DomainError("grid must have at least 2 points")

    def tol(self, name: str) -> float:
        return self.tolerances[name]

    def override(self, item: str) -> None:
        """Apply ``name=value``."""
        name, sep, value = item.partition("=")
        if not sep or name not in self.tolerances:
            raise DomainError(f"tolerance override must be name=value with name in {sorted(self.tolerances)}")
        try:
            self.tolerances[name] = float(value)
        except ValueError:
            raise DomainError(f"bad tolerance value {value!r}") from None
