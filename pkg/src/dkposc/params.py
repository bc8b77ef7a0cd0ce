"""Model parameters and quantum numbers."""

from __future__ import annotations

import math
import numbers
from dataclasses import asdict, dataclass, fields, replace

from dkposc.errors import DomainError


@dataclass(frozen=True)
class SpacetimeParams:
    """Angular deficit ``alpha`` and vorticity ``Omega`` of the rotating cosmic-string background."""

    alpha: float = 1.0
    Omega: float = 0.0

    def __post_init__(self):
        _check_finite(self, ("alpha", "Omega"))
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        if self.Omega < 0.0:
            raise DomainError(f"Omega must be non-negative, got {self.Omega!r}")


@dataclass(frozen=True)
class PhysicsParams:
    """Continuous parameters of the oscillator.

    ``phi`` is the dimensionless Aharonov-Bohm flux e*Phi_B/(2*pi); with the
    unit charge convention it shifts the magnetic number as m -> m - phi.
    """

    M: float = 1.0
    omega: float = 1.0
    Omega: float = 0.0
    alpha: float = 1.0
    A: float = 1.0
    B: float = 0.0
    k: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        _check_finite(self, [f.name for f in fields(self)])
        if self.M <= 0.0:
            raise DomainError(f"M must be positive, got {self.M!r}")
        if self.omega <= 0.0:
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        if self.Omega < 0.0:
            raise DomainError(f"Omega must be non-negative, got {self.Omega!r}")

    @property
    def spacetime(self) -> SpacetimeParams:
        return SpacetimeParams(alpha=self.alpha, Omega=self.Omega)

    def with_(self, **changes) -> PhysicsParams:
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial index ``n`` and magnetic quantum number ``m``."""

    n: int = 0
    m: int = 0

    def __post_init__(self):
        for name in ("n", "m"):
            value = getattr(self, name)
            if (isinstance(value, bool) or not isinstance(value, numbers.Real)
                    or not math.isfinite(value) or int(value) != value):
                raise DomainError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.n < 0:
            raise DomainError(f"n must be non-negative, got {self.n!r}")


def effective_m(qn: QuantumNumbers, p: PhysicsParams) -> float:
    """Magnetic number shifted by the flux, m - phi."""
    return qn.m - p.phi


def _check_finite(obj, names):
    for name in names:
        value = getattr(obj, name)
        if not isinstance(value, numbers.Real) or isinstance(value, bool) or not math.isfinite(value):
            raise DomainError(f"{name} must be a finite real number, got {value!r}")
