"""Double-well potential, mobility laws, and the discrete free energy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, apply_laplacian, inner_product

__all__ = [
    "DOUBLE_WELL_LIPSCHITZ",
    "double_well",
    "reaction",
    "Mobility",
    "ConstantMobility",
    "TwoSidedMobility",
    "OneSidedMobility",
    "discrete_energy",
]

# max |f'| on [-1, 1] for f(s) = s - s^3; lower admissibility limit for the
# stabilization coefficient of both schemes
DOUBLE_WELL_LIPSCHITZ = 2.0


def double_well(s):
    """Potential F(s) = (1 - s^2)^2 / 4 with minima at s = +-1."""
    return 0.25 * (1.0 - s * s) ** 2


def reaction(s):
    """Reaction term f(s) = -F'(s) = s - s^3."""
    return s - s**3


class Mobility:
    """Phase-dependent rate coefficient, evaluated pointwise.

    Subclasses provide ``__call__`` (total on reals; callers are expected
    to stay in [-1, 1], which the schemes guarantee) and ``bound``, the
    exact supremum over [-1, 1].
    """

    @property
    def bound(self) -> float:
        raise NotImplementedError

    def __call__(self, s):
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantMobility(Mobility):
    """M(s) = c, phase-independent."""

    value: float = 1.0

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"mobility constant must be nonnegative, got {self.value}")

    @property
    def bound(self) -> float:
        return self.value

    def __call__(self, s):
        return np.full_like(np.asarray(s, dtype=np.float64), self.value)


@dataclass(frozen=True)
class TwoSidedMobility(Mobility):
    """M(s) = (1 - s^2)^m, vanishing at both pure phases s = +-1."""

    exponent: float = 1.0

    def __post_init__(self):
        if not (self.exponent > 0):
            raise ValueError(f"mobility exponent must be positive, got {self.exponent}")

    @property
    def bound(self) -> float:
        return 1.0  # attained at s = 0

    def __call__(self, s):
        s = np.asarray(s, dtype=np.float64)
        base = 1.0 - s * s
        if float(self.exponent).is_integer():
            return base**self.exponent
        # non-integer powers of a negative base are NaN; clamp, which only
        # affects the out-of-bound region |s| > 1 the schemes never visit
        return np.maximum(base, 0.0) ** self.exponent


@dataclass(frozen=True)
class OneSidedMobility(Mobility):
    """M(s) = (1 + s)/2, degenerate only at s = -1."""

    @property
    def bound(self) -> float:
        return 1.0  # attained at s = 1

    def __call__(self, s):
        s = np.asarray(s, dtype=np.float64)
        return 0.5 * (1.0 + s)


def discrete_energy(u: Field, eps: float) -> float:
    """Discrete free energy -eps^2/2 <Lap u, u> + <F(u), 1>."""
    if not (eps > 0):
        raise ValueError(f"eps must be positive, got {eps}")
    grad_part = -0.5 * eps * eps * inner_product(apply_laplacian(u), u)
    bulk_part = u.spec.spacing**u.spec.dim * float(np.sum(double_well(u.values)))
    return grad_part + bulk_part
