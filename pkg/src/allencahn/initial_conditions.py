"""Initial states for the benchmark experiments."""

from __future__ import annotations

import numpy as np

from .grid import Field, GridSpec

__all__ = [
    "random_uniform",
    "flower",
    "two_bubbles",
    "manufactured_initial",
    "constant",
]


def random_uniform(grid: GridSpec, lo: float, hi: float, seed: int) -> Field:
    """Independent uniform draws per cell, in lexicographic order."""
    if not (lo <= hi):
        raise ValueError(f"need lo <= hi, got {lo} > {hi}")
    rng = np.random.default_rng(seed)
    return Field(grid, rng.uniform(lo, hi, grid.num_cells))


def flower(grid: GridSpec, lam: float) -> Field:
    """Six-petal shape 0.9*tanh((1.5 + 1.2 cos 6θ - 2πr)/sqrt(2λ)), centered.

    θ and r are polar coordinates about the domain center.  λ controls the
    interface width of the initial profile; λ = eps^2 matches the
    equilibrium profile width.
    """
    if grid.dim != 2:
        raise ValueError("flower initial state is two-dimensional")
    if not (lam > 0):
        raise ValueError(f"lam must be positive, got {lam}")
    x, y = grid.node_coords()
    half = 0.5 * grid.domain_length
    dx, dy = x - half, y - half
    theta = np.arctan2(dy, dx)
    r = np.hypot(dx, dy)
    profile = (1.5 + 1.2 * np.cos(6.0 * theta) - 2.0 * np.pi * r) / np.sqrt(2.0 * lam)
    return Field(grid, 0.9 * np.tanh(profile))


def two_bubbles(grid: GridSpec, eps: float, offset: float = 0.14, radius: float = 0.2) -> Field:
    """Two spherical bubbles at x = +-offset from the domain center (3D)."""
    if grid.dim != 3:
        raise ValueError("two-bubble initial state is three-dimensional")
    x, y, z = grid.node_coords()
    half = 0.5 * grid.domain_length
    dx, dy, dz = x - half, y - half, z - half
    phi1 = 0.9 * np.tanh((radius - np.sqrt((dx + offset) ** 2 + dy**2 + dz**2)) / eps)
    phi2 = 0.9 * np.tanh((radius - np.sqrt((dx - offset) ** 2 + dy**2 + dz**2)) / eps)
    return Field(grid, np.maximum(phi1, phi2))


def manufactured_initial(grid: GridSpec) -> Field:
    """sin(x) sin(y): the forced benchmark's exact solution at t = 0."""
    if grid.dim != 2:
        raise ValueError("manufactured initial state is two-dimensional")
    x, y = grid.node_coords()
    return Field(grid, np.sin(x) * np.sin(y))


def constant(grid: GridSpec, value: float) -> Field:
    return Field.constant(grid, value)
