"""Periodic uniform Cartesian grids, grid functions, and discrete calculus.

Grids cover the cube (0, L]^dim with M nodes per axis at coordinates
x_i = i*h, i = 1..M, h = L/M; node M is identified with node 0 by
periodicity.  Grid functions are stored as flat float64 arrays in
lexicographic order with x varying fastest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridSpec",
    "Field",
    "apply_laplacian",
    "inner_product",
    "max_norm",
    "min_value",
    "l2_norm",
]


@dataclass(frozen=True)
class GridSpec:
    """Descriptor of a uniform periodic grid on a d-dimensional cube.

    Attributes
    ----------
    dim : int
        Spatial dimension, 1, 2 or 3.
    cells_per_dim : int
        Number of cells M along each axis.
    domain_length : float
        Side length L of the cube; the grid spacing is h = L/M.
    """

    dim: int
    cells_per_dim: int
    domain_length: float

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.cells_per_dim < 1:
            raise ValueError(f"cells_per_dim must be positive, got {self.cells_per_dim}")
        if not (self.domain_length > 0):
            raise ValueError(f"domain_length must be positive, got {self.domain_length}")
        if self.cells_per_dim ** self.dim > np.iinfo(np.intp).max:
            raise ValueError("total cell count overflows the platform index type")

    @property
    def spacing(self) -> float:
        return self.domain_length / self.cells_per_dim

    @property
    def num_cells(self) -> int:
        return self.cells_per_dim ** self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        """Array shape for reshaped grid functions; x is the last axis."""
        return (self.cells_per_dim,) * self.dim

    def axis_coords(self) -> np.ndarray:
        """Node coordinates h, 2h, ..., Mh along one axis."""
        return self.spacing * np.arange(1, self.cells_per_dim + 1, dtype=np.float64)

    def node_coords(self) -> tuple[np.ndarray, ...]:
        """Per-node coordinate arrays (x, y[, z]), each flat of length M^dim."""
        c = self.axis_coords()
        mesh = np.meshgrid(*([c] * self.dim), indexing="ij")
        # mesh[k] varies along axis k; x is the fastest (last) axis
        return tuple(mesh[self.dim - 1 - k].reshape(-1) for k in range(self.dim))


@dataclass(frozen=True, eq=False)
class Field:
    """A real-valued grid function: flat float64 values on a GridSpec.

    Values are validated to be finite on construction and frozen
    (read-only) afterwards; operations return new Fields.
    """

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, order="C", copy=True).reshape(-1)
        if arr.size != self.spec.num_cells:
            raise ValueError(
                f"values length {arr.size} does not match grid with {self.spec.num_cells} cells"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("field values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def constant(cls, spec: GridSpec, value: float) -> "Field":
        return cls(spec, np.full(spec.num_cells, float(value)))

    @classmethod
    def from_function(cls, spec: GridSpec, fn) -> "Field":
        """Sample ``fn(x, y[, z])`` (vectorized over arrays) on the grid."""
        return cls(spec, fn(*spec.node_coords()))


def laplacian_array(spec: GridSpec, values: np.ndarray) -> np.ndarray:
    """Second-order central periodic Laplacian on a flat array (fast path).

    The stencil is accumulated one axis at a time as (u_+ + u_-) - 2u so
    constant fields map to exact zeros.
    """
    a = values.reshape(spec.shape)
    out = None
    for ax in range(spec.dim):
        term = np.roll(a, 1, axis=ax)
        term += np.roll(a, -1, axis=ax)
        term -= 2.0 * a
        out = term if out is None else out + term
    out *= 1.0 / spec.spacing**2
    return out.reshape(-1)


def apply_laplacian(u: Field) -> Field:
    """Apply the second-order central-difference Laplacian with periodic wraparound."""
    return Field(u.spec, laplacian_array(u.spec, u.values))


def _require_same_spec(u: Field, v: Field) -> None:
    if u.spec != v.spec:
        raise ValueError(f"grid mismatch: {u.spec} vs {v.spec}")


def inner_product(u: Field, v: Field) -> float:
    """Discrete L2 inner product h^dim * sum_i u_i v_i.

    The h^dim scaling makes <1, 1> equal the domain volume L^dim in any
    dimension, so norms are dimension-consistent.
    """
    _require_same_spec(u, v)
    return u.spec.spacing**u.spec.dim * float(np.dot(u.values, v.values))


def max_norm(u: Field) -> float:
    """Discrete maximum norm max_i |u_i|."""
    return float(np.abs(u.values).max())


def min_value(u: Field) -> float:
    return float(u.values.min())


def l2_norm(u: Field) -> float:
    return float(np.sqrt(inner_product(u, u)))
