"""Per-step structure monitors, error measurement, and convergence orders."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .grid import Field

__all__ = [
    "StepRecord",
    "ConvergenceTable",
    "check_mbp",
    "check_energy_dissipation",
    "error_vs_exact",
    "estimate_order",
    "count_level_set_components",
    "convex_hull_area_ratio",
    "time_to_reach_max_norm",
]


@dataclass
class StepRecord:
    """Diagnostics row produced after each completed time step."""

    n: int
    t: float
    tau: float
    energy: float
    max_val: float
    min_val: float
    max_norm: float
    solver_iters: int
    solver_residual: float
    mbp_violation: float  # max(0, max_norm - 1)
    energy_increase: float  # max(0, E^n - E^{n-1})


def check_mbp(record: StepRecord, slack: float = 1e-8) -> bool:
    """Pass iff the recorded bound violation stays within the solver slack."""
    return record.mbp_violation <= slack


def check_energy_dissipation(prev_energy: float, curr_energy: float, slack: float = 1e-8) -> bool:
    """Pass iff the energy did not grow beyond slack*(1 + |E_prev|)."""
    return curr_energy <= prev_energy + slack * (1.0 + abs(prev_energy))


def error_vs_exact(phi: Field, exact, t: float) -> float:
    """Maximum nodal error against ``exact(x, y[, z], t)`` (vectorized)."""
    reference = np.asarray(exact(*phi.spec.node_coords(), t), dtype=np.float64)
    return float(np.abs(phi.values - reference.reshape(-1)).max())


@dataclass
class ConvergenceTable:
    """Final-time errors of a temporal refinement study, by step count."""

    ns: list[int]
    errors: list[float]

    def __post_init__(self):
        if len(self.ns) != len(self.errors):
            raise ValueError("ns and errors must have equal length")
        if any(b <= a for a, b in zip(self.ns, self.ns[1:])):
            raise ValueError("step counts must be strictly increasing")


def estimate_order(table: ConvergenceTable) -> list[float]:
    """Observed orders log(e_i/e_{i+1}) / log(tau_i/tau_{i+1}) between rows.

    The step size entering the ratio is the mean one, T/N, so the same
    formula serves uniform and randomly perturbed step sequences.
    """
    if len(table.ns) < 2:
        raise ValueError("need at least two rows to estimate an order")
    if any(e <= 0 for e in table.errors):
        raise ValueError("orders are undefined for nonpositive errors")
    orders = []
    for (n0, e0), (n1, e1) in zip(
        zip(table.ns, table.errors), zip(table.ns[1:], table.errors[1:])
    ):
        orders.append(float(np.log(e0 / e1) / np.log(n1 / n0)))
    return orders


def count_level_set_components(field: Field, level: float = 0.0) -> int:
    """Number of connected components of {phi > level}, periodic-aware.

    Face connectivity; components touching across opposite domain faces
    are merged, matching the periodic topology of the grid.
    """
    mask = field.values.reshape(field.spec.shape) > level
    labels, n = ndimage.label(mask)
    if n <= 1:
        return int(n)
    # merge labels that touch through the periodic boundary
    parent = list(range(n + 1))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    for ax in range(field.spec.dim):
        first = np.take(labels, 0, axis=ax).reshape(-1)
        last = np.take(labels, -1, axis=ax).reshape(-1)
        for a, b in zip(first, last):
            if a and b:
                union(int(a), int(b))
    return len({find(i) for i in range(1, n + 1)})


def convex_hull_area_ratio(field: Field, level: float = 0.0) -> float:
    """Area of {phi > level} over the area of its convex hull (2D only).

    Near 1 for convex blobs, well below 1 for star-like shapes.  Not
    periodic-aware; intended for blobs away from the domain boundary.
    """
    from scipy.spatial import ConvexHull, QhullError

    if field.spec.dim != 2:
        raise ValueError("convexity measure is limited to 2D fields")
    mask = field.values.reshape(field.spec.shape) > level
    cells = np.argwhere(mask)
    if len(cells) == 0:
        raise ValueError("empty level set")
    h = field.spec.spacing
    area = len(cells) * h * h
    try:
        hull = ConvexHull(cells * h)
    except QhullError:
        return 1.0  # degenerate (tiny/collinear) blob counts as convex
    return area / hull.volume  # volume is the area for 2D hulls


def time_to_reach_max_norm(records: list[StepRecord], threshold: float) -> float | None:
    """First recorded time with max_norm >= threshold; None if never."""
    for rec in records:
        if rec.max_norm >= threshold:
            return rec.t
    return None
