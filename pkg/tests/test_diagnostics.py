import numpy as np
import pytest

from allencahn.diagnostics import (
    ConvergenceTable,
    StepRecord,
    check_energy_dissipation,
    check_mbp,
    convex_hull_area_ratio,
    count_level_set_components,
    error_vs_exact,
    estimate_order,
    time_to_reach_max_norm,
)
from allencahn.grid import Field, GridSpec


def record(max_norm=1.0, energy=0.0, n=1, t=0.1, tau=0.1):
    return StepRecord(
        n=n,
        t=t,
        tau=tau,
        energy=energy,
        max_val=max_norm,
        min_val=-max_norm,
        max_norm=max_norm,
        solver_iters=3,
        solver_residual=1e-12,
        mbp_violation=max(0.0, max_norm - 1.0),
        energy_increase=0.0,
    )


class TestVerdicts:
    def test_bound_exactly_one_passes(self):
        assert check_mbp(record(max_norm=1.0))

    def test_tiny_violation_within_slack_passes(self):
        rec = record(max_norm=1.0 + 1e-12)
        assert rec.mbp_violation == pytest.approx(1e-12, rel=1e-3)
        assert check_mbp(rec, slack=1e-8)

    def test_real_violation_fails(self):
        assert not check_mbp(record(max_norm=1.1))

    def test_energy_verdicts(self):
        assert check_energy_dissipation(1.0, 0.9)
        assert check_energy_dissipation(1.0, 1.0)
        assert check_energy_dissipation(1.0, 1.0 + 1e-9)  # inside slack
        assert not check_energy_dissipation(1.0, 1.1)


class TestErrorGauge:
    def test_zero_iff_nodewise_equal(self):
        spec = GridSpec(2, 8, 2 * np.pi)
        exact = lambda x, y, t: np.cos(x) * np.cos(y) * np.exp(-t)  # noqa: E731
        phi = Field.from_function(spec, lambda x, y: exact(x, y, 0.5))
        assert error_vs_exact(phi, exact, 0.5) == 0.0

    def test_constant_offset_is_measured_exactly(self):
        spec = GridSpec(1, 16, 1.0)
        exact = lambda x, t: np.zeros_like(x)  # noqa: E731
        phi = Field.constant(spec, 0.125)
        assert error_vs_exact(phi, exact, 0.0) == 0.125


class TestConvergenceOrders:
    def test_textbook_second_order_pair(self):
        assert estimate_order(ConvergenceTable([20, 40], [4e-2, 1e-2])) == [
            pytest.approx(2.0, abs=1e-12)
        ]

    def test_reference_first_order_pair(self):
        orders = estimate_order(ConvergenceTable([20, 40], [7.02e-2, 3.81e-2]))
        assert round(orders[0], 2) == 0.88

    def test_equal_errors_give_zero_order(self):
        assert estimate_order(ConvergenceTable([10, 20], [1e-3, 1e-3])) == [0.0]

    def test_rejects_nonpositive_errors(self):
        with pytest.raises(ValueError, match="nonpositive"):
            estimate_order(ConvergenceTable([10, 20], [1e-3, 0.0]))

    def test_rejects_non_increasing_ns(self):
        with pytest.raises(ValueError):
            ConvergenceTable([20, 20], [1e-2, 1e-3])

    def test_needs_two_rows(self):
        with pytest.raises(ValueError):
            estimate_order(ConvergenceTable([10], [1e-2]))


class TestLevelSets:
    def grid(self, m=32):
        return GridSpec(2, m, 1.0)

    def disk_field(self, cx, cy, radius, m=32):
        spec = self.grid(m)
        return Field.from_function(
            spec, lambda x, y: np.where(np.hypot(x - cx, y - cy) < radius, 1.0, -1.0)
        )

    def test_single_blob(self):
        assert count_level_set_components(self.disk_field(0.5, 0.5, 0.2)) == 1

    def test_two_blobs(self):
        spec = self.grid()
        f = Field.from_function(
            spec,
            lambda x, y: np.where(
                (np.hypot(x - 0.25, y - 0.5) < 0.1) | (np.hypot(x - 0.75, y - 0.5) < 0.1),
                1.0,
                -1.0,
            ),
        )
        assert count_level_set_components(f) == 2

    def test_blob_across_periodic_boundary_counts_once(self):
        # centered at a corner, so the mask splits into four array blocks
        assert count_level_set_components(self.disk_field(0.0, 0.0, 0.15)) == 1

    def test_empty_set(self):
        spec = self.grid()
        assert count_level_set_components(Field.constant(spec, -1.0)) == 0

    def test_convexity_ratio_separates_disk_from_star(self):
        disk = self.disk_field(0.5, 0.5, 0.3, m=128)
        assert convex_hull_area_ratio(disk) >= 0.95

        spec = self.grid(128)
        star = Field.from_function(
            spec,
            lambda x, y: np.where(
                np.hypot(x - 0.5, y - 0.5)
                < 0.15 + 0.12 * np.cos(6 * np.arctan2(y - 0.5, x - 0.5)),
                1.0,
                -1.0,
            ),
        )
        assert count_level_set_components(star) == 1
        assert convex_hull_area_ratio(star) < 0.8

    def test_convexity_needs_2d(self):
        with pytest.raises(ValueError):
            convex_hull_area_ratio(Field.constant(GridSpec(1, 8, 1.0), 1.0))


class TestHittingTime:
    def test_first_crossing_is_reported(self):
        records = [record(max_norm=v, n=i, t=0.1 * i) for i, v in enumerate([0.9, 0.95, 0.999, 1.0], 1)]
        assert time_to_reach_max_norm(records, 0.999) == pytest.approx(0.3)

    def test_none_when_never_reached(self):
        records = [record(max_norm=0.5)]
        assert time_to_reach_max_norm(records, 0.999) is None
