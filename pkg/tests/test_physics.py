import numpy as np
import pytest

from allencahn.grid import Field, GridSpec
from allencahn.physics import (
    DOUBLE_WELL_LIPSCHITZ,
    ConstantMobility,
    OneSidedMobility,
    TwoSidedMobility,
    discrete_energy,
    double_well,
    reaction,
)

from oracles import direct_energy

ALL_MOBILITIES = [
    ConstantMobility(1.0),
    TwoSidedMobility(1.0),
    TwoSidedMobility(3.0),
    TwoSidedMobility(5.0),
    OneSidedMobility(),
]


class TestMobility:
    def test_values_from_the_defining_formulas(self):
        assert TwoSidedMobility(1.0)(0.0) == 1.0
        assert TwoSidedMobility(3.0)(1.0) == 0.0
        assert OneSidedMobility()(0.0) == 0.5
        assert ConstantMobility(0.7)(0.3) == 0.7

    def test_degeneracy_is_exact(self):
        for m in (1.0, 2.0, 3.0, 5.0):
            assert TwoSidedMobility(m)(1.0) == 0.0
            assert TwoSidedMobility(m)(-1.0) == 0.0
        assert OneSidedMobility()(-1.0) == 0.0

    def test_suprema_against_dense_sampling(self):
        xs = np.linspace(-1.0, 1.0, 10001)
        for mob in ALL_MOBILITIES:
            sampled = mob(xs)
            assert sampled.max() <= mob.bound + 1e-15
            assert sampled.max() >= mob.bound - 1e-3  # supremum is attained
            assert sampled.min() >= 0.0

    def test_supremum_examples(self):
        assert ConstantMobility(1.0).bound == 1.0
        assert TwoSidedMobility(5.0).bound == 1.0
        assert OneSidedMobility().bound == 1.0

    def test_non_integer_exponent_clamps_outside_unit_interval(self):
        mob = TwoSidedMobility(2.5)
        assert mob(1.2) == 0.0
        assert np.isfinite(mob(np.array([-1.5, 1.5]))).all()

    def test_integer_exponent_evaluates_formula_as_written(self):
        assert TwoSidedMobility(1.0)(1.1) == pytest.approx(1 - 1.1**2)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            ConstantMobility(-0.1)
        with pytest.raises(ValueError):
            TwoSidedMobility(0.0)


class TestDoubleWell:
    def test_pure_phase_equilibria(self):
        assert reaction(1.0) == 0.0
        assert reaction(-1.0) == 0.0
        assert double_well(1.0) == 0.0
        assert reaction(0.0) == 0.0

    def test_point_values(self):
        assert double_well(0.0) == 0.25
        assert reaction(0.5) == pytest.approx(0.375)

    def test_reaction_is_negative_gradient_of_potential(self):
        delta = 1e-5
        for s in np.linspace(-1.5, 1.5, 31):
            fd = (double_well(s + delta) - double_well(s - delta)) / (2 * delta)
            assert abs(reaction(s) + fd) <= 1e-8

    def test_stabilized_reaction_bound(self):
        # |f(x) + kappa*x| <= kappa on [-1, 1] for kappa = 2
        kappa = DOUBLE_WELL_LIPSCHITZ
        xs = np.linspace(-1.0, 1.0, 10001)
        assert np.all(np.abs(reaction(xs) + kappa * xs) <= kappa)


class TestDiscreteEnergy:
    def test_pure_phase_has_zero_energy(self):
        spec = GridSpec(2, 16, 1.0)
        assert discrete_energy(Field.constant(spec, 1.0), 0.01) == pytest.approx(0.0, abs=1e-15)

    def test_well_top_energy_is_quarter_of_volume(self):
        spec = GridSpec(2, 32, 1.0)
        assert discrete_energy(Field.constant(spec, 0.0), 0.01) == pytest.approx(0.25, rel=1e-13)

    def test_matches_direct_summation_oracle(self):
        spec = GridSpec(2, 24, 2 * np.pi)
        u = Field.from_function(spec, lambda x, y: np.sin(x) * np.sin(y))
        expected = direct_energy(u.values, 2, 24, spec.spacing, 0.01)
        assert discrete_energy(u, 0.01) == pytest.approx(expected, rel=1e-12)

    def test_nonnegative_for_admissible_states(self):
        rng = np.random.default_rng(7)
        spec = GridSpec(2, 16, 1.0)
        for _ in range(5):
            u = Field(spec, rng.uniform(-1.0, 1.0, spec.num_cells))
            assert discrete_energy(u, 0.05) >= 0.0
