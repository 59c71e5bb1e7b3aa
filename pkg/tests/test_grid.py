import numpy as np
import pytest

from allencahn.grid import (
    Field,
    GridSpec,
    apply_laplacian,
    inner_product,
    l2_norm,
    max_norm,
    min_value,
)

from oracles import dense_laplacian_matrix, direct_inner_product


def random_field(spec, seed, lo=-1.0, hi=1.0):
    rng = np.random.default_rng(seed)
    return Field(spec, rng.uniform(lo, hi, spec.num_cells))


class TestGridSpec:
    def test_spacing_times_cells_is_length(self):
        for dim, m, length in [(1, 7, 1.0), (2, 128, 2 * np.pi), (3, 64, 1.0)]:
            spec = GridSpec(dim, m, length)
            assert spec.spacing * spec.cells_per_dim == pytest.approx(length, rel=1e-16)
            assert spec.num_cells == m**dim

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            GridSpec(4, 8, 1.0)
        with pytest.raises(ValueError):
            GridSpec(2, 0, 1.0)
        with pytest.raises(ValueError):
            GridSpec(2, 8, -1.0)

    def test_node_coords_layout_x_fastest(self):
        spec = GridSpec(2, 3, 3.0)  # h = 1, coords 1,2,3
        x, y = spec.node_coords()
        assert np.array_equal(x, [1, 2, 3, 1, 2, 3, 1, 2, 3])
        assert np.array_equal(y, [1, 1, 1, 2, 2, 2, 3, 3, 3])


class TestField:
    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            Field(GridSpec(1, 4, 1.0), [1.0, 2.0])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Field(GridSpec(1, 3, 1.0), [1.0, np.nan, 0.0])
        with pytest.raises(ValueError):
            Field(GridSpec(1, 3, 1.0), [1.0, np.inf, 0.0])

    def test_values_are_frozen(self):
        f = Field.constant(GridSpec(1, 3, 1.0), 0.5)
        with pytest.raises(ValueError):
            f.values[0] = 1.0


class TestLaplacian:
    def test_annihilates_constants(self):
        for dim in (1, 2, 3):
            spec = GridSpec(dim, 5, 2.0)
            out = apply_laplacian(Field.constant(spec, 3.7))
            assert np.all(out.values == 0.0)

    def test_hand_evaluated_1d_stencil(self):
        spec = GridSpec(1, 4, 4.0)  # h = 1
        out = apply_laplacian(Field(spec, [0.0, 1.0, 0.0, -1.0]))
        assert np.array_equal(out.values, [0.0, -2.0, 0.0, 2.0])

    @pytest.mark.parametrize("dim,m", [(1, 7), (2, 6), (3, 4)])
    def test_matches_dense_stencil_oracle(self, dim, m):
        spec = GridSpec(dim, m, 1.7)
        u = random_field(spec, seed=dim)
        expected = dense_laplacian_matrix(dim, m, spec.spacing) @ u.values
        got = apply_laplacian(u).values
        assert np.abs(got - expected).max() <= 1e-10 * np.abs(expected).max()

    @pytest.mark.parametrize("m", [16, 50])
    def test_discrete_eigenfunction_identity(self, m):
        spec = GridSpec(2, m, 2 * np.pi)
        u = Field.from_function(spec, lambda x, y: np.sin(x) * np.sin(y))
        lam = -(4.0 / spec.spacing**2) * np.sin(spec.spacing / 2.0) ** 2 * 2.0
        got = apply_laplacian(u).values
        assert np.abs(got - lam * u.values).max() <= 1e-11 * abs(lam)

    def test_self_adjointness(self):
        for dim, m in [(1, 32), (2, 12), (3, 6)]:
            spec = GridSpec(dim, m, 1.0)
            u, v = random_field(spec, 1), random_field(spec, 2)
            lhs = inner_product(apply_laplacian(u), v)
            rhs = inner_product(u, apply_laplacian(v))
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, l2_norm(u) * l2_norm(v) / spec.spacing**2)

    def test_negative_semidefinite(self):
        for seed in range(5):
            spec = GridSpec(2, 16, 1.0)
            u = random_field(spec, seed)
            assert inner_product(apply_laplacian(u), u) <= 1e-12 * l2_norm(u) ** 2

    def test_sign_at_global_extrema(self):
        for seed in range(10):
            spec = GridSpec(2, 9, 1.0)
            u = random_field(spec, seed)
            lap = apply_laplacian(u).values
            assert lap[np.argmax(u.values)] <= 0.0
            assert lap[np.argmin(u.values)] >= 0.0

    def test_stencil_bound(self):
        for dim in (1, 2, 3):
            spec = GridSpec(dim, 8, 1.0)
            u = random_field(spec, dim + 10)
            bound = 4.0 * dim / spec.spacing**2 * max_norm(u)
            assert max_norm(apply_laplacian(u)) <= bound * (1 + 1e-14)


class TestInnerProductAndNorms:
    def test_measure_of_unit_square(self):
        spec = GridSpec(2, 17, 1.0)
        one = Field.constant(spec, 1.0)
        assert inner_product(one, one) == pytest.approx(1.0, rel=1e-13)

    def test_bilinear_with_zero(self):
        spec = GridSpec(1, 9, 1.0)
        u = random_field(spec, 3)
        assert inner_product(u, Field.constant(spec, 0.0)) == 0.0

    def test_trigonometric_quadrature_exactness(self):
        # direct-summation oracle and the closed form pi agree
        spec = GridSpec(1, 64, 2 * np.pi)
        u = Field(spec, np.sin(spec.axis_coords()))
        by_oracle = direct_inner_product(u.values, u.values, spec.spacing, 1)
        assert inner_product(u, u) == pytest.approx(by_oracle, rel=1e-14)
        assert inner_product(u, u) == pytest.approx(np.pi, rel=1e-12)

    def test_grid_mismatch_raises(self):
        u = Field.constant(GridSpec(1, 8, 1.0), 1.0)
        v = Field.constant(GridSpec(1, 16, 1.0), 1.0)
        with pytest.raises(ValueError, match="mismatch"):
            inner_product(u, v)

    def test_norm_examples(self):
        spec = GridSpec(1, 3, 1.0)
        assert max_norm(Field.constant(spec, -0.3)) == pytest.approx(0.3)
        u = Field(spec, [1.0, -2.0, 0.5])
        assert max_norm(u) == 2.0
        assert min_value(u) == -2.0

    def test_l2_norm_of_sinsin_is_pi(self):
        spec = GridSpec(2, 400, 2 * np.pi)
        u = Field.from_function(spec, lambda x, y: np.sin(x) * np.sin(y))
        assert l2_norm(u) == pytest.approx(np.pi, rel=1e-12)
