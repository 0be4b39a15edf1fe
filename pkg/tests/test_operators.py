import math
from fractions import Fraction as F

import numpy as np
import pytest

from devkorn import fields as fl
from devkorn.grid import build_grid, mat_dof, sample_matrix_field, sample_vector_field
from devkorn.grid import GridError
from devkorn.operators import (
    axis_derivative,
    bc_mask,
    curl_operator,
    jacobian_operator,
    mass_matrix,
    mass_weights,
    pointwise_operator,
)
from devkorn.poly import Poly, X1, X2, X3
from devkorn.tensors import Vec3, anti

CUBE = [((0, 0, 0), (1, 1, 1))]


def cube_grid(h, gamma="none"):
    return build_grid(CUBE, h, gamma_spec=gamma)


class TestCurlOperator:
    def test_exact_on_rotation_field(self):
        g = cube_grid(F(1, 4))
        out = curl_operator(g) @ sample_matrix_field(
            fl.anti_field(fl.coordinate_field()), g)
        want = np.tile((2 * np.eye(3)).reshape(-1), g.n_nodes)
        assert np.abs(out - want).max() <= 1e-12

    def test_annihilates_sampled_jacobians_of_quadratics(self):
        g = cube_grid(F(1, 4))
        u = Vec3(X2 ** 2, X1 * X3, X3 ** 2 - X1 * X2)
        out = curl_operator(g) @ sample_matrix_field(fl.jac(fl.lift_vec(u)), g)
        assert np.abs(out).max() <= 1e-12

    def test_second_order_on_scalar_id_field(self):
        # Curl(x3^2 id) = -Anti((0, 0, 2 x3)); cubic entries leave an O(h^2) error
        P = fl.scalar_times_id(X3 ** 3)
        want_field = -fl.anti_field(fl.grad(X3 ** 3))
        errs = []
        for h in (F(1, 4), F(1, 8)):
            g = cube_grid(h)
            got = curl_operator(g) @ sample_matrix_field(P, g)
            errs.append(np.abs(got - sample_matrix_field(want_field, g)).max())
        assert errs[1] <= errs[0] / 3.0

    def test_convergence_order_on_degree_four_field(self):
        P = _degree_four_field()
        exact = fl.curl_mat(P)
        errs = []
        for h in (F(1, 4), F(1, 8), F(1, 16)):
            g = cube_grid(h)
            err = curl_operator(g) @ sample_matrix_field(P, g) \
                - sample_matrix_field(exact, g)
            errs.append(np.abs(err).max())
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
        for order in orders:
            assert 1.8 <= order <= 2.2

    def test_rejects_too_short_axis_lines(self):
        g = build_grid(CUBE, 1)  # two nodes per axis
        with pytest.raises(GridError):
            curl_operator(g)


def _degree_four_field():
    return fl.mat3([[X1 ** 2 * X2 ** 2, X3 ** 4, X1 * X2 * X3],
                    [X2 ** 4, X1 ** 3 * X3, X2 ** 2 * X3 ** 2],
                    [X1 ** 4, X2 * X3 ** 3, X1 ** 2 * X3 ** 2]])


class TestPointwiseOperators:
    def test_dev_kills_identity_samples(self):
        g = cube_grid(F(1, 2))
        field = sample_matrix_field(fl.scalar_times_id(Poly.constant(1)), g)
        assert np.abs(pointwise_operator("dev", g) @ field).max() <= 1e-15

    def test_sym_kills_skew_samples(self):
        g = cube_grid(F(1, 2))
        field = sample_matrix_field(fl.anti_field(fl.coordinate_field()), g)
        assert np.abs(pointwise_operator("sym", g) @ field).max() <= 1e-15

    def test_orthogonal_splitting_sums_to_identity(self):
        g = cube_grid(F(1, 2))
        total = (pointwise_operator("devsym", g)
                 + pointwise_operator("skew_plus_third_trace", g))
        eye = np.eye(9 * g.n_nodes)
        assert np.abs(total.toarray() - eye).max() <= 1e-15

    @pytest.mark.parametrize("kind", ["dev", "sym", "skew", "devsym",
                                      "skew_plus_third_trace"])
    def test_idempotent(self, kind):
        g = cube_grid(F(1, 2))
        op = pointwise_operator(kind, g)
        assert abs(op @ op - op).max() <= 1e-15

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            pointwise_operator("trace", cube_grid(F(1, 2)))


class TestBcMask:
    def test_face_normal_zeroes_tangential_columns(self):
        g = cube_grid(F(1, 2), gamma="all")
        d = bc_mask(g).diagonal()
        n = g.index[(1, 1, 2)]  # face z = 1, outward normal +e3
        kept = {(i, j) for i in range(3) for j in range(3)
                if d[mat_dof(n, i, j)] == 1.0}
        assert kept == {(0, 2), (1, 2), (2, 2)}

    def test_corner_zeroes_everything(self):
        g = cube_grid(F(1, 2), gamma="all")
        d = bc_mask(g).diagonal()
        n = g.index[(0, 0, 0)]
        assert all(d[mat_dof(n, i, j)] == 0.0 for i in range(3) for j in range(3))

    def test_edge_with_two_normals_zeroes_everything(self):
        g = cube_grid(F(1, 2), gamma="all")
        d = bc_mask(g).diagonal()
        n = g.index[(0, 0, 1)]  # edge x=0, y=0: normals -e1, -e2
        assert all(d[mat_dof(n, i, j)] == 0.0 for i in range(3) for j in range(3))

    def test_empty_gamma_is_identity(self):
        g = cube_grid(F(1, 2), gamma="none")
        d = bc_mask(g).diagonal()
        assert np.array_equal(d, np.ones(9 * g.n_nodes))

    def test_idempotent(self):
        g = cube_grid(F(1, 2), gamma="all")
        mask = bc_mask(g)
        assert abs(mask @ mask - mask).max() == 0.0


class TestMass:
    def test_weights_positive(self):
        g = build_grid([((0, 0, 0), (2, 1, 1)), ((0, 1, 0), (1, 2, 1))], F(1, 4))
        assert mass_weights(g).min() > 0

    def test_constant_integrates_to_volume(self):
        g = cube_grid(F(1, 4))
        M = mass_matrix(g, components=1)
        ones = np.ones(g.n_nodes)
        assert ones @ (M @ ones) == pytest.approx(1.0, abs=1e-12)

    def test_linear_moment_second_order(self):
        vals = []
        for h in (F(1, 4), F(1, 8)):
            g = cube_grid(h)
            M = mass_matrix(g, components=1)
            x1 = np.array([float(g.node_coords(n)[0]) for n in range(g.n_nodes)])
            vals.append(abs(x1 @ (M @ np.ones(g.n_nodes)) - 0.5))
        assert vals[0] <= 1e-12 and vals[1] <= 1e-12  # trapezoid is exact on x1

    def test_spd(self):
        g = cube_grid(F(1, 2))
        M = mass_matrix(g)
        assert (M - M.T).nnz == 0
        assert M.diagonal().min() > 0


class TestJacobian:
    def test_exact_on_quadratics(self):
        g = cube_grid(F(1, 4))
        u = Vec3(X1 * X2, X3 ** 2, X1 * X3)
        got = jacobian_operator(g) @ sample_vector_field(fl.lift_vec(u), g)
        want = sample_matrix_field(fl.jac(fl.lift_vec(u)), g)
        assert np.abs(got - want).max() <= 1e-12


class TestAdjointConsistency:
    def test_curl_transfer_error_decays(self):
        # fields vanishing quadratically on the boundary keep the masked
        # integration-by-parts mismatch at the discretization level
        w = _bump_squared()
        P = fl.scalar_times_id(w * X1)
        Q = fl.anti_field(Vec3(w * X2, w * X3, w * X1))
        gaps = []
        for h in (F(1, 4), F(1, 8), F(1, 16)):
            g = cube_grid(h, gamma="all")
            mask = bc_mask(g)
            curl = curl_operator(g)
            m9 = mass_matrix(g, components=9)
            p = mask @ sample_matrix_field(P, g)
            q = mask @ sample_matrix_field(Q, g)
            gaps.append(abs((curl @ p) @ (m9 @ q) - p @ (m9 @ (curl @ q))))
        assert gaps[1] <= 0.6 * gaps[0]
        assert gaps[2] <= 0.6 * gaps[1]


def _bump_squared():
    w = Poly.constant(1)
    for xi in (X1, X2, X3):
        w = w * xi * (Poly.constant(1) - xi)
    return w * w


class TestDerivativeStencils:
    def test_centered_and_one_sided_orders(self):
        g = cube_grid(F(1, 4))
        D0 = axis_derivative(g, 0)
        # quadratic in x1 differentiates exactly everywhere, incl. boundaries
        x = np.array([float(g.node_coords(n)[0]) for n in range(g.n_nodes)])
        got = D0 @ (x * x)
        assert np.abs(got - 2 * x).max() <= 1e-12
