from fractions import Fraction as F

import numpy as np
import pytest

from devkorn.fields import anti_field, coordinate_field, kernel_dS_dC, scalar_times_id
from devkorn.grid import (
    GridError,
    build_grid,
    dump_field_csv,
    field_to_nodes,
    mat_dof,
    nodes_to_field,
    sample_matrix_field,
)
from devkorn.poly import Poly
from devkorn.tensors import Vec3, anti

CUBE = [((0, 0, 0), (1, 1, 1))]
LSHAPE = [((0, 0, 0), (2, 1, 1)), ((0, 1, 0), (1, 2, 1))]


def rasterize_count(boxes, h):
    """Independent node-count oracle: scan the bounding-box lattice and test
    membership with rational arithmetic."""
    h = F(h)
    los = [min(F(b[0][k]) for b in boxes) for k in range(3)]
    his = [max(F(b[1][k]) for b in boxes) for k in range(3)]
    count = 0
    ranges = [range(int(los[k] / h), int(his[k] / h) + 1) for k in range(3)]
    for i in ranges[0]:
        for j in ranges[1]:
            for k in ranges[2]:
                pt = (i * h, j * h, k * h)
                if any(all(F(b[0][m]) <= pt[m] <= F(b[1][m]) for m in range(3))
                       for b in boxes):
                    count += 1
    return count


class TestBuildGrid:
    def test_cube_half_spacing(self):
        g = build_grid(CUBE, F(1, 2))
        assert g.n_nodes == 27
        assert g.n_boundary == 26

    def test_cube_unit_spacing_all_boundary(self):
        g = build_grid(CUBE, 1)
        assert g.n_nodes == 8
        assert g.n_boundary == 8

    def test_lshape_count_against_oracle(self):
        g = build_grid(LSHAPE, F(1, 2))
        assert g.n_nodes == rasterize_count(LSHAPE, F(1, 2))

    @pytest.mark.parametrize("h", [F(1, 2), F(1, 3), F(1, 4)])
    def test_counts_match_oracle_on_cube(self, h):
        assert build_grid(CUBE, h).n_nodes == rasterize_count(CUBE, h)

    def test_interior_nodes_have_all_neighbours(self):
        g = build_grid(LSHAPE, F(1, 4))
        for n, p in enumerate(g.lattice):
            if not g.is_boundary(n):
                for ax in range(3):
                    for s in (-1, 1):
                        q = list(p)
                        q[ax] += s
                        assert tuple(q) in g.index

    def test_boundary_iff_has_normal(self):
        g = build_grid(CUBE, F(1, 2))
        for n in range(g.n_nodes):
            assert g.is_boundary(n) == bool(g.normals[n])

    def test_rejects_unaligned_corners(self):
        with pytest.raises(GridError):
            build_grid([((0, 0, 0), (1, 1, F(1, 3)))], F(1, 2))

    def test_rejects_disconnected_union(self):
        boxes = [((0, 0, 0), (1, 1, 1)), ((3, 0, 0), (4, 1, 1))]
        with pytest.raises(GridError):
            build_grid(boxes, F(1, 2))

    def test_rejects_bad_h(self):
        with pytest.raises(GridError):
            build_grid(CUBE, 0)

    def test_rejects_degenerate_box(self):
        with pytest.raises(GridError):
            build_grid([((0, 0, 0), (1, 0, 1))], F(1, 2))

    def test_gamma_face_selection(self):
        g = build_grid(CUBE, F(1, 2), gamma_spec="z-")
        n_bottom = g.index[(1, 1, 0)]
        n_top = g.index[(1, 1, 2)]
        assert g.gamma[n_bottom] == ((2, -1),)
        assert g.gamma[n_top] == ()

    def test_gamma_bad_token(self):
        with pytest.raises(GridError):
            build_grid(CUBE, F(1, 2), gamma_spec="w+")


class TestFieldLayout:
    def test_flat_node_round_trip(self):
        rng = np.random.default_rng(0)
        flat = rng.standard_normal(9 * 27)
        assert np.array_equal(nodes_to_field(field_to_nodes(flat)), flat)

    def test_dof_layout(self):
        g = build_grid(CUBE, F(1, 2))
        flat = np.zeros(9 * g.n_nodes)
        flat[mat_dof(5, 1, 2)] = 3.5
        assert field_to_nodes(flat)[5, 1, 2] == 3.5


class TestSampling:
    def test_constant_field(self):
        g = build_grid(CUBE, F(1, 2))
        flat = sample_matrix_field(scalar_times_id(Poly.constant(1)), g)
        nodes = field_to_nodes(flat)
        assert np.array_equal(nodes, np.tile(np.eye(3), (g.n_nodes, 1, 1)))

    def test_rotation_field_at_corner(self):
        g = build_grid(CUBE, F(1, 2))
        flat = sample_matrix_field(anti_field(coordinate_field()), g)
        n = g.index[(2, 2, 2)]  # the point (1, 1, 1)
        want = anti(Vec3(1.0, 1.0, 1.0)).mat
        got = field_to_nodes(flat)[n]
        assert np.allclose(got, [[want[i, j] for j in range(3)] for i in range(3)])

    def test_kernel_field_samples_exactly(self):
        g = build_grid(CUBE, F(1, 4))
        T = kernel_dS_dC(anti(Vec3(F(1), F(2), F(-1))), Vec3(F(1, 2), F(0), F(1)),
                         F(2), F(-3))
        flat = sample_matrix_field(T, g)
        n = g.index[(1, 2, 3)]
        pt = (F(1, 4), F(1, 2), F(3, 4))
        for i in range(3):
            for j in range(3):
                assert flat[mat_dof(n, i, j)] == float(T[i, j].eval(pt))


class TestDump:
    def test_csv_header_and_shape(self, tmp_path):
        g = build_grid(CUBE, F(1, 2))
        flat = sample_matrix_field(scalar_times_id(Poly.constant(1)), g)
        path = tmp_path / "field.csv"
        dump_field_csv(g, flat, path)
        lines = path.read_text().splitlines()
        assert lines[0] == ("node_index,x,y,z,"
                            "P11,P12,P13,P21,P22,P23,P31,P32,P33")
        assert len(lines) == 1 + g.n_nodes
        first = lines[1].split(",")
        assert first[0] == "0" and len(first) == 13
