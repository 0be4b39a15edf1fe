"""Sparse finite-difference operators on matrix fields.

All operators act on the flat layout of :mod:`devkorn.grid` (node-major,
row-major matrix entries) and are assembled as CSR matrices with explicit
zeros dropped.  First derivatives use centred second-order stencils where
both neighbours exist and one-sided second-order stencils otherwise, so every
operator built from them differentiates quadratic polynomials exactly (up to
roundoff).  That makes the degree-1 rigidity kernel fields exact discrete
null vectors.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .grid import AXES, Grid, GridError, mat_dof

POINTWISE_KINDS = ("dev", "sym", "skew", "devsym", "skew_plus_third_trace")

# eps[i, j, k] = Levi-Civita symbol
_EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_i, _j, _k] = 1.0
    _EPS[_i, _k, _j] = -1.0


def _shift(p, axis, s):
    q = list(p)
    q[axis] += s
    return tuple(q)


def axis_derivative(grid: Grid, axis: int) -> sp.csr_matrix:
    """N x N first-derivative operator along one axis (scalar fields)."""
    h = grid.h_float
    rows, cols, vals = [], [], []
    for n, p in enumerate(grid.lattice):
        plus = grid.index.get(_shift(p, axis, +1))
        minus = grid.index.get(_shift(p, axis, -1))
        if plus is not None and minus is not None:
            entries = ((plus, 1 / (2 * h)), (minus, -1 / (2 * h)))
        elif plus is not None:
            plus2 = grid.index.get(_shift(p, axis, +2))
            if plus2 is None:
                raise GridError(
                    f"axis {axis}: line through node {p} too short for a "
                    "second-order one-sided stencil (need 3 nodes)")
            entries = ((n, -3 / (2 * h)), (plus, 4 / (2 * h)), (plus2, -1 / (2 * h)))
        elif minus is not None:
            minus2 = grid.index.get(_shift(p, axis, -2))
            if minus2 is None:
                raise GridError(
                    f"axis {axis}: line through node {p} too short for a "
                    "second-order one-sided stencil (need 3 nodes)")
            entries = ((n, 3 / (2 * h)), (minus, -4 / (2 * h)), (minus2, 1 / (2 * h)))
        else:
            raise GridError(f"node {p} has no neighbour along axis {axis}")
        for c, v in entries:
            rows.append(n)
            cols.append(c)
            vals.append(v)
    D = sp.csr_matrix((vals, (rows, cols)), shape=(grid.n_nodes, grid.n_nodes))
    D.eliminate_zeros()
    return D


def curl_operator(grid: Grid) -> sp.csr_matrix:
    """9N x 9N row-wise matrix curl: (Curl P)_ij = eps_jkl D_k P_il."""
    eye3 = sp.identity(3, format="csr")
    total = None
    for k in AXES:
        Dk = axis_derivative(grid, k)
        Ck = sp.csr_matrix(_EPS[:, k, :])  # (C_k)_jl = eps_jkl
        term = sp.kron(Dk, sp.kron(eye3, Ck, format="csr"), format="csr")
        total = term if total is None else total + term
    total = sp.csr_matrix(total)
    total.eliminate_zeros()
    return total


def jacobian_operator(grid: Grid) -> sp.csr_matrix:
    """9N x 3N Jacobian of vector fields: (D u)_ij = D_j u_i."""
    eye3 = sp.identity(3, format="csr")
    total = None
    for j in AXES:
        Dj = axis_derivative(grid, j)
        col = sp.csr_matrix((np.ones(1), ([j], [0])), shape=(3, 1))
        term = sp.kron(Dj, sp.kron(eye3, col, format="csr"), format="csr")
        total = term if total is None else total + term
    total = sp.csr_matrix(total)
    total.eliminate_zeros()
    return total


def _pointwise_block(kind: str) -> np.ndarray:
    eye9 = np.eye(9)
    sym9 = np.zeros((9, 9))
    tid9 = np.zeros((9, 9))
    for i in range(3):
        for j in range(3):
            r = 3 * i + j
            sym9[r, 3 * i + j] += 0.5
            sym9[r, 3 * j + i] += 0.5
            for m in range(3):
                tid9[r, 3 * m + m] += (1.0 / 3.0) if i == j else 0.0
    if kind == "sym":
        return sym9
    if kind == "skew":
        return eye9 - sym9
    if kind == "dev":
        return eye9 - tid9
    if kind == "devsym":
        return sym9 - tid9
    if kind == "skew_plus_third_trace":
        return eye9 - (sym9 - tid9)
    raise ValueError(f"unknown pointwise kind {kind!r} "
                     f"(expected one of {POINTWISE_KINDS})")


def pointwise_operator(kind: str, grid: Grid) -> sp.csr_matrix:
    """Block-diagonal projection applied at every node; idempotent."""
    block = sp.csr_matrix(_pointwise_block(kind))
    out = sp.kron(sp.identity(grid.n_nodes, format="csr"), block, format="csr")
    out.eliminate_zeros()
    return out


def bc_mask(grid: Grid) -> sp.csr_matrix:
    """Diagonal projector enforcing a vanishing tangential trace on Gamma.

    P x e_k lists (up to sign and order) the columns P e_j with j != k, so a
    face with outward normal +-e_k constrains exactly those two columns to
    zero.  Constraints from multiple faces at edge and corner nodes apply
    cumulatively: two normals along distinct axes already zero all nine
    entries.  With an empty Gamma the mask is the identity.
    """
    diag = np.ones(9 * grid.n_nodes)
    for n in range(grid.n_nodes):
        for ax, _sign in grid.gamma[n]:
            for j in range(3):
                if j == ax:
                    continue
                for i in range(3):
                    diag[mat_dof(n, i, j)] = 0.0
    out = sp.diags(diag, format="csr")
    out.eliminate_zeros()
    return out


def mass_weights(grid: Grid) -> np.ndarray:
    """Trapezoidal-type quadrature weight per node (product over axes).

    Exact volume on a single box; first-order consistent at reentrant edges
    of box unions.  All weights are positive.
    """
    h = grid.h_float
    w = np.empty(grid.n_nodes)
    for n, p in enumerate(grid.lattice):
        weight = 1.0
        for ax in AXES:
            has_plus = _shift(p, ax, +1) in grid.index
            has_minus = _shift(p, ax, -1) in grid.index
            weight *= h if (has_plus and has_minus) else h / 2
        w[n] = weight
    return w


def mass_matrix(grid: Grid, components: int = 9) -> sp.csr_matrix:
    """Diagonal SPD mass matrix for fields with the given component count."""
    w = np.repeat(mass_weights(grid), components)
    return sp.diags(w, format="csr")
