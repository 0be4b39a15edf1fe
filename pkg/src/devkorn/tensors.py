"""Pointwise algebra on 3-vectors and 3x3 matrices over a generic scalar ring.

All operations are written against a minimal scalar interface: ``+``, ``-``,
``*`` between entries, and division by small integers.  They therefore work
uniformly for exact rationals (``fractions.Fraction``), binary floats, and
polynomial ring elements.  Identity verification runs on the rational
instantiation with zero residual; the discretized solver stack uses floats.

Zero tests are exact for exact scalars and tolerance-based (1e-12 at unit
scale) for floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

FLOAT_ZERO_TOL = 1e-12

# ratio bound between the norm of a matrix-vector cross product and the norm
# of its deviatoric part (Cauchy-Bunyakovsky-Schwarz argument)
CROSS_DEV_RATIO_BOUND = 1.0 + math.sqrt(3.0)


def scalar_is_zero(s: Any, tol: float | None = None) -> bool:
    """Zero test: exact for rationals/ints/polynomials, tolerant for floats."""
    if isinstance(s, float):
        return abs(s) <= (FLOAT_ZERO_TOL if tol is None else tol)
    if hasattr(s, "is_zero"):
        return s.is_zero()
    return s == 0


@dataclass(frozen=True)
class Vec3:
    x: Any
    y: Any
    z: Any

    def __getitem__(self, i: int) -> Any:
        return (self.x, self.y, self.z)[i]

    def __add__(self, o: "Vec3") -> "Vec3":
        return Vec3(self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o: "Vec3") -> "Vec3":
        return Vec3(self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def scale(self, s: Any) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def is_zero(self, tol: float | None = None) -> bool:
        return all(scalar_is_zero(c, tol) for c in (self.x, self.y, self.z))


@dataclass(frozen=True)
class Mat3:
    """3x3 matrix; ``rows`` holds three 3-tuples in row-major order."""

    rows: tuple

    def __getitem__(self, ij) -> Any:
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> Vec3:
        return Vec3(*self.rows[i])

    def col(self, j: int) -> Vec3:
        return Vec3(self.rows[0][j], self.rows[1][j], self.rows[2][j])

    @property
    def T(self) -> "Mat3":
        r = self.rows
        return Mat3(tuple(tuple(r[i][j] for i in range(3)) for j in range(3)))

    def __add__(self, o: "Mat3") -> "Mat3":
        return Mat3(tuple(tuple(self.rows[i][j] + o.rows[i][j] for j in range(3)) for i in range(3)))

    def __sub__(self, o: "Mat3") -> "Mat3":
        return Mat3(tuple(tuple(self.rows[i][j] - o.rows[i][j] for j in range(3)) for i in range(3)))

    def __neg__(self) -> "Mat3":
        return Mat3(tuple(tuple(-self.rows[i][j] for j in range(3)) for i in range(3)))

    def scale(self, s: Any) -> "Mat3":
        return Mat3(tuple(tuple(self.rows[i][j] * s for j in range(3)) for i in range(3)))

    def __matmul__(self, o):
        if isinstance(o, Vec3):
            return Vec3(*(sum_terms([self.rows[i][k] * o[k] for k in range(3)]) for i in range(3)))
        return Mat3(tuple(
            tuple(sum_terms([self.rows[i][k] * o.rows[k][j] for k in range(3)]) for j in range(3))
            for i in range(3)))

    def map(self, f) -> "Mat3":
        return Mat3(tuple(tuple(f(self.rows[i][j]) for j in range(3)) for i in range(3)))

    def is_zero(self, tol: float | None = None) -> bool:
        return all(scalar_is_zero(self.rows[i][j], tol) for i in range(3) for j in range(3))


def mat3(rows) -> Mat3:
    """Build a Mat3 from any nested 3x3 sequence."""
    return Mat3(tuple(tuple(rows[i][j] for j in range(3)) for i in range(3)))


def sum_terms(terms):
    acc = terms[0]
    for t in terms[1:]:
        acc = acc + t
    return acc


def dot(a: Vec3, b: Vec3) -> Any:
    return a.x * b.x + a.y * b.y + a.z * b.z


def norm_sq(a: Vec3) -> Any:
    return dot(a, a)


def cross(a: Vec3, b: Vec3) -> Vec3:
    return Vec3(a.y * b.z - a.z * b.y,
                a.z * b.x - a.x * b.z,
                a.x * b.y - a.y * b.x)


def dyad(a: Vec3, b: Vec3) -> Mat3:
    """Dyadic product a b^T (rank <= 1)."""
    return Mat3(tuple(tuple(a[i] * b[j] for j in range(3)) for i in range(3)))


@dataclass(frozen=True)
class Skew3:
    """Skew-symmetric 3x3 matrix stored by its axial vector.

    Storing the axial vector makes the anti/axl round trip an identity by
    construction.
    """

    axial: Vec3

    @property
    def mat(self) -> Mat3:
        a1, a2, a3 = self.axial.x, self.axial.y, self.axial.z
        z = a1 * 0
        return Mat3(((z, -a3, a2),
                     (a3, z, -a1),
                     (-a2, a1, z)))


def anti(a: Vec3) -> Skew3:
    """Unique skew matrix with anti(a) @ b == cross(a, b) for all b."""
    return Skew3(a)


def axl(A: Skew3) -> Vec3:
    """Inverse of anti."""
    return A.axial


def axl_mat(M: Mat3) -> Vec3:
    """Axial vector (-M23, M13, -M12) of a matrix assumed skew-symmetric."""
    return Vec3(-M[1, 2], M[0, 2], -M[0, 1])


def axl_skew(M: Mat3) -> Vec3:
    """Axial vector of the skew-symmetric part of M."""
    return axl_mat(skew(M))


def sym(M: Mat3) -> Mat3:
    return Mat3(tuple(tuple((M[i, j] + M[j, i]) / 2 for j in range(3)) for i in range(3)))


def skew(M: Mat3) -> Mat3:
    return Mat3(tuple(tuple((M[i, j] - M[j, i]) / 2 for j in range(3)) for i in range(3)))


def tr(M: Mat3) -> Any:
    return M[0, 0] + M[1, 1] + M[2, 2]


def scalar_mat(s: Any) -> Mat3:
    """s times the identity (off-diagonal zeros are derived from s)."""
    z = s * 0
    return Mat3(((s, z, z), (z, s, z), (z, z, s)))


def dev(M: Mat3) -> Mat3:
    """Trace-free part M - tr(M)/3 * id."""
    return M - scalar_mat(tr(M) / 3)


def frobenius_sq(M: Mat3) -> Any:
    return sum_terms([M[i, j] * M[i, j] for i in range(3) for j in range(3)])


def frobenius_inner(M: Mat3, N: Mat3) -> Any:
    return sum_terms([M[i, j] * N[i, j] for i in range(3) for j in range(3)])


def mat_cross_vec(P: Mat3, b: Vec3) -> Mat3:
    """Row-wise cross product of a matrix with a vector, P Anti(b).

    Row i of the result is cross(row_i(P), b); the product annihilates b."""
    return P @ anti(b).mat


def dev_cross_reconstruct(P: Mat3, b: Vec3) -> Mat3:
    """dev(P x b) via the closed form P x b + (2/3)<axl skew P, b> id."""
    a = axl_skew(P)
    return mat_cross_vec(P, b) + scalar_mat(dot(a, b) * 2 / 3)


def anti_plus_scaled_id_cross(a: Vec3, alpha: Any, b: Vec3) -> Mat3:
    """(Anti(a) + alpha id) x b, expanded as b (x) a - <b,a> id + alpha Anti(b).

    For b != 0 the result vanishes only when a = 0 and alpha = 0."""
    return dyad(b, a) - scalar_mat(dot(b, a)) + anti(b).mat.scale(alpha)


def cross_zero_equivalence(P: Mat3, b: Vec3, tol: float | None = None) -> bool:
    """True iff dev(P x b) = 0; by construction this coincides with P x b = 0.

    Rejects b = 0, where the equivalence degenerates.  On float entries the
    two-sided bound  ||dev(P x b)|| <= ||P x b|| <= (1+sqrt 3)||dev(P x b)||
    is additionally checked to within 8 ulps.
    """
    if b.is_zero(tol):
        raise ValueError("b must be nonzero: P x 0 = 0 for every P")
    c = mat_cross_vec(P, b)
    d = dev(c)
    dev_zero = d.is_zero(tol)
    full_zero = c.is_zero(tol)
    if dev_zero != full_zero:
        raise ArithmeticError("dev(P x b) = 0 and P x b = 0 disagreed")
    if isinstance(c[0, 0], float):
        nc = math.sqrt(frobenius_sq(c))
        nd = math.sqrt(frobenius_sq(d))
        upper = CROSS_DEV_RATIO_BOUND * nd
        if nd > nc + 8 * math.ulp(max(nc, 1e-300)):
            raise ArithmeticError("lower bound ||dev(P x b)|| <= ||P x b|| violated")
        if nc > upper + 8 * math.ulp(max(upper, 1e-300)):
            raise ArithmeticError("upper bound ||P x b|| <= (1+sqrt3)||dev(P x b)|| violated")
    return dev_zero


# --- minimal 2x2 block used by the planar Cauchy-Riemann check ---------------

@dataclass(frozen=True)
class Mat2:
    rows: tuple

    def __getitem__(self, ij) -> Any:
        i, j = ij
        return self.rows[i][j]

    def __add__(self, o: "Mat2") -> "Mat2":
        return Mat2(tuple(tuple(self.rows[i][j] + o.rows[i][j] for j in range(2)) for i in range(2)))

    def __sub__(self, o: "Mat2") -> "Mat2":
        return Mat2(tuple(tuple(self.rows[i][j] - o.rows[i][j] for j in range(2)) for i in range(2)))

    def is_zero(self, tol: float | None = None) -> bool:
        return all(scalar_is_zero(self.rows[i][j], tol) for i in range(2) for j in range(2))


def mat2(rows) -> Mat2:
    return Mat2(tuple(tuple(rows[i][j] for j in range(2)) for i in range(2)))


def tr2(M: Mat2) -> Any:
    return M[0, 0] + M[1, 1]


def sym2(M: Mat2) -> Mat2:
    return Mat2(tuple(tuple((M[i, j] + M[j, i]) / 2 for j in range(2)) for i in range(2)))


def dev2(M: Mat2) -> Mat2:
    """Planar trace-free part M - tr(M)/2 * id2."""
    t = tr2(M) / 2
    z = t * 0
    return M - Mat2(((t, z), (z, t)))
