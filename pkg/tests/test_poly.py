from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from devkorn.poly import Poly, X1, X2, X3, box_integrate

coeffs = st.fractions(min_value=-8, max_value=8, max_denominator=5)
exponents = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))


@st.composite
def polys(draw):
    n = draw(st.integers(0, 5))
    p = Poly.zero()
    for _ in range(n):
        p = p + Poly.monomial(draw(exponents), draw(coeffs))
    return p


class TestRing:
    def test_canonical_form_drops_zeros(self):
        p = Poly({(1, 0, 0): F(1)}) - X1
        assert p.is_zero() and p.terms == {}

    def test_equality_is_coefficientwise(self):
        assert X1 * X2 == X2 * X1
        assert X1 + 1 == Poly({(1, 0, 0): F(1), (0, 0, 0): F(1)})

    @given(polys(), polys(), polys())
    def test_ring_axioms(self, p, q, r):
        assert (p + q) * r == p * r + q * r
        assert p * q == q * p
        assert p + (q + r) == (p + q) + r

    def test_scalar_division(self):
        assert (X1 * 2) / 2 == X1
        with pytest.raises(TypeError):
            (X1 * X2) / X1

    def test_degree(self):
        assert Poly.zero().degree() == -1
        assert Poly.constant(3).degree() == 0
        assert (X1 ** 2 * X3).degree() == 3


class TestCalculus:
    def test_partial_derivatives(self):
        p = X1 ** 2 * X2 + X3
        assert p.diff(0) == 2 * X1 * X2
        assert p.diff(1) == X1 ** 2
        assert p.diff(2) == Poly.constant(1)

    @given(polys(), st.integers(0, 2), st.integers(0, 2))
    def test_mixed_partials_commute(self, p, i, j):
        assert p.diff(i).diff(j) == p.diff(j).diff(i)

    def test_eval_exact(self):
        p = X1 ** 2 - X2 / 3
        assert p.eval((F(1, 2), F(3), F(0))) == F(1, 4) - F(1)

    @given(polys(), polys())
    def test_eval_is_ring_homomorphism(self, p, q):
        pt = (F(1, 3), F(-2), F(5, 4))
        assert (p * q).eval(pt) == p.eval(pt) * q.eval(pt)
        assert (p + q).eval(pt) == p.eval(pt) + q.eval(pt)


class TestBoxIntegrate:
    def test_unit_volume(self):
        assert box_integrate(Poly.constant(1), (0, 0, 0), (1, 1, 1)) == 1

    def test_linear_moment(self):
        assert box_integrate(X1, (0, 0, 0), (1, 1, 1)) == F(1, 2)

    def test_odd_symmetry(self):
        assert box_integrate(X1 * X2, (-1, -1, -1), (1, 1, 1)) == 0

    def test_rational_box(self):
        # int_0^{1/2} x1^2 dx1 * 1 * 1 = 1/24
        got = box_integrate(X1 ** 2, (0, 0, 0), (F(1, 2), 1, 1))
        assert got == F(1, 24)


class TestSerialization:
    def test_zero(self):
        assert Poly.zero().to_text() == "0"

    def test_terms_and_rationals(self):
        p = X1 ** 2 * X3 / 2 - X2 + 3
        assert p.to_text() == "3 + -1 * x2^1 + 1/2 * x1^2 x3^1"

    def test_graded_lex_is_deterministic(self):
        p = X3 + X1 + X2 ** 2
        assert p.to_text() == "1 * x1^1 + 1 * x3^1 + 1 * x2^2"
