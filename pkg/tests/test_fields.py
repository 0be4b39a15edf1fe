import random
from fractions import Fraction as F

import pytest

from devkorn import fields as fl
from devkorn.identities import rand_poly, rand_skew_field, rand_vec_field
from devkorn.poly import Poly, X1, X2, X3
from devkorn.tensors import Vec3, anti, dev, mat3, skew, sym, tr

E1 = Vec3(F(1), F(0), F(0))
E2 = Vec3(F(0), F(1), F(0))
E3 = Vec3(F(0), F(0), F(1))
Z3 = Vec3(F(0), F(0), F(0))
X = fl.coordinate_field()


def const_id(c):
    return fl.scalar_times_id(Poly.constant(c))


class TestFirstOrderOperators:
    def test_grad(self):
        assert (fl.grad(X1 ** 2) - Vec3(2 * X1, Poly.zero(), Poly.zero())).is_zero()

    def test_jac_of_identity(self):
        assert (fl.jac(X) - const_id(1)).is_zero()

    def test_div(self):
        assert fl.div(Vec3(X2 * X3, Poly.zero(), Poly.zero())).is_zero()

    def test_hessian_is_symmetric(self):
        rng = random.Random(0)
        p = rand_poly(rng, 5)
        H = fl.hessian(p)
        assert (H - H.T).is_zero()


class TestCurl:
    def test_curl_of_rotation_field(self):
        got = fl.curl_mat(fl.anti_field(X))
        assert (got - const_id(2)).is_zero()

    def test_curl_of_jacobian(self):
        u = Vec3(X1 * X2 ** 2, X3 ** 3, X1 * X2 * X3)
        assert fl.curl_mat(fl.jac(u)).is_zero()

    def test_curl_of_scalar_times_id(self):
        got = fl.curl_mat(fl.scalar_times_id(X1))
        assert (got + fl.anti_field(fl.grad(X1))).is_zero()
        assert (got + anti(E1).mat.map(fl.lift)).is_zero()


class TestInc:
    def test_inc_of_scalar_id(self):
        got = fl.inc(fl.scalar_times_id(X1 * X1))
        want = mat3([[Poly.zero()] * 3,
                     [Poly.zero(), Poly.constant(2), Poly.zero()],
                     [Poly.zero(), Poly.zero(), Poly.constant(2)]])
        assert (got - want).is_zero()

    def test_saint_venant(self):
        u = Vec3(X2 ** 2, Poly.zero(), Poly.zero())
        assert fl.inc(sym(fl.jac(u))).is_zero()

    def test_inc_of_skew_field_is_skew(self):
        A = fl.anti_field(Vec3(X1 ** 2, Poly.zero(), Poly.zero()))
        got = fl.inc(A)
        assert (got + got.T).is_zero()
        want = -fl.anti_field(fl.grad(tr(fl.jac(fl.axl_field(A)))))
        assert (got - want).is_zero()


class TestNye:
    def test_forward_on_rotation(self):
        assert (fl.nye_forward(X) - const_id(2)).is_zero()

    def test_inverse_of_two_id(self):
        got = fl.nye_inverse(const_id(2))
        assert (got - const_id(1)).is_zero()

    def test_zero(self):
        z = Vec3(Poly.zero(), Poly.zero(), Poly.zero())
        assert fl.nye_forward(z).is_zero()
        assert fl.nye_inverse(fl.zero_mat()).is_zero()

    def test_roundtrip_random(self):
        rng = random.Random(1)
        for _ in range(20):
            a = rand_vec_field(rng, 5)
            A = fl.anti_field(a)
            assert (fl.nye_inverse(fl.curl_mat(A)) - fl.jac(a)).is_zero()

    def test_inverse_rejects_non_curl(self):
        # dev sym of a generic field is not the curl of any skew field
        bad = fl.jac(Vec3(X1 * X2, X3, X1)) + fl.scalar_times_id(X1 * X1 * X2)
        with pytest.raises(fl.IdentityError):
            fl.nye_inverse(bad)


class TestReconstructions:
    def test_grad_tr_constant_trace(self):
        assert fl.reconstruct_grad_tr(fl.anti_field(X)).is_zero()

    def test_grad_tr_simple(self):
        A = fl.anti_field(Vec3(X1 ** 2, Poly.zero(), Poly.zero()))
        got = fl.reconstruct_grad_tr(A)
        assert (got - Vec3(Poly.constant(2), Poly.zero(), Poly.zero())).is_zero()

    def test_grad_tr_tracefree_axial(self):
        A = fl.anti_field(Vec3(X2, Poly.zero(), Poly.zero()))
        assert fl.reconstruct_grad_tr(A).is_zero()

    def test_hessian_zeta_with_and_without_skew_part(self):
        zeta = X1 * X1
        want = fl.hessian(zeta)
        assert (fl.reconstruct_hessian_zeta(fl.zero_mat(), zeta) - want).is_zero()
        assert (fl.reconstruct_hessian_zeta(fl.anti_field(X), zeta) - want).is_zero()

    def test_hessian_zeta_affine(self):
        A = rand_skew_field(random.Random(2), 3)
        assert fl.reconstruct_hessian_zeta(A, X1 - 2 * X2 + 7).is_zero()

    def test_trace_hessian_cases(self):
        assert fl.reconstruct_trace_hessian(fl.anti_field(X), X1 * X2).is_zero()
        A = fl.anti_field(Vec3(X1 ** 3, Poly.zero(), Poly.zero()))
        got = fl.reconstruct_trace_hessian(A, Poly.zero())
        assert (got - fl.hessian(3 * X1 ** 2)).is_zero()
        assert fl.reconstruct_trace_hessian(fl.zero_mat(), X1 * X2).is_zero()

    def test_coefficient_verdict(self):
        rng = random.Random(3)
        samples = [(rand_skew_field(rng, 4), rand_poly(rng, 4)) for _ in range(10)]
        verdict = fl.verify_trace_hessian_coefficient(samples)
        assert verdict == {1: False, 3: True}

    def test_requires_skew_input(self):
        with pytest.raises(fl.IdentityError):
            fl.reconstruct_grad_tr(fl.jac(Vec3(X1 * X2, X3, X1)))


class TestDevCurlToCurl:
    def test_skew_example(self):
        P = fl.anti_field(Vec3(X1 ** 2, Poly.zero(), Poly.zero()))
        assert (fl.devcurl_to_curl(P) - fl.curl_mat(P)).is_zero()

    def test_symmetric_field_trace_free_curl(self):
        rng = random.Random(4)
        S = sym(mat3([[rand_poly(rng, 4) for _ in range(3)] for _ in range(3)]))
        assert tr(fl.curl_mat(S)).is_zero()
        assert (fl.devcurl_to_curl(S) - fl.curl_mat(S)).is_zero()

    def test_scalar_id_field(self):
        P = fl.scalar_times_id(X3)
        assert (fl.curl_mat(P) + fl.anti_field(fl.grad(X3))).is_zero()
        assert (fl.devcurl_to_curl(P) - fl.curl_mat(P)).is_zero()
        assert skew(P).is_zero()  # axial part vanishes, so div(axl skew P) = 0


class TestKernelFamilies:
    def test_identity_member(self):
        T = fl.kernel_dS_C(anti(Z3), Z3, F(1))
        assert (T - const_id(1)).is_zero()
        assert dev(sym(T)).is_zero() and fl.curl_mat(T).is_zero()

    def test_rotation_member(self):
        T = fl.kernel_S_dC(F(1), Z3)
        assert (T - fl.anti_field(X)).is_zero()
        assert (fl.curl_mat(T) - const_id(2)).is_zero()
        assert dev(fl.curl_mat(T)).is_zero()

    def test_constant_skew_member(self):
        T = fl.kernel_S_dC(F(0), E2)
        assert fl.curl_mat(T).is_zero()

    def test_full_parameter_instance(self):
        T = fl.kernel_dS_dC(anti(E1), E2, F(1), F(-1))
        assert dev(sym(T)).is_zero()
        assert dev(fl.curl_mat(T)).is_zero()

    def test_mixed_rotation_member(self):
        T = fl.kernel_dS_C(anti(E3), Z3, F(0))
        assert dev(sym(T)).is_zero() and fl.curl_mat(T).is_zero()

    def test_dimensions_via_gram_rank(self):
        for tag, dim in fl.KERNEL_DIMS.items():
            basis = fl.kernel_basis(tag)
            gram = fl.gram_matrix(basis)
            assert fl.rational_rank(gram) == dim


class TestConformalKilling:
    def test_linear_member(self):
        phi = fl.conformal_killing(Z3, Z3, Z3, F(1))
        assert (phi - X).is_zero()

    def test_quadratic_member(self):
        phi = fl.conformal_killing(E1, Z3, Z3, F(0))
        assert dev(sym(fl.jac(phi))).is_zero()

    def test_rigid_rotation_member(self):
        phi = fl.conformal_killing(Z3, E3, Z3, F(0))
        assert sym(fl.jac(phi)).is_zero()


class TestKroener:
    def test_rotation_instance(self):
        u = Vec3(Poly.zero(), Poly.zero(), Poly.zero())
        assert fl.kroener_check(u, fl.anti_field(X))

    def test_compatible_distortion(self):
        u = rand_vec_field(random.Random(5), 4)
        v = rand_vec_field(random.Random(6), 4)
        assert fl.kroener_check(u, fl.jac(v))

    def test_hand_instance(self):
        u = Vec3(X2 ** 2, Poly.zero(), Poly.zero())
        P = fl.anti_field(Vec3(X1 * X3, Poly.zero(), Poly.zero()))
        assert fl.kroener_check(u, P)

    def test_failure_reports_entry(self):
        u = Vec3(X2 ** 2, Poly.zero(), Poly.zero())
        P = fl.anti_field(Vec3(X1 * X3, Poly.zero(), Poly.zero()))
        broken = fl.curl_mat(P) + fl.scalar_times_id(X1)  # not the true density
        kappa = fl.contortion(broken)
        lhs = fl.inc(sym(fl.jac(u) - P))
        with pytest.raises(fl.IdentityError, match=r"entry \(\d,\d\)"):
            fl._report_first_mismatch(lhs, -fl.curl_mat(kappa), "probe")


class TestPlanar:
    def test_non_conformal_pair(self):
        out = fl.planar_cauchy_riemann((X1, -X2))
        assert not out.is_zero()
        assert out[0, 0] == Poly.constant(1)

    def test_power_pair(self):
        re, im = fl.holomorphic_pair(2)
        assert re == X1 ** 2 - X2 ** 2 and im == 2 * X1 * X2
        assert fl.planar_cauchy_riemann((re, im)).is_zero()

    def test_identity_pair(self):
        assert fl.planar_cauchy_riemann((X1, X2)).is_zero()
