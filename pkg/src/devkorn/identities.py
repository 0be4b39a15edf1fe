"""Named suites of exact algebraic and differential identities.

Each identity is verified with zero residual on randomly sampled rational
inputs (matrices/vectors for the algebra group, polynomial fields for the
calculus groups).  The suite is the single source used by both the command
line front end and the acceptance tests, so PASS counts and failure details
agree everywhere.

``inject_fault=True`` adds a deliberately sign-flipped probe identity; it is
a harness self-test and must make the suite fail.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import fields as fl
from .poly import Poly
from .tensors import (
    Mat3,
    Skew3,
    Vec3,
    anti,
    axl_skew,
    cross,
    cross_zero_equivalence,
    dev,
    dev_cross_reconstruct,
    dot,
    dyad,
    frobenius_inner,
    frobenius_sq,
    mat3,
    mat_cross_vec,
    norm_sq,
    scalar_mat,
    skew,
    sym,
    tr,
    anti_plus_scaled_id_cross,
)


@dataclass(frozen=True)
class IdentityResult:
    name: str
    group: str
    cases: int
    failures: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


# -- random samplers ---------------------------------------------------------------


def rand_fraction(rng: random.Random, span: int = 9, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_vec(rng) -> Vec3:
    return Vec3(rand_fraction(rng), rand_fraction(rng), rand_fraction(rng))


def rand_nonzero_vec(rng) -> Vec3:
    while True:
        v = rand_vec(rng)
        if norm_sq(v) != 0:
            return v


def rand_mat(rng) -> Mat3:
    return mat3([[rand_fraction(rng) for _ in range(3)] for _ in range(3)])


def rand_sym_mat(rng) -> Mat3:
    return sym(rand_mat(rng))


def rand_skew(rng) -> Skew3:
    return anti(rand_vec(rng))


def rand_poly(rng, degree: int, terms: int = 4) -> Poly:
    p = Poly.zero()
    for _ in range(terms):
        e1 = rng.randint(0, degree)
        e2 = rng.randint(0, degree - e1)
        e3 = rng.randint(0, degree - e1 - e2)
        p = p + Poly.monomial((e1, e2, e3), rand_fraction(rng, span=5, den=3))
    return p


def rand_vec_field(rng, degree: int) -> Vec3:
    return Vec3(*(rand_poly(rng, degree) for _ in range(3)))


def rand_mat_field(rng, degree: int) -> Mat3:
    return mat3([[rand_poly(rng, degree) for _ in range(3)] for _ in range(3)])


def rand_skew_field(rng, degree: int) -> Mat3:
    return fl.anti_field(rand_vec_field(rng, degree))


def rand_sym_field(rng, degree: int) -> Mat3:
    return sym(rand_mat_field(rng, degree))


# -- algebra identities (rational matrices and vectors) -----------------------------


def _chk_cross_rowwise(rng):
    P, b = rand_mat(rng), rand_vec(rng)
    C = mat_cross_vec(P, b)
    for i in range(3):
        if not (C.row(i) - cross(P.row(i), b)).is_zero():
            return "row-wise cross product mismatch"
    return None


def _chk_id_cross(rng):
    b = rand_vec(rng)
    one = Fraction(1)
    if not (mat_cross_vec(scalar_mat(one), b) - anti(b).mat).is_zero():
        return "id x b != Anti(b)"
    return None


def _chk_anti_cross_expansion(rng):
    a, b = rand_vec(rng), rand_vec(rng)
    lhs = mat_cross_vec(anti(a).mat, b)
    rhs = dyad(b, a) - scalar_mat(dot(b, a))
    return None if (lhs - rhs).is_zero() else "(Anti a) x b expansion failed"


def _sym_cross_table(S: Mat3, b: Vec3) -> Mat3:
    b1, b2, b3 = b.x, b.y, b.z
    return mat3([
        [S[0, 1] * b3 - S[0, 2] * b2, S[0, 2] * b1 - S[0, 0] * b3, S[0, 0] * b2 - S[0, 1] * b1],
        [S[1, 1] * b3 - S[1, 2] * b2, S[1, 2] * b1 - S[0, 1] * b3, S[0, 1] * b2 - S[1, 1] * b1],
        [S[1, 2] * b3 - S[2, 2] * b2, S[2, 2] * b1 - S[0, 2] * b3, S[0, 2] * b2 - S[1, 2] * b1],
    ])


def _chk_trace_sym_cross(rng):
    S, b = rand_sym_mat(rng), rand_vec(rng)
    C = mat_cross_vec(S, b)
    if tr(C) != 0:
        return "tr(S x b) != 0"
    if not (C - _sym_cross_table(S, b)).is_zero():
        return "S x b does not match the entry table"
    return None


def _chk_id_cross_twice(rng):
    b = rand_vec(rng)
    lhs = mat_cross_vec(anti(b).mat.T, b)
    rhs = scalar_mat(norm_sq(b)) - dyad(b, b)
    if not (lhs - rhs).is_zero():
        return "(id x b)^T x b expansion failed"
    if not (lhs - lhs.T).is_zero():
        return "(id x b)^T x b is not symmetric"
    return None


def _chk_anti_cross_twice(rng):
    a, b = rand_vec(rng), rand_vec(rng)
    lhs = mat_cross_vec(mat_cross_vec(anti(a).mat, b).T, b)
    rhs = anti(b).mat.scale(-dot(b, a))
    if not (lhs - rhs).is_zero():
        return "((Anti a) x b)^T x b expansion failed"
    if not (lhs + lhs.T).is_zero():
        return "result is not skew"
    return None


def _chk_sym_cross_twice(rng):
    S, b = rand_sym_mat(rng), rand_vec(rng)
    out = mat_cross_vec(mat_cross_vec(S, b).T, b)
    return None if (out - out.T).is_zero() else "(S x b)^T x b is not symmetric"


def _chk_dev_cross_shift(rng):
    P, b = rand_mat(rng), rand_vec(rng)
    direct = dev(mat_cross_vec(P, b))
    closed = dev_cross_reconstruct(P, b)
    return None if (direct - closed).is_zero() else "dev(P x b) closed form failed"


def _chk_sym_transfer(rng):
    P, b = rand_mat(rng), rand_vec(rng)
    lhs = sym(mat_cross_vec(mat_cross_vec(P, b).T, b))
    rhs = mat_cross_vec(mat_cross_vec(sym(P), b).T, b)
    return None if (lhs - rhs).is_zero() else "sym does not transfer through the double cross"


def _chk_skew_transfer(rng):
    P, b = rand_mat(rng), rand_vec(rng)
    lhs = skew(mat_cross_vec(mat_cross_vec(P, b).T, b))
    rhs = mat_cross_vec(mat_cross_vec(skew(P), b).T, b)
    return None if (lhs - rhs).is_zero() else "skew does not transfer through the double cross"


def _chk_dyad_devsym_split(rng):
    a, b = rand_vec(rng), rand_vec(rng)
    ds = dev(sym(dyad(a, b)))
    lhs = frobenius_sq(ds)
    rhs = norm_sq(a) * norm_sq(b) / 2 + dot(a, b) ** 2 / 6
    if lhs != rhs:
        return "norm split of dev sym (a (x) b) failed"
    T = dyad(a, b)
    flags = [T.is_zero(), sym(T).is_zero(), dev(T).is_zero(), ds.is_zero()]
    return None if len(set(flags)) == 1 else "zero-equivalence chain broken"


def _chk_sym_dyad_norm(rng):
    a, b = rand_vec(rng), rand_vec(rng)
    lhs = frobenius_sq(sym(dyad(a, b)))
    rhs = norm_sq(a) * norm_sq(b) / 2 + dot(a, b) ** 2 / 2
    return None if lhs == rhs else "norm of sym(a (x) b) failed"


def _chk_cross_annihilates(rng):
    P, b = rand_mat(rng), rand_vec(rng)
    return None if (mat_cross_vec(P, b) @ b).is_zero() else "(P x b) b != 0"


def _chk_dev_cross_zero_equiv(rng):
    P = rand_mat(rng)
    b = rand_nonzero_vec(rng)
    C = mat_cross_vec(P, b)
    D = dev(C)
    lhs = C.scale(norm_sq(b))
    rhs = D.scale(norm_sq(b)) - scalar_mat(dot(b, D @ b))
    if not (lhs - rhs).is_zero():
        return "norm-squared reconstruction of P x b from its deviator failed"
    if cross_zero_equivalence(P, b) != C.is_zero():
        return "dev(P x b) = 0 and P x b = 0 disagree"
    return None


def _chk_orthogonal_decomposition(rng):
    M = rand_mat(rng)
    if not (sym(M) + skew(M) - M).is_zero():
        return "sym + skew != id"
    if tr(dev(M)) != 0:
        return "tr(dev M) != 0"
    if frobenius_inner(sym(M), skew(M)) != 0:
        return "sym and skew parts are not orthogonal"
    return None


def _chk_anti_plus_id_cross(rng):
    a, b = rand_vec(rng), rand_nonzero_vec(rng)
    alpha = rand_fraction(rng)
    direct = (anti(a).mat + scalar_mat(alpha)) @ anti(b).mat
    closed = anti_plus_scaled_id_cross(a, alpha, b)
    if not (direct - closed).is_zero():
        return "(Anti a + alpha id) x b expansion failed"
    if (norm_sq(a) != 0 or alpha != 0) and closed.is_zero():
        return "nonzero (a, alpha) produced a vanishing product"
    return None


def _chk_fault_probe(rng):
    # Deliberately wrong sign; used to verify the harness reports failures.
    P, b = rand_mat(rng), rand_vec(rng)
    wrong = mat_cross_vec(P, b) - scalar_mat(dot(axl_skew(P), b) * 2 / 3)
    return None if (dev(mat_cross_vec(P, b)) - wrong).is_zero() else \
        "sign-flipped probe failed (expected)"


# -- calculus identities (polynomial fields) ----------------------------------------


def _chk_curl_of_gradient(rng):
    u = rand_vec_field(rng, 6)
    return None if fl.curl_mat(fl.jac(u)).is_zero() else "Curl(D u) != 0"


def _chk_curl_scalar_id(rng):
    z = rand_poly(rng, 5)
    lhs = fl.curl_mat(fl.scalar_times_id(z))
    rhs = -fl.anti_field(fl.grad(z))
    return None if (lhs - rhs).is_zero() else "Curl(zeta id) != -Anti(grad zeta)"


def _chk_nye_forward(rng):
    a = rand_vec_field(rng, 5)
    lhs = fl.nye_forward(a)
    rhs = fl.curl_mat(fl.anti_field(a))
    return None if (lhs - rhs).is_zero() else "forward Nye formula failed"


def _chk_nye_roundtrip(rng):
    a = rand_vec_field(rng, 5)
    A = fl.anti_field(a)
    G = fl.nye_inverse(fl.curl_mat(A))
    return None if (G - fl.jac(a)).is_zero() else "Nye round trip failed"


def _chk_trace_curl_sym(rng):
    S = rand_sym_field(rng, 5)
    return None if tr(fl.curl_mat(S)).is_zero() else "tr(Curl S) != 0"


def _chk_inc_scalar_id(rng):
    z = rand_poly(rng, 5)
    got = fl.inc(fl.scalar_times_id(z))
    want = fl.scalar_times_id(fl.laplacian(z)) - fl.hessian(z)
    if not (got - want).is_zero():
        return "inc(zeta id) != Lap zeta id - Hess zeta"
    if not (got - got.T).is_zero():
        return "inc(zeta id) is not symmetric"
    return None


def _chk_inc_skew(rng):
    A = rand_skew_field(rng, 5)
    got = fl.inc(A)
    want = -fl.anti_field(fl.grad(tr(fl.jac(fl.axl_field(A)))))
    if not (got - want).is_zero():
        return "inc of a skew field failed"
    if not (got + got.T).is_zero():
        return "inc of a skew field is not skew"
    return None


def _chk_inc_sym_valued(rng):
    S = rand_sym_field(rng, 5)
    got = fl.inc(S)
    return None if (got - got.T).is_zero() else "inc S is not symmetric"


def _chk_inc_sym_commute(rng):
    P = rand_mat_field(rng, 5)
    lhs = sym(fl.inc(P))
    rhs = fl.inc(sym(P))
    return None if (lhs - rhs).is_zero() else "sym and inc do not commute"


def _chk_inc_skew_commute(rng):
    P = rand_mat_field(rng, 5)
    lhs = skew(fl.inc(P))
    rhs = fl.inc(skew(P))
    return None if (lhs - rhs).is_zero() else "skew and inc do not commute"


def _chk_dev_curl_shift(rng):
    P = rand_mat_field(rng, 5)
    lhs = dev(fl.curl_mat(P))
    rhs = fl.curl_mat(P) - fl.scalar_times_id(fl.div(axl_skew(P)) * 2 / 3)
    return None if (lhs - rhs).is_zero() else "dev Curl P shift identity failed"


def _chk_saint_venant(rng):
    u = rand_vec_field(rng, 5)
    return None if fl.inc(sym(fl.jac(u))).is_zero() else "inc(sym D u) != 0"


def _chk_devsym_norm_decomposition(rng):
    u = rand_vec_field(rng, 4)
    J = fl.jac(u)
    lhs = frobenius_sq(dev(sym(J)))
    rhs = frobenius_sq(sym(J)) - fl.div(u) ** 2 / 3
    return None if (lhs - rhs).is_zero() else "pointwise norm decomposition failed"


def _chk_kroener(rng):
    u = rand_vec_field(rng, 4)
    P = rand_mat_field(rng, 4)
    try:
        fl.kroener_check(u, P)
    except fl.IdentityError as exc:
        return str(exc)
    return None


def _chk_curl_from_devcurl(rng):
    P = rand_mat_field(rng, 5)
    try:
        got = fl.devcurl_to_curl(P)
    except fl.IdentityError as exc:
        return str(exc)
    return None if (got - fl.curl_mat(P)).is_zero() else "curl reconstruction failed"


# -- reconstruction identities -------------------------------------------------------


def _chk_grad_trace_reconstruct(rng):
    A = rand_skew_field(rng, 5)
    lhs = fl.reconstruct_grad_tr(A)
    rhs = fl.grad(tr(fl.jac(fl.axl_field(A))))
    return None if (lhs - rhs).is_zero() else "gradient-of-trace reconstruction failed"


def _chk_hessian_reconstruct(rng):
    A = rand_skew_field(rng, 4)
    z = rand_poly(rng, 4)
    got = fl.reconstruct_hessian_zeta(A, z)
    return None if (got - fl.hessian(z)).is_zero() else "Hessian reconstruction failed"


def _chk_trace_hessian_reconstruct(rng):
    A = rand_skew_field(rng, 4)
    z = rand_poly(rng, 4)
    got = fl.reconstruct_trace_hessian(A, z)
    want = fl.hessian(tr(fl.jac(fl.axl_field(A))))
    return None if (got - want).is_zero() else "trace-Hessian reconstruction failed"


def _chk_trace_hessian_coefficient(rng):
    A = rand_skew_field(rng, 3)
    z = rand_poly(rng, 3)
    verdict = fl.verify_trace_hessian_coefficient([(A, z)])
    if not verdict[fl.TRACE_HESSIAN_SYM_COEFF]:
        return "pinned coefficient no longer matches the oracle"
    return None


# -- kernel families and conformal fields ---------------------------------------------


def _chk_kernel_families(rng):
    At, b = rand_skew(rng), rand_vec(rng)
    beta, gamma = rand_fraction(rng), rand_fraction(rng)
    T = fl.kernel_dS_C(At, b, beta)
    if not dev(sym(T)).is_zero() or not fl.curl_mat(T).is_zero():
        return "dS_C family has a nonzero defect"
    T = fl.kernel_S_dC(beta, b)
    if not sym(T).is_zero() or not dev(fl.curl_mat(T)).is_zero():
        return "S_dC family has a nonzero defect"
    T = fl.kernel_dS_dC(At, b, beta, gamma)
    if not dev(sym(T)).is_zero() or not dev(fl.curl_mat(T)).is_zero():
        return "dS_dC family has a nonzero defect"
    T = fl.kernel_S_C(At)
    if not sym(T).is_zero() or not fl.curl_mat(T).is_zero():
        return "S_C family has a nonzero defect"
    return None


def _chk_kernel_gram_ranks(rng):
    for tag, dim in fl.KERNEL_DIMS.items():
        basis = fl.kernel_basis(tag)
        if len(basis) != dim:
            return f"{tag}: basis has {len(basis)} elements, expected {dim}"
        if fl.rational_rank(fl.gram_matrix(basis)) != dim:
            return f"{tag}: Gram rank != {dim}"
    return None


def _chk_conformal_killing(rng):
    phi = fl.conformal_killing(rand_vec(rng), rand_vec(rng), rand_vec(rng),
                               rand_fraction(rng))
    got = dev(sym(fl.jac(phi)))
    return None if got.is_zero() else "dev sym D phi != 0 for a conformal field"


def _chk_conformal_dimension(rng):
    zero = Vec3(Fraction(0), Fraction(0), Fraction(0))
    es = [Vec3(Fraction(1), Fraction(0), Fraction(0)),
          Vec3(Fraction(0), Fraction(1), Fraction(0)),
          Vec3(Fraction(0), Fraction(0), Fraction(1))]
    basis = ([fl.conformal_killing(e, zero, zero, 0) for e in es]
             + [fl.conformal_killing(zero, e, zero, 0) for e in es]
             + [fl.conformal_killing(zero, zero, e, 0) for e in es]
             + [fl.conformal_killing(zero, zero, zero, 1)])
    gram = [[fl.box_integrate(dot(u, v), (0, 0, 0), (1, 1, 1)) for v in basis]
            for u in basis]
    return None if fl.rational_rank(gram) == 10 else "conformal family rank != 10"


# -- planar Cauchy-Riemann --------------------------------------------------------------


def _chk_planar_cr(rng):
    for k in range(1, 7):
        re, im = fl.holomorphic_pair(k)
        if not fl.planar_cauchy_riemann((re, im)).is_zero():
            return f"power pair k={k} does not satisfy the planar system"
    re, im = fl.holomorphic_pair(3)
    perturbed = (re + Poly.monomial((1, 1, 0), Fraction(1)), im)
    if fl.planar_cauchy_riemann(perturbed).is_zero():
        return "perturbed pair unexpectedly satisfies the planar system"
    u = (rand_poly(rng, 3), rand_poly(rng, 3))
    out = fl.planar_cauchy_riemann(u)
    d11 = u[0].diff(0) - u[1].diff(1)
    d12 = u[0].diff(1) + u[1].diff(0)
    if out.is_zero() != (d11.is_zero() and d12.is_zero()):
        return "planar defect does not characterize the first-order system"
    return None


# -- registry and runner ------------------------------------------------------------------

ALGEBRA_SUITE = (
    ("cross_rowwise", _chk_cross_rowwise),
    ("id_cross_vec", _chk_id_cross),
    ("anti_cross_expansion", _chk_anti_cross_expansion),
    ("trace_sym_cross", _chk_trace_sym_cross),
    ("id_cross_twice", _chk_id_cross_twice),
    ("anti_cross_twice", _chk_anti_cross_twice),
    ("sym_cross_twice", _chk_sym_cross_twice),
    ("dev_cross_shift", _chk_dev_cross_shift),
    ("sym_transfer_cross", _chk_sym_transfer),
    ("skew_transfer_cross", _chk_skew_transfer),
    ("dyad_devsym_split", _chk_dyad_devsym_split),
    ("sym_dyad_norm", _chk_sym_dyad_norm),
    ("cross_annihilates", _chk_cross_annihilates),
    ("dev_cross_zero_equiv", _chk_dev_cross_zero_equiv),
    ("orthogonal_decomposition", _chk_orthogonal_decomposition),
    ("anti_plus_id_cross", _chk_anti_plus_id_cross),
)

CALCULUS_SUITE = (
    ("curl_of_gradient", _chk_curl_of_gradient),
    ("curl_scalar_id", _chk_curl_scalar_id),
    ("nye_forward", _chk_nye_forward),
    ("nye_roundtrip", _chk_nye_roundtrip),
    ("trace_curl_sym", _chk_trace_curl_sym),
    ("inc_scalar_id", _chk_inc_scalar_id),
    ("inc_skew", _chk_inc_skew),
    ("inc_sym_valued", _chk_inc_sym_valued),
    ("inc_sym_commute", _chk_inc_sym_commute),
    ("inc_skew_commute", _chk_inc_skew_commute),
    ("dev_curl_shift", _chk_dev_curl_shift),
    ("saint_venant", _chk_saint_venant),
    ("devsym_norm_decomposition", _chk_devsym_norm_decomposition),
    ("kroener", _chk_kroener),
    ("curl_from_devcurl", _chk_curl_from_devcurl),
)

RECONSTRUCTION_SUITE = (
    ("grad_trace_reconstruct", _chk_grad_trace_reconstruct),
    ("hessian_reconstruct", _chk_hessian_reconstruct),
    ("trace_hessian_reconstruct", _chk_trace_hessian_reconstruct),
    ("trace_hessian_coefficient", _chk_trace_hessian_coefficient),
)

STRUCTURE_SUITE = (
    ("kernel_families", _chk_kernel_families),
    ("kernel_gram_ranks", _chk_kernel_gram_ranks),
    ("conformal_killing", _chk_conformal_killing),
    ("conformal_dimension", _chk_conformal_dimension),
    ("planar_cauchy_riemann", _chk_planar_cr),
)


def run_identity_suite(seed: int = 0, algebra_cases: int = 1000,
                       field_cases: int = 200, recon_cases: int = 100,
                       structure_cases: int = 25, only: str | None = None,
                       inject_fault: bool = False) -> list:
    """Run every registered identity; returns one IdentityResult per name.

    ``only`` filters identity names by substring."""
    plan = ([(n, "algebra", algebra_cases, f) for n, f in ALGEBRA_SUITE]
            + [(n, "calculus", field_cases, f) for n, f in CALCULUS_SUITE]
            + [(n, "reconstruction", recon_cases, f) for n, f in RECONSTRUCTION_SUITE]
            + [(n, "structure", structure_cases, f) for n, f in STRUCTURE_SUITE])
    if inject_fault:
        plan.append(("fault_probe", "algebra", min(algebra_cases, 25), _chk_fault_probe))
    results = []
    for name, group, cases, check in plan:
        if only and only not in name:
            continue
        rng = random.Random((seed, name))
        failures = 0
        detail = ""
        for i in range(cases):
            msg = check(rng)
            if msg is not None:
                failures += 1
                if not detail:
                    detail = f"case {i}: {msg}"
        results.append(IdentityResult(name=name, group=group, cases=cases,
                                      failures=failures, detail=detail))
    return results
