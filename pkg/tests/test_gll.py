import math

import numpy as np
import pytest

from pseudobosons.affine import AffineOp, adjoint, apply_affine, coefficient_distance, commutator_scalar
from pseudobosons.errors import DegreeCapExceeded, InvalidParams, UnsupportedCouplings
from pseudobosons.gll import (GLLParams, SuperpotentialPair, biorthogonality_matrix, build_gll,
                              canonical_operators, check_superpotential_constraints,
                              closed_form_phi, closed_form_psi, eigen_residuals, generate_family,
                              gll_commutation_report, ladder_from_superpotentials, metric_ops_check,
                              monomial_expansion, norm_products, riesz_diagnostic, s_phi, sll_family,
                              sll_operators, t_phi, vacuum_pair)
from pseudobosons.polygauss import PolyGauss, QuadExponent, distance, gram_matrix, inner_product, norm

R2 = 1 / math.sqrt(2)


@pytest.fixture(scope="module")
def table_023():
    return generate_family(GLLParams(0.2, -0.3), 6, 6)


# ---------------------------------------------------------------------------
# parameters and operators
# ---------------------------------------------------------------------------

def test_param_bounds():
    GLLParams(0.0, 0.49)
    with pytest.raises(InvalidParams):
        GLLParams(0.0, 0.5)
    with pytest.raises(InvalidParams):
        GLLParams(0.1, 0.1, alpha=1.0)


def test_with_couplings_keeps_products():
    p = GLLParams.with_couplings(0.1, 0.2, 2 + 1j, 0.3j)
    assert abs(p.alpha * p.gamma - 0.5) < 1e-15
    assert not p.standard_couplings


def test_sll_operator_matches_closed_form():
    # A = (1/sqrt 2)(-i d_x + d_y - i x/2 + y/2)
    expected = R2 * AffineOp(cdx=-1j, cdy=1, cx=-0.5j, cy=0.5)
    assert coefficient_distance(build_gll(GLLParams()).A, expected) < 1e-16
    assert coefficient_distance(sll_operators().A, expected) < 1e-16


@pytest.mark.parametrize("k", [(0, 0), (0.2, -0.3), (0.45, 0.45), (-0.4, 0.1)])
def test_commutation_tables_exact(k):
    reports = gll_commutation_report(GLLParams(*k))
    assert reports["ladder"].max_residual < 1e-14
    assert reports["canonical"].max_residual < 1e-14


def test_commutator_with_general_couplings():
    ops = build_gll(GLLParams.with_couplings(0.3, -0.1, 1.5 - 0.5j, 0.2 + 2j))
    assert abs(commutator_scalar(ops.A, ops.B) - 1) < 1e-14
    assert abs(commutator_scalar(ops.Ap, ops.Bp) - 1) < 1e-14


def test_b_is_not_a_dagger():
    ops = build_gll(GLLParams(0.0, 0.2))
    assert coefficient_distance(ops.B, adjoint(ops.A)) > 0.1


def test_ladder_from_superpotentials_matches_direct_form():
    for k in [(0, 0), (0.2, -0.3), (-0.4, 0.1)]:
        p = GLLParams(*k)
        derived = ladder_from_superpotentials(SuperpotentialPair.perturbed(*k), p)
        assert max(coefficient_distance(u, v) for u, v in zip(derived, build_gll(p))) < 1e-15


# ---------------------------------------------------------------------------
# superpotential constraints
# ---------------------------------------------------------------------------

def test_constraints_sll_and_perturbed():
    assert check_superpotential_constraints(SuperpotentialPair.sll()).satisfied
    assert check_superpotential_constraints(SuperpotentialPair.perturbed(0.2, -0.3)).satisfied


def test_constraints_violated_example():
    sp = SuperpotentialPair({(1, 0): -1}, {}, {(1, 0): -1}, {})
    rep = check_superpotential_constraints(sp)
    assert not rep.satisfied
    assert rep.residuals["W2y-V1x"] == {(0, 0): 1}


def test_constraints_nonsymmetric_choice():
    # V1 = -a1 x + v1(y), V2 = -a2 y + v2(x), W1 = -a2 x - v1(y), W2 = -a1 y - v2(x), a1 + a2 = 1
    a1, a2 = 0.3, 0.7
    v1 = {(0, 2): 0.5j, (0, 1): 1 - 1j}
    v2 = {(3, 0): -2j}
    neg = lambda p: {k: -v for k, v in p.items()}
    sp = SuperpotentialPair(
        W1={(1, 0): -a2, **neg(v1)}, W2={(0, 1): -a1, **neg(v2)},
        V1={(1, 0): -a1, **v1}, V2={(0, 1): -a2, **v2})
    assert check_superpotential_constraints(sp).satisfied


@pytest.mark.parametrize("n,k", [(1, 1), (2, 3), (3, 1)])
def test_constraints_polynomial_general_solution(n, k):
    # V2 = x^n y^k, V1 = -x + v1(y) - k/(n+1) x^{n+1} y^{k-1}, W1 = -v1 + k/(n+1) x^{n+1} y^{k-1}, W2 = -y - V2
    c = k / (n + 1)
    V1 = {(1, 0): -1, (0, 2): 1j, (n + 1, k - 1): -c}
    W1 = {(0, 2): -1j, (n + 1, k - 1): c}
    sp = SuperpotentialPair(W1, {(0, 1): -1, (n, k): -1}, V1, {(n, k): 1})
    assert check_superpotential_constraints(sp).satisfied
    assert not sp.is_affine
    with pytest.raises(InvalidParams):
        canonical_operators(sp)
    # flipping the sign of the integral term breaks the trace condition
    V1_bad = dict(V1)
    V1_bad[(n + 1, k - 1)] = c
    bad = SuperpotentialPair(W1, sp.W2, V1_bad, sp.V2)
    assert not check_superpotential_constraints(bad).satisfied


def test_superpotential_degree_cap():
    with pytest.raises(InvalidParams):
        SuperpotentialPair({(17, 0): 1}, {}, {}, {})


# ---------------------------------------------------------------------------
# vacua and families
# ---------------------------------------------------------------------------

def test_vacua_annihilated_and_paired():
    p = GLLParams(0.2, -0.3)
    phi, psi = vacuum_pair(p)
    ops = build_gll(p)
    assert norm(apply_affine(ops.A, phi)) < 1e-12
    assert norm(apply_affine(ops.Ap, phi)) < 1e-12
    assert norm(apply_affine(adjoint(ops.B), psi)) < 1e-12
    assert norm(apply_affine(adjoint(ops.Bp), psi)) < 1e-12
    assert inner_product(psi, phi) == pytest.approx(1, abs=1e-12)


def test_sll_vacua_coincide():
    phi, psi = vacuum_pair(GLLParams())
    assert phi.isclose(psi, 0.0)
    assert phi.coeffs[(0, 0)] == pytest.approx(1 / math.sqrt(2 * math.pi))


def test_sll_family_orthonormal():
    t = sll_family(2, 2)
    phis = t.flat()
    assert np.max(np.abs(gram_matrix(phis, phis) - np.eye(9))) < 1e-12


def test_biorthogonality(table_023):
    rep = biorthogonality_matrix(table_023)
    assert rep.max_residual < 1e-10
    i, j = rep.labels.index("2.1"), rep.labels.index("1.2")
    assert abs(rep.matrix[i, j]) < 1e-12


def test_family_degree_guard():
    with pytest.raises(DegreeCapExceeded):
        generate_family(GLLParams(), 25, 0)


def test_closed_forms(table_023):
    p = table_023.params
    assert table_023.phi[1][0].isclose(closed_form_phi(p, 1, 0), 1e-14)
    for n in range(1, 7):
        assert distance(table_023.phi[n][0], closed_form_phi(p, n, 0)) <= 1e-10 * norm(table_023.phi[n][0])
        assert distance(table_023.psi[n][0], closed_form_psi(p, n, 0)) <= 1e-10 * norm(table_023.psi[n][0])
        assert distance(table_023.phi[0][n], closed_form_phi(p, 0, n)) <= 1e-10 * norm(table_023.phi[0][n])
        assert distance(table_023.psi[0][n], closed_form_psi(p, 0, n)) <= 1e-10 * norm(table_023.psi[0][n])


def test_psi_closed_form_matches_iterated_adjoint():
    # oracle: apply A'^+ directly and compare with the derived closed form
    p = GLLParams(0.1, 0.3)
    ops = build_gll(p)
    _, psi = vacuum_pair(p)
    f = psi
    for n in range(1, 5):
        f = apply_affine(adjoint(ops.Ap), f).scale(1 / math.sqrt(n))
        assert f.isclose(closed_form_psi(p, n, 0), 1e-13)


def test_eigen_residuals(table_023):
    res = eigen_residuals(table_023)
    assert max(float(v.max()) for v in res.values()) < 1e-10


def test_number_operator_eigenvalue_on_psi():
    p = GLLParams(0.2, -0.3)
    t = generate_family(p, 3, 1)
    ops = build_gll(p)
    # h'^+ Psi_{3,1} = (3 - 1/2) Psi_{3,1}
    psi = t.psi[3][1]
    h = apply_affine(adjoint(ops.Ap), apply_affine(adjoint(ops.Bp), psi)) - psi.scale(0.5)
    assert h.isclose(psi.scale(2.5), 1e-12)


def test_sll_vacuum_eigenvalues():
    t = sll_family(0, 0)
    ops = build_gll(GLLParams())
    f = t.phi[0][0]
    h = apply_affine(ops.B, apply_affine(ops.A, f)) - f.scale(0.5)
    assert h.isclose(f.scale(-0.5), 1e-15)


# ---------------------------------------------------------------------------
# metric operators
# ---------------------------------------------------------------------------

def test_metric_operators(table_023):
    rep = metric_ops_check(table_023.params, table_023)
    assert rep.max_residual < 1e-10


def test_sll_metrics_are_identity():
    p = GLLParams()
    assert t_phi(p).is_identity() and s_phi(p).is_identity()


def test_s_phi_multiplier_form():
    S = s_phi(GLLParams(0.2, -0.3))
    assert S.scale == pytest.approx(1)
    assert S.exponent.isclose(QuadExponent(-0.3, -0.2))  # exp(-k2 x^2 + k1 y^2)


def test_metric_rejects_general_couplings():
    with pytest.raises(UnsupportedCouplings):
        t_phi(GLLParams.with_couplings(0.1, 0.1, 1.0, 1.0))


# ---------------------------------------------------------------------------
# Riesz diagnostic and completeness surrogate
# ---------------------------------------------------------------------------

def test_riesz_growth_detected():
    r, verdict = riesz_diagnostic(generate_family(GLLParams(0.2, 0.1), 8, 8))
    assert np.all(np.diff(r) > 0)
    assert verdict == "norm growth detected"


def test_riesz_sll_constant():
    r, verdict = riesz_diagnostic(sll_family(8, 8))
    # degree-32 monomial moments lose about 1e-11 to rounding at n = 8
    assert np.allclose(r, 1, atol=1e-10, rtol=0)
    assert verdict == "Riesz-compatible"


def test_growth_along_l_only():
    rn = norm_products(generate_family(GLLParams(0.0, 0.3), 6, 6))
    assert np.all(np.diff(rn[0, :]) > 0)
    _, verdict = riesz_diagnostic(generate_family(GLLParams(0.0, 0.3), 6, 6))
    assert verdict == "norm growth detected"


@pytest.mark.parametrize("m,n", [(0, 0), (1, 0), (2, 3), (6, 0), (3, 3)])
def test_monomials_are_finite_combinations(table_023, m, n):
    coeffs, residual = monomial_expansion(table_023, m, n)
    target = PolyGauss({(m, n): 1}, table_023.phi[0][0].exponent)
    assert residual <= 1e-10 * norm(target)
    assert all(i + j <= m + n for i, j in coeffs)
