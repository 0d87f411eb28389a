import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pseudobosons.affine import adjoint, apply_affine, coefficient_distance
from pseudobosons.dho import (DHOParams, build_dho, derive, dho_algebra_check, draw_params,
                              explicit_operators, hamiltonian_canonical, hamiltonian_identity_check,
                              hamiltonian_ladder, obstruction_sweep, ratio_constraint,
                              solve_ratio_constraint, vacuum_exponent, vacuum_feasibility)
from pseudobosons.errors import ConstraintNotSatisfied, InvalidParams
from pseudobosons.gll import random_samples
from pseudobosons.polygauss import PolyGauss, QuadExponent


def solved(m=1.0, g=1.0, k=1.0, G=1.0, dabs=1.0):
    w = complex(math.sqrt((k - g * g / (4 * m)) / m), g / (2 * m))
    return DHOParams(m, g, k, G, solve_ratio_constraint(w, G, dabs))


def test_frequencies():
    d = derive(DHOParams(1, 1, 1, 1, 1j))
    assert d.Omega == pytest.approx(math.sqrt(3) / 2)
    assert d.omega_plus == pytest.approx(complex(math.sqrt(3) / 2, 0.5))
    assert d.omega_minus == d.omega_plus.conjugate()


def test_undamped_frequencies():
    d = derive(DHOParams(1, 0, 1, 1, 1j))
    assert d.Omega == 1 and d.omega_plus == d.omega_minus == 1


def test_degenerate_representation_rejected():
    with pytest.raises(InvalidParams):
        DHOParams(1, 0.5, 1, 1, 2)
    with pytest.raises(InvalidParams):
        DHOParams(1, 3, 1, 1, 1j)  # overdamped


def test_algebra_example():
    rep = dho_algebra_check(DHOParams(1, 0.5, 2, 1 + 1j, 2j))
    assert rep["commutator_residual_max"] < 1e-14
    assert rep["conjugation_residual"] == 0
    assert rep["compatibility_residual"] < 1e-15
    assert rep["explicit_residual"] < 1e-15


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_algebra_random(seed):
    rng = np.random.default_rng(seed)
    p = DHOParams(rng.uniform(0.5, 2), rng.uniform(0, 1), rng.uniform(1, 2),
                  complex(*rng.uniform(-2, 2, 2)), complex(*rng.uniform(-2, 2, 2)))
    rep = dho_algebra_check(p)
    # alpha, beta carry 1/D, so commutator terms reach |Gamma||delta|/|D| before cancelling;
    # rounding of the stored coefficients sets a floor of a few ulp times that ratio
    cond = abs(p.Gamma) * abs(p.delta) / abs(p.D)
    assert rep["commutator_residual_max"] < 1e-14 * max(1.0, cond / 10)
    if cond <= 10:
        assert rep["commutator_residual_max"] < 1e-14
    assert rep["conjugation_residual"] < 1e-15


def test_undamped_pairs_stay_pseudo_bosonic():
    # b± = a∓^+ holds, but b± = a±^+ (an ordinary boson pair) never does
    for G, dl in [(1, 1j), (1 + 1j, 2j), (0.5, -1 + 1j)]:
        rep = dho_algebra_check(DHOParams(1, 0, 1, G, dl))
        assert rep["conjugation_residual"] == 0
        assert rep["bosonic_gap"] > 0.1


def test_damping_to_zero_limit():
    gaps = []
    for g in [0.5, 0.1, 0.01, 0.0]:
        d = derive(DHOParams(1, g, 1, 1, 1j))
        gaps.append(abs(d.omega_plus - d.Omega))
        assert abs(d.Omega - math.sqrt(1 - g * g / 4)) < 1e-15
    assert gaps == sorted(gaps, reverse=True) and gaps[-1] == 0


def test_ratio_constraint_undamped():
    holds, lhs, rhs = ratio_constraint(DHOParams(1, 0, 1, 1, 1j))
    assert holds and lhs == rhs == 1


def test_solver_satisfies_constraint():
    p = solved()
    holds, lhs, rhs = ratio_constraint(p)
    assert holds and abs(lhs - rhs) < 1e-12
    theta = cmath.phase(p.delta) % (2 * math.pi)
    assert 0 <= theta < math.pi


def test_solver_branches():
    p = solved(G=0.7 * cmath.exp(0.4j))
    d = p.delta
    # delta -> -delta also solves the phase condition; -theta does not
    other = DHOParams(p.m, p.gamma_damp, p.k, p.Gamma, -d)
    mirror = DHOParams(p.m, p.gamma_damp, p.k, p.Gamma, d.conjugate())
    assert ratio_constraint(other)[0]
    assert not ratio_constraint(mirror)[0]


def test_vacuum_requires_constraint():
    with pytest.raises(ConstraintNotSatisfied):
        vacuum_feasibility(DHOParams(1, 0.5, 2, 1 + 1j, 2j))


def test_vacuum_example_not_normalizable():
    rep = vacuum_feasibility(solved())
    assert not rep.normalizable
    assert rep.re1 * rep.re2 > 0
    assert rep.annihilation_residual < 1e-12


def test_undamped_vacuum_not_normalizable():
    rep = vacuum_feasibility(DHOParams(1, 0, 1, 1, 1j))
    assert not rep.normalizable
    assert rep.annihilation_residual == 0


def test_vacuum_annihilated_formally():
    p = solved(m=1.3, g=0.4, k=1.7, G=1.2 - 0.4j, dabs=0.8)
    vac = PolyGauss.gaussian(vacuum_exponent(p))
    ops = build_dho(p)
    for op in (ops.aP, ops.aM):
        assert apply_affine(op, vac).max_abs_coeff() < 1e-12


def test_hamiltonian_identity_random_samples():
    p = DHOParams(1, 0.5, 2, 1 + 1j, 2j)
    samples = random_samples(np.random.default_rng(4), 5, 3, QuadExponent(0.5, 0.5))
    assert hamiltonian_identity_check(p, samples) < 1e-10


def test_hamiltonian_identity_x_gaussian():
    p = DHOParams(1, 0.5, 2, 1 + 1j, 2j)
    assert hamiltonian_identity_check(p, [PolyGauss({(1, 0): 1}, QuadExponent(1, 1))]) < 1e-10


def test_hamiltonian_on_formal_vacuum():
    p = DHOParams(1, 0, 1, 1, 1j)
    vac = PolyGauss.gaussian(vacuum_exponent(p))
    d = derive(p)
    h = hamiltonian_canonical(p, vac)
    assert h.isclose(vac.scale((d.omega_plus + d.omega_minus) / 2), 1e-14)
    assert hamiltonian_ladder(p, vac).isclose(h, 1e-14)


def test_explicit_operators_match_construction():
    p = solved(G=0.3 + 1.1j)
    a, b = build_dho(p), explicit_operators(p)
    assert max(coefficient_distance(u, v) for u, v in zip(a.as_list(), b.as_list())) < 1e-15


def test_draw_params_admissible():
    rng = np.random.default_rng(0)
    for _ in range(50):
        p = draw_params(rng)
        assert ratio_constraint(p)[0]


def test_sweep_small():
    res = obstruction_sweep(100, seed=3)
    assert res.normalizable_count == 0
    assert res.sign_pattern["other"] == 0
    assert res.max_annihilation_residual < 1e-12


def test_sweep_is_deterministic():
    a, b = obstruction_sweep(20, 5), obstruction_sweep(20, 5)
    assert a == b


def test_adjoint_relation_coefficientwise():
    ops = build_dho(solved())
    assert coefficient_distance(ops.bP, adjoint(ops.aM)) < 1e-15
    assert coefficient_distance(ops.bM, adjoint(ops.aP)) < 1e-15
