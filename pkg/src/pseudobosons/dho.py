"""Quantum damped harmonic oscillator in the (Gamma, delta) representation.

The doubled oscillator has canonical pairs (x+, p+), (x-, p-) realised on
L^2(R^2) as

    x+ = beta x + alpha p_y          p+ = Gamma p_x + delta y
    x- = conj(beta) x + conj(alpha) p_y   p- = conj(Gamma) p_x + conj(delta) y

with D = Gamma conj(delta) - delta conj(Gamma), alpha = conj(Gamma)/D,
beta = conj(delta)/D and p = -i d.  The ladder operators are
a± = sqrt(w±/2)(x± + i p±/w±), b± = sqrt(w±/2)(x± - i p±/w±).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .affine import (AffineOp, CommutationTable, PX, PY, X, Y, adjoint, apply_affine, apply_sequence,
                     coefficient_distance, pseudo_boson_table, verify_commutation_table)
from .errors import ConstraintNotSatisfied, InvalidParams
from .polygauss import PolyGauss, QuadExponent, norm

# |D| below this (relative to |Gamma||delta|) is treated as degenerate
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class DHOParams:
    m: float = 1.0
    gamma_damp: float = 0.0
    k: float = 1.0
    Gamma: complex = 1.0
    delta: complex = 1j

    def __post_init__(self):
        for name in ("m", "gamma_damp", "k"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidParams(f"{name} must be finite")
            object.__setattr__(self, name, v)
        for name in ("Gamma", "delta"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise InvalidParams(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.m <= 0 or self.k <= 0 or self.gamma_damp < 0:
            raise InvalidParams("need m > 0, k > 0, gamma_damp >= 0")
        if self.k < self.gamma_damp ** 2 / (4 * self.m):
            raise InvalidParams("overdamped: k < gamma^2 / 4m")
        D = self.D
        if abs(D) <= DEGENERACY_TOL * max(abs(self.Gamma) * abs(self.delta), 1e-300):
            raise InvalidParams("Gamma conj(delta) = delta conj(Gamma)")

    @property
    def D(self) -> complex:
        # D = 2i Im(Gamma conj(delta)); the difference cancels badly when Gamma and
        # delta are nearly parallel, so form it exactly and round once
        G, d = self.Gamma, self.delta
        im = Fraction(G.imag) * Fraction(d.real) - Fraction(G.real) * Fraction(d.imag)
        return complex(0.0, 2 * float(im))


@dataclass(frozen=True)
class DHODerived:
    Omega: float
    omega_plus: complex
    omega_minus: complex
    alpha: complex
    beta: complex


def frequencies(m: float, gamma_damp: float, k: float) -> tuple[complex, complex]:
    """(w+, w-) = Omega ± i gamma / 2m with Omega = sqrt((k - gamma^2/4m) / m)."""
    if m <= 0 or k < gamma_damp ** 2 / (4 * m):
        raise InvalidParams("need m > 0 and k >= gamma^2 / 4m")
    Omega = math.sqrt(max(k - gamma_damp ** 2 / (4 * m), 0.0) / m)
    shift = gamma_damp / (2 * m)
    return complex(Omega, shift), complex(Omega, -shift)


def derive(params: DHOParams) -> DHODerived:
    wp, wm = frequencies(params.m, params.gamma_damp, params.k)
    D = params.D
    return DHODerived(wp.real, wp, wm, params.Gamma.conjugate() / D, params.delta.conjugate() / D)


def canonical_operators(params: DHOParams) -> tuple[AffineOp, AffineOp, AffineOp, AffineOp]:
    """(x+, p+, x-, p-) as affine operators."""
    d = derive(params)
    xp = d.beta * X + d.alpha * PY
    pp = params.Gamma * PX + params.delta * Y
    xm = d.beta.conjugate() * X + d.alpha.conjugate() * PY
    pm = params.Gamma.conjugate() * PX + params.delta.conjugate() * Y
    return xp, pp, xm, pm


@dataclass(frozen=True)
class DHOOperators:
    aP: AffineOp
    aM: AffineOp
    bP: AffineOp
    bM: AffineOp
    derived: DHODerived

    def as_list(self) -> list[AffineOp]:
        return [self.aP, self.bP, self.aM, self.bM]


def build_dho(params: DHOParams) -> DHOOperators:
    d = derive(params)
    xp, pp, xm, pm = canonical_operators(params)
    sp, sm = cmath.sqrt(d.omega_plus / 2), cmath.sqrt(d.omega_minus / 2)
    aP = sp * (xp + (1j / d.omega_plus) * pp)
    bP = sp * (xp - (1j / d.omega_plus) * pp)
    aM = sm * (xm + (1j / d.omega_minus) * pm)
    bM = sm * (xm - (1j / d.omega_minus) * pm)
    return DHOOperators(aP, aM, bP, bM, d)


def explicit_operators(params: DHOParams) -> DHOOperators:
    """The same four operators written out in x, y, d_x, d_y coefficients."""
    d = derive(params)
    G, de, a, b = params.Gamma, params.delta, d.alpha, d.beta
    wp, wm = d.omega_plus, d.omega_minus
    sp, sm = cmath.sqrt(wp / 2), cmath.sqrt(wm / 2)
    aP = sp * AffineOp(cx=b, cy=1j * de / wp, cdx=G / wp, cdy=-1j * a)
    aM = sm * AffineOp(cx=b.conjugate(), cy=1j * de.conjugate() / wm,
                       cdx=G.conjugate() / wm, cdy=-1j * a.conjugate())
    bP = sp * AffineOp(cx=b, cy=-1j * de / wp, cdx=-G / wp, cdy=-1j * a)
    bM = sm * AffineOp(cx=b.conjugate(), cy=-1j * de.conjugate() / wm,
                       cdx=-G.conjugate() / wm, cdy=-1j * a.conjugate())
    return DHOOperators(aP, aM, bP, bM, d)


def dho_algebra_check(params: DHOParams) -> dict:
    ops = build_dho(params)
    table = verify_commutation_table(ops.as_list(), pseudo_boson_table(("a+", "b+", "a-", "b-")))
    xp, pp, xm, pm = canonical_operators(params)
    canonical = verify_commutation_table(
        [xp, pp, xm, pm],
        CommutationTable([(0, 1, 1j), (2, 3, 1j), (0, 2, 0), (0, 3, 0), (1, 2, 0), (1, 3, 0)],
                         labels=["x+", "p+", "x-", "p-"]))
    conjugation = max(coefficient_distance(ops.bP, adjoint(ops.aM)),
                      coefficient_distance(ops.bM, adjoint(ops.aP)))
    compatibility = max(coefficient_distance(adjoint(pp), pm), coefficient_distance(adjoint(xp), xm))
    explicit = explicit_operators(params)
    explicit_gap = max(coefficient_distance(u, v) for u, v in zip(ops.as_list(), explicit.as_list()))
    return {
        "pseudo_boson": table,
        "canonical": canonical,
        "commutator_residual_max": max(table.max_residual, canonical.max_residual),
        "conjugation_residual": conjugation,
        "compatibility_residual": compatibility,
        "explicit_residual": explicit_gap,
        # distance from being an ordinary boson pair: b± versus a±^+
        "bosonic_gap": max(coefficient_distance(ops.bP, adjoint(ops.aP)),
                           coefficient_distance(ops.bM, adjoint(ops.aM))),
    }


# ---------------------------------------------------------------------------
# vacuum and the ratio constraint
# ---------------------------------------------------------------------------

def ratio_constraint(params: DHOParams, tol: float = 1e-12) -> tuple[bool, complex, complex]:
    """w+/w- against -(delta/conj(delta))(Gamma/conj(Gamma))."""
    d = derive(params)
    lhs = d.omega_plus / d.omega_minus
    rhs = -(params.delta / params.delta.conjugate()) * (params.Gamma / params.Gamma.conjugate())
    return abs(lhs - rhs) <= tol, lhs, rhs


def solve_ratio_constraint(omega_plus: complex, Gamma: complex, delta_abs: float) -> complex:
    """delta = |delta| e^{i theta}, theta = (arg(w+/w-) + pi)/2 - arg Gamma taken in [0, pi)."""
    omega_plus = complex(omega_plus)
    ratio = omega_plus / omega_plus.conjugate()
    theta = 0.5 * (cmath.phase(ratio) + math.pi) - cmath.phase(complex(Gamma))
    theta = math.fmod(theta, math.pi)
    if theta < 0:
        theta += math.pi
    return delta_abs * cmath.exp(1j * theta)


@dataclass(frozen=True)
class VacuumReport:
    vacuum: PolyGauss
    re1: float
    re2: float
    normalizable: bool
    annihilation_residual: float


def vacuum_exponent(params: DHOParams) -> QuadExponent:
    """exp(-beta w+ x^2/(2 Gamma) + delta y^2/(2 alpha w+))."""
    d = derive(params)
    return QuadExponent(d.beta * d.omega_plus / (2 * params.Gamma),
                        -params.delta / (2 * d.alpha * d.omega_plus))


def vacuum_feasibility(params: DHOParams, tol: float = 1e-10) -> VacuumReport:
    holds, lhs, rhs = ratio_constraint(params, tol)
    if not holds:
        raise ConstraintNotSatisfied(f"w+/w- = {lhs} but the phases give {rhs}")
    e = vacuum_exponent(params)
    d = derive(params)
    re1 = (d.beta * d.omega_plus / (2 * params.Gamma)).real
    re2 = (params.delta / (2 * d.alpha * d.omega_plus)).real
    vac = PolyGauss.gaussian(e)
    ops = build_dho(params)
    # coefficients of a± vac are affine in (x, y); compare with the operator's own scale
    residual = 0.0
    for op in (ops.aP, ops.aM):
        scale = max(float(np.max(np.abs(op.vector()))) * max(1.0, abs(e.qxx), abs(e.qyy)), 1e-300)
        residual = max(residual, apply_affine(op, vac).max_abs_coeff() / scale)
    return VacuumReport(vac, re1, re2, bool(re1 > 0 and re2 < 0), residual)


# ---------------------------------------------------------------------------
# Hamiltonian
# ---------------------------------------------------------------------------

def hamiltonian_ladder(params: DHOParams, f: PolyGauss) -> PolyGauss:
    """w+ b+ a+ f + w- b- a- f + (w+ + w-)/2 f."""
    ops = build_dho(params)
    d = ops.derived
    return (apply_sequence([ops.bP, ops.aP], f).scale(d.omega_plus)
            + apply_sequence([ops.bM, ops.aM], f).scale(d.omega_minus)
            + f.scale((d.omega_plus + d.omega_minus) / 2))


def hamiltonian_canonical(params: DHOParams, f: PolyGauss) -> PolyGauss:
    """(p+^2 + w+^2 x+^2)/2 + (p-^2 + w-^2 x-^2)/2 applied to f."""
    d = derive(params)
    xp, pp, xm, pm = canonical_operators(params)
    out = (apply_sequence([pp, pp], f) + apply_sequence([xp, xp], f).scale(d.omega_plus ** 2)
           + apply_sequence([pm, pm], f) + apply_sequence([xm, xm], f).scale(d.omega_minus ** 2))
    return out.scale(0.5)


def hamiltonian_identity_check(params: DHOParams, samples: list[PolyGauss]) -> float:
    """Largest ||H_ladder f - H_canonical f|| / ||H_canonical f|| over the samples."""
    worst = 0.0
    for f in samples:
        a, b = hamiltonian_ladder(params, f), hamiltonian_canonical(params, f)
        diff = (a - b).max_abs_coeff()
        scale = max(b.max_abs_coeff(), a.max_abs_coeff(), 1e-300)
        if f.exponent.is_integrable():
            diff, scale = norm(a - b), max(norm(b), 1e-300)
        worst = max(worst, diff / scale)
    return worst


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def draw_params(rng: np.random.Generator, max_tries: int = 100) -> DHOParams:
    """Random admissible parameters with delta chosen to satisfy the ratio constraint."""
    for _ in range(max_tries):
        m = rng.uniform(0.5, 2.0)
        k = rng.uniform(0.5, 2.0)
        # gamma in (0, 2 sqrt(mk)]
        g = 2 * math.sqrt(m * k) * (1.0 - rng.uniform(0.0, 1.0))
        G = rng.uniform(0.5, 2.0) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        dabs = rng.uniform(0.5, 2.0)
        delta = solve_ratio_constraint(frequencies(m, g, k)[0], G, dabs)
        try:
            return DHOParams(m, g, k, G, delta)
        except InvalidParams:
            continue
    raise InvalidParams("could not draw admissible parameters")


@dataclass
class SweepResult:
    n: int
    seed: int
    normalizable_count: int
    max_annihilation_residual: float
    max_ratio_residual: float
    sign_pattern: dict[str, int]


def obstruction_sweep(n: int = 1000, seed: int = 0) -> SweepResult:
    rng = np.random.default_rng(seed)
    count = 0
    worst_ann = worst_ratio = 0.0
    signs = {"re1>0,re2>0": 0, "re1<0,re2<0": 0, "other": 0}
    for _ in range(n):
        p = draw_params(rng)
        _, lhs, rhs = ratio_constraint(p)
        worst_ratio = max(worst_ratio, abs(lhs - rhs))
        rep = vacuum_feasibility(p)
        count += rep.normalizable
        worst_ann = max(worst_ann, rep.annihilation_residual)
        if rep.re1 > 0 and rep.re2 > 0:
            signs["re1>0,re2>0"] += 1
        elif rep.re1 < 0 and rep.re2 < 0:
            signs["re1<0,re2<0"] += 1
        else:
            signs["other"] += 1
    return SweepResult(n, seed, count, worst_ann, worst_ratio, signs)
