"""Generalized Landau levels.

Deformed magnetic ladder operators built from a pair of complex vector
superpotentials, their Gaussian vacua, the biorthogonal families generated
from them and the Gaussian multipliers relating those families to the
ordinary Landau-level basis.

The worked model uses

    W1 = -x/2 - i k1 y,   W2 = -y/2 - i k2 x,
    V1 = -x/2 + i k1 y,   V2 = -y/2 + i k2 x,

with real k1, k2 in (-1/2, 1/2) and couplings alpha*gamma = alpha'*gamma' = 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from .affine import (AffineOp, PX, PY, X, Y, adjoint, apply_affine, canonical_pair_table,
                     pseudo_boson_table, verify_commutation_table, CommutationTable)
from .errors import InvalidParams, UnsupportedCouplings
from .polygauss import (PolyGauss, QuadExponent, distance, gram_matrix, norm)

SQRT_HALF = 1 / math.sqrt(2)
NORMALIZATION = 1 / math.sqrt(2 * math.pi)
MAX_LADDER = 24
COUPLING_TOL = 1e-14

Poly = Mapping[tuple[int, int], complex]


@dataclass(frozen=True)
class GLLParams:
    k1: float = 0.0
    k2: float = 0.0
    alpha: complex = SQRT_HALF
    gamma: complex = SQRT_HALF
    alphap: complex = SQRT_HALF
    gammap: complex = SQRT_HALF

    def __post_init__(self):
        for name in ("k1", "k2"):
            v = getattr(self, name)
            if isinstance(v, complex):
                if v.imag:
                    raise InvalidParams(f"{name} must be real, got {v}")
                v = v.real
            v = float(v)
            if not math.isfinite(v) or not (-0.5 < v < 0.5):
                raise InvalidParams(f"{name}={v} outside the open interval (-1/2, 1/2)")
            object.__setattr__(self, name, v)
        for name in ("alpha", "gamma", "alphap", "gammap"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise InvalidParams(f"{name} is not finite")
            object.__setattr__(self, name, v)
        if abs(self.alpha * self.gamma - 0.5) > COUPLING_TOL:
            raise InvalidParams(f"alpha*gamma = {self.alpha * self.gamma}, expected 1/2")
        if abs(self.alphap * self.gammap - 0.5) > COUPLING_TOL:
            raise InvalidParams(f"alpha'*gamma' = {self.alphap * self.gammap}, expected 1/2")

    @classmethod
    def with_couplings(cls, k1: float, k2: float, alpha: complex, alphap: complex) -> "GLLParams":
        """Fix alpha and alpha'; gamma and gamma' follow from the product rule."""
        return cls(k1, k2, alpha, 1 / (2 * complex(alpha)), alphap, 1 / (2 * complex(alphap)))

    @property
    def standard_couplings(self) -> bool:
        return all(abs(c - SQRT_HALF) <= COUPLING_TOL
                   for c in (self.alpha, self.gamma, self.alphap, self.gammap))

    @property
    def is_sll(self) -> bool:
        return self.k1 == 0 and self.k2 == 0 and self.standard_couplings


class GLLOperators(NamedTuple):
    A: AffineOp
    B: AffineOp
    Ap: AffineOp
    Bp: AffineOp


def build_gll(params: GLLParams) -> GLLOperators:
    """Lowering/raising operators of the deformed model in differential form."""
    if not isinstance(params, GLLParams):
        raise InvalidParams("expected GLLParams")
    k1, k2 = params.k1, params.k2
    a, g, ap, gp = params.alpha, params.gamma, params.alphap, params.gammap
    Ap = ap * AffineOp(cdx=1, cdy=-1j, cx=(1 + 2 * k2) / 2, cy=-1j * (1 - 2 * k1) / 2)
    Bp = gp * AffineOp(cdx=-1, cdy=-1j, cx=(1 - 2 * k2) / 2, cy=1j * (1 + 2 * k1) / 2)
    A = a * AffineOp(cdx=-1j, cdy=1, cx=-1j * (1 + 2 * k2) / 2, cy=(1 - 2 * k1) / 2)
    B = g * AffineOp(cdx=-1j, cdy=-1, cx=1j * (1 - 2 * k2) / 2, cy=(1 + 2 * k1) / 2)
    return GLLOperators(A, B, Ap, Bp)


def sll_operators() -> GLLOperators:
    """Ordinary Landau-level ladder built from Q0, P0, Q0', P0'."""
    P0p = PX - 0.5 * Y
    Q0p = PY + 0.5 * X
    P0 = PY - 0.5 * X
    Q0 = PX + 0.5 * Y
    return GLLOperators(SQRT_HALF * (Q0 + 1j * P0), SQRT_HALF * (Q0 - 1j * P0),
                        SQRT_HALF * (Q0p + 1j * P0p), SQRT_HALF * (Q0p - 1j * P0p))


# ---------------------------------------------------------------------------
# superpotentials
# ---------------------------------------------------------------------------

def _pclean(p: Poly) -> dict:
    return {k: complex(v) for k, v in p.items() if complex(v) != 0}


def poly_diff(p: Poly, axis: int) -> dict:
    out = {}
    for (m, n), v in p.items():
        power = m if axis == 0 else n
        if power:
            key = (m - 1, n) if axis == 0 else (m, n - 1)
            out[key] = out.get(key, 0) + power * v
    return _pclean(out)


def poly_add(*ps: Poly, signs=None) -> dict:
    signs = signs or [1] * len(ps)
    out: dict = {}
    for s, p in zip(signs, ps):
        for k, v in p.items():
            out[k] = out.get(k, 0) + s * v
    return _pclean(out)


@dataclass(frozen=True)
class SuperpotentialPair:
    W1: Poly
    W2: Poly
    V1: Poly
    V2: Poly
    max_degree: int = field(default=16, repr=False)

    def __post_init__(self):
        for name in ("W1", "W2", "V1", "V2"):
            p = _pclean(getattr(self, name))
            for (m, n), v in p.items():
                if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                    raise InvalidParams(f"{name} has a non-finite coefficient")
                if m + n > self.max_degree:
                    raise InvalidParams(f"{name} has degree {m + n} > {self.max_degree}")
            object.__setattr__(self, name, p)

    @classmethod
    def sll(cls) -> "SuperpotentialPair":
        return cls({(1, 0): -0.5}, {(0, 1): -0.5}, {(1, 0): -0.5}, {(0, 1): -0.5})

    @classmethod
    def perturbed(cls, k1: float, k2: float) -> "SuperpotentialPair":
        return cls({(1, 0): -0.5, (0, 1): -1j * k1}, {(0, 1): -0.5, (1, 0): -1j * k2},
                   {(1, 0): -0.5, (0, 1): 1j * k1}, {(0, 1): -0.5, (1, 0): 1j * k2})

    @property
    def is_affine(self) -> bool:
        return all(m + n <= 1 for p in (self.W1, self.W2, self.V1, self.V2) for m, n in p)


@dataclass
class ConstraintReport:
    residuals: dict[str, dict]

    @property
    def satisfied(self) -> bool:
        return all(not r for r in self.residuals.values())

    def max_abs(self) -> float:
        return max((abs(v) for r in self.residuals.values() for v in r.values()), default=0.0)


def check_superpotential_constraints(sp: SuperpotentialPair, tol: float = 0.0) -> ConstraintReport:
    """The compatibility PDEs between W and V, as residual polynomials."""
    d = poly_diff
    W1x, W1y = d(sp.W1, 0), d(sp.W1, 1)
    W2x, W2y = d(sp.W2, 0), d(sp.W2, 1)
    V1x, V1y = d(sp.V1, 0), d(sp.V1, 1)
    V2x, V2y = d(sp.V2, 0), d(sp.V2, 1)
    one = {(0, 0): 1.0}
    res = {
        "W1x-V2y": poly_add(W1x, V2y, signs=[1, -1]),
        "W2x+V2x": poly_add(W2x, V2x),
        "W1y+V1y": poly_add(W1y, V1y),
        "W2y-V1x": poly_add(W2y, V1x, signs=[1, -1]),
        "V1x+V2y+1": poly_add(V1x, V2y, one),
        "W1x+W2y+1": poly_add(W1x, W2y, one),
    }
    if tol:
        res = {k: {m: v for m, v in r.items() if abs(v) > tol} for k, r in res.items()}
    return ConstraintReport(res)


def _affine_from_poly(p: Poly) -> AffineOp:
    if any(m + n > 1 for m, n in p):
        raise InvalidParams("superpotential is not affine; operator coefficients would leave the class")
    return AffineOp(c0=p.get((0, 0), 0), cx=p.get((1, 0), 0), cy=p.get((0, 1), 0))


def canonical_operators(sp: SuperpotentialPair) -> tuple[AffineOp, AffineOp, AffineOp, AffineOp]:
    """(Q, P, Q', P') with P' = px + W2, Q' = py - W1, P = py + V1, Q = px - V2."""
    W1, W2 = _affine_from_poly(sp.W1), _affine_from_poly(sp.W2)
    V1, V2 = _affine_from_poly(sp.V1), _affine_from_poly(sp.V2)
    return PX - V2, PY + V1, PY - W1, PX + W2


def ladder_from_superpotentials(sp: SuperpotentialPair, params: GLLParams) -> GLLOperators:
    Q, P, Qp, Pp = canonical_operators(sp)
    return GLLOperators(params.alpha * (Q + 1j * P), params.gamma * (Q - 1j * P),
                        params.alphap * (Qp + 1j * Pp), params.gammap * (Qp - 1j * Pp))


def gll_commutation_report(params: GLLParams) -> dict[str, CommutationTable]:
    """Pseudo-bosonic table for (A, B, A', B') and canonical table for (Q, P, Q', P')."""
    ops = build_gll(params)
    ladder = verify_commutation_table([ops.A, ops.B, ops.Ap, ops.Bp],
                                      pseudo_boson_table(("A", "B", "A'", "B'")))
    Q, P, Qp, Pp = canonical_operators(SuperpotentialPair.perturbed(params.k1, params.k2))
    canon = verify_commutation_table([Q, P, Qp, Pp], canonical_pair_table())
    return {"ladder": ladder, "canonical": canon}


# ---------------------------------------------------------------------------
# vacua and families
# ---------------------------------------------------------------------------

def phi_exponent(params: GLLParams) -> QuadExponent:
    return QuadExponent((1 + 2 * params.k2) / 4, (1 - 2 * params.k1) / 4)


def psi_exponent(params: GLLParams) -> QuadExponent:
    return QuadExponent((1 - 2 * params.k2) / 4, (1 + 2 * params.k1) / 4)


SLL_EXPONENT = QuadExponent(0.25, 0.25)


def vacuum_pair(params: GLLParams) -> tuple[PolyGauss, PolyGauss]:
    """Gaussian vacua with N_phi = N_psi = (2 pi)^(-1/2), so <psi00, phi00> = 1."""
    return (PolyGauss.gaussian(phi_exponent(params), NORMALIZATION),
            PolyGauss.gaussian(psi_exponent(params), NORMALIZATION))


def sll_vacuum() -> PolyGauss:
    return PolyGauss.gaussian(SLL_EXPONENT, NORMALIZATION)


@dataclass
class FamilyTable:
    params: GLLParams
    nmax: int
    lmax: int
    phi: list[list[PolyGauss]]
    psi: list[list[PolyGauss]]

    def labels(self) -> list[str]:
        return [f"{n}.{l}" for n in range(self.nmax + 1) for l in range(self.lmax + 1)]

    def flat(self, which: str = "phi") -> list[PolyGauss]:
        rows = self.phi if which == "phi" else self.psi
        return [rows[n][l] for n in range(self.nmax + 1) for l in range(self.lmax + 1)]


def _ladder_grid(vacuum: PolyGauss, raise_n: AffineOp, raise_l: AffineOp,
                 nmax: int, lmax: int) -> list[list[PolyGauss]]:
    grid = [[None] * (lmax + 1) for _ in range(nmax + 1)]
    col = vacuum
    for l in range(lmax + 1):
        if l:
            col = apply_affine(raise_l, col).scale(1 / math.sqrt(l))
        grid[0][l] = col
        f = col
        for n in range(1, nmax + 1):
            f = apply_affine(raise_n, f).scale(1 / math.sqrt(n))
            grid[n][l] = f
    return grid


def generate_family(params: GLLParams, nmax: int, lmax: int) -> FamilyTable:
    """phi_{n,l} = B'^n B^l phi00 / sqrt(n! l!) and psi_{n,l} likewise with A'^+, A^+."""
    if not (0 <= nmax <= MAX_LADDER and 0 <= lmax <= MAX_LADDER):
        from .errors import DegreeCapExceeded
        raise DegreeCapExceeded(f"nmax, lmax must lie in [0, {MAX_LADDER}]")
    ops = build_gll(params)
    phi00, psi00 = vacuum_pair(params)
    phi = _ladder_grid(phi00, ops.Bp, ops.B, nmax, lmax)
    psi = _ladder_grid(psi00, adjoint(ops.Ap), adjoint(ops.A), nmax, lmax)
    return FamilyTable(params, nmax, lmax, phi, psi)


def sll_family(nmax: int, lmax: int) -> FamilyTable:
    return generate_family(GLLParams(), nmax, lmax)


def closed_form_phi(params: GLLParams, n: int, l: int) -> PolyGauss:
    """phi_{n,0} = gamma'^n (x+iy)^n phi00 / sqrt(n!) and phi_{0,l} = (i gamma)^l (x-iy)^l phi00 / sqrt(l!)."""
    phi00, _ = vacuum_pair(params)
    if n and l:
        raise ValueError("closed forms exist for phi_{n,0} and phi_{0,l} only")
    if l == 0:
        return _binomial_power(1j, n, phi00).scale(params.gammap ** n / math.sqrt(math.factorial(n)))
    return _binomial_power(-1j, l, phi00).scale((1j * params.gamma) ** l / math.sqrt(math.factorial(l)))


def closed_form_psi(params: GLLParams, n: int, l: int) -> PolyGauss:
    """Psi_{n,0} = conj(alpha')^n (x+iy)^n psi00 / sqrt(n!), Psi_{0,l} = (i conj(alpha))^l (x-iy)^l psi00 / sqrt(l!)."""
    _, psi00 = vacuum_pair(params)
    if n and l:
        raise ValueError("closed forms exist for Psi_{n,0} and Psi_{0,l} only")
    if l == 0:
        c = params.alphap.conjugate() ** n / math.sqrt(math.factorial(n))
        return _binomial_power(1j, n, psi00).scale(c)
    c = (1j * params.alpha.conjugate()) ** l / math.sqrt(math.factorial(l))
    return _binomial_power(-1j, l, psi00).scale(c)


def _binomial_power(w: complex, n: int, g: PolyGauss) -> PolyGauss:
    """(x + w y)^n times g."""
    coeffs = {(n - j, j): math.comb(n, j) * w ** j for j in range(n + 1)}
    return PolyGauss(coeffs, g.exponent) * g.coeffs[(0, 0)]


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class GramReport:
    matrix: np.ndarray
    labels: list[str]
    max_residual: float


def biorthogonality_matrix(table: FamilyTable) -> GramReport:
    """Full matrix <Psi_{n,l}, phi_{m,k}> with rows (n,l) and columns (m,k)."""
    G = gram_matrix(table.flat("psi"), table.flat("phi"))
    residual = float(np.max(np.abs(G - np.eye(G.shape[0]))))
    return GramReport(G, table.labels(), residual)


def eigen_residuals(table: FamilyTable) -> dict[str, np.ndarray]:
    """Relative residuals ||N f - eig f|| / ||f|| for the number operators on the families.

    h' = B'A' - 1/2, h = BA - 1/2 act on phi; their adjoints act on Psi.
    """
    ops = build_gll(table.params)
    Ad, Bd, Apd, Bpd = (adjoint(o) for o in ops)
    shape = (table.nmax + 1, table.lmax + 1)
    out = {name: np.zeros(shape) for name in ("h_prime", "h", "h_prime_dag", "h_dag")}
    for n in range(table.nmax + 1):
        for l in range(table.lmax + 1):
            phi, psi = table.phi[n][l], table.psi[n][l]
            checks = {
                "h_prime": (apply_affine(ops.Bp, apply_affine(ops.Ap, phi)), phi, n),
                "h": (apply_affine(ops.B, apply_affine(ops.A, phi)), phi, l),
                # h'^+ = A'^+ B'^+ - 1/2
                "h_prime_dag": (apply_affine(Apd, apply_affine(Bpd, psi)), psi, n),
                "h_dag": (apply_affine(Ad, apply_affine(Bd, psi)), psi, l),
            }
            for name, (number_f, f, eig) in checks.items():
                # (N - 1/2) f - (eig - 1/2) f  ==  N f - eig f
                out[name][n, l] = norm(number_f - f.scale(eig)) / norm(f)
    return out


@dataclass(frozen=True)
class GaussianMultiplier:
    """Multiplication by ``scale * exp(exponent)``; may be unbounded."""

    scale: complex
    exponent: QuadExponent

    def __call__(self, f: PolyGauss) -> PolyGauss:
        return f.times_exp(self.exponent).scale(self.scale)

    def inverse(self) -> "GaussianMultiplier":
        return GaussianMultiplier(1 / self.scale, -self.exponent)

    def compose(self, other: "GaussianMultiplier") -> "GaussianMultiplier":
        return GaussianMultiplier(self.scale * other.scale, self.exponent + other.exponent)

    def is_identity(self, tol: float = 0.0) -> bool:
        return abs(self.scale - 1) <= tol and all(abs(z) <= tol for z in self.exponent.as_tuple())

    def to_json(self) -> dict:
        return {"scale": [self.scale.real, self.scale.imag], "exponent": self.exponent.to_json()}


def _require_standard(params: GLLParams) -> None:
    if not params.standard_couplings:
        raise UnsupportedCouplings("metric operators need alpha = gamma = alpha' = gamma' = 1/sqrt(2)")


def t_phi(params: GLLParams) -> GaussianMultiplier:
    """phi00 / phi00^(0) = sqrt(2 pi) N_phi exp(-k2 x^2/2 + k1 y^2/2)."""
    _require_standard(params)
    return GaussianMultiplier(math.sqrt(2 * math.pi) * NORMALIZATION,
                              QuadExponent(params.k2 / 2, -params.k1 / 2))


def t_psi(params: GLLParams) -> GaussianMultiplier:
    _require_standard(params)
    return GaussianMultiplier(math.sqrt(2 * math.pi) * NORMALIZATION,
                              QuadExponent(-params.k2 / 2, params.k1 / 2))


def s_phi(params: GLLParams) -> GaussianMultiplier:
    """T_phi T_psi^{-1} = (N_phi/N_psi) exp(-k2 x^2 + k1 y^2)."""
    return t_phi(params).compose(t_psi(params).inverse())


def s_psi(params: GLLParams) -> GaussianMultiplier:
    return t_psi(params).compose(t_phi(params).inverse())


def _relative(f: PolyGauss, g: PolyGauss, scale: float | None = None) -> float:
    if scale is None:
        scale = max(norm(f), norm(g))
    return distance(f, g) / scale if scale else distance(f, g)


def random_samples(rng: np.random.Generator, count: int, degree: int,
                   exponent: QuadExponent = SLL_EXPONENT) -> list[PolyGauss]:
    """Random complex polynomials of total degree <= ``degree`` times exp(exponent)."""
    out = []
    for _ in range(count):
        coeffs = {(m, n): complex(rng.normal(), rng.normal())
                  for m in range(degree + 1) for n in range(degree + 1 - m)}
        out.append(PolyGauss(coeffs, exponent))
    return out


@dataclass
class MetricReport:
    t_phi_residual: float
    t_psi_residual: float
    s_phi_residual: float
    s_identity_residual: float
    intertwining_residual: float
    number_intertwining_residual: float
    t_phi: GaussianMultiplier
    t_psi: GaussianMultiplier
    s_phi: GaussianMultiplier
    s_psi: GaussianMultiplier

    @property
    def max_residual(self) -> float:
        return max(self.t_phi_residual, self.t_psi_residual, self.s_phi_residual,
                   self.s_identity_residual, self.intertwining_residual,
                   self.number_intertwining_residual)


def metric_ops_check(params: GLLParams, table: FamilyTable, samples: list[PolyGauss] | None = None,
                     seed: int = 0) -> MetricReport:
    """Check the Gaussian multipliers against the ladder-generated families.

    (a) phi_{n,l} = T_phi phi0_{n,l}, Psi_{n,l} = T_psi phi0_{n,l};
    (b) S_phi Psi_{n,l} = phi_{n,l} and S_psi S_phi = 1 on samples;
    (c) B' T_phi = T_phi A0'^+ (and the companion relations) on samples, and
        S_psi N = N^+ S_psi on the family for both modes.
    """
    _require_standard(params)
    if samples is None:
        samples = random_samples(np.random.default_rng(seed), 10, 4)
    tp, tq, sp, sq = t_phi(params), t_psi(params), s_phi(params), s_psi(params)
    sll = sll_family(table.nmax, table.lmax)

    t_phi_res = t_psi_res = s_phi_res = num_res = 0.0
    ops = build_gll(params)
    for n in range(table.nmax + 1):
        for l in range(table.lmax + 1):
            phi, psi, base = table.phi[n][l], table.psi[n][l], sll.phi[n][l]
            t_phi_res = max(t_phi_res, _relative(phi, tp(base)))
            t_psi_res = max(t_psi_res, _relative(psi, tq(base)))
            s_phi_res = max(s_phi_res, _relative(sp(psi), phi))
            mapped = sq(phi)
            for lower, upper, eig in ((ops.A, ops.B, l), (ops.Ap, ops.Bp, n)):
                lhs = sq(apply_affine(upper, apply_affine(lower, phi)))
                rhs = apply_affine(adjoint(lower), apply_affine(adjoint(upper), mapped))
                num_res = max(num_res, _relative(lhs, rhs, max(eig, 1) * norm(mapped)))

    ident = sq.compose(sp)
    s_id_res = max(_relative(ident(f), f, norm(f)) for f in samples)

    ops0 = sll_operators()
    inter = 0.0
    # raising operators of each family intertwine with the SLL raising operators
    pairs = [(ops.Bp, tp, adjoint(ops0.Ap)), (ops.B, tp, adjoint(ops0.A)),
             (adjoint(ops.Ap), tq, adjoint(ops0.Ap)), (adjoint(ops.A), tq, adjoint(ops0.A))]
    for f in samples:
        for raise_op, T, raise0 in pairs:
            rhs = T(apply_affine(raise0, f))
            inter = max(inter, _relative(apply_affine(raise_op, T(f)), rhs, norm(rhs)))
    return MetricReport(t_phi_res, t_psi_res, s_phi_res, s_id_res, inter, num_res, tp, tq, sp, sq)


def riesz_diagnostic(table: FamilyTable, threshold: float = 1 + 1e-6) -> tuple[np.ndarray, str]:
    """r_n = ||phi_{n,n}|| ||Psi_{n,n}|| over the computed window, with a verdict."""
    size = min(table.nmax, table.lmax) + 1
    r = np.array([norm(table.phi[n][n]) * norm(table.psi[n][n]) for n in range(size)])
    verdict = "Riesz-compatible" if float(np.max(r)) <= threshold else "norm growth detected"
    return r, verdict


def norm_products(table: FamilyTable) -> np.ndarray:
    """r_{n,l} = ||phi_{n,l}|| ||Psi_{n,l}|| on the whole table."""
    return np.array([[norm(table.phi[n][l]) * norm(table.psi[n][l])
                      for l in range(table.lmax + 1)] for n in range(table.nmax + 1)])


def monomial_expansion(table: FamilyTable, m: int, n: int) -> tuple[dict[tuple[int, int], complex], float]:
    """Write x^m y^n phi00 as a finite combination of phi_{i,j}, i + j <= m + n.

    The polynomial parts of phi_{i,j} are triangular in total degree, so the
    square system on monomials of degree <= m + n is solved directly.
    Returns the coefficients and the residual norm of the reconstruction.
    """
    d = m + n
    if d > min(table.nmax, table.lmax):
        raise ValueError("family table too small for this degree")
    labels = [(i, j) for i in range(d + 1) for j in range(d + 1 - i)]
    monos = labels
    index = {k: r for r, k in enumerate(monos)}
    mat = np.zeros((len(monos), len(labels)), dtype=complex)
    for col, (i, j) in enumerate(labels):
        for key, v in table.phi[i][j].coeffs.items():
            mat[index[key], col] = v
    phi00 = table.phi[0][0]
    target = PolyGauss({(m, n): 1.0}, phi00.exponent) * phi00.coeffs[(0, 0)]
    rhs = np.zeros(len(monos), dtype=complex)
    for key, v in target.coeffs.items():
        rhs[index[key]] = v
    sol = np.linalg.solve(mat, rhs)
    coeffs = {lab: complex(c) for lab, c in zip(labels, sol)}
    recon = PolyGauss({}, phi00.exponent)
    for (i, j), c in coeffs.items():
        recon = recon + table.phi[i][j].scale(c)
    return coeffs, distance(recon, target)
