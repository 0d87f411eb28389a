"""Bicoherent states of the generalized Landau model.

Closed-form simultaneous eigenvectors

    phi~(z, z') = N_A exp(-(1+2k2) x^2/4 - (1-2k1) y^2/4 + ((z'+iz) x + (z+iz') y)/sqrt 2)
    Psi~(z, z') = N_B exp(-(1-2k2) x^2/4 - (1+2k1) y^2/4 + ((z'+iz) x + (z+iz') y)/sqrt 2)

of (A, A') and (B^+, B'^+), with N_A = N_B = [(2 pi)^-1 exp(-|z - i conj(z')|^2)]^(1/2).
Both quadratic terms decay; the y^2 sign printed in some sources makes the
function non-normalizable and is not used.

The resolution of the identity is tested in weak form,

    <f, g>  ~  (1/pi^2) sum_nodes w <f, phi~(z, z')> <Psi~(z, z'), g>,

with the inner pairings evaluated exactly and only the four real
dimensions of (z, z') handled by tensor Gauss-Hermite quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .affine import adjoint, apply_affine
from .errors import GridTooCoarse, InvalidParams, TruncationTooLarge, UnsupportedCouplings
from .gll import (FamilyTable, GLLParams, build_gll, phi_exponent, psi_exponent)
from .polygauss import PolyGauss, QuadExponent, _QuadraticForm, _check_integrable, distance, inner_product, norm

SQRT2 = math.sqrt(2)
_CHUNK = 1 << 16


def _require_standard(params: GLLParams) -> None:
    if not params.standard_couplings:
        raise UnsupportedCouplings("bicoherent states need alpha = alpha' = gamma = gamma' = 1/sqrt(2)")


def linear_terms(z, zp):
    """Coefficients of x and y in the exponent of both bicoherent states."""
    return (zp + 1j * z) / SQRT2, (z + 1j * zp) / SQRT2


def log_normalization(z, zp):
    """log N_A = log N_B = -(log(2 pi) + |z - i conj(z')|^2) / 2."""
    w = z - 1j * np.conj(zp)
    return -0.5 * (math.log(2 * math.pi) + np.abs(w) ** 2)


@dataclass(frozen=True)
class BicoherentPair:
    params: GLLParams
    z: complex
    zp: complex
    phi_t: PolyGauss
    psi_t: PolyGauss

    def overlap(self) -> complex:
        """<Psi~, phi~>, equal to one by construction."""
        return inner_product(self.psi_t, self.phi_t)

    def eigen_residuals(self) -> dict[str, float]:
        """Relative residuals of A phi~ = z phi~, A' phi~ = z' phi~, B^+ Psi~ = z Psi~, B'^+ Psi~ = z' Psi~."""
        ops = build_gll(self.params)
        pf, ps = norm(self.phi_t), norm(self.psi_t)
        return {
            "A": norm(apply_affine(ops.A, self.phi_t) - self.phi_t.scale(self.z)) / pf,
            "A'": norm(apply_affine(ops.Ap, self.phi_t) - self.phi_t.scale(self.zp)) / pf,
            "B+": norm(apply_affine(adjoint(ops.B), self.psi_t) - self.psi_t.scale(self.z)) / ps,
            "B'+": norm(apply_affine(adjoint(ops.Bp), self.psi_t) - self.psi_t.scale(self.zp)) / ps,
        }


def bicoherent_pair(params: GLLParams, z: complex, zp: complex) -> BicoherentPair:
    _require_standard(params)
    z, zp = complex(z), complex(zp)
    if not all(math.isfinite(v) for v in (z.real, z.imag, zp.real, zp.imag)):
        raise InvalidParams("z and z' must be finite")
    lx, ly = linear_terms(z, zp)
    c = float(log_normalization(z, zp))
    ef, es = phi_exponent(params), psi_exponent(params)
    phi_t = PolyGauss.gaussian(QuadExponent(ef.qxx, ef.qyy, 0, lx, ly, c))
    psi_t = PolyGauss.gaussian(QuadExponent(es.qxx, es.qyy, 0, lx, ly, c))
    return BicoherentPair(params, z, zp, phi_t, psi_t)


# ---------------------------------------------------------------------------
# truncated series coherent states
# ---------------------------------------------------------------------------

def _series_weights(z1: complex, z2: complex, N: int) -> np.ndarray:
    """e^{-(|z1|^2+|z2|^2)/2} z1^n z2^l / sqrt(n! l!), built incrementally."""
    c1 = np.empty(N + 1, dtype=complex)
    c2 = np.empty(N + 1, dtype=complex)
    c1[0] = math.exp(-abs(z1) ** 2 / 2)
    c2[0] = math.exp(-abs(z2) ** 2 / 2)
    for n in range(1, N + 1):
        c1[n] = c1[n - 1] * z1 / math.sqrt(n)
        c2[n] = c2[n - 1] * z2 / math.sqrt(n)
    return np.outer(c1, c2)


def series_coherent(table: FamilyTable, z1: complex, z2: complex, N: int,
                    which: str = "phi") -> PolyGauss:
    """Truncation n, l <= N of the coherent-state series over the family."""
    if N > min(table.nmax, table.lmax) or N < 0:
        raise TruncationTooLarge(f"N={N} exceeds the family table ({table.nmax}, {table.lmax})")
    rows = table.phi if which == "phi" else table.psi
    weights = _series_weights(complex(z1), complex(z2), N)
    total = PolyGauss({}, rows[0][0].exponent)
    for n in range(N + 1):
        for l in range(N + 1):
            total = total + rows[n][l].scale(weights[n, l])
    return total


MAPPINGS = {
    # (z1, z2) as functions of (z, z'): A' lowers n (eigenvalue z1), A lowers l (eigenvalue z2)
    "z1=zp,z2=z": lambda z, zp: (zp, z),
    "z1=z,z2=zp": lambda z, zp: (z, zp),
}


def series_vs_closed(table: FamilyTable, z: complex, zp: complex, N: int) -> dict[str, dict[str, float]]:
    """Distance between the truncated series state and phi~(z, z') under both index pairings.

    ``distance`` is ||series - phi~||; ``phase_free`` minimizes over a global phase,
    sqrt(||s||^2 + ||phi~||^2 - 2 |<s, phi~>|).
    """
    closed = bicoherent_pair(table.params, z, zp).phi_t
    out = {}
    for name, mapping in MAPPINGS.items():
        z1, z2 = mapping(complex(z), complex(zp))
        s = series_coherent(table, z1, z2, N)
        ns, nc = norm(s), norm(closed)
        ov = inner_product(s, closed)
        out[name] = {
            "distance": distance(s, closed),
            "phase_free": math.sqrt(max(ns ** 2 + nc ** 2 - 2 * abs(ov), 0.0)),
            "phase": math.atan2(ov.imag, ov.real),
        }
    return out


# ---------------------------------------------------------------------------
# weak resolution of the identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureGrid4D:
    """Tensor Gauss-Hermite rule on (Re z, Im z, Re z', Im z') with v = scale * t."""

    nodes: int = 24
    scale: float = 1.0

    def __post_init__(self):
        if int(self.nodes) != self.nodes or self.nodes < 8:
            raise ValueError("nodes-per-axis must be an integer >= 8")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive")

    @property
    def total_nodes(self) -> int:
        return self.nodes ** 4

    def axis(self) -> tuple[np.ndarray, np.ndarray]:
        t, w = np.polynomial.hermite.hermgauss(self.nodes)
        return t, w

    def points(self):
        """Flattened (z, z', log_weight) arrays in C order over the four axes.

        log_weight already contains |t|^2 so that sum(exp(log F + log_weight))
        approximates the integral of F dv.
        """
        t, w = self.axis()
        T1, T2, T3, T4 = np.meshgrid(t, t, t, t, indexing="ij")
        W = np.log(w)
        W1, W2, W3, W4 = np.meshgrid(W, W, W, W, indexing="ij")
        s = self.scale
        z = s * (T1 + 1j * T2)
        zp = s * (T3 + 1j * T4)
        logw = (W1 + W2 + W3 + W4) + (T1**2 + T2**2 + T3**2 + T4**2) + 4 * math.log(s)
        return z.ravel(), zp.ravel(), logw.ravel()


class _Pairing:
    """Vectorized <f, G(z, z')> or <G(z, z'), g> where G varies only in its linear terms."""

    def __init__(self, fixed: PolyGauss, state_quad: QuadExponent, fixed_on_left: bool):
        self.fixed_on_left = fixed_on_left
        fe = fixed.exponent.conj() if fixed_on_left else fixed.exponent
        se = state_quad if fixed_on_left else state_quad.conj()
        quad = QuadExponent(fe.qxx + se.qxx, fe.qyy + se.qyy, fe.qxy + se.qxy)
        _check_integrable(quad)
        self.form = _QuadraticForm(quad.matrix())
        self.fixed_lx, self.fixed_ly, self.fixed_c = fe.lx, fe.ly, fe.c
        self.keys = list(fixed.coeffs) or [(0, 0)]
        coeffs = np.array([fixed.coeffs.get(k, 0) for k in self.keys], dtype=complex)
        self.coeffs = np.conj(coeffs) if fixed_on_left else coeffs
        self.pmax = max(m for m, _ in self.keys)
        self.qmax = max(n for _, n in self.keys)

    def log_and_poly(self, lx, ly, logn):
        if not self.fixed_on_left:
            lx, ly = np.conj(lx), np.conj(ly)
        Lx = self.fixed_lx + lx
        Ly = self.fixed_ly + ly
        logb = self.form.log_base(Lx, Ly, self.fixed_c + logn)
        R = self.form.moment_ratios(Lx, Ly, self.pmax, self.qmax)
        poly = np.zeros(Lx.shape, dtype=complex)
        for c, (m, n) in zip(self.coeffs, self.keys):
            poly += c * R[m, n]
        return logb, poly


def _roi_sum(params: GLLParams, f: PolyGauss, g: PolyGauss, grid: QuadratureGrid4D) -> complex:
    left = _Pairing(f, phi_exponent(params), fixed_on_left=True)
    right = _Pairing(g, psi_exponent(params), fixed_on_left=False)
    z, zp, logw = grid.points()
    partial = []
    for start in range(0, z.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        zc, zpc = z[sl], zp[sl]
        lx, ly = linear_terms(zc, zpc)
        logn = log_normalization(zc, zpc)
        la, pa = left.log_and_poly(lx, ly, logn)
        lb, pb = right.log_and_poly(lx, ly, logn)
        partial.append(np.sum(np.exp(la + lb + logw[sl]) * pa * pb))
    return complex(np.sum(np.array(partial))) / math.pi ** 2


def weak_resolution_identity(params: GLLParams, f: PolyGauss, g: PolyGauss,
                             grid: QuadratureGrid4D | None = None, tol: float | None = None) -> complex:
    """(1/pi^2) integral of <f, phi~(z,z')> <Psi~(z,z'), g> over C^2.

    With ``tol`` set, the same sum on the next coarser grid (nodes - 4) is
    also computed, and :class:`GridTooCoarse` is raised when the two differ by
    more than 10 * tol * (1 + |I|).
    """
    _require_standard(params)
    grid = grid or QuadratureGrid4D()
    value = _roi_sum(params, f, g, grid)
    if tol is not None and grid.nodes - 4 >= 8:
        coarse = _roi_sum(params, f, g, QuadratureGrid4D(grid.nodes - 4, grid.scale))
        if abs(value - coarse) > 10 * tol * (1 + abs(value)):
            raise GridTooCoarse(f"successive grids differ by {abs(value - coarse):.3e}")
    return value


def series_weak_resolution(table: FamilyTable, f: PolyGauss, g: PolyGauss, N: int,
                           grid: QuadratureGrid4D | None = None) -> complex:
    """Weak identity built from truncated series states phi(z1, z2), Psi(z1, z2).

    <f, phi(z)> and <Psi(z), g> are polynomials in (z1, z2) resp. their
    conjugates times exp(-(|z1|^2+|z2|^2)/2); only the family overlaps are exact.
    """
    if N > min(table.nmax, table.lmax):
        raise TruncationTooLarge(f"N={N} exceeds the family table")
    grid = grid or QuadratureGrid4D()
    cf = np.array([[inner_product(f, table.phi[n][l]) for l in range(N + 1)] for n in range(N + 1)])
    cg = np.array([[inner_product(table.psi[n][l], g) for l in range(N + 1)] for n in range(N + 1)])
    fact = np.array([math.sqrt(math.factorial(n)) for n in range(N + 1)])
    cf = cf / np.outer(fact, fact)
    cg = cg / np.outer(fact, fact)
    z1, z2, logw = grid.points()
    total = 0j
    for start in range(0, z1.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        a, b = z1[sl], z2[sl]
        pa = np.polynomial.polynomial.polyval2d(a, b, cf)
        pb = np.polynomial.polynomial.polyval2d(np.conj(a), np.conj(b), cg)
        total += np.sum(np.exp(-np.abs(a) ** 2 - np.abs(b) ** 2 + logw[sl]) * pa * pb)
    return total / math.pi ** 2
