"""
Polynomial times complex Gaussian functions of two real variables.

A :class:`PolyGauss` value is

    f(x, y) = sum_{m,n} c_{mn} x^m y^n * exp(-qxx x^2 - qyy y^2 - qxy x y + lx x + ly y + c)

with finitely many complex coefficients.  The class is closed under
multiplication by x, y, differentiation, conjugation and multiplication by
another such function, and its inner products reduce to Gaussian moments
which are evaluated exactly (up to rounding) by a recurrence.

Inner products are conjugate-linear in the first slot.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import DegreeCapExceeded, NonFinite, NotIntegrable

DEFAULT_DEGREE_CAP = 64

# Coefficients with modulus at or below this are dropped.  Only exact zeros by default.
PRUNE_THRESHOLD = 0.0

_EXPONENT_FIELDS = ("qxx", "qyy", "qxy", "lx", "ly", "c")


def _as_finite_complex(value, what: str) -> complex:
    try:
        z = complex(value)
    except (TypeError, ValueError) as exc:
        raise NonFinite(f"{what} is not a number: {value!r}") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFinite(f"{what} is not finite: {value!r}")
    return z


@dataclass(frozen=True)
class QuadExponent:
    """exp(-qxx x^2 - qyy y^2 - qxy xy + lx x + ly y + c)."""

    qxx: complex = 0j
    qyy: complex = 0j
    qxy: complex = 0j
    lx: complex = 0j
    ly: complex = 0j
    c: complex = 0j

    def __post_init__(self):
        for name in _EXPONENT_FIELDS:
            object.__setattr__(self, name, _as_finite_complex(getattr(self, name), name))

    def as_tuple(self) -> tuple[complex, ...]:
        return tuple(getattr(self, name) for name in _EXPONENT_FIELDS)

    def matrix(self) -> np.ndarray:
        """Symmetric M with the quadratic part equal to -[x y] M [x y]^T."""
        return np.array([[self.qxx, self.qxy / 2], [self.qxy / 2, self.qyy]], dtype=complex)

    def linear(self) -> np.ndarray:
        return np.array([self.lx, self.ly], dtype=complex)

    def is_integrable(self) -> bool:
        a, b, d = self.qxx.real, self.qxy.real / 2, self.qyy.real
        return (a + d) > 0 and (a * d - b * b) > 0

    def conj(self) -> "QuadExponent":
        return QuadExponent(*(z.conjugate() for z in self.as_tuple()))

    def __add__(self, other: "QuadExponent") -> "QuadExponent":
        if not isinstance(other, QuadExponent):
            return NotImplemented
        return QuadExponent(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def __neg__(self) -> "QuadExponent":
        return QuadExponent(*(-z for z in self.as_tuple()))

    def __sub__(self, other: "QuadExponent") -> "QuadExponent":
        return self + (-other)

    def shifted(self, dc: complex) -> "QuadExponent":
        """Same exponent with ``dc`` added to the constant term."""
        return QuadExponent(self.qxx, self.qyy, self.qxy, self.lx, self.ly, self.c + dc)

    def value(self, x, y):
        return (-self.qxx * x * x - self.qyy * y * y - self.qxy * x * y
                + self.lx * x + self.ly * y + self.c)

    def isclose(self, other: "QuadExponent", tol: float = 1e-12) -> bool:
        return all(abs(a - b) <= tol for a, b in zip(self.as_tuple(), other.as_tuple()))

    def to_json(self) -> list:
        return [[z.real, z.imag] for z in self.as_tuple()]

    @classmethod
    def from_json(cls, data) -> "QuadExponent":
        return cls(*(complex(re, im) for re, im in data))


ZERO_EXPONENT = QuadExponent()


# ---------------------------------------------------------------------------
# Gaussian integrals and moments
# ---------------------------------------------------------------------------

def _check_integrable(e: QuadExponent) -> None:
    if not e.is_integrable():
        raise NotIntegrable(
            f"real part of the quadratic form is not positive definite: "
            f"qxx={e.qxx}, qyy={e.qyy}, qxy={e.qxy}")


class _QuadraticForm:
    """Pre-factored data for exp(-x^T M x + L^T x) with a fixed complex M.

    ``log_sqrt_det`` is log det(M)^{1/2} on the branch obtained from
    M = Mr^{1/2} (I + iK) Mr^{1/2}, K real symmetric:  the square root is
    sqrt(det Mr) * prod_k sqrt(1 + i lambda_k) with principal roots of each
    factor.  Every factor has real part one, so the branch is continuous on
    the whole integrable set.
    """

    def __init__(self, M: np.ndarray):
        Mr, Mi = M.real, M.imag
        w, V = np.linalg.eigh(Mr)
        if np.any(w <= 0):
            raise NotIntegrable("real part of the quadratic form is not positive definite")
        r_inv_sqrt = (V / np.sqrt(w)) @ V.T
        K = r_inv_sqrt @ Mi @ r_inv_sqrt
        lam = np.linalg.eigvalsh((K + K.T) / 2)
        self.log_sqrt_det = 0.5 * float(np.sum(np.log(w))) + 0.5 * complex(np.sum(np.log(1 + 1j * lam)))
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        self.Minv = np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=complex) / det
        # covariance-like matrix of the (complex) Gaussian
        self.S = 0.5 * self.Minv

    def log_base(self, lx, ly, c=0j):
        """log of pi det(M)^{-1/2} exp(L^T M^{-1} L / 4 + c); broadcasts over lx, ly."""
        Mi = self.Minv
        quad = Mi[0, 0] * lx * lx + 2 * Mi[0, 1] * lx * ly + Mi[1, 1] * ly * ly
        return math.log(math.pi) - self.log_sqrt_det + 0.25 * quad + c

    def moment_ratios(self, lx, ly, pmax: int, qmax: int) -> np.ndarray:
        """Normalized moments E[x^p y^q] for p <= pmax, q <= qmax.

        Uses E[x_i h] = m_i E[h] + sum_j S_ij E[d_j h] with mean m = M^{-1} L / 2.
        The result has shape (pmax+1, qmax+1) + broadcast(lx, ly).shape.
        """
        lx, ly = np.broadcast_arrays(np.asarray(lx, dtype=complex), np.asarray(ly, dtype=complex))
        mx = self.S[0, 0] * lx + self.S[0, 1] * ly
        my = self.S[1, 0] * lx + self.S[1, 1] * ly
        sxx, sxy, syy = self.S[0, 0], self.S[0, 1], self.S[1, 1]
        R = np.empty((pmax + 1, qmax + 1) + lx.shape, dtype=complex)
        R[0, 0] = 1.0
        for p in range(pmax):
            R[p + 1, 0] = mx * R[p, 0]
            if p:
                R[p + 1, 0] += sxx * p * R[p - 1, 0]
        for q in range(qmax):
            for p in range(pmax + 1):
                acc = my * R[p, q]
                if p:
                    acc = acc + sxy * p * R[p - 1, q]
                if q:
                    acc = acc + syy * q * R[p, q - 1]
                R[p, q + 1] = acc
        return R


def gaussian_base_integral(e: QuadExponent) -> complex:
    """Integral of exp(e) over the plane."""
    _check_integrable(e)
    form = _QuadraticForm(e.matrix())
    return cmath.exp(form.log_base(e.lx, e.ly, e.c))


def gaussian_moments(e: QuadExponent, pmax: int, qmax: int) -> np.ndarray:
    """Table of integrals of x^p y^q exp(e), p <= pmax, q <= qmax."""
    _check_integrable(e)
    form = _QuadraticForm(e.matrix())
    R = form.moment_ratios(e.lx, e.ly, pmax, qmax)
    return R * cmath.exp(form.log_base(e.lx, e.ly, e.c))


# ---------------------------------------------------------------------------
# PolyGauss
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PolyGauss:
    """Sparse polynomial in (x, y) times exp of a :class:`QuadExponent`.

    ``coeffs`` maps (m, n) to the coefficient of x^m y^n.  Zero coefficients
    are removed on construction, so two values built from the same data have
    identical ``coeffs``.
    """

    coeffs: Mapping[tuple[int, int], complex]
    exponent: QuadExponent = ZERO_EXPONENT
    degree_cap: int = field(default=DEFAULT_DEGREE_CAP, repr=False)

    def __post_init__(self):
        if not isinstance(self.exponent, QuadExponent):
            object.__setattr__(self, "exponent", QuadExponent(*self.exponent))
        clean = {}
        for key, value in dict(self.coeffs).items():
            m, n = (int(k) for k in key)
            if m < 0 or n < 0:
                raise ValueError(f"negative monomial power {key}")
            z = _as_finite_complex(value, f"coefficient {key}")
            if abs(z) > PRUNE_THRESHOLD:
                clean[(m, n)] = z
        degree = max((m + n for m, n in clean), default=0)
        if degree > self.degree_cap:
            raise DegreeCapExceeded(f"total degree {degree} exceeds cap {self.degree_cap}")
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_array(cls, arr: np.ndarray, exponent: QuadExponent,
                   degree_cap: int = DEFAULT_DEGREE_CAP) -> "PolyGauss":
        arr = np.asarray(arr, dtype=complex)
        if not np.all(np.isfinite(arr)):
            raise NonFinite("coefficient array contains NaN or Inf")
        if not isinstance(exponent, QuadExponent):
            exponent = QuadExponent(*exponent)
        idx = np.argwhere(np.abs(arr) > PRUNE_THRESHOLD)  # row-major, so already sorted
        if len(idx) and int(idx.sum(axis=1).max()) > degree_cap:
            raise DegreeCapExceeded(f"total degree {int(idx.sum(axis=1).max())} exceeds cap {degree_cap}")
        vals = arr[idx[:, 0], idx[:, 1]].tolist()
        # already validated and pruned: skip the per-coefficient checks in __post_init__
        out = object.__new__(cls)
        object.__setattr__(out, "coeffs", dict(zip(map(tuple, idx.tolist()), vals)))
        object.__setattr__(out, "exponent", exponent)
        object.__setattr__(out, "degree_cap", degree_cap)
        # seed the cached dense form so the next primitive move skips the rebuild
        if len(idx):
            mx, nx = idx.max(axis=0)
            dense = np.zeros((mx + 1, nx + 1), dtype=complex)
            dense[idx[:, 0], idx[:, 1]] = vals
        else:
            dense = np.zeros((1, 1), dtype=complex)
        dense.flags.writeable = False
        out.__dict__["array"] = dense
        return out

    @classmethod
    def gaussian(cls, exponent: QuadExponent, scale: complex = 1.0) -> "PolyGauss":
        return cls({(0, 0): scale}, exponent)

    def _like(self, arr: np.ndarray, exponent: QuadExponent | None = None) -> "PolyGauss":
        return PolyGauss.from_array(arr, self.exponent if exponent is None else exponent,
                                    self.degree_cap)

    # -- structure --------------------------------------------------------------

    @cached_property
    def array(self) -> np.ndarray:
        """Dense coefficient array a[m, n]; read-only."""
        if not self.coeffs:
            arr = np.zeros((1, 1), dtype=complex)
        else:
            mx = max(m for m, _ in self.coeffs)
            nx = max(n for _, n in self.coeffs)
            arr = np.zeros((mx + 1, nx + 1), dtype=complex)
            for (m, n), v in self.coeffs.items():
                arr[m, n] = v
        arr.flags.writeable = False
        return arr

    @property
    def degree(self) -> int:
        return max((m + n for m, n in self.coeffs), default=0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_abs_coeff(self) -> float:
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    # -- primitive moves ---------------------------------------------------------

    def scale(self, s: complex) -> "PolyGauss":
        s = _as_finite_complex(s, "scale")
        return self._like(self.array * s)

    def mul_x(self) -> "PolyGauss":
        a = self.array
        out = np.zeros((a.shape[0] + 1, a.shape[1]), dtype=complex)
        out[1:] = a
        return self._like(out)

    def mul_y(self) -> "PolyGauss":
        a = self.array
        out = np.zeros((a.shape[0], a.shape[1] + 1), dtype=complex)
        out[:, 1:] = a
        return self._like(out)

    def _derivative(self, axis: int) -> "PolyGauss":
        a = self.array
        e = self.exponent
        out = np.zeros((a.shape[0] + 1, a.shape[1] + 1), dtype=complex)
        # d/dx of the polynomial
        if axis == 0:
            if a.shape[0] > 1:
                out[: a.shape[0] - 1, : a.shape[1]] += a[1:] * np.arange(1, a.shape[0])[:, None]
            sq, cross, lin = -2 * e.qxx, -e.qxy, e.lx
            out[1:, : a.shape[1]] += sq * a
            out[: a.shape[0], 1:] += cross * a
        else:
            if a.shape[1] > 1:
                out[: a.shape[0], : a.shape[1] - 1] += a[:, 1:] * np.arange(1, a.shape[1])[None, :]
            sq, cross, lin = -2 * e.qyy, -e.qxy, e.ly
            out[: a.shape[0], 1:] += sq * a
            out[1:, : a.shape[1]] += cross * a
        out[: a.shape[0], : a.shape[1]] += lin * a
        return self._like(out)

    def ddx(self) -> "PolyGauss":
        return self._derivative(0)

    def ddy(self) -> "PolyGauss":
        return self._derivative(1)

    def conj(self) -> "PolyGauss":
        return self._like(np.conj(self.array), self.exponent.conj())

    def times_exp(self, delta: QuadExponent) -> "PolyGauss":
        """Multiply by exp(delta), i.e. add ``delta`` to the exponent."""
        return PolyGauss(self.coeffs, self.exponent + delta, self.degree_cap)

    def with_exponent(self, exponent: QuadExponent) -> "PolyGauss":
        return PolyGauss(self.coeffs, exponent, self.degree_cap)

    # -- arithmetic --------------------------------------------------------------

    def _check_same_exponent(self, other: "PolyGauss") -> None:
        if self.exponent != other.exponent:
            raise ValueError("PolyGauss addition needs identical exponents")

    def __add__(self, other: "PolyGauss") -> "PolyGauss":
        if not isinstance(other, PolyGauss):
            return NotImplemented
        self._check_same_exponent(other)
        a, b = self.array, other.array
        out = np.zeros((max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1])), dtype=complex)
        out[: a.shape[0], : a.shape[1]] += a
        out[: b.shape[0], : b.shape[1]] += b
        return self._like(out)

    def __neg__(self) -> "PolyGauss":
        return self.scale(-1)

    def __sub__(self, other: "PolyGauss") -> "PolyGauss":
        if not isinstance(other, PolyGauss):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "PolyGauss":
        if isinstance(other, PolyGauss):
            return multiply(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other) -> "PolyGauss":
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other) -> "PolyGauss":
        return self.scale(1 / complex(other))

    def isclose(self, other: "PolyGauss", tol: float = 1e-12) -> bool:
        if not self.exponent.isclose(other.exponent, tol):
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(self.coeffs.get(k, 0) - other.coeffs.get(k, 0)) <= tol for k in keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyGauss):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def __call__(self, x, y):
        return evaluate(self, x, y)

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "coeffs": [[m, n, [v.real, v.imag]] for (m, n), v in self.coeffs.items()],
            "exponent": self.exponent.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PolyGauss":
        coeffs = {(int(m), int(n)): complex(re, im) for m, n, (re, im) in data["coeffs"]}
        return cls(coeffs, QuadExponent.from_json(data["exponent"]))


def make_polygauss(coeffs: Mapping[tuple[int, int], complex], exponent: QuadExponent,
                   degree_cap: int = DEFAULT_DEGREE_CAP) -> PolyGauss:
    return PolyGauss(coeffs, exponent, degree_cap)


def algebra_apply(kind: str, f: PolyGauss, scalar: complex | None = None) -> PolyGauss:
    """Apply one primitive move by name: scale, mul_x, mul_y, ddx, ddy, conj."""
    if kind == "scale":
        if scalar is None:
            raise ValueError("scale needs a scalar")
        return f.scale(scalar)
    moves = {"mul_x": f.mul_x, "mul_y": f.mul_y, "ddx": f.ddx, "ddy": f.ddy, "conj": f.conj}
    try:
        return moves[kind]()
    except KeyError:
        raise ValueError(f"unknown primitive {kind!r}") from None


def multiply(f: PolyGauss, g: PolyGauss) -> PolyGauss:
    """Pointwise product; polynomials convolve and exponents add."""
    a, b = f.array, g.array
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=complex)
    for (m, n), v in g.coeffs.items():
        out[m: m + a.shape[0], n: n + a.shape[1]] += v * a
    return PolyGauss.from_array(out, f.exponent + g.exponent, min(f.degree_cap, g.degree_cap))


def evaluate(f: PolyGauss, x, y):
    """Pointwise value of ``f``; broadcasts over array arguments."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = np.zeros(np.broadcast(x, y).shape, dtype=complex)
    for (m, n), v in f.coeffs.items():
        total = total + v * x**m * y**n
    out = total * np.exp(f.exponent.value(x, y))
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# inner products
# ---------------------------------------------------------------------------

def _support(fs: Iterable[PolyGauss]) -> list[tuple[int, int]]:
    keys = set()
    for f in fs:
        keys.update(f.coeffs)
    return sorted(keys) or [(0, 0)]


def _pairing_matrix(exponent: QuadExponent, left: list[tuple[int, int]],
                    right: list[tuple[int, int]]) -> np.ndarray:
    """H[i, j] = integral of x^(m_i+m_j) y^(n_i+n_j) exp(exponent)."""
    _check_integrable(exponent)
    li = np.array(left)
    ri = np.array(right)
    pmax = int(li[:, 0].max() + ri[:, 0].max())
    qmax = int(li[:, 1].max() + ri[:, 1].max())
    mom = gaussian_moments(exponent, pmax, qmax)
    return mom[li[:, 0][:, None] + ri[:, 0][None, :], li[:, 1][:, None] + ri[:, 1][None, :]]


def inner_product(f: PolyGauss, g: PolyGauss) -> complex:
    """Integral of conj(f) g over the plane."""
    exponent = f.exponent.conj() + g.exponent
    left, right = list(f.coeffs) or [(0, 0)], list(g.coeffs) or [(0, 0)]
    H = _pairing_matrix(exponent, left, right)
    a = np.array([f.coeffs.get(k, 0) for k in left], dtype=complex)
    b = np.array([g.coeffs.get(k, 0) for k in right], dtype=complex)
    return complex(np.conj(a) @ H @ b)


def gram_matrix(fs: list[PolyGauss], gs: list[PolyGauss]) -> np.ndarray:
    """G[i, j] = <fs[i], gs[j]>.

    When all ``fs`` share one exponent and all ``gs`` share another, the
    moment table is built once; otherwise falls back to pairwise products.
    """
    if not fs or not gs:
        return np.zeros((len(fs), len(gs)), dtype=complex)
    ef, eg = fs[0].exponent, gs[0].exponent
    if any(f.exponent != ef for f in fs) or any(g.exponent != eg for g in gs):
        return np.array([[inner_product(f, g) for g in gs] for f in fs], dtype=complex)
    left, right = _support(fs), _support(gs)
    H = _pairing_matrix(ef.conj() + eg, left, right)
    A = np.array([[f.coeffs.get(k, 0) for k in left] for f in fs], dtype=complex)
    B = np.array([[g.coeffs.get(k, 0) for k in right] for g in gs], dtype=complex)
    return np.conj(A) @ H @ B.T


def norm(f: PolyGauss) -> float:
    return math.sqrt(max(inner_product(f, f).real, 0.0))


def distance(f: PolyGauss, g: PolyGauss, exponent_tol: float = 1e-14) -> float:
    """||f - g||.

    Exponents agreeing entrywise within ``exponent_tol`` (rounding left over
    from composing Gaussian factors) are identified and the difference is
    taken coefficient-wise; otherwise the norm identity
    ||f||^2 + ||g||^2 - 2 Re<f, g> is used, which loses about half the digits.
    """
    if f.exponent.isclose(g.exponent, exponent_tol):
        return norm(f - g.with_exponent(f.exponent))
    sq = norm(f) ** 2 + norm(g) ** 2 - 2 * inner_product(f, g).real
    return math.sqrt(max(sq, 0.0))


def distance_squared_cross(f: PolyGauss, g: PolyGauss) -> float:
    """||f||^2 + ||g||^2 - 2 Re<f, g> without clipping (may dip below zero by rounding)."""
    return norm(f) ** 2 + norm(g) ** 2 - 2 * inner_product(f, g).real
