"""First-order differential operators with affine coefficients.

An :class:`AffineOp` is ``c0 + cx*x + cy*y + cdx*d/dx + cdy*d/dy``.  Such
operators map :class:`~pseudobosons.polygauss.PolyGauss` into itself and the
commutator of two of them is a multiple of the identity, so the whole
commutation algebra reduces to coefficient arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange
from .polygauss import PolyGauss, _as_finite_complex

_FIELDS = ("c0", "cx", "cy", "cdx", "cdy")


@dataclass(frozen=True)
class AffineOp:
    c0: complex = 0j
    cx: complex = 0j
    cy: complex = 0j
    cdx: complex = 0j
    cdy: complex = 0j

    def __post_init__(self):
        for name in _FIELDS:
            object.__setattr__(self, name, _as_finite_complex(getattr(self, name), name))

    def as_tuple(self) -> tuple[complex, ...]:
        return tuple(getattr(self, name) for name in _FIELDS)

    def vector(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=complex)

    def __add__(self, other: "AffineOp") -> "AffineOp":
        if isinstance(other, (int, float, complex)):
            return replace(self, c0=self.c0 + other)
        if not isinstance(other, AffineOp):
            return NotImplemented
        return AffineOp(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    __radd__ = __add__

    def __neg__(self) -> "AffineOp":
        return AffineOp(*(-a for a in self.as_tuple()))

    def __sub__(self, other) -> "AffineOp":
        return self + (-other)

    def __rsub__(self, other) -> "AffineOp":
        return (-self) + other

    def __mul__(self, s) -> "AffineOp":
        if not isinstance(s, (int, float, complex, np.number)):
            return NotImplemented
        return AffineOp(*(s * a for a in self.as_tuple()))

    __rmul__ = __mul__

    def __call__(self, f: PolyGauss) -> PolyGauss:
        return apply_affine(self, f)

    def adjoint(self) -> "AffineOp":
        return adjoint(self)

    def to_json(self) -> list:
        return [[a.real, a.imag] for a in self.as_tuple()]

    @classmethod
    def from_json(cls, data) -> "AffineOp":
        return cls(*(complex(re, im) for re, im in data))


ONE = AffineOp(c0=1)
X = AffineOp(cx=1)
Y = AffineOp(cy=1)
DX = AffineOp(cdx=1)
DY = AffineOp(cdy=1)
# momenta, hbar = 1
PX = AffineOp(cdx=-1j)
PY = AffineOp(cdy=-1j)


def apply_affine(L: AffineOp, f: PolyGauss) -> PolyGauss:
    """Exact action of ``L`` on ``f``."""
    arrays = []
    if L.c0:
        arrays.append(f.scale(L.c0).array)
    if L.cx:
        arrays.append(f.mul_x().array * L.cx)
    if L.cy:
        arrays.append(f.mul_y().array * L.cy)
    if L.cdx:
        arrays.append(f.ddx().array * L.cdx)
    if L.cdy:
        arrays.append(f.ddy().array * L.cdy)
    if not arrays:
        return PolyGauss({}, f.exponent, f.degree_cap)
    rows = max(a.shape[0] for a in arrays)
    cols = max(a.shape[1] for a in arrays)
    out = np.zeros((rows, cols), dtype=complex)
    for a in arrays:
        out[: a.shape[0], : a.shape[1]] += a
    return PolyGauss.from_array(out, f.exponent, f.degree_cap)


def apply_sequence(ops: Sequence[AffineOp], f: PolyGauss) -> PolyGauss:
    """Apply a product of operators, rightmost first: ops = [L1, L2] gives L1 L2 f."""
    for L in reversed(ops):
        f = apply_affine(L, f)
    return f


def commutator_scalar(L1: AffineOp, L2: AffineOp) -> complex:
    """[L1, L2], which for affine operators is a multiple of the identity."""
    return (L1.cdx * L2.cx - L1.cx * L2.cdx) + (L1.cdy * L2.cy - L1.cy * L2.cdy)


def adjoint(L: AffineOp) -> AffineOp:
    """Formal adjoint: multiplication parts conjugate, derivative parts flip sign."""
    return AffineOp(L.c0.conjugate(), L.cx.conjugate(), L.cy.conjugate(),
                    -L.cdx.conjugate(), -L.cdy.conjugate())


def coefficient_distance(L1: AffineOp, L2: AffineOp) -> float:
    return float(np.max(np.abs(L1.vector() - L2.vector())))


@dataclass
class CommutationTable:
    """Expected commutators between indexed operators, and what was found.

    ``pairs`` holds (i, j, expected) meaning [ops[i], ops[j]] = expected.
    ``report`` is filled by :func:`verify_commutation_table` with
    (computed, residual) per pair.
    """

    pairs: list[tuple[int, int, complex]]
    report: list[tuple[complex, float]] = field(default_factory=list)
    labels: list[str] | None = None

    @property
    def max_residual(self) -> float:
        return max((r for _, r in self.report), default=0.0)

    def rows(self) -> list[dict]:
        out = []
        for (i, j, expected), (computed, residual) in zip(self.pairs, self.report):
            name = (f"[{self.labels[i]},{self.labels[j]}]" if self.labels
                    else f"[{i},{j}]")
            out.append({"pair": name, "expected": expected, "computed": computed,
                        "residual": residual})
        return out


def verify_commutation_table(ops: Sequence[AffineOp], expected: CommutationTable) -> CommutationTable:
    report = []
    for i, j, value in expected.pairs:
        if not (0 <= i < len(ops) and 0 <= j < len(ops)):
            raise IndexOutOfRange(f"pair ({i}, {j}) out of range for {len(ops)} operators")
        computed = commutator_scalar(ops[i], ops[j])
        report.append((computed, abs(computed - complex(value))))
    return CommutationTable(list(expected.pairs), report, expected.labels)


def pseudo_boson_table(labels: Sequence[str] = ("a1", "b1", "a2", "b2"),
                       with_adjoints: bool = False) -> CommutationTable:
    """Relations [a_j, b_j] = 1 with all cross-mode commutators zero.

    Operators are indexed (a1, b1, a2, b2).  With ``with_adjoints`` the list is
    expected to be extended by (a1^+, b1^+, a2^+, b2^+) at indices 4..7 and
    every cross-mode pair x1# , x2# is included.
    """
    pairs = [(0, 1, 1.0), (2, 3, 1.0),
             (0, 2, 0.0), (0, 3, 0.0), (1, 2, 0.0), (1, 3, 0.0)]
    labels = list(labels)
    if with_adjoints:
        labels += [f"{name}+" for name in labels[:4]]
        mode1, mode2 = (0, 1, 4, 5), (2, 3, 6, 7)
        pairs = [(0, 1, 1.0), (2, 3, 1.0)]
        pairs += [(i, j, 0.0) for i in mode1 for j in mode2]
    return CommutationTable(pairs, labels=labels)


def canonical_pair_table(labels: Sequence[str] = ("Q", "P", "Q'", "P'")) -> CommutationTable:
    """[Q, P] = [Q', P'] = i with the four mixed commutators zero."""
    pairs = [(0, 1, 1j), (2, 3, 1j), (0, 3, 0.0), (2, 1, 0.0), (0, 2, 0.0), (1, 3, 0.0)]
    return CommutationTable(pairs, labels=list(labels))
