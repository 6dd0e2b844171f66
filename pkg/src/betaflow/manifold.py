"""Shared geometric primitives: points, symmetric 3x3 metrics, domain labels.

Points on the three-parameter manifold are plain numpy arrays of shape (3,),
ordered (a, b, c); dual coordinates eta use the same convention.  Symmetric
metrics are stored as their six independent entries so symmetry holds by
construction rather than by rounding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularMatrixError


def as_point(x, name: str = "point") -> np.ndarray:
    """Coerce to a finite float array of shape (3,)."""
    p = np.asarray(x, dtype=float)
    if p.shape != (3,):
        raise DomainError(f"{name} must have exactly 3 components, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise DomainError(f"{name} must be finite, got {p.tolist()}")
    return p


@dataclass(frozen=True)
class Metric3:
    """Symmetric 3x3 matrix held as six entries (diagonal d*, off-diagonal o*)."""

    d1: float
    d2: float
    d3: float
    o12: float
    o13: float
    o23: float

    @classmethod
    def from_array(cls, m, rtol: float = 1e-12) -> "Metric3":
        m = np.asarray(m, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"expected a 3x3 array, got shape {m.shape}")
        scale = np.max(np.abs(m))
        if np.max(np.abs(m - m.T)) > rtol * max(scale, 1.0):
            raise ValueError("matrix is not symmetric within tolerance")
        return cls(m[0, 0], m[1, 1], m[2, 2], m[0, 1], m[0, 2], m[1, 2])

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                [self.d1, self.o12, self.o13],
                [self.o12, self.d2, self.o23],
                [self.o13, self.o23, self.d3],
            ]
        )

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return np.array(
            [
                self.d1 * v[0] + self.o12 * v[1] + self.o13 * v[2],
                self.o12 * v[0] + self.d2 * v[1] + self.o23 * v[2],
                self.o13 * v[0] + self.o23 * v[1] + self.d3 * v[2],
            ]
        )

    def max_abs(self) -> float:
        return max(
            abs(self.d1), abs(self.d2), abs(self.d3),
            abs(self.o12), abs(self.o13), abs(self.o23),
        )

    def leading_minors(self) -> tuple[float, float, float]:
        """Leading principal minors; all positive iff positive definite."""
        m1 = self.d1
        m2 = self.d1 * self.d2 - self.o12 * self.o12
        return m1, m2, det3(self)


def det3(m: Metric3) -> float:
    """Determinant by cofactor expansion along the first row."""
    ca = m.d2 * m.d3 - m.o23 * m.o23
    cb = m.o13 * m.o23 - m.o12 * m.d3
    cc = m.o12 * m.o23 - m.d2 * m.o13
    return m.d1 * ca + m.o12 * cb + m.o13 * cc


def invert3(m: Metric3, tol: float | None = None) -> Metric3:
    """Adjugate-over-determinant inverse of a symmetric 3x3 matrix.

    ``tol`` is the singularity threshold on |det|; the default scales with the
    cube of the largest entry so the test is invariant under m -> s*m.
    """
    ca = m.d2 * m.d3 - m.o23 * m.o23
    cb = m.o13 * m.o23 - m.o12 * m.d3
    cc = m.o12 * m.o23 - m.d2 * m.o13
    det = m.d1 * ca + m.o12 * cb + m.o13 * cc
    if tol is None:
        tol = 1e-12 * m.max_abs() ** 3
    if abs(det) <= tol:
        raise SingularMatrixError(f"matrix is singular within tolerance (det={det:.3e})")
    ce = m.o12 * m.o13 - m.d1 * m.o23
    return Metric3(
        d1=ca / det,
        d2=(m.d1 * m.d3 - m.o13 * m.o13) / det,
        d3=(m.d1 * m.d2 - m.o12 * m.o12) / det,
        o12=cb / det,
        o13=cc / det,
        o23=ce / det,
    )


class DomainLabel(str, enum.Enum):
    """Classification of a point relative to the Stirling model's domain."""

    REGULAR = "Regular"
    ON_D = "OnD"
    ON_V = "OnV"
    OUTSIDE = "OutsideDomain"


@dataclass(frozen=True)
class DomainClass:
    """Label plus a distance-to-locus diagnostic.

    For in-domain points the distance is to the nearer degeneracy locus
    (Chebyshev in the (b, c) plane to the line D, along the a axis to the
    surface V); for OutsideDomain it is the depth below the a,b,c > 1 boundary.
    """

    label: DomainLabel
    distance: float

    def __post_init__(self):
        if math.isnan(self.distance):
            raise ValueError("distance diagnostic must not be NaN")
