"""Conserved quantities and canonical structure of the dual flow.

In dual coordinates the flow is eta' = -eta, so the ratios eta2/eta1 and
eta3/eta2 are first integrals; their sum is the Hamiltonian.  The change of
variables (P1, Q1, P1', Q1') = (1/eta1, eta2, 1/eta2, eta3) makes the
dynamics canonical with H = P1 Q1 + P1' Q1' and the constant block Poisson
tensor.  The same ratios assemble into a Lax pair whose commutator vanishes
identically, so the whole matrix L is constant along the flow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEtaError, EmptyTrajectoryError, NegativeRatioError

# Bracket {f, g} = grad(f)^T . POISSON4 . grad(g) in (P1, Q1, P1', Q1').
POISSON4 = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)


@dataclass(frozen=True)
class CanonicalState:
    """Canonical variables (P1, Q1, P1', Q1')."""

    P1: float
    Q1: float
    P1p: float
    Q1p: float

    def as_array(self) -> np.ndarray:
        return np.array([self.P1, self.Q1, self.P1p, self.Q1p])

    @classmethod
    def from_array(cls, values) -> "CanonicalState":
        v = np.asarray(values, dtype=float)
        if v.shape != (4,):
            raise ValueError(f"expected 4 canonical values, got shape {v.shape}")
        return cls(*(float(x) for x in v))


@dataclass(frozen=True)
class LaxPair:
    """Symmetric L and diagonal N = diag(ell, 0, ell)."""

    L: np.ndarray
    N: np.ndarray
    ell: float

    def commutator(self) -> np.ndarray:
        return self.L @ self.N - self.N @ self.L

    def trace(self) -> float:
        return self.L[0, 0] + self.L[1, 1] + self.L[2, 2]


def _checked_eta(eta) -> np.ndarray:
    e = np.asarray(eta, dtype=float)
    if e.shape != (3,) or not np.all(np.isfinite(e)):
        raise DegenerateEtaError(f"eta must be three finite reals, got {eta!r}")
    if e[0] == 0.0 or e[1] == 0.0:
        raise DegenerateEtaError(f"eta1 and eta2 must be nonzero, got {e.tolist()}")
    return e


def to_canonical(eta) -> CanonicalState:
    e = _checked_eta(eta)
    return CanonicalState(P1=1.0 / e[0], Q1=e[1], P1p=1.0 / e[1], Q1p=e[2])


def hamiltonian(eta) -> float:
    """H = eta2/eta1 + eta3/eta2, conserved along the flow and invariant
    under uniform rescaling of eta."""
    e = _checked_eta(eta)
    return e[1] / e[0] + e[2] / e[1]


def hamilton_rhs(state: CanonicalState) -> np.ndarray:
    """Canonical velocity POISSON4 . grad(H) for H = P1 Q1 + P1' Q1'."""
    return np.array([state.P1, -state.Q1, state.P1p, -state.Q1p])


def poisson_bracket(f, g, at: CanonicalState, step: float = 1e-6,
                    grad_f=None, grad_g=None) -> float:
    """{f, g} at a state; gradients by central differences unless supplied."""
    x = at.as_array()
    df = _gradient(f, x, step) if grad_f is None else np.asarray(grad_f(at), dtype=float)
    dg = _gradient(g, x, step) if grad_g is None else np.asarray(grad_g(at), dtype=float)
    return float(df @ POISSON4 @ dg)


def _gradient(func, x: np.ndarray, step: float) -> np.ndarray:
    grad = np.empty(4)
    for i in range(4):
        hi = x.copy()
        lo = x.copy()
        hi[i] += step
        lo[i] -= step
        grad[i] = (func(CanonicalState.from_array(hi))
                   - func(CanonicalState.from_array(lo))) / (2.0 * step)
    return grad


def lax_pair(eta, ell: float = 1.0) -> LaxPair:
    """L with the invariant ratios on the diagonal and sqrt(eta3/eta1) in
    the corners; trace L equals the Hamiltonian by construction."""
    e = _checked_eta(eta)
    ratio = e[2] / e[0]
    if ratio < 0.0:
        raise NegativeRatioError(
            f"eta3/eta1 = {ratio!r} < 0: Lax corner entry leaves the reals"
        )
    corner = math.sqrt(ratio)
    L = np.zeros((3, 3))
    L[0, 0] = e[1] / e[0]
    L[2, 2] = e[2] / e[1]
    L[0, 2] = L[2, 0] = corner
    N = np.diag([ell, 0.0, ell])
    return LaxPair(L=L, N=N, ell=ell)


@dataclass(frozen=True)
class LaxDiagnostics:
    """Worst-case deviations over a trajectory."""

    frobenius_drift: float
    trace_deviation: float
    commutator_norm: float


def lax_residual(trajectory, ell: float = 1.0) -> LaxDiagnostics:
    """Conservation check along a trajectory: drift of L from its initial
    value, trace-vs-Hamiltonian deviation, and commutator norm (the latter
    is identically zero because L's support lies where N acts as ell*I)."""
    n = trajectory.n_samples
    if n == 0:
        raise EmptyTrajectoryError("trajectory has no samples")
    pairs = [lax_pair(trajectory.eta[i], ell) for i in range(n)]
    ref = pairs[0].L
    drift = max(float(np.linalg.norm(p.L - ref)) for p in pairs)
    trace_dev = max(
        abs(p.trace() - trajectory.hamiltonian[i]) for i, p in enumerate(pairs)
    )
    comm = max(float(np.linalg.norm(p.commutator())) for p in pairs)
    return LaxDiagnostics(
        frobenius_drift=drift,
        trace_deviation=trace_dev,
        commutator_norm=comm,
    )
