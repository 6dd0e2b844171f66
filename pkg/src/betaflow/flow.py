"""Gradient flow theta' = -G(theta)^{-1} eta(theta) and its dual-space
linearization.

Because eta is the gradient of the potential and G its Jacobian, the chain
rule collapses the flow to eta' = -eta, so eta(theta(t)) = eta(theta(0)) e^{-t}
for both models.  That closed form is the oracle every integration is tested
against.  The flow can reach the edge of a model's dual image in finite time
(the metric degenerates there), so the integrator stops with a flagged
status instead of stepping through the singularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    NoConvergenceError,
    SingularMatrixError,
    StepFailureError,
)
from .integrability import hamiltonian, lax_pair
from .manifold import as_point, det3, invert3

# Integration stops (flagged, not an error) once |det G| drops below this.
DET_GUARD = 1e-12

# Dormand-Prince 5(4) tableau; the last stage evaluates at the step result,
# so its slope is reused as stage one of the next step.
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


@dataclass
class Trajectory:
    """Time-ordered flow samples with per-sample diagnostics."""

    model: str
    t: np.ndarray
    theta: np.ndarray
    eta: np.ndarray
    hamiltonian: np.ndarray
    det_g: np.ndarray
    lax_dev: np.ndarray
    rtol: float
    atol: float
    n_accepted: int
    n_rejected: int
    status: str

    @property
    def n_samples(self) -> int:
        return self.t.shape[0]

    @property
    def theta_end(self) -> np.ndarray:
        return self.theta[-1]


def rhs(model, theta) -> np.ndarray:
    """Flow velocity -G^{-1} eta at a point."""
    theta = model.check_domain(theta)
    inv = invert3(model.metric(theta), tol=DET_GUARD)
    return -inv.matvec(model.eta(theta))


def eta_closed(eta0, t: float) -> np.ndarray:
    """Dual-space solution eta0 * e^{-t}."""
    return np.asarray(eta0, dtype=float) * math.exp(-t)


def integrate(model, theta0, t_end: float, rtol: float = 1e-9,
              atol: float = 1e-12, max_step: float | None = None) -> Trajectory:
    """Adaptive embedded Runge-Kutta 5(4) solution of the gradient flow.

    Diagnostics (eta, H, det G, Lax drift) are recorded at every accepted
    step.  Stops early with status "singular" when |det G| < 1e-12 at an
    accepted sample or when step-size collapse is driven by metric
    degeneracy, and with status "left_domain" when it is driven by the
    domain boundary; raises StepFailure only when the step size underflows
    for plain accuracy reasons.
    """
    if not (t_end >= 0.0 and math.isfinite(t_end)):
        raise DomainError(f"t_end must be finite and >= 0, got {t_end!r}")
    if max_step is not None and not max_step > 0.0:
        raise DomainError(f"max_step must be > 0, got {max_step!r}")
    y = model.check_domain(theta0)

    def f(point: np.ndarray) -> np.ndarray:
        if not model.in_domain(point):
            raise DomainError("stage point left the model domain")
        inv = invert3(model.metric(point), tol=0.0)
        return -inv.matvec(model.eta(point))

    try:
        ref_lax = lax_pair(model.eta(y)).L
    except Exception:
        ref_lax = None

    samples = [(0.0, y, *_diagnostics(model, y, ref_lax))]
    if abs(samples[0][4]) < DET_GUARD:
        raise SingularMatrixError(
            f"metric is numerically singular at the start point {y.tolist()}"
        )

    n_accepted = 0
    n_rejected = 0
    status = "completed"

    if t_end > 0.0:
        k1 = f(y)
        h = min(t_end, 1e-2 / (1.0 + float(np.max(np.abs(k1)))))
        if max_step is not None:
            h = min(h, max_step)
        t = 0.0
        err_prev = None
        reject_reason = "error"
        while t < t_end:
            h = min(h, t_end - t)
            if max_step is not None:
                h = min(h, max_step)
            if h < 1e-13 * max(1.0, t):
                if reject_reason == "domain":
                    status = "left_domain"
                    break
                if reject_reason == "singular":
                    status = "singular"
                    break
                raise StepFailureError(
                    f"step size underflow at t={t!r} (h={h!r})"
                )
            try:
                k = [k1]
                y_stage = y
                for row in _A[1:]:
                    y_stage = y + h * sum(a * ki for a, ki in zip(row, k))
                    k.append(f(y_stage))
                y_new = y + h * sum(a * ki for a, ki in zip(_A[6], k))
                err_vec = h * sum(e * ki for e, ki in zip(_E, k))
            except DomainError:
                n_rejected += 1
                reject_reason = "domain"
                h *= 0.5
                continue
            except SingularMatrixError:
                n_rejected += 1
                reject_reason = "singular"
                h *= 0.5
                continue
            if not (np.all(np.isfinite(y_new)) and np.all(np.isfinite(err_vec))):
                n_rejected += 1
                reject_reason = "error"
                h *= 0.5
                continue
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
            if err > 1.0:
                n_rejected += 1
                reject_reason = "error"
                h *= max(0.2, 0.9 * err ** -0.2)
                continue
            t += h
            y = y_new
            k1 = k[6]
            n_accepted += 1
            diag = _diagnostics(model, y, ref_lax)
            samples.append((t, y, *diag))
            if abs(diag[2]) < DET_GUARD:
                status = "singular"
                break
            if err == 0.0:
                fac = 5.0
            elif err_prev is None:
                fac = min(5.0, max(0.2, 0.9 * err ** -0.2))
            else:
                fac = min(5.0, max(0.2, 0.9 * err ** -0.14 * err_prev ** 0.08))
            err_prev = err
            h *= fac

    return Trajectory(
        model=model.name,
        t=np.array([s[0] for s in samples]),
        theta=np.array([s[1] for s in samples]),
        eta=np.array([s[2] for s in samples]),
        hamiltonian=np.array([s[3] for s in samples]),
        det_g=np.array([s[4] for s in samples]),
        lax_dev=np.array([s[5] for s in samples]),
        rtol=rtol,
        atol=atol,
        n_accepted=n_accepted,
        n_rejected=n_rejected,
        status=status,
    )


def _diagnostics(model, theta, ref_lax):
    eta = model.eta(theta)
    det = det3(model.metric(theta))
    try:
        ham = hamiltonian(eta)
    except Exception:
        ham = math.nan
    if ref_lax is None:
        dev = math.nan
    else:
        try:
            dev = float(np.linalg.norm(lax_pair(eta).L - ref_lax))
        except Exception:
            dev = math.nan
    return eta, ham, det, dev


def invert_eta(model, target, guess=None, tol: float = 1e-12,
               max_iter: int = 100) -> np.ndarray:
    """Newton inversion of the dual map, using the metric as the exact
    Jacobian and step halving whenever a full step would exit the domain."""
    target = as_point(target, "target")
    model.check_inversion_target(target)
    if guess is not None:
        theta = model.check_domain(guess)
    else:
        theta = model.inversion_start(target)
    for _ in range(max_iter):
        residual = model.eta(theta) - target
        if float(np.max(np.abs(residual))) <= tol:
            return theta
        try:
            step = invert3(model.metric(theta)).matvec(-residual)
        except SingularMatrixError as exc:
            raise NoConvergenceError(
                f"Newton Jacobian is singular at {theta.tolist()}"
            ) from exc
        lam = 1.0
        while not model.in_domain(theta + lam * step):
            lam *= 0.5
            if lam < 2.0 ** -60:
                raise NoConvergenceError(
                    f"backtracking stalled at {theta.tolist()}"
                )
        theta = theta + lam * step
    raise NoConvergenceError(
        f"eta inversion did not reach tol={tol!r} in {max_iter} iterations"
    )
