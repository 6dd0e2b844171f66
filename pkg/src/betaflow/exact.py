"""Exact geometry of the three-parameter bivariate beta (Dirichlet) family.

Densities on the open 2-simplex:

    p(x1, x2) = x1^(a-1) x2^(b-1) (1 - x1 - x2)^(c-1) / B(a, b, c),

with log-normalizer Phi(a, b, c) = ln Gamma(a) + ln Gamma(b) + ln Gamma(c)
- ln Gamma(a+b+c).  Dual coordinates are eta_i = psi(alpha_i) - psi(s) with
s = a + b + c, and the metric is the Hessian of Phi, which is positive
definite on the whole domain a, b, c > 0.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .manifold import Metric3, as_point
from .specfun import digamma, log_gamma, trigamma


class ExactModel:
    """Pure function bundle over points with a, b, c > 0."""

    name = "exact"
    domain_description = "a, b, c > 0"

    def in_domain(self, theta) -> bool:
        try:
            p = as_point(theta)
        except DomainError:
            return False
        return bool(np.all(p > 0.0))

    def check_domain(self, theta) -> np.ndarray:
        p = as_point(theta, "theta")
        if not np.all(p > 0.0):
            raise DomainError(f"exact model needs a, b, c > 0, got {p.tolist()}")
        return p

    def potential(self, theta) -> float:
        a, b, c = self.check_domain(theta)
        return log_gamma(a) + log_gamma(b) + log_gamma(c) - log_gamma(a + b + c)

    def eta(self, theta) -> np.ndarray:
        p = self.check_domain(theta)
        ps = digamma(p.sum())
        return np.array([digamma(p[0]) - ps, digamma(p[1]) - ps, digamma(p[2]) - ps])

    def metric(self, theta) -> Metric3:
        p = self.check_domain(theta)
        o = -trigamma(p.sum())
        return Metric3(
            d1=trigamma(p[0]) + o,
            d2=trigamma(p[1]) + o,
            d3=trigamma(p[2]) + o,
            o12=o, o13=o, o23=o,
        )

    def dual_potential(self, theta) -> float:
        """Legendre transform <theta, eta> - Phi evaluated at eta(theta)."""
        p = self.check_domain(theta)
        return float(np.dot(p, self.eta(p))) - self.potential(p)

    def log_pdf(self, theta, x) -> float:
        a, b, c = self.check_domain(theta)
        x = np.asarray(x, dtype=float)
        if x.shape != (2,):
            raise DomainError(f"x must be (x1, x2), got shape {x.shape}")
        x3 = 1.0 - x[0] - x[1]
        if not (x[0] > 0.0 and x[1] > 0.0 and x3 > 0.0):
            raise DomainError(f"x must lie in the open 2-simplex, got {x.tolist()}")
        return (
            (a - 1.0) * math.log(x[0])
            + (b - 1.0) * math.log(x[1])
            + (c - 1.0) * math.log(x3)
            - self.potential(theta)
        )

    def sample(self, theta, n: int, seed: int) -> np.ndarray:
        """Draw n points (x1, x2) via three gamma variates per draw.

        The bit generator is counter-based, so a seed fully determines the
        stream and disjoint seeds give independent streams.
        """
        p = self.check_domain(theta)
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        rng = np.random.Generator(np.random.Philox(seed))
        g = rng.standard_gamma(p, size=(n, 3))
        return g[:, :2] / g.sum(axis=1, keepdims=True)

    def fisher_mc(self, theta, n: int, seed: int) -> Metric3:
        """Monte Carlo Fisher estimate: sample covariance of the sufficient
        statistics (ln x1, ln x2, ln(1 - x1 - x2))."""
        est, _ = self.fisher_mc_with_stderr(theta, n, seed)
        return est

    def fisher_mc_with_stderr(self, theta, n: int, seed: int) -> tuple[Metric3, Metric3]:
        """Covariance estimate plus entrywise standard errors (from fourth
        sample moments of the centered statistics)."""
        if n < 1000:
            raise ValueError(f"fisher_mc needs n >= 1000, got {n}")
        x12 = self.sample(theta, n, seed)
        t = np.column_stack(
            [np.log(x12[:, 0]), np.log(x12[:, 1]), np.log1p(-x12[:, 0] - x12[:, 1])]
        )
        t -= t.mean(axis=0)
        cov = {}
        se = {}
        for key, i, j in (
            ("d1", 0, 0), ("d2", 1, 1), ("d3", 2, 2),
            ("o12", 0, 1), ("o13", 0, 2), ("o23", 1, 2),
        ):
            cij = float(np.dot(t[:, i], t[:, j])) / (n - 1)
            cov[key] = cij
            se[key] = math.sqrt(
                max(float(np.mean(t[:, i] ** 2 * t[:, j] ** 2)) - cij * cij, 0.0) / n
            )
        return Metric3(**cov), Metric3(**se)

    def check_inversion_target(self, target: np.ndarray) -> None:
        """eta is componentwise negative on this model, so any nonnegative
        component makes the target unreachable."""
        if np.any(target >= 0.0):
            raise DomainError(
                f"eta targets for the exact model must be componentwise < 0, "
                f"got {target.tolist()}"
            )

    def inversion_start(self, target: np.ndarray) -> np.ndarray:
        return np.array([2.0, 2.0, 2.0])


EXACT_MODEL = ExactModel()
