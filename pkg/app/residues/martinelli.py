"""
Numerical residues from the boundary integral over a small sphere.

With omega = sum conj(X_i) dz_i / |X|^2 (so that i_X omega = 1) the residue of
a 2-variable field is

    (1/2 pi i)^2 * integral over S^3 of  omega ^ dbar(omega) phi(JX)

and dbar(omega) is expanded by hand, so only values of X and JX are ever
sampled. The 3-sphere of radius r about p is parametrized by

    z1 = p1 + r cos(t) e^{i a},   z2 = p2 + r sin(t) e^{i b}

with t in [0, pi/2] and a, b in [0, 2 pi]. Quadrature is composite Simpson
in all three angles, doubled until two successive levels agree.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import simpson

from app.core.config import settings
from app.core.errors import ConvergenceError, NearbyZeroError, VariableMismatchError
from app.polycore import MultiPoly, jacobian
from app.residues.chern import ChernMonomial, phi_of_matrix
from app.residues.foliation import AffinePoint, VectorFieldGerm
from app.residues.singular import isolated_points_2d

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MartinelliIntegrand:
    """phi(JX) omega ^ dbar(omega) pulled back to the sphere |z - p| = r."""

    X: VectorFieldGerm
    phi: ChernMonomial
    center: tuple[complex, complex]
    radius: float
    _phi_jx: MultiPoly = field(init=False, repr=False)
    _jac: tuple[tuple[MultiPoly, ...], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.X.dim != 2:
            raise VariableMismatchError("the sphere integral is implemented for 2-variable fields")
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        J = jacobian(self.X.components, self.X.variables)
        object.__setattr__(self, "_phi_jx", phi_of_matrix(self.phi, J))
        object.__setattr__(self, "_jac", tuple(tuple(J[i, j] for j in range(2)) for i in range(2)))

    @classmethod
    def at(cls, X: VectorFieldGerm, p: AffinePoint, phi: ChernMonomial, radius: float) -> "MartinelliIntegrand":
        q = p.project(X.variables)
        return cls(X, phi, (complex(q.coordinates[0]), complex(q.coordinates[1])), radius)

    def slice_values(self, theta: float, alpha: np.ndarray, beta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Integrand and |X|^2 on the (alpha, beta) grid at fixed theta."""
        r = self.radius
        c, s = math.cos(theta), math.sin(theta)
        ea, eb = np.exp(1j * alpha), np.exp(1j * beta)
        z = [self.center[0] + r * c * ea, self.center[1] + r * s * eb]
        X1, X2 = (p.evaluate_array(z) for p in self.X.components)
        J = [[self._jac[i][j].evaluate_array(z) for j in range(2)] for i in range(2)]
        norm = (np.abs(X1) ** 2 + np.abs(X2) ** 2).real
        cX1, cX2 = np.conj(X1), np.conj(X2)
        C1 = (cX1 * np.conj(J[1][0]) - cX2 * np.conj(J[0][0])) / norm**2
        C2 = (cX1 * np.conj(J[1][1]) - cX2 * np.conj(J[0][1])) / norm**2
        D1 = 2 * r**3 * s * s * c * eb
        D2 = -2 * r**3 * s * c * c * ea
        values = self._phi_jx.evaluate_array(z) * (C1 * D1 + C2 * D2)
        return values, norm

    def integrate(self, intervals: int) -> tuple[complex, float, int]:
        """One Simpson level: (value, sampled min |X|^2, evaluations)."""
        n = intervals + (intervals % 2)
        thetas = np.linspace(0.0, math.pi / 2, n + 1)
        angles = np.linspace(0.0, 2 * math.pi, n + 1)
        alpha, beta = np.meshgrid(angles, angles, indexing="ij")
        inner = np.empty(n + 1, dtype=complex)
        min_norm = math.inf
        for i, theta in enumerate(thetas):
            values, norm = self.slice_values(float(theta), alpha, beta)
            min_norm = min(min_norm, float(norm.min()))
            inner[i] = simpson(simpson(values, x=angles, axis=1), x=angles)
        total = simpson(inner, x=thetas)
        return complex(-total / (4 * math.pi**2)), min_norm, (n + 1) ** 3


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    evaluations: int
    radii: tuple[float, ...]
    imaginary_ok: bool = True

    def __post_init__(self) -> None:
        if self.error_estimate < 0:
            raise ValueError("error estimate must be non-negative")

    def agrees_with(self, exact: complex, slack: float = 0.0) -> bool:
        return abs(self.value - exact) <= max(self.error_estimate, slack)


def _check_neighbourhood(X: VectorFieldGerm, center: tuple[complex, complex], radius: float, margin: float) -> None:
    """No other zero of X may sit inside (or near) the ball."""
    for sp in isolated_points_2d(X):
        q = sp.point.coordinates
        d = math.hypot(abs(complex(q[0]) - center[0]), abs(complex(q[1]) - center[1]))
        if d <= margin:
            continue
        if d < radius * (1 + margin) + margin:
            raise NearbyZeroError(
                f"zero {sp.point} of the field lies within {d:.6g} of the centre, radius is {radius}"
            )


def bm_residue(
    X: VectorFieldGerm,
    p: AffinePoint,
    phi: ChernMonomial,
    r: float | None = None,
    tol: float | None = None,
    *,
    max_evaluations: int | None = None,
    margin: float | None = None,
) -> QuadratureResult:
    """Residue of phi(JX) dz / (X1 X2) at p from the sphere integral of radius r."""
    r = r or settings.MARTINELLI_RADIUS
    tol = tol or settings.MARTINELLI_TOL
    budget = max_evaluations or settings.MARTINELLI_MAX_EVALUATIONS
    margin = settings.MARTINELLI_MARGIN if margin is None else margin

    integrand = MartinelliIntegrand.at(X, p, phi, r)
    _check_neighbourhood(X, integrand.center, r, margin)

    intervals = settings.MARTINELLI_START_INTERVALS
    previous: complex | None = None
    used = 0
    while True:
        value, min_norm, evaluations = integrand.integrate(intervals)
        used += evaluations
        if min_norm < margin:
            raise NearbyZeroError(f"|X|^2 drops to {min_norm:.3g} on the sphere of radius {r}")
        logger.debug("sphere r=%s, %d intervals: %s", r, intervals, value)
        if previous is not None and abs(value - previous) < tol:
            break
        if used >= budget:
            raise ConvergenceError(
                f"sphere integral did not settle within {budget} evaluations (last change "
                f"{abs(value - previous) if previous is not None else math.inf:.3g})"
            )
        previous = value
        intervals *= 2

    delta = abs(value - previous)
    # Simpson converges at fourth order, so one Richardson step
    refined = value + (value - previous) / 15
    error = delta + 1e-12 * max(1.0, abs(refined))
    imaginary_ok = abs(refined.imag) <= tol
    if not imaginary_ok:
        logger.warning("sphere integral at %s has imaginary part %.3g", p, refined.imag)
    logger.info("sphere integral at %s, r=%s: %s +- %.2g (%d evaluations)", p, r, refined, error, used)
    return QuadratureResult(refined, error, used, (r,), imaginary_ok)


@dataclass(frozen=True)
class RadiusStabilityReport:
    results: tuple[QuadratureResult, ...]
    tol: float

    @property
    def max_deviation(self) -> float:
        values = [q.value for q in self.results]
        return max((abs(a - b) for a in values for b in values), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation < 3 * self.tol

    @property
    def radii(self) -> tuple[float, ...]:
        return tuple(r for q in self.results for r in q.radii)


def radius_stability(
    X: VectorFieldGerm,
    p: AffinePoint,
    phi: ChernMonomial,
    radii: Sequence[float] | None = None,
    tol: float | None = None,
) -> RadiusStabilityReport:
    """The residue does not depend on the radius; compare several."""
    tol = tol or settings.MARTINELLI_TOL
    radii = list(radii or settings.RADIUS_LADDER)
    if not radii:
        raise ValueError("at least one radius is needed")
    results = tuple(bm_residue(X, p, phi, r, tol) for r in radii)
    report = RadiusStabilityReport(results, tol)
    logger.info("radius stability over %s: deviation %.3g", radii, report.max_deviation)
    return report
