"""Weighted orthonormal bases on the unit disc and d-dimensional unit ball.

Three families are provided:

* WFUNC: weighted functions (1-r)^(a/2) r^(b/2) times orthonormal Jacobi
  polynomials in 2r-1 and a Fourier factor; orthonormal under the Cartesian
  inner product on the (r, theta) coordinate box.
* EX1_WEIGHTED: the (a, 1)-Jacobi family with weight (1-r)^(a/2), orthonormal
  under the polar (r-weighted) inner product on the disc.
* ZERNIKE: the classical disc polynomials, evaluation only.

Normalisation constants are fixed here so that each family is orthonormal
under its declared inner product; this is certified by test rather than
carried over from any printed prefactor.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .jacobi import (
    JacobiParams,
    ParameterError,
    gauss_jacobi_01,
    norm_h,
    orthonormal_eval,
    jacobi_eval,
)


class BasisKind(Enum):
    WFUNC = "wfunc"
    EX1_WEIGHTED = "ex1_weighted"
    ZERNIKE = "zernike"


class InnerProductKind(Enum):
    CARTESIAN = "cartesian"  # plain box measure dr dtheta
    POLAR = "polar"          # disc measure r dr dtheta


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class BasisSpec:
    """Parameters of a truncated basis on the disc (d=2) or ball (d>=3)."""

    alpha: float
    beta: float
    d: int = 2
    N: int = 0
    K: int = 0
    kind: BasisKind = BasisKind.WFUNC

    def __post_init__(self):
        if self.d < 2:
            raise UsageError(f"dimension must be >= 2, got {self.d}")
        if self.N < 0 or self.K < 0:
            raise UsageError("truncations must be nonnegative")
        if self.kind is BasisKind.WFUNC and (self.alpha <= -1.0 or self.beta <= -1.0):
            raise UsageError("weighted basis needs alpha, beta > -1")
        if self.kind is BasisKind.EX1_WEIGHTED and self.alpha <= 1.0:
            raise UsageError("the r-weighted family needs alpha > 1")
        if self.d > 2 and self.beta != self.alpha:
            raise UsageError("ball bases require beta == alpha")

    @property
    def skew_certified(self) -> bool:
        """True when the radial differentiation matrix is skew symmetric."""
        return self.kind is BasisKind.WFUNC and self.alpha > 0 and self.beta > 0

    @property
    def analytic(self) -> bool:
        a, b = self.alpha, self.beta
        return a == int(a) and b == int(b) and int(a) % 2 == 0 and int(b) % 2 == 0


@dataclass(frozen=True)
class PolarPoint:
    r: float
    theta: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise UsageError(f"radius {self.r} outside [0, 1]")


@dataclass(frozen=True)
class BallPoint:
    r: float
    theta: tuple

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise UsageError(f"radius {self.r} outside [0, 1]")


# -- radial profiles --------------------------------------------------------

def wfunc_radial(spec: BasisSpec, n: int, r):
    """Radial factor of the weighted disc basis (everything except e^{im theta})."""
    a, b = spec.alpha, spec.beta
    r = np.asarray(r, dtype=float)
    scale = np.pi ** -0.5 * 2.0 ** (0.5 * (a + b))
    # (1-r)^(a/2) r^(b/2) evaluates to a literal zero at the endpoints
    return scale * (1.0 - r) ** (0.5 * a) * r ** (0.5 * b) * orthonormal_eval(
        n, JacobiParams(a, b), 2.0 * r - 1.0
    )


def wfunc_eval(spec: BasisSpec, n: int, m: int, p: PolarPoint) -> complex:
    """Weighted disc basis function at a polar point."""
    if spec.kind is not BasisKind.WFUNC or spec.d != 2:
        raise UsageError("wfunc_eval requires a d=2 weighted basis spec")
    return wfunc_radial(spec, n, p.r) * np.exp(1j * m * p.theta)


def ball_radial(spec: BasisSpec, n: int, r):
    """Radial factor of the d-ball basis; reduces to wfunc_radial for d=2."""
    a = spec.alpha
    r = np.asarray(r, dtype=float)
    scale = 2.0 ** a * np.pi ** (-0.5 * (spec.d - 1))
    return scale * (r * (1.0 - r)) ** (0.5 * a) * orthonormal_eval(
        n, JacobiParams(a, a), 2.0 * r - 1.0
    )


def ball_phase(mvec, theta) -> complex:
    """Angular phase exp(i(m1 t1 + 2 m2 t2 + ... + 2 m_{d-1} t_{d-1}))."""
    mvec = np.atleast_1d(mvec)
    theta = np.atleast_1d(theta)
    arg = mvec[0] * theta[0]
    for mj, tj in zip(mvec[1:], theta[1:]):
        arg = arg + 2.0 * mj * tj
    return np.exp(1j * arg)


def ball_basis_eval(spec: BasisSpec, n: int, mvec, p: BallPoint) -> complex:
    """d-ball basis function; for d=2 it equals wfunc_eval with beta=alpha."""
    if spec.kind is not BasisKind.WFUNC or spec.beta != spec.alpha:
        raise UsageError("ball basis requires a weighted spec with beta == alpha")
    mvec = np.atleast_1d(mvec)
    if len(mvec) != spec.d - 1:
        raise UsageError(f"need {spec.d - 1} angular indices, got {len(mvec)}")
    return ball_radial(spec, n, p.r) * ball_phase(mvec, p.theta)


def ex1_radial(n: int, alpha: float, r):
    """Radial factor of the polar-inner-product family of weight (1-r)^(a/2)."""
    if alpha <= 1.0:
        raise ParameterError(f"this family needs alpha > 1, got {alpha}")
    r = np.asarray(r, dtype=float)
    scale = 2.0 ** (0.5 * (alpha + 2.0)) / np.sqrt(norm_h(n, JacobiParams(alpha, 1.0)))
    return scale * (1.0 - r) ** (0.5 * alpha) * jacobi_eval(
        n, JacobiParams(alpha, 1.0), 2.0 * r - 1.0
    )


def ex1_basis_eval(n: int, m: int, p: PolarPoint, alpha: float) -> complex:
    """Disc basis orthonormal under the polar (r-weighted) inner product."""
    return (2.0 * np.pi) ** -0.5 * ex1_radial(n, alpha, p.r) * np.exp(1j * m * p.theta)


def zernike_radial(n: int, r):
    """Radial factor of the classical disc polynomials, normalised to unit
    polar-inner-product norm."""
    r = np.asarray(r, dtype=float)
    scale = np.sqrt(2.0 / (np.pi * norm_h(n, JacobiParams(0.0, 1.0))))
    return scale * jacobi_eval(n, JacobiParams(0.0, 1.0), 2.0 * r - 1.0)


def zernike_eval(n: int, m: int, p: PolarPoint) -> complex:
    return zernike_radial(n, p.r) * np.exp(1j * m * p.theta)


# -- inner products ---------------------------------------------------------

def _theta_grids(d: int, resolution: int):
    """Equispaced periodic samples and cell measures for the angular box."""
    grids = [np.linspace(-np.pi, np.pi, resolution, endpoint=False)]
    measures = [2.0 * np.pi / resolution]
    for _ in range(d - 2):
        grids.append(np.linspace(0.0, np.pi, resolution, endpoint=False))
        measures.append(np.pi / resolution)
    return grids, measures


def inner_product(f, g, kind: InnerProductKind = InnerProductKind.CARTESIAN,
                  resolution: int = 48, d: int = 2,
                  radial_weight: tuple | None = None) -> complex:
    """Quadrature inner product of two callables over the coordinate box.

    Fields are callables f(r, *theta).  Angular directions use equispaced
    (trapezoidal) sampling, exact for trigonometric integrands of bandwidth
    below the resolution; the radial direction uses Gauss-Jacobi.  When
    radial_weight=(a, b) is given, the rule absorbs the integrand's algebraic
    endpoint factors (1-r)^a r^b; otherwise a Gauss-Legendre rule is used.
    """
    if resolution < 1:
        raise UsageError(f"resolution must be >= 1, got {resolution}")
    if kind is InnerProductKind.POLAR and d != 2:
        raise UsageError("polar inner product implemented for d=2 only")
    a, b = radial_weight if radial_weight is not None else (0.0, 0.0)
    r, w = gauss_jacobi_01(resolution, a, b)
    if radial_weight is not None:
        # caller promises f*conj(g) = (1-r)^a r^b * smooth; divide the factor out
        strip = (1.0 - r) ** a * r ** b
    else:
        strip = np.ones_like(r)
    if kind is InnerProductKind.POLAR:
        w = w * r
    grids, measures = _theta_grids(d, resolution)
    mesh = np.meshgrid(r, *grids, indexing="ij")
    vals = f(*mesh) * np.conj(g(*mesh))
    for _ in range(d - 1):
        vals = vals.sum(axis=-1)
    total = np.dot(w, vals / strip)
    return complex(total * np.prod(measures))
