"""Closed-form geodesics and charged-particle trajectories.

All curves start with unit speed; the charge q couples the velocity to
the magnetic form of the contact structure.  Writing c_q = q + c with c
the (conserved) contact cosine of the initial velocity, the planar part
of a trajectory rotates at rate c_q while the z part combines the linear
Reeb drift with an oscillation.  Everything is expressed through the
kernels

    K1(u) = sin(u)/u,   K2(u) = -2 sin(u/2)^2 / u,   K3(u) = (u - sin u)/u^3,

which are continuous through u = 0, so a single formula covers the
degenerate straight-line case c_q = 0 without a branch switch or
cancellation.

The same trajectories arise as one-parameter orbits exp(s W).o in the
isometry group; homogeneous_generator builds the W matching given
initial data and orbit_point evaluates the orbit through the matrix
exponential, with no shared code with the closed forms (that equality is
exactly what the verification suite checks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import FrameVector
from .lie_core import (
    NilPoint,
    OscVector,
    algebra_matrix,
    exp_osc,
    matrix_exp,
    nil_multiply,
    osc_action,
)

# Taylor coefficients of K3, (-1)^k / (2k+3)!; enough terms for |u| < 0.5
_K3_COEFFS = [(-1.0) ** k / math.factorial(2 * k + 3) for k in range(8)]


@dataclass(frozen=True)
class InitialData:
    """Start point, unit frame velocity, and charge of a trajectory."""

    start: NilPoint
    velocity: FrameVector
    q: float = 0.0

    def __post_init__(self):
        v = self.velocity
        if abs(v.a * v.a + v.b * v.b + v.c * v.c - 1.0) > 1e-12:
            raise DomainError("initial velocity must have unit length")


@dataclass(frozen=True)
class TrajectorySample:
    """One record of a sampled trajectory.

    velocity holds frame components; speed is its norm and cos_theta its
    third component (both stored so emitted files are self-contained).
    """

    s: float
    point: NilPoint
    velocity: FrameVector
    speed: float
    cos_theta: float

    @classmethod
    def of(cls, s: float, point: NilPoint, velocity: FrameVector) -> "TrajectorySample":
        speed = math.sqrt(velocity.a ** 2 + velocity.b ** 2 + velocity.c ** 2)
        return cls(s, point, velocity, speed, velocity.c)


def _require_unit(a: float, b: float, c: float) -> None:
    if abs(a * a + b * b + c * c - 1.0) > 1e-12:
        raise DomainError("velocity components must be a unit vector")


def _k1(u: float) -> float:
    return math.sin(u) / u if u != 0.0 else 1.0


def _k2(u: float) -> float:
    if u == 0.0:
        return 0.0
    s = math.sin(0.5 * u)
    return -2.0 * s * s / u


def _k3(u: float) -> float:
    if abs(u) < 0.5:
        u2 = u * u
        acc = 0.0
        for coef in reversed(_K3_COEFFS):
            acc = acc * u2 + coef
        return acc
    return (u - math.sin(u)) / (u * u * u)


def magnetic_point(a: float, b: float, c: float, q: float, s: float) -> NilPoint:
    """Charged trajectory from the origin with initial frame velocity
    (a, b, c), evaluated at arc length s.

    Unit-speed input is required (DomainError otherwise).  q = 0 gives
    the geodesic.
    """
    _require_unit(a, b, c)
    cq = q + c
    u = cq * s
    k1 = _k1(u)
    k2 = _k2(u)
    x = s * (a * k1 + b * k2)
    y = s * (b * k1 - a * k2)
    z = c * s + 0.5 * (a * a + b * b) * cq * s ** 3 * _k3(u)
    return NilPoint(x, y, z)


def geodesic_point(a: float, b: float, c: float, s: float) -> NilPoint:
    """Unit-speed geodesic from the origin, at arc length s."""
    return magnetic_point(a, b, c, 0.0, s)


def magnetic_point_from(
    p0: NilPoint, a: float, b: float, c: float, q: float, s: float
) -> NilPoint:
    """Charged trajectory from an arbitrary start point.

    Left invariance of the metric and of the magnetic form means the
    trajectory is the left translate by p0 of the origin trajectory with
    the same frame velocity; the frame components of the velocity do not
    change under the translation.
    """
    return nil_multiply(p0, magnetic_point(a, b, c, q, s))


def magnetic_velocity(a: float, b: float, c: float, q: float, s: float) -> FrameVector:
    """Frame velocity along the charged trajectory at arc length s.

    The contact cosine c is a first integral, the planar part rotates
    at rate q + c.
    """
    u = (q + c) * s
    cu = math.cos(u)
    su = math.sin(u)
    return FrameVector(a * cu - b * su, a * su + b * cu, c)


def homogeneous_generator(
    a: float, b: float, c: float, q: float, j_strength: float = 1.0
) -> OscVector:
    """Algebra element whose orbit through the origin is the charged
    trajectory with initial data (a, b, c) and charge q.

    The rotation coefficient is c + q: c from the contact part of the
    velocity, q from the magnetic coupling.  j_strength rescales the
    coupling and exists for the fault-injection self-test of the
    verification suite; leave it at 1.
    """
    return OscVector(a, b, c, c + q * j_strength)


def orbit_point(v: OscVector, s: float) -> NilPoint:
    """Evaluate the one-parameter orbit exp(s v).o at the origin o."""
    g = exp_osc(OscVector(s * v.e1, s * v.e2, s * v.e3, s * v.e4))
    return osc_action(g, NilPoint(0.0, 0.0, 0.0))


def classify(a: float, b: float, c: float) -> str:
    """Name the contact type of a unit velocity.

    "reeb" for |c| = 1, "legendre" for c = 0 (both within 1e-12),
    "slant" otherwise.
    """
    if abs(abs(c) - 1.0) <= 1e-12:
        return "reeb"
    if abs(c) <= 1e-12:
        return "legendre"
    return "slant"


# ---------------------------------------------------------------------------
# vectorized evaluation, used by the verification sweeps


def _k1_arr(u: np.ndarray) -> np.ndarray:
    out = np.ones_like(u)
    nz = u != 0.0
    out[nz] = np.sin(u[nz]) / u[nz]
    return out


def _k2_arr(u: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u)
    nz = u != 0.0
    s = np.sin(0.5 * u[nz])
    out[nz] = -2.0 * s * s / u[nz]
    return out


def _k3_arr(u: np.ndarray) -> np.ndarray:
    out = np.empty_like(u)
    small = np.abs(u) < 0.5
    u2 = u[small] ** 2
    acc = np.zeros_like(u2)
    for coef in reversed(_K3_COEFFS):
        acc = acc * u2 + coef
    out[small] = acc
    ub = u[~small]
    out[~small] = (ub - np.sin(ub)) / ub ** 3
    return out


def magnetic_grid(a, b, c, q, s_values) -> np.ndarray:
    """Vectorized magnetic_point over broadcastable inputs.

    Returns an array of shape broadcast(a, b, c, q, s_values) + (3,)
    holding (x, y, z).  Same unit-speed requirement as the scalar form.
    """
    a, b, c, q, s = np.broadcast_arrays(
        *(np.asarray(w, dtype=float) for w in (a, b, c, q, s_values))
    )
    shape = a.shape
    a, b, c, q, s = (np.ravel(w) for w in (a, b, c, q, s))
    if np.max(np.abs(a * a + b * b + c * c - 1.0)) > 1e-12:
        raise DomainError("velocity components must be unit vectors")
    cq = q + c
    u = cq * s
    k1 = _k1_arr(u)
    k2 = _k2_arr(u)
    x = s * (a * k1 + b * k2)
    y = s * (b * k1 - a * k2)
    z = c * s + 0.5 * (a * a + b * b) * cq * s ** 3 * _k3_arr(u)
    return np.stack([x, y, z], axis=-1).reshape(shape + (3,))


def orbit_grid(w, s_max: float, steps: int) -> np.ndarray:
    """Orbit coordinates on the uniform grid s = 0, ds, ..., s_max.

    w is one generator (OscVector or length-4 array) or a stack of shape
    (n, 4).  Returns (steps+1, 3) or (n, steps+1, 3) accordingly.  One
    matrix exponential per generator plus a product recurrence along the
    grid, so large sweeps stay cheap.
    """
    if isinstance(w, OscVector):
        rows = np.array([[w.e1, w.e2, w.e3, w.e4]])
        single = True
    else:
        rows = np.atleast_2d(np.asarray(w, dtype=float))
        single = np.asarray(w).ndim == 1
    n = rows.shape[0]
    ds = s_max / steps

    step_mats = np.empty((n, 4, 4))
    for i in range(n):
        vec = OscVector(*(ds * rows[i]))
        step_mats[i] = matrix_exp(algebra_matrix(vec))

    out = np.zeros((n, steps + 1, 3))
    cur = np.broadcast_to(np.eye(4), (n, 4, 4)).copy()
    for k in range(1, steps + 1):
        cur = cur @ step_mats
        out[:, k, 0] = cur[:, 1, 3]
        out[:, k, 1] = cur[:, 2, 3]
        out[:, k, 2] = 0.5 * cur[:, 0, 3]
    return out[0] if single else out
