"""Group laws and exponential maps for the Heisenberg group and its
isometry group.

The Heisenberg group is modeled on R^3 with the multiplication twisted by
the symplectic area of the (x, y) parts.  Its connected isometry group is
the semidirect product with the circle rotating the (x, y) plane, here
called the oscillator group and handled through canonical coordinates
(x, y, z, t) and a faithful 4x4 matrix representation.

Basis conventions for the oscillator algebra: E1, E2, E3 span the
Heisenberg part, E4 generates the rotation, with

    [E1, E2] = E3,   [E4, E1] = E2,   [E4, E2] = -E1,

and all other basis brackets zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError

# alias for 4x4 float arrays
Matrix4 = np.ndarray


@dataclass(frozen=True)
class OscVector:
    """Oscillator algebra element with coefficients on E1..E4.

    e4 = 0 picks out the Heisenberg subalgebra.
    """

    e1: float
    e2: float
    e3: float
    e4: float = 0.0


@dataclass(frozen=True)
class NilPoint:
    """Point (x, y, z) of the Heisenberg group."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class OscElement:
    """Oscillator group element in canonical coordinates (x, y, z, t).

    t is an angle in radians kept unwrapped, so orbit curves stay
    continuous instead of jumping at +-pi.
    """

    x: float
    y: float
    z: float
    t: float


def bracket(a: OscVector, b: OscVector) -> OscVector:
    """Lie bracket of two oscillator algebra vectors.

    Bilinear extension of the basis relations listed in the module
    docstring; exact on the input coefficients.
    """
    return OscVector(
        a.e2 * b.e4 - a.e4 * b.e2,
        a.e4 * b.e1 - a.e1 * b.e4,
        a.e1 * b.e2 - a.e2 * b.e1,
        0.0,
    )


def nil_multiply(p: NilPoint, q: NilPoint) -> NilPoint:
    """Heisenberg group product."""
    return NilPoint(
        p.x + q.x,
        p.y + q.y,
        p.z + q.z + 0.5 * (p.x * q.y - q.x * p.y),
    )


def osc_multiply(g1: OscElement, g2: OscElement) -> OscElement:
    """Oscillator group product in canonical coordinates.

    The first factor rotates the (x, y) part of the second by t1; the t
    coordinates add exactly (no mod 2*pi reduction).
    """
    ct = math.cos(g1.t)
    st = math.sin(g1.t)
    return OscElement(
        g1.x + g2.x * ct - g2.y * st,
        g1.y + g2.x * st + g2.y * ct,
        g1.z + g2.z
        + 0.5 * (ct * (g1.x * g2.y - g2.x * g1.y) + st * (g1.x * g2.x + g1.y * g2.y)),
        g1.t + g2.t,
    )


def osc_to_matrix(g: OscElement) -> Matrix4:
    """Faithful 4x4 matrix form of an oscillator group element."""
    ct = math.cos(g.t)
    st = math.sin(g.t)
    return np.array(
        [
            [1.0, g.x * st - g.y * ct, g.x * ct + g.y * st, 2.0 * g.z],
            [0.0, ct, -st, g.x],
            [0.0, st, ct, g.y],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def algebra_matrix(v: OscVector) -> Matrix4:
    """Matrix form of an oscillator algebra vector.

    Differentiating osc_to_matrix of the coordinate flows at the identity
    gives this shape; matrix commutators of these reproduce bracket().
    """
    return np.array(
        [
            [0.0, -v.e2, v.e1, 2.0 * v.e3],
            [0.0, 0.0, -v.e4, v.e1],
            [0.0, v.e4, 0.0, v.e2],
            [0.0, 0.0, 0.0, 0.0],
        ]
    )


def matrix_to_osc(m: Matrix4, t_hint: float = 0.0) -> OscElement:
    """Invert osc_to_matrix.

    The rotation angle is recovered with atan2 and shifted by the multiple
    of 2*pi that lands nearest t_hint, so a caller tracking a continuous
    curve can keep t unwrapped.

    Raises ShapeError when m does not have the expected structure
    (zero pattern, unit corners, orthogonal rotation block, first row
    consistent with the last column) within 1e-9.
    """
    a = np.asarray(m, dtype=float)
    if a.shape != (4, 4):
        raise ShapeError(f"expected a 4x4 matrix, got shape {a.shape}")
    tol = 1e-9

    fixed = np.array([a[1, 0], a[2, 0], a[3, 0], a[3, 1], a[3, 2]])
    if np.max(np.abs(fixed)) > tol:
        raise ShapeError("lower-triangular zero pattern violated")
    if abs(a[0, 0] - 1.0) > tol or abs(a[3, 3] - 1.0) > tol:
        raise ShapeError("corner entries must be 1")

    r = a[1:3, 1:3]
    if np.max(np.abs(r @ r.T - np.eye(2))) > tol or np.linalg.det(r) < 0.0:
        raise ShapeError("rotation block is not a proper rotation")

    x = a[1, 3]
    y = a[2, 3]
    z = a[0, 3] / 2.0
    t0 = math.atan2(a[2, 1], a[1, 1])
    t = t0 + 2.0 * math.pi * round((t_hint - t0) / (2.0 * math.pi))

    # first row must be the one induced by (x, y, t)
    ct = math.cos(t)
    st = math.sin(t)
    if abs(a[0, 1] - (x * st - y * ct)) > tol or abs(a[0, 2] - (x * ct + y * st)) > tol:
        raise ShapeError("first row inconsistent with translation part")

    return OscElement(x, y, z, t)


def matrix_exp(m: Matrix4) -> Matrix4:
    """Matrix exponential by scaling and squaring with a Taylor core.

    Accurate to about 1e-13 relative for the norms occurring here
    (entries up to a few tens).
    """
    a = np.asarray(m, dtype=float)
    norm = np.linalg.norm(a, 1)
    s = 0
    if norm > 0.5:
        s = int(math.ceil(math.log2(norm / 0.5)))
    a = a / (2.0 ** s)

    result = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for k in range(1, 40):
        term = term @ a / k
        result = result + term
        if np.max(np.abs(term)) < 1e-20 * np.max(np.abs(result)):
            break
    for _ in range(s):
        result = result @ result
    return result


def exp_nil(v: OscVector) -> NilPoint:
    """Heisenberg exponential map.

    In exponential coordinates this is the identity on (e1, e2, e3).
    Satisfies exp(X) exp(Y) = exp(X + Y + [X,Y]/2) since the algebra is
    2-step nilpotent.
    """
    if v.e4 != 0.0:
        raise DomainError("exp_nil needs a Heisenberg algebra vector (e4 = 0)")
    return NilPoint(v.e1, v.e2, v.e3)


def exp_osc(v: OscVector) -> OscElement:
    """Oscillator group exponential, computed through the matrix model.

    The t coordinate of exp(v) is exactly v.e4, which is passed as the
    branch hint so the result stays on the continuous branch.
    """
    return matrix_to_osc(matrix_exp(algebra_matrix(v)), t_hint=v.e4)


def osc_action(g: OscElement, p: NilPoint) -> NilPoint:
    """Isometric action of the oscillator group on the Heisenberg group.

    g = (a, b, c, t) rotates p in the (x, y) plane by t and then
    left-translates by (a, b, c).
    """
    ct = math.cos(g.t)
    st = math.sin(g.t)
    return NilPoint(
        g.x + p.x * ct - p.y * st,
        g.y + p.x * st + p.y * ct,
        g.z + p.z
        + 0.5 * (ct * (g.x * p.y - p.x * g.y) + st * (g.x * p.x + g.y * p.y)),
    )


def split(w: OscVector, decomposition: str) -> tuple[OscVector, OscVector]:
    """Split w = h_part + m_part along a reductive decomposition.

    decomposition "nil3": complement is the rotation axis, m is the
    Heisenberg subalgebra.  decomposition "m": m = span{E1, E2, E3+E4},
    so m_part = w1 E1 + w2 E2 + w3 (E3+E4) and h_part = (w4-w3) E4.
    """
    if decomposition == "nil3":
        return (
            OscVector(0.0, 0.0, 0.0, w.e4),
            OscVector(w.e1, w.e2, w.e3, 0.0),
        )
    if decomposition == "m":
        return (
            OscVector(0.0, 0.0, 0.0, w.e4 - w.e3),
            OscVector(w.e1, w.e2, w.e3, w.e3),
        )
    raise DomainError(f"unknown decomposition {decomposition!r}")
