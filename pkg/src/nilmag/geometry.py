"""Left-invariant metric structure on the Heisenberg group.

The metric is dx^2 + dy^2 + alpha^2 with contact form
alpha = dz + (y dx - x dy)/2.  The frame

    E1 = d/dx - (y/2) d/dz,  E2 = d/dy + (x/2) d/dz,  E3 = d/dz

is orthonormal and E3 is the Reeb field of alpha.  Frame components of a
velocity are (a, b, c) with c the cosine of the contact angle.

Also contains the algebra-level tools used by the homogeneity results:
the symmetric tensor measuring failure of natural reductivity, and the
criterion deciding whether a one-parameter orbit is a pre-geodesic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .lie_core import NilPoint, OscVector, bracket


@dataclass(frozen=True)
class FrameVector:
    """Tangent vector by components (a, b, c) on the orthonormal frame."""

    a: float
    b: float
    c: float


@dataclass(frozen=True)
class CoordVector:
    """Tangent vector by coordinate components (dx, dy, dz)."""

    dx: float
    dy: float
    dz: float


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of the pre-geodesic orbit criterion.

    k is the proportionality constant of the defining equation and is
    None when the orbit is not a pre-geodesic.
    """

    is_pregeodesic: bool
    k: float | None = None


def frame_to_coord(p: NilPoint, v: FrameVector) -> CoordVector:
    """Expand a*E1 + b*E2 + c*E3 at p into coordinate components."""
    return CoordVector(v.a, v.b, v.c - 0.5 * (v.a * p.y - v.b * p.x))


def coord_to_frame(p: NilPoint, v: CoordVector) -> FrameVector:
    """Inverse of frame_to_coord at the same base point.

    The c component is the contact form evaluated on v.
    """
    return FrameVector(v.dx, v.dy, v.dz + 0.5 * (v.dx * p.y - p.x * v.dy))


def metric(p: NilPoint, v: CoordVector, w: CoordVector) -> float:
    """Riemannian inner product of two coordinate vectors at p."""
    fv = coord_to_frame(p, v)
    fw = coord_to_frame(p, w)
    return fv.a * fw.a + fv.b * fw.b + fv.c * fw.c


def contact_form(p: NilPoint, v: CoordVector) -> float:
    """Evaluate alpha = dz + (y dx - x dy)/2 on v at p."""
    return coord_to_frame(p, v).c


def lorentz(v: FrameVector) -> FrameVector:
    """Lorentz force operator of the magnetic form d(alpha).

    Rotates the contact plane a quarter turn and kills the Reeb
    direction: (a, b, c) -> (-b, a, 0).
    """
    return FrameVector(-v.b, v.a, 0.0)


def cross(v: FrameVector, w: FrameVector) -> FrameVector:
    """Cross product in frame components for the metric volume form.

    Oriented so that cross(E1, E2) = E3; then cross(E3, .) agrees with
    lorentz on every vector.
    """
    return FrameVector(
        v.b * w.c - v.c * w.b,
        v.c * w.a - v.a * w.c,
        v.a * w.b - v.b * w.a,
    )


def connection(v: FrameVector, w: FrameVector) -> FrameVector:
    """Levi-Civita connection on constant frame fields.

    Bilinear extension of the frame table; derivatives of coefficient
    functions are the caller's job (see curve_acceleration).
    """
    return FrameVector(
        0.5 * (v.b * w.c + v.c * w.b),
        -0.5 * (v.a * w.c + v.c * w.a),
        0.5 * (v.a * w.b - v.b * w.a),
    )


def curve_acceleration(
    x: float,
    y: float,
    dx: float,
    dy: float,
    dz: float,
    ddx: float,
    ddy: float,
    ddz: float,
) -> FrameVector:
    """Covariant acceleration of a coordinate curve, in frame components.

    Args:
        x, y: position at the evaluation parameter (z never enters).
        dx, dy, dz: first derivatives of the coordinates.
        ddx, ddy, ddz: second derivatives.

    Returns the frame components

        (x'' + cos(theta) y',  y'' - cos(theta) x',  (cos theta)')

    with cos(theta) = z' + (x' y - x y')/2 the contact cosine of the
    velocity and (cos theta)' = z'' + (x'' y - x y'')/2.
    """
    cos_t = dz + 0.5 * (dx * y - x * dy)
    dcos_t = ddz + 0.5 * (ddx * y - x * ddy)
    return FrameVector(ddx + cos_t * dy, ddy - cos_t * dx, dcos_t)


def _coefficients(basis: list[OscVector], v: OscVector) -> np.ndarray:
    """Coordinates of v on basis + [E4], the rotation axis completing it.

    The last entry is the component along E4; dropping it projects onto
    the span of the basis along the reductive complement.
    """
    cols = [[b.e1, b.e2, b.e3, b.e4] for b in basis]
    cols.append([0.0, 0.0, 0.0, 1.0])
    a = np.array(cols).T
    rhs = np.array([v.e1, v.e2, v.e3, v.e4])
    coef, residual, rank, _ = np.linalg.lstsq(a, rhs)
    if rank < a.shape[1] or np.max(np.abs(a @ coef - rhs)) > 1e-12:
        raise DomainError("vector is not in the span of basis + complement")
    return coef


def u_tensor(basis: list[OscVector], x: OscVector, y: OscVector) -> OscVector:
    """Symmetric tensor of a reductive decomposition, on the given basis.

    The basis spans the reductive summand m and is declared orthonormal;
    the complement is the rotation axis E4.  Solves

        2 <U(X,Y), Z> = <X, [Z,Y]_m> + <Y, [Z,X]_m>

    against every basis Z, where [.]_m projects along the complement.
    U vanishes identically exactly when the decomposition is naturally
    reductive.

    Raises DomainError when x or y is outside the span of the basis
    (component along the complement above 1e-12).
    """
    cx = _coefficients(basis, x)
    cy = _coefficients(basis, y)
    if abs(cx[-1]) > 1e-12 or abs(cy[-1]) > 1e-12:
        raise DomainError("arguments must lie in the span of the basis")
    cx = cx[:-1]
    cy = cy[:-1]

    coeffs = []
    for z in basis:
        bz_y = _coefficients(basis, bracket(z, y))[:-1]
        bz_x = _coefficients(basis, bracket(z, x))[:-1]
        coeffs.append(0.5 * (cx @ bz_y + cy @ bz_x))

    out = np.zeros(4)
    for c, b in zip(coeffs, basis):
        out += c * np.array([b.e1, b.e2, b.e3, b.e4])
    return OscVector(out[0], out[1], out[2], out[3])


def go_criterion(w: OscVector, decomposition: str = "nil3") -> CriterionResult:
    """Decide whether s -> exp(s w).o is a pre-geodesic of the orbit.

    Tests for a constant k with <[w, V]_m, w_m> = k <w_m, V> for every V
    in the summand, solving for k by least squares and accepting when the
    residual is below 1e-10 * (1 + |w|^2).  A vanishing projection w_m
    (isotropy directions, constant orbit) is reported as a pre-geodesic
    with k = 0.
    """
    if decomposition == "nil3":
        basis = [OscVector(1, 0, 0, 0), OscVector(0, 1, 0, 0), OscVector(0, 0, 1, 0)]
    elif decomposition == "m":
        basis = [OscVector(1, 0, 0, 0), OscVector(0, 1, 0, 0), OscVector(0, 0, 1, 1)]
    else:
        raise DomainError(f"unknown decomposition {decomposition!r}")

    wm = _coefficients(basis, w)[:-1]
    lhs = np.array([_coefficients(basis, bracket(w, v))[:-1] @ wm for v in basis])
    rhs = wm  # <w_m, V_i> for an orthonormal basis

    norm2 = w.e1 ** 2 + w.e2 ** 2 + w.e3 ** 2 + w.e4 ** 2
    tol = 1e-10 * (1.0 + norm2)

    denom = rhs @ rhs
    if denom == 0.0:
        k = 0.0
    else:
        k = (lhs @ rhs) / denom
    if np.max(np.abs(lhs - k * rhs)) <= tol:
        return CriterionResult(True, float(k))
    return CriterionResult(False, None)
