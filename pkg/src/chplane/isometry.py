"""Isometries of the complex hyperbolic plane and their slice dynamics.

An isometry is stored as a 3x3 complex matrix that is unitary with respect
to the fixed (-,+,+) form.  When an isometry stabilizes a complex geodesic
(it fixes the polar point projectively), its restriction to that geodesic
is a Moebius transformation of the Poincare disc; this module extracts that
restriction in the deterministic (n0, p0) basis of `slice_basis`, classifies
it as elliptic / parabolic / hyperbolic / identity, and provides the two
combinatorial predicates on ideal boundary points used by the census:
the cyclic-order bit o and the L-part indicator lambda.

Conventions.  The boundary circle of the slice of g is parameterized by
z = e^{i theta} via the point z*p0 + n0; increasing theta is the complex
orientation.  "Clockwise" motion means the boundary angle decreases.  For a
parabolic restriction the L label means the single non-fixed orbit moves
clockwise, R counterclockwise.  The L-part of the boundary is: the whole
circle for an elliptic restriction, the closed clockwise-moving arc for a
hyperbolic one, the circle minus the fixed point for L-parabolic, and empty
for R-parabolic or the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hermitian import (
    J_DIAG,
    PVec,
    form,
    norm2,
    proj_perp,
    slice_basis,
)

__all__ = [
    "Isometry",
    "SliceAction",
    "SliceClass",
    "DegeneracyError",
    "StabilizationError",
    "apply",
    "compose",
    "inverse",
    "is_form_unitary",
    "restrict_to_slice",
    "classify",
    "boundary_angle",
    "cyclic_order",
    "l_part_indicator",
    "eigensystem3",
]

Isometry = np.ndarray

_J = np.diag(J_DIAG).astype(complex)

# Band around |trace| = 2 inside which a slice action counts as parabolic
# (or the identity); below it elliptic, above it hyperbolic.
PARABOLIC_BAND = 1e-8

# Minimal angular separation for the boundary-point predicates; closer
# configurations raise DegeneracyError so the caller can retry with a new
# generic point.
SEPARATION_TOL = 1e-6


class DegeneracyError(ValueError):
    """A boundary configuration is too close to degenerate to decide."""


class StabilizationError(ValueError):
    """The isometry does not stabilize the requested slice."""


def apply(I: Isometry, p: PVec) -> PVec:
    return I @ p


def compose(I: Isometry, K: Isometry) -> Isometry:
    """The isometry acting as I after K."""
    return I @ K


def inverse(I: Isometry) -> Isometry:
    # form-unitarity gives the inverse in closed form: I^-1 = J I* J
    return _J @ I.conj().T @ _J


def is_form_unitary(I: Isometry, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(I.conj().T @ _J @ I - _J)) < tol)


@dataclass(frozen=True)
class SliceAction:
    """Restriction of a slice-stabilizing isometry to the (n0, p0) basis.

    matrix is 2x2, normalized to determinant 1 by the principal square
    root; it preserves the residual form diag(-1, 1).  Everything consumed
    downstream (|trace|, fixed points, rotation direction) is invariant
    under the leftover overall sign.
    """

    matrix: np.ndarray
    g: PVec

    def moebius(self, z: complex) -> complex:
        """Action on the disc coordinate z of the point z*p0 + n0."""
        A = self.matrix
        return (A[1, 0] + A[1, 1] * z) / (A[0, 0] + A[0, 1] * z)


@dataclass(frozen=True)
class SliceClass:
    """Classification of a slice action.

    tag: 'elliptic', 'parabolic', 'hyperbolic', or 'identity'.
    rotation_angle: elliptic only, in (-pi, pi], the angle by which boundary
        points advance around the fixed disc center.
    fixed_angles: boundary angles of the fixed ideal points (two for
        hyperbolic, one for parabolic, none otherwise).
    side: 'L' or 'R' for a parabolic action, by the motion direction of
        non-fixed boundary points; None otherwise.
    """

    tag: str
    abs_trace: float
    rotation_angle: float | None = None
    fixed_angles: tuple[float, ...] = ()
    side: str | None = None


def restrict_to_slice(I: Isometry, g: PVec) -> SliceAction:
    """Express a slice-stabilizing isometry in the slice_basis coordinates.

    Requires I to fix the projective point g; the acceptance threshold
    scales with |I|_F^2 because products of reflections in far-apart
    slices amplify rounding in I @ g by that factor.  The returned 2x2
    matrix is det-normalized.
    """
    Ig = I @ g
    residue = proj_perp(g, Ig)
    amplification = float(np.sum(np.abs(I) ** 2)) * norm2(g) / norm2(Ig)
    threshold = max(1e-8, 100.0 * np.finfo(float).eps * amplification)
    if np.sqrt(norm2(residue) / norm2(Ig)) > threshold:
        raise StabilizationError("isometry does not fix the polar point")
    n0, p0 = slice_basis(g)

    def coords(x: PVec) -> np.ndarray:
        return np.array([-form(x, n0), form(x, p0)], dtype=complex)

    A = np.column_stack([coords(I @ n0), coords(I @ p0)])
    A = A / np.sqrt(np.linalg.det(A))
    return SliceAction(A, g)


def _wrap(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    a = (angle + np.pi) % (2.0 * np.pi) - np.pi
    return np.pi if a == -np.pi else a


def classify(action: SliceAction, tol: float = PARABOLIC_BAND) -> SliceClass:
    """Classify a slice action by |trace| against 2 with band tol."""
    A = action.matrix
    tr = complex(np.trace(A))
    abs_trace = abs(tr)
    if abs_trace < 2.0 - tol:
        w, V = np.linalg.eig(A)
        q = -np.abs(V[0, :]) ** 2 + np.abs(V[1, :]) ** 2
        neg = int(np.argmin(q))
        pos = 1 - neg
        angle = float(np.angle(w[pos] / w[neg]))
        if angle <= -np.pi:
            angle += 2.0 * np.pi
        return SliceClass("elliptic", abs_trace, rotation_angle=angle)
    if abs_trace > 2.0 + tol:
        w, V = np.linalg.eig(A)
        angles = tuple(
            sorted(float(np.angle(V[1, i] / V[0, i]) % (2.0 * np.pi)) for i in range(2))
        )
        return SliceClass("hyperbolic", abs_trace, fixed_angles=angles)
    # |trace| = 2 band: identity (A = +-I) or parabolic
    mu = tr / 2.0
    if np.max(np.abs(A - mu * np.eye(2))) < tol:
        return SliceClass("identity", abs_trace)
    # kernel direction of A - mu I is the unique fixed boundary point
    _, _, Vh = np.linalg.svd(A - mu * np.eye(2))
    v = Vh[-1].conj()
    theta_f = float(np.angle(v[1] / v[0]) % (2.0 * np.pi))
    z0 = np.exp(1j * (theta_f + np.pi))
    z1 = action.moebius(z0)
    delta = _wrap(float(np.angle(z1) - np.angle(z0)))
    side = "L" if delta < 0 else "R"
    return SliceClass("parabolic", abs_trace, fixed_angles=(theta_f,), side=side)


def boundary_angle(g: PVec, x: PVec) -> float:
    """Angle theta in [0, 2pi) with x proportional to e^{i theta} p0 + n0.

    x must be an isotropic point on the ideal boundary of the slice of g.
    """
    if abs(form(x, g)) > 1e-8 * np.sqrt(norm2(x) * norm2(g)):
        raise ValueError("x is not on the slice of g")
    if abs(form(x, x).real) > 1e-8 * norm2(x):
        raise ValueError("x is not isotropic")
    n0, p0 = slice_basis(g)
    a = -form(x, n0)
    b = form(x, p0)
    if abs(a) < 1e-12 * np.sqrt(norm2(x)):
        raise ValueError("x is not on the slice boundary")
    return float(np.angle(b / a) % (2.0 * np.pi))


def cyclic_order(theta1: float, theta2: float, theta3: float) -> int:
    """0 if theta1, theta2, theta3 are in counterclockwise cyclic order, else 1.

    Concretely: 0 iff (theta2 - theta1 mod 2pi) < (theta3 - theta1 mod 2pi).
    Raises DegeneracyError when two of the angles are closer than the
    separation tolerance.
    """
    t = np.array([theta1, theta2, theta3]) % (2.0 * np.pi)
    for i in range(3):
        for j in range(i + 1, 3):
            d = abs(_wrap(t[i] - t[j]))
            if d < SEPARATION_TOL:
                raise DegeneracyError(f"angles {i},{j} nearly coincide: {d:.2e}")
    d2 = (t[1] - t[0]) % (2.0 * np.pi)
    d3 = (t[2] - t[0]) % (2.0 * np.pi)
    return 0 if d2 < d3 else 1


def l_part_indicator(x: PVec, I: Isometry, g: PVec) -> int:
    """0 if the boundary point x lies in the L-part of I on the slice of g.

    The L-part of an elliptic restriction is the entire boundary circle, so
    the result is 0 regardless of x.  Otherwise the bit records whether I
    moves x clockwise (0) or not (1); R-parabolic and identity restrictions
    have empty L-part and always give 1.
    """
    action = restrict_to_slice(I, g)
    kind = classify(action)
    if kind.tag == "elliptic":
        return 0
    if kind.tag == "identity":
        return 1
    theta0 = boundary_angle(g, x)
    theta1 = boundary_angle(g, I @ x)
    delta = _wrap(theta1 - theta0)
    if abs(delta) < SEPARATION_TOL:
        raise DegeneracyError("x is (nearly) fixed by the restriction")
    return 0 if delta < 0 else 1


def eigensystem3(I: Isometry) -> list[tuple[complex, PVec]]:
    """Eigenvalues and eigenvectors of a regular 3x3 isometry.

    Requires three distinct eigenvalues (pairwise separation > 1e-8);
    eigenvectors are returned with unit coordinate norm and canonical phase,
    ordered by eigenvalue angle.
    """
    w, V = np.linalg.eig(I)
    scale = float(np.max(np.abs(w)))
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(w[i] - w[j]) < 1e-8 * scale:
                raise ValueError("eigenvalues are nearly degenerate")
    order = np.argsort(np.angle(w))
    out = []
    for i in order:
        v = V[:, i] / np.sqrt(norm2(V[:, i]))
        j = int(np.argmax(np.abs(v)))
        v = v * (np.conj(v[j]) / abs(v[j]))
        out.append((complex(w[i]), v))
    return out
