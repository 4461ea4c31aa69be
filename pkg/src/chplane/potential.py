"""Primitive 1-form of the symplectic area and the discrete rotation sum.

For a fixed centre c in the ball, the 1-form

    P_c(v_p) = -Im( <p,p> <v,c> / (2 <p,c>) )

is a primitive of the Kaehler form omega(v, w) = Im <w_p, v_p>: along any
surface patch, d P_c = omega.  Its integral along a curve equals half the
continued argument of <x(s), c> whenever the lift is horizontal
(<x', x> = 0, which forces <x, x> constant), and that is how the rotation
number of a boundary loop is computed: the sum of argument increments of
the pairing with the centre.
"""

from __future__ import annotations

import numpy as np

from .hermitian import PVec, TangentRep, form, norm2, proj_perp
from .isometry import DegeneracyError, inverse
from .quadrangle import QuadrangleData, t_of
from .triangle import PropertyViolation

__all__ = ["potential", "omega", "f_pot", "check_dP", "toledo_by_integral"]


def potential(v: TangentRep, c: PVec) -> float:
    """The value P_c(v) of the primitive 1-form on a tangent vector."""
    p = v.base
    pc = form(p, c)
    if abs(pc) < 1e-14 * np.sqrt(norm2(p) * norm2(c)):
        raise ValueError("base point is orthogonal to the centre")
    return float(-(form(p, p).real * form(v.dir, c) / (2.0 * pc)).imag)


def omega(v: TangentRep, w: TangentRep) -> float:
    """The Kaehler form Im <w, v> of two tangent vectors at a common base.

    The conjugate order makes omega positive on (v, iv), so the form
    integrates to the positive area of counterclockwise patches."""
    if norm2(v.base - w.base) > 1e-16 * norm2(v.base):
        raise ValueError("tangent vectors have different base points")
    return float(w.pairing(v).imag)


def f_pot(points, c: PVec) -> float:
    """Integral of P_c along the curve through `points` (horizontal
    lifts), as half the continued argument of <x, c>.

    Consecutive samples must be dense enough that the argument moves by
    less than pi/2 per step; larger jumps raise DegeneracyError.
    """
    angles = []
    for x in points:
        xc = form(x, c)
        if abs(xc) < 1e-14 * np.sqrt(norm2(x) * norm2(c)):
            raise ValueError("curve point is orthogonal to the centre")
        angles.append(np.angle(xc))
    if len(angles) < 2:
        raise ValueError("need at least two curve points")
    total = 0.0
    for a, b in zip(angles, angles[1:]):
        step = (b - a + np.pi) % (2.0 * np.pi) - np.pi
        if abs(step) >= np.pi / 2.0:
            raise DegeneracyError(f"argument step {step} too large; refine the curve")
        total += step
    return 0.5 * total


def check_dP(patch, c: PVec, s: float = 0.0, t: float = 0.0,
             h: float = 1e-3) -> float:
    """Residual |dP_c - omega| of the exterior derivative identity at one
    point of a smooth patch (s, t) -> lift.

    The patch must keep <x, x> constant (P is defined on such lifts only;
    rescale by sqrt(-<x,x>) first).  All derivatives are central
    differences with step h; the residual is then O(h^2).
    """

    def tangent(s0: float, t0: float, ds: float, dt: float) -> TangentRep:
        x = patch(s0, t0)
        dx = (patch(s0 + ds, t0 + dt) - patch(s0 - ds, t0 - dt)) / (2.0 * max(ds, dt))
        return TangentRep(x, proj_perp(x, dx))

    def a_coeff(s0: float, t0: float) -> float:
        return potential(tangent(s0, t0, h, 0.0), c)

    def b_coeff(s0: float, t0: float) -> float:
        return potential(tangent(s0, t0, 0.0, h), c)

    db_ds = (b_coeff(s + h, t) - b_coeff(s - h, t)) / (2.0 * h)
    da_dt = (a_coeff(s, t + h) - a_coeff(s, t - h)) / (2.0 * h)
    w = omega(tangent(s, t, h, 0.0), tangent(s, t, 0.0, h))
    return float(abs((db_ds - da_dt) - w))


def toledo_by_integral(data: QuadrangleData) -> float:
    """Rotation number of the glued boundary loop, computed by following
    the actual chain of reflections rather than the closed form.

    The loop vertices are s_{i+1} = R_i s_i with s_2 = h_1 and
    R_i = W^{i-1} R W^{1-i}; the sum of the argument increments of the
    pairing with the fixed centre q1, with the argument taken in
    [0, 2 pi), gives the rotation number (2t - 3n)/3.
    """
    n = data.params.n
    W, R = data.W, data.R
    q = np.array([1.0, 0.0, 0.0], dtype=complex)
    Winv = inverse(W)
    s = R @ data.h1  # s_1, since R_1 swaps s_1 and s_2 = h_1
    vertices = [s]
    Ri = R.copy()
    for i in range(1, n + 1):
        if i > 1:
            Ri = W @ Ri @ Winv
        s = Ri @ s
        vertices.append(s)
    delta = data.delta
    closure = np.linalg.norm(vertices[-1] - delta * vertices[0]) / np.linalg.norm(
        vertices[0]
    )
    # roundoff through the n conjugated reflections grows about
    # quadratically in n (1.8e-12 n^2 observed at worst); the guard keeps
    # two orders of headroom and still catches any structural misclosure
    if closure > 1e-10 * n * n:
        raise PropertyViolation(f"reflection chain fails to close: {closure:.3e}")
    total = 0.0
    for a, b in zip(vertices, vertices[1:]):
        qa = form(q, a)
        qb = form(q, b)
        if min(abs(qa), abs(qb)) < 1e-14 * max(
            np.linalg.norm(a), np.linalg.norm(b)
        ):
            raise DegeneracyError("loop vertex orthogonal to the centre")
        ang = float(np.angle(qb / qa))
        if abs(ang) < 1e-9:
            # an increment on the cut of [0, 2 pi) cannot be resolved
            raise DegeneracyError("argument increment at the branch point")
        total += ang % (2.0 * np.pi) - np.pi
    return total / np.pi
