"""Triangles of pairwise ultraparallel complex geodesics.

A triangle is an ordered triple of positive polar points g1, g2, g3 with
pairwise tance > 1.  Its isometry class is captured by the invariants

    t_ij = sqrt(ta(g_i, g_j)),
    eps  = unit part of <g1,g2><g2,g3><g3,g1> / (<g1,g1><g2,g2><g3,g3>),

and the derived discriminant

    d = 1 + 2 t12 t23 t31 Re(eps) - t12^2 - t23^2 - t31^2,

the determinant of the normalized Gram matrix; d <= 0 for realizable
triples, with d = 0 exactly when the three geodesics lie in a common
complex plane.

The triangle is transversal when each pair of its bisectors is transversal
along the shared slice, which the invariants detect by three cyclic
inequalities; counterclockwise means Im(eps) < 0.  The holonomy of a
transversal counterclockwise triangle is the composition of the three
half-turns in the middle slices of its sides; it stabilizes the slice of
g1 and its restriction there can never be the identity or a parabolic
rotating the boundary against the orientation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .bisector import STRICT_MARGIN
from .hermitian import (
    PVec,
    classify,
    form,
    gram3,
    midpoint_polar,
    reflection,
    tance,
)
from .isometry import Isometry, SliceClass, classify as classify_action, restrict_to_slice

__all__ = [
    "PropertyViolation",
    "TriangleInv",
    "TrianglePolars",
    "invariants",
    "transversality_slack",
    "is_transversal",
    "is_ccw",
    "holonomy",
    "holonomy_abs_trace",
    "classify_triangle",
    "cplane_area",
    "region_member",
    "deformation_path",
    "realize",
]


class PropertyViolation(RuntimeError):
    """A law that should hold for every valid input failed beyond tolerance."""


@dataclass(frozen=True)
class TriangleInv:
    """Isometry invariants (t12, t23, t31, eps) of an ultraparallel triple."""

    t12: float
    t23: float
    t31: float
    eps: complex

    def __post_init__(self):
        for t, name in ((self.t12, "t12"), (self.t23, "t23"), (self.t31, "t31")):
            if not t > 1.0:
                raise ValueError(f"{name} = {t} is not > 1")
        if abs(abs(self.eps) - 1.0) > 1e-9:
            raise ValueError(f"|eps| = {abs(self.eps)} is not 1")
        object.__setattr__(self, "eps", self.eps / abs(self.eps))
        if self.d > 1e-10:
            raise ValueError(f"unrealizable invariants: d = {self.d} > 0")

    @property
    def eps0(self) -> float:
        return self.eps.real

    @property
    def eps1(self) -> float:
        return self.eps.imag

    @property
    def d(self) -> float:
        return (
            1.0
            + 2.0 * self.t12 * self.t23 * self.t31 * self.eps0
            - self.t12 * self.t12
            - self.t23 * self.t23
            - self.t31 * self.t31
        )


@dataclass(frozen=True)
class TrianglePolars:
    """Ordered triple of pairwise ultraparallel positive polar points."""

    g1: PVec
    g2: PVec
    g3: PVec

    def __post_init__(self):
        for g, name in ((self.g1, "g1"), (self.g2, "g2"), (self.g3, "g3")):
            if not classify(g).is_positive:
                raise ValueError(f"{name} is not a positive point")
        for a, b, name in (
            (self.g1, self.g2, "ta(g1,g2)"),
            (self.g2, self.g3, "ta(g2,g3)"),
            (self.g3, self.g1, "ta(g3,g1)"),
        ):
            ta = tance(a, b)
            if not ta > 1.0 + 1e-10:
                raise ValueError(f"{name} = {ta} is not > 1")


def invariants(T: TrianglePolars) -> TriangleInv:
    g1, g2, g3 = T.g1, T.g2, T.g3
    t12 = np.sqrt(tance(g1, g2))
    t23 = np.sqrt(tance(g2, g3))
    t31 = np.sqrt(tance(g3, g1))
    kappa = (
        form(g1, g2)
        * form(g2, g3)
        * form(g3, g1)
        / (form(g1, g1) * form(g2, g2) * form(g3, g3)).real
    )
    return TriangleInv(float(t12), float(t23), float(t31), kappa / abs(kappa))


def transversality_slack(I: TriangleInv) -> float:
    """Minimum over the three cyclic inequalities of their margin; the
    triangle's bisectors are pairwise transversal along the common slices
    iff this is positive.

    Each inequality reads a^2 eps0^2 + b^2 + c^2 < 1 + 2 a b c eps0 with
    (a, b, c) a cyclic rotation of (t12, t23, t31).
    """
    e0 = I.eps0
    slack = np.inf
    for a, b, c in (
        (I.t12, I.t23, I.t31),
        (I.t23, I.t31, I.t12),
        (I.t31, I.t12, I.t23),
    ):
        lhs = a * a * e0 * e0 + b * b + c * c
        rhs = 1.0 + 2.0 * a * b * c * e0
        slack = min(slack, rhs - lhs)
    return float(slack)


def is_transversal(I: TriangleInv, margin: float = STRICT_MARGIN) -> bool:
    return transversality_slack(I) > margin


def is_ccw(I: TriangleInv, margin: float = STRICT_MARGIN) -> bool:
    """Counterclockwise orientation of the triangle: Im(eps) < 0."""
    return I.eps1 < -margin


def _normalized_reps(T: TrianglePolars) -> tuple[PVec, PVec, PVec]:
    """Representatives with <g_i,g_i> = 1, <g1,g2> and <g2,g3> real
    positive; then <g3,g1> = t31 * eps automatically."""
    g1 = T.g1 / np.sqrt(form(T.g1, T.g1).real)
    g2 = T.g2 / np.sqrt(form(T.g2, T.g2).real)
    g3 = T.g3 / np.sqrt(form(T.g3, T.g3).real)
    g2 = g2 * np.exp(1j * np.angle(form(g1, g2)))
    g3 = g3 * np.exp(1j * np.angle(form(g2, g3)))
    return g1, g2, g3


def holonomy(T: TrianglePolars) -> Isometry:
    """Composition of the half-turns in the middle slices of the sides.

    With m1, m2, m3 the midpoint polars of (g1, g2), (g2, g3), (g3, g1),
    the holonomy is R(m3) R(m2) R(m1); it fixes the polar g1 up to the
    unit factor eps, hence stabilizes the slice of g1.
    """
    g1, g2, g3 = _normalized_reps(T)
    m1 = midpoint_polar(g1, g2)
    m2 = midpoint_polar(g2, g3)
    m3 = midpoint_polar(g3, g1)
    return reflection(m3) @ reflection(m2) @ reflection(m1)


def holonomy_abs_trace(I: TriangleInv) -> float:
    """|trace| of the restriction of the holonomy to the slice of g1,
    lifted to SU(1,1); a closed form in the invariants:

        sqrt(2 (1 + eps0)) * (1 - d / ((t12+1)(t23+1)(t31+1))).
    """
    prod = (I.t12 + 1.0) * (I.t23 + 1.0) * (I.t31 + 1.0)
    return float(np.sqrt(2.0 * (1.0 + I.eps0)) * (1.0 - I.d / prod))


def classify_triangle(T: TrianglePolars, tol: float = 1e-8) -> SliceClass:
    """Dynamics of the holonomy on the slice of g1, for a transversal
    counterclockwise triangle.

    The restriction is never the identity and never a parabolic moving the
    boundary circle counterclockwise; those outcomes raise
    PropertyViolation.
    """
    I = invariants(T)
    if not is_transversal(I, margin=0.0):
        raise ValueError("triangle is not transversal")
    if not is_ccw(I, margin=0.0):
        raise ValueError("triangle is not counterclockwise")
    action = restrict_to_slice(holonomy(T), T.g1)
    sc = classify_action(action, tol=tol)
    if sc.tag == "identity":
        raise PropertyViolation("holonomy restricts to the identity")
    if sc.tag == "parabolic" and sc.side == "R":
        raise PropertyViolation("holonomy restricts to a right parabolic")
    return sc


def cplane_area(T: TrianglePolars) -> float:
    """Area of the geodesic triangle cut on the common complex plane.

    Requires d = 0: the three geodesics lie in one complex plane and the
    middle points of the sides form a geodesic triangle there.  In the
    curvature -4 metric of the plane the area lies in (0, pi/4) for a
    counterclockwise triangle, and the holonomy rotates the plane by
    -2 * Area.
    """
    I = invariants(T)
    if abs(I.d) > 1e-8:
        raise ValueError(f"geodesics are not coplanar: d = {I.d}")
    g1, g2, g3 = _normalized_reps(T)
    t12 = I.t12
    t23 = I.t23
    # projections of the vertices of the middle triangle to the plane's
    # pairwise intersection points; any rescaling drops out of the argument
    p1 = g2 - t12 * g1
    p2 = g1 - t12 * g2
    p3 = g2 - t23 * g3
    val = -form(p1, p2) * form(p2, p3) * form(p3, p1)
    return float(0.5 * np.angle(val))


def _d_of(e: float, t1: float, t2: float, t3: float) -> float:
    return 1.0 + 2.0 * t1 * t2 * t3 * e - t1 * t1 - t2 * t2 - t3 * t3


def region_member(
    e: float,
    t1: float,
    t2: float,
    t3: float,
    margin: float = 0.0,
    slack: float = 1e-12,
) -> bool:
    """Membership in the deformation region

        1 < t1 <= t2, t3,
        t1^2 e^2 + t2^2 + t3^2 < 1 + 2 t1 t2 t3 e <= t1^2 + t2^2 + t3^2,

    with 0 < e <= 1.  The strict inequalities get `margin`, the non-strict
    ones a tolerance `slack`.
    """
    if not (t1 > 1.0 + margin and e > margin and e <= 1.0 + slack):
        return False
    if t1 > min(t2, t3) + slack:
        return False
    mid = 1.0 + 2.0 * t1 * t2 * t3 * e
    if not mid - (t1 * t1 * e * e + t2 * t2 + t3 * t3) > margin:
        return False
    return mid <= t1 * t1 + t2 * t2 + t3 * t3 + slack


def deformation_path(
    e: float, t1: float, t2: float, t3: float, step: float = 0.05
) -> list[tuple[float, float, float, float]]:
    """Monotone path inside the region from (e, t1, t2, t3) to the d = 0
    locus, sampled at parameter increments of at most `step`.

    d never decreases along the path.  Three stages: raise t1 to the
    smaller of t2, t3; then raise the two equal smallest together to the
    third; then raise e.  Each stage stops early at the first d = 0
    contact, and the last one always reaches it at e = (3t^2 - 1)/(2t^3).
    """
    if not region_member(e, t1, t2, t3):
        raise ValueError(f"({e}, {t1}, {t2}, {t3}) is outside the region")
    swapped = t2 > t3
    if swapped:
        t2, t3 = t3, t2

    path: list[tuple[float, float, float, float]] = []

    def emit(pts):
        for q in pts:
            if path and max(abs(a - b) for a, b in zip(path[-1], q)) < 1e-15:
                continue
            path.append(q)

    def ramp(a: float, b: float) -> np.ndarray:
        if b <= a:
            return np.array([a])
        n = max(2, int(np.ceil((b - a) / step)) + 1)
        return np.linspace(a, b, n)

    if abs(_d_of(e, t1, t2, t3)) <= 1e-10:
        path.append((e, t1, t2, t3))
    else:
        # stage 1: t1 -> t2 (d is increasing in t1 inside the region)
        x_end = t2
        if _d_of(e, t2, t2, t3) >= 0.0:
            x_end = optimize.brentq(
                lambda x: _d_of(e, x, t2, t3), t1, t2, xtol=1e-10
            )
        emit((e, x, t2, t3) for x in ramp(t1, x_end))
        if _d_of(e, x_end, t2, t3) < -1e-10:
            # stage 2: t1 = t2 = x -> t3 (d increasing in x since t3 e > 1)
            x_end = t3
            if _d_of(e, t3, t3, t3) >= 0.0:
                x_end = optimize.brentq(
                    lambda x: _d_of(e, x, x, t3), t2, t3, xtol=1e-10
                )
            emit((e, x, x, t3) for x in ramp(t2, x_end))
            if _d_of(e, x_end, x_end, t3) < -1e-10:
                # stage 3: equilateral, e -> (3t^2-1)/(2t^3) where d = 0
                t = t3
                e_end = (3.0 * t * t - 1.0) / (2.0 * t ** 3)
                emit((u, t, t, t) for u in ramp(e, e_end))

    if swapped:
        path = [(u, a, c, b) for (u, a, b, c) in path]
    return path


def realize(I: TriangleInv) -> TrianglePolars:
    """A triple of polar points with the given invariants.

    Factor the conjugated Gram matrix through the signature (-, +, +)
    form: if conj(G) = V diag(lambda) V* with the negative eigenvalue
    first, the columns of diag(sqrt|lambda|) V* realize G.
    """
    if I.d > 1e-10:
        raise ValueError(f"unrealizable invariants: d = {I.d} > 0")
    t31eps = I.t31 * I.eps
    G = np.array(
        [
            [1.0, I.t12, np.conj(t31eps)],
            [I.t12, 1.0, I.t23],
            [t31eps, I.t23, 1.0],
        ],
        dtype=complex,
    )
    w, V = np.linalg.eigh(np.conj(G))
    order = np.argsort(w)
    w = w[order]
    V = V[:, order]
    if not (w[0] < 0.0 and w[1] >= -1e-10):
        raise ValueError(f"Gram matrix has signature {np.sign(w)}")
    P = np.diag(np.sqrt(np.abs(w)))
    X = P @ V.conj().T
    T = TrianglePolars(X[:, 0], X[:, 1], X[:, 2])
    if np.max(np.abs(gram3(T.g1, T.g2, T.g3) - G)) > 1e-8:
        raise PropertyViolation("Gram factorization failed to reproduce the matrix")
    return T
