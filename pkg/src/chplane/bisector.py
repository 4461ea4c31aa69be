"""Bisectors: equidistant hypersurfaces and their mutual position.

A bisector is determined by two points g1, g2 of a common real circle with
ta(g1, g2) not in {0, 1}: it is the union of the complex geodesics (slices)
orthogonal to the complex span of g1, g2 along the real spine.  The same
circle carries both the spine points (negative) and the polar points of the
slices (positive), and any such pair determines the same containment
equation

    Im( <g1,x><x,g2> / <g1,g2> ) = 0,

so a bisector may be stored by spine points or by two slice polars
interchangeably.  The focus is the polar point of the complex spine; every
slice passes through it in the projective plane.

Sign conventions follow the normal vector

    n(p, g1, g2) = <-, p> i ( (<p,g2>/<g1,g2>) g1 - (<p,g1>/<g2,g1>) g2 ):

the half-space on the side of the normal is where sigma_f * Im(...) >= 0,
with sigma_f the sign of <f,f> for the focus f.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from .hermitian import (
    J_DIAG,
    PVec,
    TangentRep,
    classify,
    form,
    midpoint_polar,
    norm2,
    proj_perp,
    reflection,
    slice_basis,
    tance,
    tance_to_bisector,
)

__all__ = [
    "STRICT_MARGIN",
    "Bisector",
    "bisector_value",
    "containment_value",
    "halfspace_sign",
    "normal_vector",
    "tangency_test",
    "cotranchal_angle",
    "cotranchal_slack",
    "cotranchal_transversal",
    "slice_transport",
    "spine_vertices",
    "circle_polar",
    "common_slice_polar",
    "transversality_oracle",
    "separability_probe",
]

# Margin for every strict inequality decided in this module; the sweep
# shares it so that census acceptance errs on the side of rejection.
STRICT_MARGIN = 1e-9

# Normalized tangency objective below which the transversality oracle
# declares the two tangent hyperplanes to coincide.
TANGENCY_EPS = 1e-6


def _conj_embed(x: PVec) -> PVec:
    """J * conj(x); pairing <y, x> equals the plain dot product y . _conj_embed(x)."""
    return J_DIAG * np.conj(x)


@dataclass(frozen=True)
class Bisector:
    """Bisector spanned by two circle points g1, g2 with ta not in {0, 1}."""

    g1: PVec
    g2: PVec
    focus: PVec = field(init=False)

    def __post_init__(self):
        for g, name in ((self.g1, "g1"), (self.g2, "g2")):
            if classify(g).is_isotropic:
                raise ValueError(f"{name} is isotropic")
        ta = tance(self.g1, self.g2)
        if not (ta > 1e-10 and abs(ta - 1.0) > 1e-10):
            raise ValueError(f"degenerate circle pair: ta = {ta}")
        f = np.cross(_conj_embed(self.g1), _conj_embed(self.g2))
        object.__setattr__(self, "focus", f)

    @property
    def sigma(self) -> int:
        """Sign of <f,f> for the focus; +1 for a bisector with spine in B."""
        return 1 if form(self.focus, self.focus).real > 0 else -1

    def vertices(self) -> tuple[PVec, PVec]:
        return spine_vertices(self.g1, self.g2)


def bisector_value(x: PVec, B: Bisector) -> complex:
    """The containment value b(x, g1, g2), zero exactly on the bisector.

    Equals <g1,x><x,g2>/<g1,g2> - <g2,x><x,g1>/<g2,g1>, which is purely
    imaginary; returned as 2i * Im(<g1,x><x,g2>/<g1,g2>).
    """
    E = form(B.g1, x) * form(x, B.g2) / form(B.g1, B.g2)
    return 2j * E.imag


def containment_value(x: PVec, B: Bisector) -> float:
    """Scale-free signed containment value (before the sigma_f orientation).

    Im(<g1,x><x,g2>/<g1,g2>) normalized by the representative norms; its
    magnitude is a scale-free measure of distance from the bisector.
    """
    g12 = form(B.g1, B.g2)
    E = form(B.g1, x) * form(x, B.g2) / g12
    return E.imag * abs(g12) / (norm2(x) * np.sqrt(norm2(B.g1) * norm2(B.g2)))


def halfspace_sign(x: PVec, B: Bisector, tol: float = 1e-12) -> int:
    """Which side of the bisector x lies on: +1 on the normal side, -1 on
    the other, 0 within tolerance of the bisector itself."""
    v = B.sigma * containment_value(x, B)
    if v > tol:
        return 1
    if v < -tol:
        return -1
    return 0


def normal_vector(p: PVec, B: Bisector) -> TangentRep:
    """Normal direction to the bisector at a nonisotropic point p of it."""
    if classify(p).is_isotropic:
        raise ValueError("p is isotropic")
    g1, g2 = B.g1, B.g2
    g12 = form(g1, g2)
    d = 1j * ((form(p, g2) / g12) * g1 - (form(p, g1) / np.conj(g12)) * g2)
    if norm2(d) < 1e-24 * norm2(p):
        raise ValueError("p is the focus of the bisector")
    # p must lie on the bisector; kill the tiny residual pairing so the
    # tangent representative is exactly orthogonal to p
    if abs(containment_value(p, B)) > 1e-8:
        raise ValueError("p is not on the bisector")
    return TangentRep(p, proj_perp(p, d))


def tangency_test(v: PVec, p: PVec, B: Bisector) -> float:
    """Derivative of the containment value at p along v; zero iff the
    tangent vector (p, v) is tangent to the bisector."""
    g1, g2 = B.g1, B.g2
    A = (form(g1, v) * form(p, g2) + form(g1, p) * form(v, g2)) / form(g1, g2)
    return 2.0 * A.imag


def cotranchal_angle(g: PVec, g1: PVec, g2: PVec, p: PVec) -> float:
    """Oriented angle at p from the bisector of (g, g1) to that of (g, g2).

    Both bisectors contain the slice of g, and p is a nonisotropic point of
    that slice distinct from the two foci.  The angle is the argument, in
    [0, 2pi), of the pairing of the two normal vectors:

        Arg( -<p,p><g,g> <g1,p><p,g2> / (<g1,g><g,g2>) ).
    """
    scale = np.sqrt(norm2(p) * norm2(g))
    if abs(form(p, g)) > 1e-8 * scale:
        raise ValueError("p is not on the slice of g")
    pp = form(p, p).real
    if abs(pp) <= 1e-12 * norm2(p):
        raise ValueError("p is isotropic")
    a1 = form(g1, p)
    a2 = form(p, g2)
    if abs(a1) < 1e-12 * np.sqrt(norm2(g1) * norm2(p)):
        raise ValueError("p is the focus of the first bisector")
    if abs(a2) < 1e-12 * np.sqrt(norm2(g2) * norm2(p)):
        raise ValueError("p is the focus of the second bisector")
    value = -pp * form(g, g).real * a1 * a2 / (form(g1, g) * form(g, g2))
    return float(np.angle(value) % (2.0 * np.pi))


def cotranchal_slack(g: PVec, g1: PVec, g2: PVec) -> float:
    """Margin of the transversality inequality for two bisectors sharing
    the slice of g; positive means transversal.

    The criterion compares |Re(<g1,g2><g,g>/(<g1,g><g,g2>)) - 1| against
    sqrt(1 - 1/ta(g,g1)) * sqrt(1 - 1/ta(g,g2)).
    """
    if not classify(g).is_positive:
        raise ValueError("g is not a positive point")
    t1 = tance(g, g1)
    t2 = tance(g, g2)
    if not (t1 > 1.0 and t2 > 1.0):
        raise ValueError(f"slices are not ultraparallel: ta = {t1}, {t2}")
    lhs = abs((form(g1, g2) * form(g, g) / (form(g1, g) * form(g, g2))).real - 1.0)
    rhs = np.sqrt(1.0 - 1.0 / t1) * np.sqrt(1.0 - 1.0 / t2)
    return float(rhs - lhs)


def cotranchal_transversal(
    g: PVec, g1: PVec, g2: PVec, margin: float = STRICT_MARGIN
) -> bool:
    """Whether the bisectors of (g, g1) and (g, g2) are transversal along
    their common slice (strict, with the module margin)."""
    return cotranchal_slack(g, g1, g2) > margin


def slice_transport(s: PVec, p1: PVec, p2: PVec) -> PVec:
    """Carry a point of the slice of p1 to the slice of p2 along their
    bisector, by the reflection in the middle slice.

    p1, p2 are ultraparallel positive polar points; s lies on the slice of
    p1, in the closed ball.  The map is linear, sends the slice of p1 onto
    the slice of p2, and preserves the sign class of s.
    """
    if abs(form(s, p1)) > 1e-8 * np.sqrt(norm2(s) * norm2(p1)):
        raise ValueError("s is not on the slice of p1")
    if form(s, s).real > 1e-8 * norm2(s):
        raise ValueError("s is not in the closed ball")
    return reflection(midpoint_polar(p1, p2)) @ s


def spine_vertices(a: PVec, b: PVec) -> tuple[PVec, PVec]:
    """Isotropic points of the real circle through a and b.

    After aligning the phase of b so that <a, b> is real positive, the
    circle is the real span of a, b and its isotropic points solve a real
    quadratic.  Raises when the circle misses the boundary (no real spine).
    """
    ab = form(a, b)
    if abs(ab) < 1e-14 * np.sqrt(norm2(a) * norm2(b)):
        raise ValueError("orthogonal pair spans no real circle")
    b = b * np.exp(1j * np.angle(ab))
    t = abs(ab)
    aa = form(a, a).real
    bb = form(b, b).real
    if abs(bb) < 1e-13 * norm2(b):
        # b itself is a vertex; the other root is linear
        return b, a - (aa / (2.0 * t)) * b
    disc = t * t - aa * bb
    if disc <= 0:
        raise ValueError("circle has no isotropic points")
    r = np.sqrt(disc)
    s1 = (-t + r) / bb
    s2 = (-t - r) / bb
    return a + s1 * b, a + s2 * b


def circle_polar(plane_normal: PVec, x: PVec) -> PVec:
    """The point of a real circle's plane orthogonal (for the form) to x.

    plane_normal is the Euclidean normal of the complex 2-plane (a cross
    product of two spanning vectors); the result spans the intersection of
    the plane with the form-complement of x.
    """
    g = np.cross(plane_normal, _conj_embed(x))
    if norm2(g) < 1e-20 * norm2(plane_normal) * norm2(x):
        raise ValueError("x is orthogonal to the whole plane")
    return g


def _circle_membership(B: Bisector, x: PVec) -> float:
    """How far x is from the real circle of B (0 means on it).

    Solves for the coordinates (C, D) of x in the basis (g1, g2-aligned);
    membership in the circle means (C, D) is real up to a common phase,
    i.e. Im(C * conj(D)) = 0 after normalization.
    """
    ab = form(B.g1, B.g2)
    b2 = B.g2 * np.exp(1j * np.angle(ab))
    M = np.column_stack([B.g1, b2])
    coeffs, res, _, _ = np.linalg.lstsq(M, x, rcond=None)
    planar = norm2(x - M @ coeffs) / norm2(x)
    if planar > 1e-16:
        return float(np.sqrt(planar))
    C, D = coeffs
    # when x is (numerically) proportional to one basis point the other
    # coordinate is lstsq noise; the phase test would compare noise against
    # noise, so call that on-circle outright
    cn = abs(C) * np.sqrt(norm2(B.g1))
    dn = abs(D) * np.sqrt(norm2(B.g2))
    if min(cn, dn) <= 1e-10 * max(cn, dn):
        return 0.0
    return float(abs((C * np.conj(D)).imag) / (abs(C) * abs(D)))


def common_slice_polar(B1: Bisector, B2: Bisector) -> PVec:
    """Polar point of the slice shared by two cotranchal bisectors.

    Generically the two complex spines span distinct planes and the common
    circle point is their intersection line; when the complex spines
    coincide, the shared slice passes through the crossing point of the two
    real spines inside that plane.  Raises when the bisectors do not share
    a slice with positive polar.
    """
    nu1 = np.cross(B1.g1, B1.g2)
    nu2 = np.cross(B2.g1, B2.g2)
    g = np.cross(nu1, nu2)
    if norm2(g) > 1e-16 * norm2(nu1) * norm2(nu2):
        if _circle_membership(B1, g) > 1e-8 or _circle_membership(B2, g) > 1e-8:
            raise ValueError("bisectors are not cotranchal")
        if not classify(g).is_positive:
            raise ValueError("common circle point is not a slice polar")
        return g
    # shared complex spine: find the crossing of the two real spines
    v1, v2 = B1.vertices()
    u1, u2 = B2.vertices()
    M = np.column_stack([u1, u2])
    alpha, _, _, _ = np.linalg.lstsq(M, v1, rcond=None)
    beta, _, _, _ = np.linalg.lstsq(M, v2, rcond=None)
    # x = a v1 + b v2 lies on the second circle iff its u-coordinates are
    # real-proportional; that is a real quadratic in (a : b)
    qa = (alpha[0] * np.conj(alpha[1])).imag
    qb = (alpha[0] * np.conj(beta[1]) + beta[0] * np.conj(alpha[1])).imag
    qc = (beta[0] * np.conj(beta[1])).imag
    if abs(qa) < 1e-14 * (abs(qb) + abs(qc)):
        roots = [-qc / qb] if abs(qb) > 0 else []
        pairs = [(r, 1.0) for r in roots]
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0:
            raise ValueError("real spines do not cross")
        pairs = [
            ((-qb + np.sqrt(disc)) / (2.0 * qa), 1.0),
            ((-qb - np.sqrt(disc)) / (2.0 * qa), 1.0),
        ]
    for a, b in pairs:
        x0 = a * v1 + b * v2
        if classify(x0).is_negative:
            return circle_polar(nu1, x0)
    raise ValueError("real spines do not cross inside the ball")


def transversality_oracle(g: PVec, g1: PVec, g2: PVec, grid: int = 24) -> bool:
    """Brute-force transversality check along the common slice of g.

    At a point p of the closed slice disc, the normals to the two bisectors
    are i times complex multiples of the same polar direction, with phases
    <p,g1>/<g,g1> and <p,g2>/<g,g2>; the two tangent hyperplanes coincide
    exactly when those phases agree mod pi, i.e. when

        y(p) = <p,g1><g2,p> / (<g,g1><g2,g>)

    is real.  The oracle minimizes |Im y| / |y| over the disc in the
    chart coordinate (no polar angle: its gradient degenerates at the
    centre), polishes the best few separated grid cells with bounded
    quasi-Newton steps (the zero set is a circle arc that can clip the
    disc in a narrow lens), and reports transversality iff the minimum
    stays above a fixed threshold.
    """
    if not classify(g).is_positive:
        raise ValueError("g is not a positive point")
    if not (tance(g, g1) > 1.0 and tance(g, g2) > 1.0):
        raise ValueError("slices are not ultraparallel")
    n0, p0 = slice_basis(g)
    denom = form(g, g1) * form(g2, g)

    def objective(xy: np.ndarray) -> float:
        z = complex(xy[0], xy[1])
        if abs(z) > 1.0:
            z /= abs(z)
        p = z * p0 + n0
        y = form(p, g1) * form(g2, p) / denom
        ay = abs(y)
        if ay == 0.0:
            return 0.0
        return abs(y.imag) / ay

    axis = np.linspace(-1.0, 1.0, grid + 1)
    cells = []
    for x in axis:
        for yc in axis:
            if x * x + yc * yc > 1.0:
                continue
            cells.append((objective(np.array([x, yc])), x, yc))
    cells.sort()
    minimum = cells[0][0]
    sep2 = (2.0 / grid) ** 2
    starts: list[tuple[float, float]] = []
    for _, x, yc in cells:
        if len(starts) >= 4:
            break
        if all((x - a) ** 2 + (yc - b) ** 2 > sep2 for a, b in starts):
            starts.append((x, yc))
    for x, yc in starts:
        res = optimize.minimize(
            objective,
            np.array([x, yc]),
            method="L-BFGS-B",
            bounds=[(-1.0, 1.0), (-1.0, 1.0)],
        )
        minimum = min(minimum, float(res.fun))
    return minimum > TANGENCY_EPS


def _slice_samples(B: Bisector, samples: int, skip: int = 0):
    """Deterministic low-discrepancy samples of the ball part of a bisector.

    Points take the form z * p0(t) + n0(t) where g(t) = v1/t + t v2 runs
    over the slice polars (t log-uniform in [1e-2, 1e2]) and z over the
    open unit disc.
    """
    v1, v2 = B.vertices()
    # align and scale the vertex pair so <v1, v2> = 1/2: then g(t) has
    # <g, g> = 1 for every t and the t-family is the whole polar circle arc
    s = form(v1, v2)
    v2 = v2 * np.exp(1j * np.angle(s)) / (2.0 * abs(s))
    halton = qmc.Halton(d=3, scramble=False)
    if skip:
        halton.fast_forward(skip)
    for u1, u2, u3 in halton.random(samples):
        t = 10.0 ** (-2.0 + 4.0 * u1)
        gt = v1 / t + t * v2
        n0, p0 = slice_basis(gt)
        z = np.sqrt(u2) * np.exp(2j * np.pi * u3)
        yield z * p0 + n0


def separability_probe(
    B1: Bisector, B2: Bisector, eps: float, samples: int, seed: int = 0
) -> float:
    """Empirical check that points of B2 close to B1 are close to the
    common slice.

    Samples points p of the ball part of B2, keeps those with
    ta(p, B1) < 1 + eps^2, and returns the supremum of ta(p, S) - 1 over
    the kept points, S being the common slice (0.0 when nothing passes the
    filter).  The value tends to 0 with eps for transversal cotranchal
    pairs.
    """
    g = common_slice_polar(B1, B2)
    w1, w2 = B1.vertices()
    sup = 0.0
    for p in _slice_samples(B2, samples, skip=seed * samples):
        if tance_to_bisector(p, w1, w2) < 1.0 + eps * eps:
            sup = max(sup, -tance(g, p))
    return sup
