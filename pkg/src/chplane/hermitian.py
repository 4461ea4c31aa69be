"""Point-level primitives of the complex hyperbolic plane.

The ambient space is a three-dimensional complex vector space V carrying the
Hermitian form

    <x, y> = -x1*conj(y1) + x2*conj(y2) + x3*conj(y3),

of signature (-,+,+), linear in the first argument and conjugate-linear in
the second.  (The alternative convention, linearity in the second slot,
conjugates the eta-invariant and every epsilon below; nothing else changes.)
Projective classes of vectors are points of the complex projective plane;
the open ball B of negative points is the complex hyperbolic plane, the
isotropic points form its ideal boundary, and positive points are polar
points of complex geodesics.

A point is represented as a numpy vector of three complex coordinates.  Two
vectors represent the same point iff they are proportional, and every
function here that computes a projective quantity is invariant under scaling
its vector arguments by nonzero complex numbers.

The basic algebraic stand-in for distance is the tance

    ta(p, q) = <p,q><q,p> / (<p,p><q,q>),

which equals cosh^2 of the distance for two negative points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "J_DIAG",
    "ISO_TOL",
    "PVec",
    "PointClass",
    "TangentRep",
    "pvec",
    "form",
    "norm2",
    "tance",
    "classify",
    "proj_perp",
    "proj_par",
    "reflection",
    "eta",
    "dist",
    "tance_to_slice",
    "tance_to_bisector",
    "midpoint_polar",
    "slice_basis",
    "gram3",
    "normalize_phase",
]

# Signs of the diagonal form; the negative coordinate comes first.
J_DIAG = np.array([-1.0, 1.0, 1.0])

# Default tolerance for deciding the sign class of <p,p> after normalizing
# by the squared coordinate norm.
ISO_TOL = 1e-12

PVec = np.ndarray


def pvec(z1: complex, z2: complex, z3: complex) -> PVec:
    """Assemble a point vector from three complex coordinates."""
    v = np.array([z1, z2, z3], dtype=complex)
    if not np.all(np.isfinite(v.view(float))):
        raise ValueError("point coordinates must be finite")
    if np.vdot(v, v).real <= 1e-300:
        raise ValueError("zero vector does not represent a point")
    return v


def form(x: PVec, y: PVec) -> complex:
    """Hermitian form <x, y>, linear in x and conjugate-linear in y."""
    return complex(np.dot(J_DIAG * x, np.conj(y)))


def norm2(x: PVec) -> float:
    """Squared coordinate norm |x1|^2 + |x2|^2 + |x3|^2 (Euclidean, not the form)."""
    return float(np.vdot(x, x).real)


def tance(p: PVec, q: PVec) -> float:
    """The tance ta(p,q) = <p,q><q,p> / (<p,p><q,q>).

    For nonisotropic arguments this is a real number: cosh^2 of the distance
    when both points are negative, and nonpositive for a mixed
    negative/positive pair.  When one argument is isotropic the convention
    is +inf if <p,q> != 0 and 1 if <p,q> = 0, which makes the function total
    and keeps the identity ta(q, slice) = 1 - ta(p, q) continuous up to the
    boundary.
    """
    pp = form(p, p).real
    qq = form(q, q).real
    pq = form(p, q)
    iso_p = abs(pp) <= ISO_TOL * norm2(p)
    iso_q = abs(qq) <= ISO_TOL * norm2(q)
    if iso_p or iso_q:
        if abs(pq) ** 2 <= ISO_TOL * norm2(p) * norm2(q):
            return 1.0
        return float("inf")
    return abs(pq) ** 2 / (pp * qq)


@dataclass(frozen=True)
class PointClass:
    """Sign class of a point: 'negative', 'isotropic', or 'positive'.

    margin is <p,p> divided by the squared coordinate norm, so it is scale
    free and its magnitude measures how far p sits from the isotropic cone.
    """

    tag: str
    margin: float

    @property
    def is_negative(self) -> bool:
        return self.tag == "negative"

    @property
    def is_isotropic(self) -> bool:
        return self.tag == "isotropic"

    @property
    def is_positive(self) -> bool:
        return self.tag == "positive"


def classify(p: PVec, tol: float = ISO_TOL) -> PointClass:
    """Classify p as negative (in B), isotropic, or positive."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    margin = form(p, p).real / norm2(p)
    if margin < -tol:
        tag = "negative"
    elif margin > tol:
        tag = "positive"
    else:
        tag = "isotropic"
    return PointClass(tag, margin)


def _require_nonisotropic(p: PVec, name: str = "p") -> float:
    pp = form(p, p).real
    if abs(pp) <= ISO_TOL * norm2(p):
        raise ValueError(f"{name} is isotropic")
    return pp


def proj_perp(p: PVec, v: PVec) -> PVec:
    """Orthogonal projection of v onto the form-complement of p.

    pi[p]v = v - (<v,p>/<p,p>) p.  The result pairs to zero with p; it is
    the zero vector exactly when v is proportional to p, which is legal
    (polar decomposition of a vector already on the axis).
    """
    pp = _require_nonisotropic(p)
    return v - (form(v, p) / pp) * p


def proj_par(p: PVec, v: PVec) -> PVec:
    """Projection of v onto the line of p; proj_perp + proj_par = identity."""
    pp = _require_nonisotropic(p)
    return (form(v, p) / pp) * p


def reflection(p: PVec) -> np.ndarray:
    """Matrix of the reflection x -> 2(<x,p>/<p,p>) p - x.

    For positive p this is the holomorphic reflection in the complex
    geodesic polar to p; it is an involution, lies in SU, and fixes p.
    """
    pp = _require_nonisotropic(p)
    return (2.0 / pp) * np.outer(p, J_DIAG * np.conj(p)) - np.eye(3, dtype=complex)


def eta(v1: PVec, v2: PVec, p: PVec) -> complex:
    """The eta-invariant <v1,p><p,v2> / (<v1,v2><p,p>) of a point against
    the bisector with real-spine vertices v1, v2.

    v1 and v2 are isotropic and distinct; the value does not change under
    rescaling any of the three arguments.
    """
    for v, name in ((v1, "v1"), (v2, "v2")):
        if abs(form(v, v).real) > 1e-8 * norm2(v):
            raise ValueError(f"{name} is not isotropic")
    v12 = form(v1, v2)
    if abs(v12) ** 2 <= ISO_TOL * norm2(v1) * norm2(v2):
        raise ValueError("degenerate vertex pair: <v1,v2> = 0")
    pp = _require_nonisotropic(p)
    return form(v1, p) * form(p, v2) / (v12 * pp)


def dist(p: PVec, q: PVec) -> float:
    """Distance between two negative points: acosh(sqrt(ta(p,q)))."""
    for x, name in ((p, "p"), (q, "q")):
        if not classify(x).is_negative:
            raise ValueError(f"{name} is not a negative point")
    return float(np.arccosh(np.sqrt(max(tance(p, q), 1.0))))


def tance_to_slice(q: PVec, p: PVec) -> float:
    """Tance from the negative point q to the complex geodesic polar to p.

    Equals 1 - ta(p,q); since ta(p,q) <= 0 for a positive/negative pair the
    value is >= 1, with equality exactly when q lies on the slice.
    """
    if not classify(p).is_positive:
        raise ValueError("p is not a positive point")
    if not classify(q).is_negative:
        raise ValueError("q is not a negative point")
    return 1.0 - tance(p, q)


def tance_to_bisector(p: PVec, v1: PVec, v2: PVec) -> float:
    """Tance from the negative point p to the bisector with vertices v1, v2.

    The closed form is 1 - Re(eta) + |eta| in terms of the eta-invariant; it
    agrees with minimizing tance_to_slice over the bisector's slice family.
    """
    if not classify(p).is_negative:
        raise ValueError("p is not a negative point")
    e = eta(v1, v2, p)
    return 1.0 - e.real + abs(e)


def midpoint_polar(p1: PVec, p2: PVec) -> PVec:
    """Polar point of the middle slice of two ultraparallel complex geodesics.

    The inputs are the positive polar points, with ta(p1,p2) > 1.  After
    scaling both to <p,p> = 1 and rotating the phase of the second so that
    t := <p1,p2> is real and > 1, the midpoint polar is

        m = (p1 + p2) / sqrt(2t + 2),

    normalized to <m,m> = 1.  The reflection in m exchanges the two
    geodesics (and the two polar points, projectively).
    """
    for x, name in ((p1, "p1"), (p2, "p2")):
        if not classify(x).is_positive:
            raise ValueError(f"{name} is not a positive point")
    ta = tance(p1, p2)
    if not ta > 1.0:
        raise ValueError(f"not ultraparallel: ta = {ta}")
    a = p1 / np.sqrt(form(p1, p1).real)
    b = p2 / np.sqrt(form(p2, p2).real)
    ab = form(a, b)
    b = b * np.exp(1j * np.angle(ab))
    t = abs(ab)
    return (a + b) / np.sqrt(2.0 * t + 2.0)


def normalize_phase(x: PVec) -> PVec:
    """Rotate the phase of x so its largest-modulus coordinate is real positive."""
    j = int(np.argmax(np.abs(x)))
    return x * (np.conj(x[j]) / abs(x[j]))


def slice_basis(g: PVec) -> tuple[PVec, PVec]:
    """Deterministic orthogonal basis (n0, p0) of the complement of a positive g.

    <n0,n0> = -1, <p0,p0> = 1, <n0,p0> = 0.  The closed disc of the slice is
    then parameterized as z*p0 + n0 with |z| <= 1: the center for z = 0, the
    ideal boundary circle at |z| = 1.

    The basis comes from Gram-Schmidt on the standard basis: n0 from e1
    (whose projection to the complement of a positive vector is always
    negative), p0 from whichever of e2, e3 leaves the larger residue.  Both
    outputs have their phase fixed so the largest-modulus coordinate is real
    positive, which makes the construction reproducible across
    representatives of g up to that canonical phase.
    """
    if not classify(g).is_positive:
        raise ValueError("g is not a positive point")
    e1 = np.array([1.0, 0.0, 0.0], dtype=complex)
    c = proj_perp(g, e1)
    cc = form(c, c).real
    n0 = c / np.sqrt(-cc)
    candidates = []
    for j in (1, 2):
        e = np.zeros(3, dtype=complex)
        e[j] = 1.0
        d = proj_perp(g, e)
        # remove the n0 component; <n0,n0> = -1 flips the usual sign
        d = d + form(d, n0) * n0
        candidates.append(d)
    d = max(candidates, key=norm2)
    p0 = d / np.sqrt(form(d, d).real)
    return normalize_phase(n0), normalize_phase(p0)


def gram3(g1: PVec, g2: PVec, g3: PVec) -> np.ndarray:
    """Gram matrix G[i,j] = <g_i, g_j> of an ordered triple."""
    g = (g1, g2, g3)
    G = np.empty((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            G[i, j] = form(g[i], g[j])
    return G


@dataclass(frozen=True)
class TangentRep:
    """A tangent vector at a nonisotropic point, as a pair (base, dir).

    dir lies in the form-complement of base; the pair encodes the tangent
    vector <-, base> dir of the projective plane.  The pairing of two
    tangent vectors at the same base p is

        <v_p, w_p> = -<p,p> <v, w>,

    which is the Hermitian metric (Riemannian part + i times the Kahler
    form).
    """

    base: PVec
    dir: PVec

    def __post_init__(self):
        nb = norm2(self.base)
        nd = norm2(self.dir)
        if nd > 0:
            ortho = abs(form(self.dir, self.base)) / np.sqrt(nd * nb)
            if ortho > 1e-10:
                raise ValueError(f"dir is not orthogonal to base: {ortho:.2e}")

    def pairing(self, other: "TangentRep") -> complex:
        return -form(self.base, self.base) * form(self.dir, other.dir)
