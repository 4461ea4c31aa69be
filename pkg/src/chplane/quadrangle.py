"""The four-parameter family of bisector quadrangles.

Given integers (n, l, k, p) with 0 <= k <= l <= n - 3 and p in {1, 2},
build a rotation W = diag(w1^2, w2^2, w3^2), a reflection R in a slice
with real polar point m = (m1, m2, m3), and U = W R, so that U is again
elliptic with prescribed eigenvalues u_i^2.  The slice polars

    q2 = e2,  m,  W m,  h2  (an eigenvector of U)

span two triangles (q2, m, Wm) and (h2, Wm, m) sharing the side (m, Wm).
When every condition below holds, the triangles are transversal,
counterclockwise, and adjacent across the shared side, and gluing the n
rotated copies of the quadrangle produces a disc bundle over a closed
surface whose fiber count f, Euler number e, and rotation number tau this
module computes.

The conditions checked by `check_conditions`, in order:

    range      parameter ranges (exact integers)
    angle1/2   two inequalities making m well defined with m2 > 1
    spectrum   u_i^2 + w_j^2 != 0 for all i, j (exact integer test)
    interior   <h1,h1> < 0, ta(m, Wm) > 1, ta(m, h2) > 1
    tri1/tri2  both triangles transversal and counterclockwise
    adjacent   transversality of the two bisectors through the slice of m
    sector     h1 lies in the inner sector between the bisectors at q2

Strict inequalities are decided with a margin (default 1e-9) so that the
family census errs on the side of rejection; an example whose smallest
slack is below 1e-6 is flagged marginal.  The degenerate subfamily with
m3 = 0 keeps the whole configuration inside a complex plane and is
flagged c_fuchsian; those tuples are excluded from census totals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bisector import (
    STRICT_MARGIN,
    Bisector,
    containment_value,
    cotranchal_angle,
    cotranchal_slack,
    slice_transport,
)
from .hermitian import J_DIAG, PVec, form, norm2, slice_basis, tance
from .isometry import (
    DegeneracyError,
    Isometry,
    boundary_angle,
    classify as classify_action,
    cyclic_order,
    inverse,
    l_part_indicator,
    restrict_to_slice,
)
from .triangle import (
    PropertyViolation,
    TriangleInv,
    TrianglePolars,
    holonomy,
    invariants,
    transversality_slack,
)

__all__ = [
    "Params",
    "QuadrangleData",
    "ConditionReport",
    "FiberCount",
    "build",
    "check_conditions",
    "compute_f",
    "verify_identities",
    "t_of",
    "degree",
    "genus",
    "toledo",
    "euler",
    "orbifold_euler",
    "orbifold_toledo",
]

# Slack below which a passing example is flagged marginal.
MARGINAL_BAND = 1e-6

# Tolerance for the two non-strict inequalities.
NONSTRICT_TOL = -1e-12

# m3^2 below this is treated as exactly zero (configuration in a plane).
C_FUCHSIAN_TOL = 1e-12

# Seed angle for the fiber count and the retry step (an irrational turn,
# so repeated retries never revisit a bad configuration).
DEFAULT_Z_SEED = 0.7337
GOLDEN_STEP = np.pi * (np.sqrt(5.0) - 1.0)

Q1 = np.array([1.0, 0.0, 0.0], dtype=complex)
Q2 = np.array([0.0, 1.0, 0.0], dtype=complex)


def _unit(num: int, den: int) -> complex:
    """exp(2 pi i num / den) with the angle reduced exactly first."""
    return complex(np.exp(2j * np.pi * ((num % den) / den)))


@dataclass(frozen=True, order=True)
class Params:
    """Integer parameters (n, l, k, p) of a quadrangle."""

    n: int
    l: int
    k: int
    p: int

    def __post_init__(self):
        for name in ("n", "l", "k", "p"):
            value = getattr(self, name)
            if not float(value).is_integer():
                raise ValueError(f"{name} = {value} is not an integer")
            object.__setattr__(self, name, int(value))

    @property
    def in_range(self) -> bool:
        return 0 <= self.k <= self.l <= self.n - 3 and self.p in (1, 2)

    @classmethod
    def grid(cls, n: int):
        """All parameter tuples for a given n, in (l, k, p) order."""
        for l in range(0, n - 2):
            for k in range(0, l + 1):
                for p in (1, 2):
                    yield cls(n, l, k, p)


@dataclass(frozen=True)
class QuadrangleData:
    """The matrices and distinguished vectors of one parameter tuple."""

    params: Params
    u: np.ndarray
    w: np.ndarray
    v: complex
    m: np.ndarray
    m3_raw: float
    W: Isometry
    R: Isometry
    U: Isometry
    h1: PVec
    h2: PVec
    h3: PVec

    @property
    def Wm(self) -> PVec:
        return self.W @ self.m.astype(complex)

    @property
    def delta(self) -> complex:
        pr = self.params
        return _unit(pr.k + pr.l + pr.n * pr.p, 3)

    @property
    def c_fuchsian(self) -> bool:
        return self.m3_raw <= C_FUCHSIAN_TOL


def _unit_roots(params: Params) -> tuple[np.ndarray, np.ndarray, complex]:
    n, l, k, p = params.n, params.l, params.k, params.p
    den = 6 * n
    u = np.array(
        [
            _unit(2 * n * p - k, den),
            _unit(2 * n * p - k - 3, den),
            _unit(2 * n * p + 2 * k + 3, den),
        ]
    )
    w = np.array([_unit(l, den), _unit(l + 3, den), _unit(-(2 * l + 3), den)])
    v = (np.sum(u**2) + np.sum(w**2)) / 2.0
    return u, w, complex(v)


def _spectrum_clash(params: Params) -> bool:
    """Exact test for u_i^2 + w_j^2 = 0: both are powers of a primitive
    6n-th root of unity, so the sum vanishes iff the exponents differ by
    exactly 3n mod 6n."""
    n, l, k, p = params.n, params.l, params.k, params.p
    a = (2 * (2 * n * p - k), 2 * (2 * n * p - k - 3), 2 * (2 * n * p + 2 * k + 3))
    b = (2 * l, 2 * (l + 3), -2 * (2 * l + 3))
    return any((ai - bj - 3 * n) % (6 * n) == 0 for ai in a for bj in b)


def build(params: Params) -> QuadrangleData:
    """Construct the quadrangle data; raises ValueError when the tuple
    fails a structural condition (range, angle, or spectrum)."""
    if not params.in_range:
        raise ValueError(f"parameters out of range: {params}")
    if _spectrum_clash(params):
        raise ValueError(f"coinciding spectra: {params}")
    u, w, v = _unit_roots(params)
    w1, w2, w3 = w
    den2 = ((w1**2 - w2**2) * w2).real
    den3 = ((w1**2 - w3**2) * w3).real
    if not (den2 > 0.0 and den3 > 0.0):
        raise ValueError(f"degenerate rotation data: {params}")
    m2_sq = ((w1**2 - v) * w2).real / den2
    num3 = (w1**2 * w3).real - (v * w3).real
    if num3 < NONSTRICT_TOL:
        raise ValueError(f"no real slice polar (m3^2 den = {num3}): {params}")
    m3_raw = num3 / den3
    m3_sq = max(m3_raw, 0.0)
    m1_sq = m2_sq + m3_sq - 1.0
    if not (m2_sq > 1.0 and m1_sq > 0.0):
        raise ValueError(f"no real slice polar (m2^2 = {m2_sq}): {params}")
    m = np.array([np.sqrt(m1_sq), np.sqrt(m2_sq), np.sqrt(m3_sq)])
    W = np.diag(w**2).astype(complex)
    mc = m.astype(complex)
    R = (2.0 * np.outer(mc, J_DIAG * mc) - np.eye(3)).astype(complex)
    U = W @ R
    hs = []
    for i in range(3):
        denom = u[i] ** 2 * np.conj(w**2) + 1.0
        hs.append(mc / denom)
    return QuadrangleData(
        params=params,
        u=u,
        w=w,
        v=v,
        m=m,
        m3_raw=float(m3_raw),
        W=W,
        R=R,
        U=U,
        h1=hs[0],
        h2=hs[1],
        h3=hs[2],
    )


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the condition chain for one parameter tuple."""

    params: Params
    passed: bool
    checks: dict
    slacks: dict
    marginal: bool
    c_fuchsian: bool
    data: QuadrangleData | None


def check_conditions(params: Params, margin: float = STRICT_MARGIN) -> ConditionReport:
    """Evaluate the quadrangle conditions in order, recording a slack for
    each inequality.  Later conditions are skipped once a structural one
    fails (their inputs are undefined)."""
    checks: dict = {}
    slacks: dict = {}

    def report(passed: bool, data=None, marginal=False, c_fuchsian=False):
        return ConditionReport(params, passed, checks, slacks, marginal, c_fuchsian, data)

    checks["range"] = params.in_range
    if not checks["range"]:
        return report(False)

    u, w, v = _unit_roots(params)
    w1, w2, w3 = w
    slacks["angle1"] = (w2**3).real - (v * w2).real
    slacks["angle2"] = (w1**2 * w3).real - (v * w3).real
    checks["angle1"] = slacks["angle1"] > margin
    checks["angle2"] = slacks["angle2"] >= NONSTRICT_TOL
    checks["spectrum"] = not _spectrum_clash(params)
    slacks["spectrum"] = float(
        min(abs(ui**2 + wj**2) for ui in u for wj in w)
    )
    if not (checks["angle1"] and checks["angle2"] and checks["spectrum"]):
        return report(False)

    try:
        data = build(params)
    except ValueError:
        # the angle slacks sit exactly on the tolerance boundary
        checks["build"] = False
        return report(False)
    m, h1, h2 = data.m.astype(complex), data.h1, data.h2
    Wm = data.Wm
    slacks["interior1"] = -form(h1, h1).real / norm2(h1)
    slacks["interior2"] = tance(m, Wm) - 1.0
    slacks["interior3"] = tance(m, h2) - 1.0
    for j in (1, 2, 3):
        checks[f"interior{j}"] = slacks[f"interior{j}"] > margin
    if not all(checks[f"interior{j}"] for j in (1, 2, 3)):
        return report(False, data)

    try:
        tri1 = invariants(TrianglePolars(Q2, m, Wm))
        tri2 = invariants(TrianglePolars(h2, Wm, m))
        slacks["tri1"] = min(transversality_slack(tri1), -tri1.eps1)
        slacks["tri2"] = min(transversality_slack(tri2), -tri2.eps1)
        slacks["adjacent"] = cotranchal_slack(m, h2, Q2)
    except ValueError:
        # possible only when margin is set below the structural tolerances
        slacks["tri1"] = slacks["tri2"] = slacks["adjacent"] = -np.inf
    checks["tri1"] = slacks["tri1"] > margin
    checks["tri2"] = slacks["tri2"] > margin
    checks["adjacent"] = slacks["adjacent"] > margin

    slacks["sector1"] = containment_value(h1, Bisector(Q2, m))
    slacks["sector2"] = containment_value(h1, Bisector(Wm, Q2))
    checks["sector1"] = slacks["sector1"] >= NONSTRICT_TOL
    checks["sector2"] = slacks["sector2"] >= NONSTRICT_TOL

    passed = all(checks.values())
    strict = ("angle1", "interior1", "interior2", "interior3", "tri1", "tri2", "adjacent")
    nonstrict = ("angle2", "sector1", "sector2")
    marginal = passed and (
        min(slacks[name] for name in strict) < MARGINAL_BAND
        or min(abs(slacks[name]) for name in nonstrict) < MARGINAL_BAND
        or slacks["spectrum"] < MARGINAL_BAND
    )
    return report(passed, data, marginal, data.c_fuchsian)


@dataclass(frozen=True)
class FiberCount:
    """The integer f together with its four boundary-bookkeeping terms."""

    f: int
    lam_y: int
    lam_z: int
    o_y: int
    o_z: int
    seed: float


def compute_f(data: QuadrangleData, z_seed: float = DEFAULT_Z_SEED,
              max_retries: int = 32) -> FiberCount:
    """Count how many times the distinguished boundary loop of the glued
    quadrangle wraps around the central fiber.

    A boundary point z of the central slice is carried across the two
    bisectors to a boundary point y of the slice of h2; with phi, phi'
    the holonomies of the two triangles,

        f = lam(y, phi) + lam(z, phi') + o(y, Uy, phi^-1 y) - o(z, Wz, phi' z),

    where lam marks whether the point moves against the circle
    orientation and o is the cyclic-order indicator on the respective
    boundary circle.  Seeds for which the three compared points collide
    are skipped by an irrational rotation of z.
    """
    m = data.m.astype(complex)
    Wm = data.Wm
    phi = holonomy(TrianglePolars(data.h2, Wm, m))
    phi_p = holonomy(TrianglePolars(Q2, m, Wm))
    n0, p0 = slice_basis(Q2)
    theta = float(z_seed)
    last_err: Exception | None = None
    for _ in range(max_retries):
        try:
            z = np.exp(1j * theta) * p0 + n0
            p1 = slice_transport(z, Q2, m)
            y = slice_transport(p1, m, data.h2)
            lam_y = l_part_indicator(y, phi, data.h2)
            lam_z = l_part_indicator(z, phi_p, Q2)
            o_y = cyclic_order(
                boundary_angle(data.h2, y),
                boundary_angle(data.h2, data.U @ y),
                boundary_angle(data.h2, inverse(phi) @ y),
            )
            o_z = cyclic_order(
                boundary_angle(Q2, z),
                boundary_angle(Q2, data.W @ z),
                boundary_angle(Q2, phi_p @ z),
            )
            return FiberCount(lam_y + lam_z + o_y - o_z, lam_y, lam_z, o_y, o_z, theta)
        except DegeneracyError as err:
            last_err = err
            theta = (theta + GOLDEN_STEP) % (2.0 * np.pi)
    raise DegeneracyError(
        f"no generic boundary seed found after {max_retries} tries"
    ) from last_err


def _diag_power(params: Params, exps: tuple[int, int, int], j: int) -> np.ndarray:
    """Diagonal of W^j (or U-type powers) from exact angle arithmetic."""
    den = 6 * params.n
    return np.array([_unit(e * j, den) for e in exps])


def verify_identities(data: QuadrangleData) -> dict:
    """Check the algebraic identities the construction is built on and
    return their residuals; raises PropertyViolation when any exceeds its
    tolerance.

    Identities: trace of U; h_i are eigenvectors of U; W^-1 rotates the
    central slice by 2(l+1)pi/n and U rotates the slice of h2 by
    2(k+1)pi/n; the angle between consecutive bisectors at both centres
    is 2pi/n; the conjugated reflections interleave with W; their full
    product and W^n U^-n both equal the scalar delta.
    """
    pr = data.params
    n = pr.n
    U, W, R = data.U, data.W, data.R
    m = data.m.astype(complex)
    Wm = data.Wm
    resid: dict = {}

    tr_target = np.sum(data.u**2)
    resid["trace"] = float(abs(np.trace(U) - tr_target))

    for i, h in enumerate((data.h1, data.h2, data.h3)):
        resid[f"eigvec{i + 1}"] = float(
            np.linalg.norm(U @ h - data.u[i] ** 2 * h) / np.linalg.norm(h)
        )

    sc = classify_action(restrict_to_slice(inverse(W), Q2))
    beta = 2.0 * (pr.l + 1) * np.pi / n
    resid["rotation_centre"] = float(
        abs(np.exp(1j * sc.rotation_angle) - np.exp(1j * beta))
        if sc.tag == "elliptic"
        else np.inf
    )
    sc2 = classify_action(restrict_to_slice(U, data.h2))
    alpha = 2.0 * (pr.k + 1) * np.pi / n
    resid["rotation_side"] = float(
        abs(np.exp(1j * sc2.rotation_angle) - np.exp(1j * alpha))
        if sc2.tag == "elliptic"
        else np.inf
    )

    target = 2.0 * np.pi / n
    ang1 = cotranchal_angle(Q2, m, Wm, Q1)
    ang2 = cotranchal_angle(data.h2, Wm, m, data.h1)
    resid["angle_centre"] = float(abs(np.exp(1j * ang1) - np.exp(1j * target)))
    resid["angle_side"] = float(abs(np.exp(1j * ang2) - np.exp(1j * target)))

    # W^j as exact diagonals; exponents of w_i^2 in units of 2pi/6n
    wexp = (2 * pr.l, 2 * (pr.l + 3), -2 * (2 * pr.l + 3))
    chain = 0.0
    product = np.eye(3, dtype=complex)
    for i in range(1, n + 1):
        d_r = _diag_power(pr, wexp, i - 1)
        Ri = (d_r[:, None] * R) * np.conj(d_r)[None, :]
        d_u = _diag_power(pr, wexp, i - 2)
        Ui = (d_u[:, None] * U) * np.conj(d_u)[None, :]
        d_u1 = _diag_power(pr, wexp, i - 1)
        Ui1 = (d_u1[:, None] * U) * np.conj(d_u1)[None, :]
        chain = max(
            chain,
            float(np.max(np.abs(Ri @ Ui - W))),
            float(np.max(np.abs(Ui1 @ Ri - W))),
        )
        product = Ri @ product
    resid["chain"] = chain

    delta = data.delta
    resid["reflection_product"] = float(np.max(np.abs(product - delta * np.eye(3))))
    Wn = np.diag(_diag_power(pr, wexp, n))
    Un_inv = np.linalg.matrix_power(inverse(U), n)
    resid["power"] = float(np.max(np.abs(Wn @ Un_inv - delta * np.eye(3))))

    tols = {
        "trace": 1e-10,
        "eigvec1": 1e-9,
        "eigvec2": 1e-9,
        "eigvec3": 1e-9,
        "rotation_centre": 1e-7,
        "rotation_side": 1e-7,
        "angle_centre": 1e-7,
        "angle_side": 1e-7,
        "chain": 1e-9,
        "reflection_product": 1e-7,
        "power": 1e-8,
    }
    bad = [name for name, tol in tols.items() if not resid[name] <= tol]
    if bad:
        raise PropertyViolation(
            "identity residuals out of tolerance: "
            + ", ".join(f"{name}={resid[name]:.3e}" for name in bad)
        )
    return resid


def t_of(params: Params) -> int:
    """The rotation count t: 0 <= t < 3n with t = 2np - k - l mod 3n."""
    return (2 * params.n * params.p - params.k - params.l) % (3 * params.n)


def degree(params: Params) -> int:
    """Index of the surface group inside the two-triangle turnover group."""
    return 4 if params.n % 2 else 2


def genus(params: Params) -> int:
    return params.n - 3 if params.n % 2 else params.n // 2 - 1


def toledo(params: Params) -> Fraction:
    """Rotation number tau of the surface representation, always in
    (1/3) Z."""
    return Fraction(degree(params) * (2 * t_of(params) - 3 * params.n), 3)


def euler(params: Params, f: int) -> int:
    """Euler number of the disc bundle over the closed surface."""
    e_p = params.n * f - params.k - params.l - 2
    return degree(params) * e_p


def orbifold_euler(params: Params, f: int) -> Fraction:
    """Rational Euler number over the quotient orbifold: f - (k+l+2)/n."""
    return Fraction(params.n * f - params.k - params.l - 2, params.n)


def orbifold_toledo(params: Params) -> Fraction:
    return Fraction(2 * t_of(params) - 3 * params.n, 3 * params.n)
