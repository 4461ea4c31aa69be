"""Vectorized prefilter for the quadrangle parameter sweep.

`check_conditions` costs about a millisecond per tuple, which is fine for
thousands of tuples but not for the hundreds of millions in a full
census.  This module evaluates the same condition slacks columnwise over
the whole (l, k, p) grid of one n.  Thresholds are relaxed to half the
margin (and to double the tolerance for the two non-strict
inequalities), so float drift between the vectorized and the scalar
formulas can never drop a tuple the scalar chain would accept.
Survivors are then confirmed one by one with `check_conditions`, which
stays the single source of truth.

All quantities reduce to closed forms in (m1^2, m2^2, m3^2) and the
entries of the two eigenvector denominators d_ij = u_i^2 conj(w_j^2) + 1;
the representative of m has <m, m> = 1 by construction, which the
formulas below use freely (the scalar chain's rounding of that norm is
covered by the relaxed thresholds).
"""

from __future__ import annotations

import numpy as np

from .bisector import STRICT_MARGIN
from .quadrangle import NONSTRICT_TOL, Params

__all__ = ["grid_size", "lex_grid", "scan_n"]

CHUNK = 100_000


def grid_size(n: int) -> int:
    """Number of in-range tuples for one n: pairs 0 <= k <= l <= n - 3
    and two values of p."""
    if n < 3:
        return 0
    return (n - 2) * (n - 1)


def lex_grid(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The full (l, k, p) grid of one n in the order of `Params.grid`."""
    counts = np.arange(1, n - 1)
    pair_l = np.repeat(np.arange(n - 2), counts)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    pair_k = np.arange(pair_l.size) - starts
    L = np.repeat(pair_l, 2)
    K = np.repeat(pair_k, 2)
    P = np.tile(np.array([1, 2]), pair_l.size)
    return L, K, P


def _absq(z: np.ndarray) -> np.ndarray:
    return z.real * z.real + z.imag * z.imag


def _tri_slack(a, b, c, e0, e1):
    """Columnwise minimum of the three cyclic transversality margins and
    the counterclockwise margin -Im(eps)."""
    s1 = 1.0 + 2.0 * a * b * c * e0 - (a * a * e0 * e0 + b * b + c * c)
    s2 = 1.0 + 2.0 * b * c * a * e0 - (b * b * e0 * e0 + c * c + a * a)
    s3 = 1.0 + 2.0 * c * a * b * e0 - (c * c * e0 * e0 + a * a + b * b)
    return np.minimum(np.minimum(s1, s2), np.minimum(s3, -e1))


def _mask(n: int, L: np.ndarray, K: np.ndarray, P: np.ndarray,
          margin: float) -> np.ndarray:
    m6 = 6 * n
    zpow = np.exp(2j * np.pi * (np.arange(m6) / m6))

    u1 = zpow[(2 * n * P - K) % m6]
    u2 = zpow[(2 * n * P - K - 3) % m6]
    u3 = zpow[(2 * n * P + 2 * K + 3) % m6]
    w1 = zpow[L % m6]
    w2 = zpow[(L + 3) % m6]
    w3 = zpow[(-(2 * L + 3)) % m6]
    u1s, u2s, u3s = u1 * u1, u2 * u2, u3 * u3
    w1s, w2s, w3s = w1 * w1, w2 * w2, w3 * w3
    v = (u1s + u2s + u3s + w1s + w2s + w3s) / 2.0

    angle1 = (w2s * w2).real - (v * w2).real
    angle2 = (w1s * w3).real - (v * w3).real

    # exact integer test for u_i^2 + w_j^2 = 0
    a_exp = (2 * (2 * n * P - K), 2 * (2 * n * P - K - 3),
             2 * (2 * n * P + 2 * K + 3))
    b_exp = (2 * L, 2 * (L + 3), -2 * (2 * L + 3))
    clash = np.zeros(L.shape, dtype=bool)
    for ai in a_exp:
        for bj in b_exp:
            clash |= (ai - bj - 3 * n) % m6 == 0

    den2 = ((w1s - w2s) * w2).real
    den3 = ((w1s - w3s) * w3).real
    m2sq = ((w1s - v) * w2).real / den2
    m3sq = np.maximum(angle2 / den3, 0.0)
    m1sq = m2sq + m3sq - 1.0
    m2 = np.sqrt(m2sq)
    normm = np.sqrt(m1sq + m2sq + m3sq)

    d11 = u1s * np.conj(w1s) + 1.0
    d12 = u1s * np.conj(w2s) + 1.0
    d13 = u1s * np.conj(w3s) + 1.0
    d21 = u2s * np.conj(w1s) + 1.0
    d22 = u2s * np.conj(w2s) + 1.0
    d23 = u2s * np.conj(w3s) + 1.0

    qa = m1sq / _absq(d11)
    qb = m2sq / _absq(d12)
    qc = m3sq / _absq(d13)
    interior1 = (qa - qb - qc) / (qa + qb + qc)  # -<h1,h1> / |h1|^2

    s = -m1sq * np.conj(w1s) + m2sq * np.conj(w2s) + m3sq * np.conj(w3s)
    ssq = _absq(s)  # ta(m, Wm)
    interior2 = ssq - 1.0

    hh2 = -m1sq / _absq(d21) + m2sq / _absq(d22) + m3sq / _absq(d23)
    r = -m1sq / np.conj(d21) + m2sq / np.conj(d22) + m3sq / np.conj(d23)
    ta_mh2 = _absq(r) / hh2
    interior3 = ta_mh2 - 1.0

    # triangle (q2, m, Wm): eps from <q2,m><m,Wm><Wm,q2>
    eps = m2sq * s * w2s
    eps = eps / np.abs(eps)
    tri1 = _tri_slack(m2, np.sqrt(ssq), m2, eps.real, eps.imag)

    # triangle (h2, Wm, m)
    q2v = (-m1sq * np.conj(w1s) / d21 + m2sq * np.conj(w2s) / d22
           + m3sq * np.conj(w3s) / d23)  # <h2, Wm>
    eps2 = q2v * np.conj(s) * r
    eps2 = eps2 / np.abs(eps2)
    tri2 = _tri_slack(np.sqrt(_absq(q2v) / hh2), np.sqrt(ssq),
                      np.sqrt(ta_mh2), eps2.real, eps2.imag)

    # transversality of the two bisectors along the slice of m
    expr = (1.0 / (d22 * np.conj(r))).real
    adjacent = (np.sqrt(1.0 - 1.0 / ta_mh2) * np.sqrt(1.0 - 1.0 / m2sq)
                - np.abs(expr - 1.0))

    # h1 between the bisectors: containment values at both of them
    r1 = -m1sq / d11 + m2sq / d12 + m3sq / d13  # <h1, m>
    n1 = qa + qb + qc
    sector1 = ((m2 / np.conj(d12)) * r1).imag / (n1 * normm)
    tv = (-m1sq * w1s / np.conj(d11) + m2sq * w2s / np.conj(d12)
          + m3sq * w3s / np.conj(d13))  # <Wm, h1>
    sector2 = (tv / (d12 * w2s)).imag * m2 / (n1 * normm)

    half = 0.5 * margin
    relax = 2.0 * NONSTRICT_TOL
    others = (
        (angle1 > half)
        & (angle2 >= relax)
        & ~clash
        & (interior1 > half)
        & (interior2 > half)
        & (interior3 > half)
        & (tri1 > half)
        & (tri2 > half)
        & (sector1 >= relax)
        & (sector2 >= relax)
    )
    return others & (adjacent > half), others & ~(adjacent > margin)


def scan_n(n: int, margin: float = STRICT_MARGIN,
           chunk: int = CHUNK) -> tuple[list[Params], int, list[Params]]:
    """Candidate tuples for one n, in (l, k, p) order, plus the number of
    tuples scanned and the suspects that pass everything except the
    adjacency condition (kept separate to answer whether that condition
    is ever the only obstruction).

    Candidates still need the scalar `check_conditions`; everything
    rejected here fails some condition by at least half the margin.
    NaNs from degenerate rows compare as False and drop the row, which
    is always the safe direction.
    """
    if n < 3:
        return [], 0, []
    L, K, P = lex_grid(n)
    out: list[Params] = []
    suspects: list[Params] = []
    with np.errstate(all="ignore"):
        for lo in range(0, L.size, chunk):
            keep, near = _mask(n, L[lo:lo + chunk], K[lo:lo + chunk],
                               P[lo:lo + chunk], margin)
            for i in np.flatnonzero(keep):
                out.append(Params(n, int(L[lo + i]), int(K[lo + i]),
                                  int(P[lo + i])))
            for i in np.flatnonzero(near):
                suspects.append(Params(n, int(L[lo + i]), int(K[lo + i]),
                                       int(P[lo + i])))
    return out, int(L.size), suspects
