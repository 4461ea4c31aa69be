"""Triangle invariants, holonomy, the C-plane case, and the deformation path."""

import numpy as np
import pytest

from chplane import (
    PropertyViolation,
    TriangleInv,
    TrianglePolars,
    classify_action,
    classify_triangle,
    cplane_area,
    deformation_path,
    form,
    holonomy,
    holonomy_abs_trace,
    invariants,
    is_ccw,
    is_transversal,
    pvec,
    realize,
    region_member,
    restrict_to_slice,
    transversality_slack,
)
from _oracles import gauss_bonnet_area, trace_from_gram, trace_from_invariants
from _samplers import (
    random_ccw_transversal,
    random_cplane,
    random_invariants,
    realize_cplane,
)


def wrap(a):
    return (a + np.pi) % (2.0 * np.pi) - np.pi


def test_invariant_validation():
    with pytest.raises(ValueError):
        TriangleInv(0.9, 2.0, 2.0, 1j)
    with pytest.raises(ValueError):
        TriangleInv(2.0, 2.0, 2.0, 1.5j)
    # slightly off-unit eps is renormalized, d > 0 is rejected
    I = TriangleInv(2.0, 2.0, 2.0, (1.0 + 1e-10) * np.exp(1.0j))
    assert abs(I.eps) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        TriangleInv(1.01, 1.01, 1.01, 1.0 + 0j)


def test_polars_validation(rng):
    e2, e3 = pvec(0, 1, 0), pvec(0, 0, 1)
    with pytest.raises(ValueError):
        TrianglePolars(pvec(1, 0, 0), e2, e3)  # negative first point
    with pytest.raises(ValueError):
        TrianglePolars(e2, e3, pvec(0, 0.5, 1))  # ta(g1,g2) = 0


def test_realize_roundtrip(rng):
    for _ in range(20):
        I = random_invariants(rng)
        J = invariants(realize(I))
        assert J.t12 == pytest.approx(I.t12, rel=1e-9)
        assert J.t23 == pytest.approx(I.t23, rel=1e-9)
        assert J.t31 == pytest.approx(I.t31, rel=1e-9)
        assert J.eps == pytest.approx(I.eps, abs=1e-9)


def test_holonomy_eigenvector_is_first_polar(rng):
    I = random_ccw_transversal(rng)
    T = realize(I)
    image = holonomy(T) @ T.g1
    j = int(np.argmax(np.abs(T.g1)))
    ratio = image[j] / T.g1[j]
    assert ratio == pytest.approx(I.eps, abs=1e-9)
    np.testing.assert_allclose(image, ratio * T.g1, atol=1e-9)


def test_holonomy_trace_three_ways(rng):
    for _ in range(20):
        I = random_invariants(rng)
        T = realize(I)
        tr = complex(np.trace(holonomy(T)))
        assert tr == pytest.approx(trace_from_invariants(I), rel=1e-10)
        assert tr == pytest.approx(trace_from_gram(T, I), rel=1e-10)


def test_holonomy_abs_trace_matches_restriction(rng):
    for _ in range(20):
        I = random_ccw_transversal(rng)
        T = realize(I)
        action = restrict_to_slice(holonomy(T), T.g1)
        assert abs(np.trace(action.matrix)) == pytest.approx(
            holonomy_abs_trace(I), rel=1e-9
        )


def test_classify_triangle_requires_transversal_ccw(rng):
    while True:
        I = random_invariants(rng)
        if transversality_slack(I) < -1e-3 and I.eps1 < -1e-3:
            break
    with pytest.raises(ValueError, match="transversal"):
        classify_triangle(realize(I))
    J = random_ccw_transversal(rng)
    cw = TriangleInv(J.t12, J.t23, J.t31, np.conj(J.eps))
    with pytest.raises(ValueError, match="counterclockwise"):
        classify_triangle(realize(cw))


def test_classify_triangle_tags(rng):
    for _ in range(10):
        sc = classify_triangle(realize(random_ccw_transversal(rng)))
        assert sc.tag in ("elliptic", "parabolic", "hyperbolic")
        if sc.tag == "elliptic":
            assert -np.pi < sc.rotation_angle <= np.pi


def test_cplane_area_against_angle_defect(rng):
    for _ in range(15):
        I = random_cplane(rng)
        T = realize_cplane(I)
        A = cplane_area(T)
        assert 0.0 < A < np.pi / 4
        assert A == pytest.approx(gauss_bonnet_area(T), abs=1e-10)
        # twice the area is minus the argument of eps
        assert 2.0 * A == pytest.approx(-np.angle(I.eps), abs=1e-10)


def test_cplane_holonomy_rotations(rng):
    I = random_cplane(rng)
    T = realize_cplane(I)
    A = cplane_area(T)
    sc = classify_action(restrict_to_slice(holonomy(T), T.g1))
    assert sc.tag == "elliptic"
    assert wrap(sc.rotation_angle + 2.0 * A) == pytest.approx(0.0, abs=1e-10)
    # the restriction's |trace| collapses to 2 cos(Area) on the d = 0 locus
    assert sc.abs_trace == pytest.approx(2.0 * np.cos(A), abs=1e-10)
    # the plane itself (polar e2 for this realization) turns by pi - 4 Area
    pc = classify_action(restrict_to_slice(holonomy(T), pvec(0, 1, 0)))
    assert wrap(pc.rotation_angle - (np.pi - 4.0 * A)) == pytest.approx(0.0, abs=1e-10)


def test_cplane_area_rejects_noncoplanar(rng):
    T = realize(random_ccw_transversal(rng, tmax=3.0))
    if abs(invariants(T).d) > 1e-8:
        with pytest.raises(ValueError):
            cplane_area(T)


def test_region_member_basics():
    assert region_member(0.9, 1.2, 1.3, 1.4)
    assert not region_member(1.1, 1.2, 1.3, 1.4)  # e > 1
    assert not region_member(0.9, 1.0, 1.3, 1.4)  # t1 not > 1
    assert not region_member(0.9, 1.35, 1.3, 1.4)  # t1 above min(t2, t3)
    assert not region_member(0.05, 1.2, 1.3, 1.4)  # d too negative branch


def test_deformation_path_reaches_coplanar_monotonically():
    cases = [
        (0.9, 1.2, 1.3, 1.4),
        (0.93, 1.1, 1.25, 1.18),
        (0.96, 1.05, 1.05, 1.05),
        (0.86, 1.4, 1.45, 2.0),
    ]
    for e, t1, t2, t3 in cases:
        path = deformation_path(e, t1, t2, t3, step=0.02)
        assert path[0] == pytest.approx((e, t1, t2, t3))
        ds = [
            1.0 + 2.0 * a * b * c * u - a * a - b * b - c * c
            for (u, a, b, c) in path
        ]
        assert all(d2 >= d1 - 1e-12 for d1, d2 in zip(ds, ds[1:]))
        assert abs(ds[-1]) <= 1e-8
        for q in path:
            assert region_member(*q, margin=0.0, slack=1e-8)
        for q1, q2 in zip(path, path[1:]):
            assert max(abs(a - b) for a, b in zip(q1, q2)) <= 0.02 + 1e-9


def test_deformation_path_noop_on_the_wall():
    t = 1.3
    e = (3.0 * t * t - 1.0) / (2.0 * t**3)
    path = deformation_path(e, t, t, t)
    assert len(path) == 1


def test_deformation_path_rejects_outside():
    with pytest.raises(ValueError):
        deformation_path(0.9, 1.35, 1.3, 1.4)


def test_orientation_predicates(rng):
    I = random_ccw_transversal(rng)
    assert is_ccw(I)
    assert is_transversal(I)
    flipped = TriangleInv(I.t12, I.t23, I.t31, np.conj(I.eps))
    assert not is_ccw(flipped)
