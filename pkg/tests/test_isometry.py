"""Slice restriction, Moebius classification, and boundary predicates."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chplane.isometry import eigensystem3
from chplane import (
    DegeneracyError,
    StabilizationError,
    boundary_angle,
    classify,
    classify_action,
    cyclic_order,
    form,
    inverse,
    is_form_unitary,
    l_part_indicator,
    norm2,
    proj_perp,
    pvec,
    reflection,
    restrict_to_slice,
    slice_basis,
    tance,
)
from _samplers import (
    _scaled,
    random_form_unitary,
    random_isotropic,
    random_negative,
    random_positive,
    slice_point,
    unit_complex,
)

E2 = pvec(0, 1, 0)


def embed(B, mu=1.0 + 0j):
    """3x3 matrix acting by B on span(e1, e3) and by mu on e2.

    slice_basis(e2) = (e1, e3) exactly, so the slice restriction at e2
    recovers B up to det normalization.
    """
    M = np.zeros((3, 3), dtype=complex)
    M[0, 0], M[0, 2] = B[0, 0], B[0, 1]
    M[2, 0], M[2, 2] = B[1, 0], B[1, 1]
    M[1, 1] = mu
    return M


def stabilizer(rng, g):
    """A nontrivial isometry fixing the polar point g: a product of two
    reflections in positive points of the complement of g."""
    ms = []
    while len(ms) < 2:
        m = proj_perp(g, random_positive(rng))
        if form(m, m).real > 1e-3 * norm2(m):
            ms.append(m)
    return reflection(ms[0]) @ reflection(ms[1])


def test_form_unitary_and_inverse(rng):
    U = random_form_unitary(rng)
    assert is_form_unitary(U)
    np.testing.assert_allclose(inverse(U) @ U, np.eye(3), atol=1e-12)
    assert not is_form_unitary(2.0 * U)


def test_restriction_matches_moebius(rng):
    g = random_positive(rng)
    U = stabilizer(rng, g)
    action = restrict_to_slice(U, g)
    n0, p0 = slice_basis(g)
    for _ in range(10):
        z = unit_complex(rng) * rng.uniform(0, 0.9)
        w = action.moebius(z)
        assert abs(w) < 1.0
        assert tance(U @ slice_point(n0, p0, z), slice_point(n0, p0, w)) == (
            pytest.approx(1.0, abs=1e-10)
        )
    # boundary goes to boundary
    zb = unit_complex(rng)
    assert abs(action.moebius(zb)) == pytest.approx(1.0, rel=1e-10)
    assert abs(np.linalg.det(action.matrix) - 1.0) < 1e-10


def test_restriction_rejects_nonstabilizer(rng):
    with pytest.raises(StabilizationError):
        restrict_to_slice(random_form_unitary(rng), random_positive(rng))


@given(
    alpha=st.floats(-3.0, 3.0),
    delta=st.floats(0.05, 3.0),
)
def test_elliptic_block(alpha, delta):
    beta = alpha + delta
    B = np.diag([np.exp(1j * alpha), np.exp(1j * beta)]).astype(complex)
    M = embed(B, mu=np.exp(-1j * (alpha + beta)))
    assert is_form_unitary(M)
    kind = classify_action(restrict_to_slice(M, E2))
    assert kind.tag == "elliptic"
    assert kind.rotation_angle == pytest.approx(delta, abs=1e-10)
    assert kind.abs_trace == pytest.approx(2.0 * abs(np.cos(delta / 2.0)), abs=1e-10)
    assert kind.fixed_angles == ()
    assert kind.side is None


@given(s=st.floats(0.1, 2.0))
def test_hyperbolic_block(s):
    B = np.array([[np.cosh(s), np.sinh(s)], [np.sinh(s), np.cosh(s)]], dtype=complex)
    M = embed(B)
    assert is_form_unitary(M)
    kind = classify_action(restrict_to_slice(M, E2))
    assert kind.tag == "hyperbolic"
    assert kind.abs_trace == pytest.approx(2.0 * np.cosh(s), rel=1e-10)
    # the boost axis ends at disc coordinates +-1
    assert kind.fixed_angles[0] == pytest.approx(0.0, abs=1e-8)
    assert kind.fixed_angles[1] == pytest.approx(np.pi, abs=1e-8)


@pytest.mark.parametrize("a,side", [(0.8, "L"), (-0.8, "R")])
def test_parabolic_block(a, side):
    N = 1j * np.array([[1.0, -1.0], [1.0, -1.0]], dtype=complex)
    B = np.eye(2, dtype=complex) + a * N
    M = embed(B)
    assert is_form_unitary(M)
    kind = classify_action(restrict_to_slice(M, E2))
    assert kind.tag == "parabolic"
    assert kind.abs_trace == pytest.approx(2.0, abs=1e-12)
    assert kind.fixed_angles[0] == pytest.approx(0.0, abs=1e-8)
    assert kind.side == side


def test_identity_classification():
    kind = classify_action(restrict_to_slice(np.eye(3, dtype=complex), E2))
    assert kind.tag == "identity"
    assert kind.abs_trace == pytest.approx(2.0)


def test_reflection_in_orthogonal_point_restricts_to_half_turn(rng):
    g = random_positive(rng)
    while True:
        m = proj_perp(g, random_positive(rng))
        if form(m, m).real > 1e-3 * norm2(m):
            break
    kind = classify_action(restrict_to_slice(reflection(m), g))
    assert kind.tag == "elliptic"
    assert kind.abs_trace == pytest.approx(0.0, abs=1e-10)
    assert abs(kind.rotation_angle) == pytest.approx(np.pi, abs=1e-10)


def test_classification_is_conjugation_invariant(rng):
    B = np.diag([np.exp(0.3j), np.exp(1.1j)]).astype(complex)
    M = embed(B, mu=np.exp(-1.4j))
    U = random_form_unitary(rng)
    kind0 = classify_action(restrict_to_slice(M, E2))
    kind1 = classify_action(restrict_to_slice(U @ M @ inverse(U), U @ E2))
    assert kind1.tag == kind0.tag
    assert kind1.abs_trace == pytest.approx(kind0.abs_trace, rel=1e-9)
    assert kind1.rotation_angle == pytest.approx(kind0.rotation_angle, abs=1e-9)


def test_boundary_angle_roundtrip(rng):
    g = random_positive(rng)
    n0, p0 = slice_basis(g)
    theta = rng.uniform(0, 2 * np.pi)
    x = _scaled(rng, slice_point(n0, p0, np.exp(1j * theta)))
    assert boundary_angle(g, x) == pytest.approx(theta, abs=1e-10)


def test_boundary_angle_validation(rng):
    g = random_positive(rng)
    n0, p0 = slice_basis(g)
    with pytest.raises(ValueError):
        boundary_angle(g, slice_point(n0, p0, 0.3))  # interior, not isotropic
    with pytest.raises(ValueError):
        boundary_angle(g, random_isotropic(rng))  # not on the slice


@given(
    base=st.floats(0.0, 6.28),
    d2=st.floats(0.01, 3.0),
    d3=st.floats(3.2, 6.27),
)
def test_cyclic_order_shift_invariant(base, d2, d3):
    assert cyclic_order(base, base + d2, base + d3) == 0
    assert cyclic_order(base, base + d3, base + d2) == 1
    # cyclic rotations preserve the bit
    assert cyclic_order(base + d2, base + d3, base + 2 * np.pi) == 0


def test_cyclic_order_degenerate():
    with pytest.raises(DegeneracyError):
        cyclic_order(0.0, 1e-8, 1.0)


def test_l_part_elliptic_is_everything(rng):
    B = np.diag([np.exp(0.2j), np.exp(0.9j)]).astype(complex)
    M = embed(B)
    n0, p0 = slice_basis(E2)
    x = slice_point(n0, p0, unit_complex(rng))
    assert l_part_indicator(x, M, E2) == 0


def test_l_part_hyperbolic_splits_in_arcs():
    B = np.array([[np.cosh(0.7), np.sinh(0.7)], [np.sinh(0.7), np.cosh(0.7)]])
    M = embed(B.astype(complex))
    n0, p0 = slice_basis(E2)
    # the boost contracts toward angle 0: the upper arc moves clockwise
    assert l_part_indicator(slice_point(n0, p0, np.exp(0.5j * np.pi)), M, E2) == 0
    assert l_part_indicator(slice_point(n0, p0, np.exp(1.5j * np.pi)), M, E2) == 1
    with pytest.raises(DegeneracyError):
        l_part_indicator(slice_point(n0, p0, 1.0 + 0j), M, E2)


@pytest.mark.parametrize("a,bit", [(0.8, 0), (-0.8, 1)])
def test_l_part_parabolic(a, bit):
    N = 1j * np.array([[1.0, -1.0], [1.0, -1.0]], dtype=complex)
    M = embed(np.eye(2, dtype=complex) + a * N)
    n0, p0 = slice_basis(E2)
    x = slice_point(n0, p0, np.exp(2.0j))
    assert l_part_indicator(x, M, E2) == bit


def test_l_part_identity_is_empty(rng):
    n0, p0 = slice_basis(E2)
    x = slice_point(n0, p0, unit_complex(rng))
    assert l_part_indicator(x, np.eye(3, dtype=complex), E2) == 1


def test_eigensystem3_recovers_conjugated_diagonal(rng):
    angles = np.array([-2.0, 0.3, 1.7])
    U = random_form_unitary(rng)
    M = U @ np.diag(np.exp(1j * angles)) @ inverse(U)
    out = eigensystem3(M)
    got = np.array([np.angle(w) for w, _ in out])
    np.testing.assert_allclose(np.sort(got), angles, atol=1e-9)
    for w, v in out:
        i = int(np.argmin(np.abs(angles - np.angle(w))))
        u = U[:, i]
        assert abs(np.vdot(v, u)) == pytest.approx(
            np.sqrt(norm2(v) * norm2(u)), rel=1e-8
        )


def test_eigensystem3_rejects_degenerate():
    with pytest.raises(ValueError):
        eigensystem3(np.eye(3, dtype=complex))
