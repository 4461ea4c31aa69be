"""Tests for the area primitive, the Kaehler form, and the
rotation-number integral."""

import dataclasses

import numpy as np
import pytest

from chplane import (
    DegeneracyError,
    Params,
    PropertyViolation,
    TangentRep,
    build,
    check_dP,
    degree,
    f_pot,
    form,
    omega,
    potential,
    proj_perp,
    pvec,
    t_of,
    toledo,
    toledo_by_integral,
)

E1 = pvec(1, 0, 0)
E3 = pvec(0, 0, 1)


def _tangent(rng):
    p = pvec(1.1, 0.2 - 0.1j, 0.3j)
    d = rng.normal(size=3) + 1j * rng.normal(size=3)
    return TangentRep(p, proj_perp(p, d))


def test_potential_real_linear(rng):
    c = pvec(1.3, 0.2, -0.4j)
    v = _tangent(rng)
    w = _tangent(rng)
    combo = TangentRep(v.base, 0.7 * v.dir - 1.9 * w.dir)
    lhs = potential(combo, c)
    rhs = 0.7 * potential(v, c) - 1.9 * potential(w, c)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_potential_rejects_orthogonal_centre(rng):
    v = TangentRep(pvec(0, 1, 0), pvec(0, 0, 1))
    with pytest.raises(ValueError, match="orthogonal"):
        potential(v, E1)


def test_omega_antisymmetric(rng):
    v = _tangent(rng)
    w = _tangent(rng)
    assert omega(v, w) == pytest.approx(-omega(w, v), abs=1e-14)
    assert omega(v, v) == pytest.approx(0.0, abs=1e-14)


def test_omega_positive_on_complex_orientation(rng):
    # (v, iv) is a positively oriented real frame of a complex line
    v = _tangent(rng)
    iv = TangentRep(v.base, 1j * v.dir)
    assert omega(v, iv) > 0.0


def test_omega_rejects_base_mismatch(rng):
    v = _tangent(rng)
    q = pvec(1.2, 0.1, 0.0)
    w = TangentRep(q, proj_perp(q, pvec(0.1, 1.0, 0.3)))
    with pytest.raises(ValueError, match="base"):
        omega(v, w)


def _norm_patch(s, t):
    x = pvec(1.0, 0.25 + 0.3 * s + 0.1j * t, -0.2 + 0.2 * t - 0.15j * s)
    return x / np.sqrt(-form(x, x).real)


def test_dP_equals_omega():
    c = pvec(1.2, 0.1 + 0.2j, -0.3j)
    assert check_dP(_norm_patch, c, h=1e-3) < 1e-6
    assert check_dP(_norm_patch, c, s=0.2, t=-0.1, h=1e-3) < 1e-6


def test_dP_residual_is_second_order():
    c = pvec(1.2, 0.1 + 0.2j, -0.3j)
    r1 = check_dP(_norm_patch, c, h=1e-3)
    r2 = check_dP(_norm_patch, c, h=2e-3)
    assert 3.5 < r2 / r1 < 4.5


def _horizontal_circle(r, num):
    """Horizontal lift of the circle |z| = r in the slice polar to e2;
    the phase e^{i r^2 theta / (1 - r^2)} cancels <x', x>."""
    ths = np.linspace(0.0, 2.0 * np.pi, num)
    scale = 1.0 / np.sqrt(1.0 - r * r)
    phase = r * r / (1.0 - r * r)
    return [
        scale * np.exp(1j * phase * th) * (E1 + r * np.exp(1j * th) * E3)
        for th in ths
    ]


def test_f_pot_circle_area():
    """Around a circle the integral is the enclosed hyperbolic area
    pi r^2 / (1 - r^2) (curvature -4 normalization)."""
    for r in (0.2, 0.5, 0.8):
        pts = _horizontal_circle(r, 4000)
        area = np.pi * r * r / (1.0 - r * r)
        assert f_pot(pts, E1) == pytest.approx(area, abs=1e-6)


def test_f_pot_continued_argument():
    ths = np.linspace(0.0, 1.5 * np.pi, 400)
    pts = [np.cosh(1.0) * E1 + np.sinh(1.0) * np.exp(1j * t) * pvec(0, 1, 0)
           for t in ths]
    assert f_pot(pts, pvec(0, 1, 0)) == pytest.approx(0.75 * np.pi, abs=1e-10)


def test_f_pot_rejects_bad_input():
    with pytest.raises(ValueError, match="two curve points"):
        f_pot([E1 + 0.3 * E3], E1)
    with pytest.raises(ValueError, match="orthogonal"):
        f_pot([E1, E1 + 0.3 * E3], E3)
    coarse = [E1 + 0.3 * np.exp(1j * t) * E3 for t in (0.0, 2.0)]
    with pytest.raises(DegeneracyError, match="refine"):
        f_pot(coarse, E3)


@pytest.mark.parametrize("tup", [(9, 4, 4, 1), (9, 5, 3, 1), (10, 6, 3, 1)])
def test_toledo_by_integral_known(tup):
    pr = Params(*tup)
    val = toledo_by_integral(build(pr))
    assert val == pytest.approx((2 * t_of(pr) - 3 * pr.n) / 3.0, abs=1e-9)
    assert degree(pr) * val == pytest.approx(float(toledo(pr)), abs=1e-8)


def test_toledo_by_integral_checks_closure():
    data = build(Params(9, 4, 4, 1))
    broken = dataclasses.replace(data, R=data.R + 1e-4)
    with pytest.raises(PropertyViolation, match="close"):
        toledo_by_integral(broken)
