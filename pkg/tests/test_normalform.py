import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imperfect_hopf.normalform import (
    CONST,
    MIXED,
    NONE,
    QUADRATIC,
    DomainError,
    ModelParams,
    State,
    canonicalize_signs,
    from_uv,
    jacobian,
    polar_rhs,
    rescale_epsilon,
    rhs,
    to_uv,
    unscale_epsilon,
    zm,
)
from imperfect_hopf.equilibria import fixed_points

from oracles import fd_jacobian, field_for, rk4

ALL_KINDS = [CONST, MIXED, QUADRATIC, zm(2), zm(3), zm(4), zm(5)]
finite = st.floats(-2, 2, allow_nan=False)


def test_kind_exponents():
    assert CONST.exponents == (0, 0)
    assert MIXED.exponents == (1, 1)
    assert QUADRATIC.exponents == (2, 0)
    assert zm(2).exponents == (0, 1)
    assert zm(3).exponents == (0, 2)
    with pytest.raises(DomainError):
        zm(1)


def test_params_validation():
    with pytest.raises(DomainError):
        ModelParams(0, 0, 0.0)
    with pytest.raises(DomainError):
        ModelParams(0, 0, math.pi / 2)
    with pytest.raises(DomainError):
        ModelParams(0, 0, 0.5, epsilon=-1)
    with pytest.raises(DomainError):
        ModelParams(float("nan"), 0, 0.5)
    p = ModelParams(1, 2, 0.4, 0.0, CONST)
    assert p.a ** 2 + p.b ** 2 == pytest.approx(1, abs=1e-15)
    assert p.effective_kind is NONE or p.effective_kind.tag == "none"


def test_state_polar_roundtrip():
    rng = np.random.default_rng(0)
    for _ in range(200):
        x, y = rng.normal(size=2) * 3
        s = State(x, y)
        t = State.from_polar(s.r, s.phi)
        assert abs(t.x - x) < 1e-12 and abs(t.y - y) < 1e-12
        assert 0 <= s.phi < 2 * math.pi


def test_rhs_symmetric_circle_is_steady():
    a = math.sin(math.pi / 4)
    p = ModelParams(1.0, 1.0, math.pi / 4, 0.0, NONE)
    r = math.sqrt(1.0 / a)
    for phi in np.linspace(0, 2 * math.pi, 37):
        dx, dy = rhs(p, State.from_polar(r, phi))
        assert abs(dx) < 1e-14 and abs(dy) < 1e-14


def test_rhs_const_at_origin():
    p = ModelParams(0, 0, math.pi / 4, 1.0, CONST)
    assert rhs(p, State(0, 0)) == (1.0, 0.0)


def test_rhs_rejects_nonfinite():
    p = ModelParams(0, 0, math.pi / 4, 1.0, CONST)
    with pytest.raises(DomainError):
        rhs(p, State(float("inf"), 0))


@given(finite, finite, finite, finite)
def test_z2_oddness(x, y, mu, nu):
    p = ModelParams(mu, nu, math.pi / 4, 1.0, zm(2))
    f1 = rhs(p, State(x, y))
    f2 = rhs(p, State(-x, -y))
    assert abs(f1[0] + f2[0]) <= 1e-14 * (1 + abs(f1[0]))
    assert abs(f1[1] + f2[1]) <= 1e-14 * (1 + abs(f1[1]))


@settings(max_examples=200)
@given(st.integers(2, 7), finite, finite, st.floats(0.1, 1.4), st.floats(0, 1),
       st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_zm_equivariance(m, mu, nu, alpha0, eps, x, y):
    p = ModelParams(mu, nu, alpha0, eps, zm(m))
    rot = cmath.exp(2j * math.pi / m)
    z = complex(x, y)
    fz = complex(*rhs(p, State(x, y)))
    zr = z * rot
    fr = complex(*rhs(p, State(zr.real, zr.imag)))
    assert abs(fr - rot * fz) <= 1e-13 * (1 + abs(fz))


def test_so2_equivariance_without_perturbation():
    rng = np.random.default_rng(1)
    p = ModelParams(0.7, -0.3, 0.9, 0.0, QUADRATIC)
    z = complex(0.8, -0.4)
    fz = complex(*rhs(p, State(z.real, z.imag)))
    for th in rng.uniform(0, 2 * math.pi, 100):
        rot = cmath.exp(1j * th)
        zr = z * rot
        fr = complex(*rhs(p, State(zr.real, zr.imag)))
        assert abs(fr - rot * fz) < 1e-13


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_polar_matches_cartesian(kind):
    rng = np.random.default_rng(2)
    for _ in range(100):
        p = ModelParams(*rng.uniform(-1, 1, 2), rng.uniform(0.1, 1.4), rng.uniform(0, 1), kind)
        r, phi = rng.uniform(0.05, 2), rng.uniform(0, 2 * math.pi)
        dx, dy = rhs(p, State.from_polar(r, phi))
        rdot = dx * math.cos(phi) + dy * math.sin(phi)
        phidot = (-dx * math.sin(phi) + dy * math.cos(phi)) / r
        pr, pp = polar_rhs(p, r, phi)
        assert abs(pr - rdot) < 1e-12 * (1 + abs(rdot))
        assert abs(pp - phidot) < 1e-12 * (1 + abs(phidot))


def test_polar_near_origin_finite():
    p = ModelParams(0, 0, 0.5, 1.0, CONST)
    assert all(math.isfinite(v) for v in polar_rhs(p, 0.0, 0.3))


def test_jacobian_z2_origin():
    mu, nu = 0.37, -0.81
    J = jacobian(ModelParams(mu, nu, math.pi / 4, 1.0, zm(2)), State(0, 0))
    assert np.allclose(J, [[mu + 1, -nu], [nu, mu - 1]], atol=1e-15)


def test_jacobian_symmetric_origin():
    J = jacobian(ModelParams(0.2, 0.5, 1.0, 0.0, NONE), State(0, 0))
    assert np.allclose(J, [[0.2, -0.5], [0.5, 0.2]], atol=1e-15)


def test_jacobian_mixed_vs_fd():
    p = ModelParams(0.3, 0.2, math.pi / 4, 1.0, MIXED)
    J = jacobian(p, State(0.5, -0.1))
    assert np.max(np.abs(J - fd_jacobian(field_for(p), 0.5, -0.1))) <= 1e-8


def test_jacobian_fd_property():
    rng = np.random.default_rng(3)
    worst = 0.0
    for i in range(1000):
        kind = ALL_KINDS[i % len(ALL_KINDS)]
        p = ModelParams(*rng.uniform(-2, 2, 2), rng.uniform(0.05, 1.5), rng.uniform(0, 1.5), kind)
        x, y = rng.uniform(-1.5, 1.5, 2)
        worst = max(worst, np.max(np.abs(jacobian(p, State(x, y)) - fd_jacobian(field_for(p), x, y))))
    assert worst <= 1e-7


def test_uv_examples():
    uv = to_uv(ModelParams(1, 1, math.pi / 4))
    assert uv.u == pytest.approx(math.sqrt(2), abs=1e-15) and abs(uv.v) < 1e-15
    uv = to_uv(ModelParams(0, 0, 0.3))
    assert uv.u == 0 and uv.v == 0
    uv = to_uv(ModelParams(1, 0, math.pi / 3))
    assert uv.u == pytest.approx(math.sin(math.pi / 3), abs=1e-15)
    assert uv.v == pytest.approx(-math.cos(math.pi / 3), abs=1e-15)


@given(finite, finite, st.floats(0.01, 1.55))
def test_uv_roundtrip(mu, nu, alpha0):
    uv = to_uv(ModelParams(mu, nu, alpha0))
    m2, n2 = from_uv(uv, alpha0)
    assert abs(m2 - mu) < 1e-14 and abs(n2 - nu) < 1e-14
    p = ModelParams.from_uv(uv.u, uv.v, alpha0)
    assert abs(p.mu - mu) < 1e-14


def test_scaling_exponents():
    assert rescale_epsilon(ModelParams(1, 1, 0.5, 0.1, CONST))[1].delta == pytest.approx(1 / 3)
    assert rescale_epsilon(ModelParams(1, 1, 0.5, 0.1, zm(2)))[1].delta == pytest.approx(1 / 2)
    assert rescale_epsilon(ModelParams(1, 1, 0.5, 0.1, QUADRATIC))[1].delta == pytest.approx(1.0)
    with pytest.raises(DomainError):
        rescale_epsilon(ModelParams(1, 1, 0.5, 0.1, NONE))
    with pytest.raises(DomainError):
        rescale_epsilon(ModelParams(1, 1, 0.5, 0.1, zm(4)))


def test_scaling_roundtrip():
    p = ModelParams(0.3, -0.2, 0.7, 0.04, zm(2))
    unit, _ = rescale_epsilon(p)
    back, _ = unscale_epsilon(unit, 0.04)
    assert back.mu == pytest.approx(p.mu, rel=1e-14) and back.nu == pytest.approx(p.nu, rel=1e-14)


@pytest.mark.parametrize("kind,eps", [(QUADRATIC, 0.01), (CONST, 0.2), (zm(2), 0.05), (MIXED, 0.1)])
def test_scaling_maps_trajectories(kind, eps):
    unit = ModelParams(0.5, 0.3, math.pi / 4, 1.0, kind)
    orig, sf = unscale_epsilon(unit, eps)
    if kind is QUADRATIC:
        assert orig.mu == pytest.approx(5e-5, rel=1e-12)
    z1 = complex(0.4, 0.2)
    t1 = 2.0
    end1 = rk4(field_for(unit), z1, t1, 1e-3)
    end = rk4(field_for(orig), sf.z_scale * z1, sf.t_scale * t1, sf.t_scale * 1e-3)
    assert abs(end / sf.z_scale - end1) < 1e-6


def test_canonicalize_identity():
    alpha0, tr = canonicalize_signs(0.6, 0.8)
    assert alpha0 == pytest.approx(math.atan2(0.6, 0.8))
    assert not tr.time_reversed and not tr.conjugated


def test_canonicalize_time_reversal():
    alpha0, tr = canonicalize_signs(-0.6, -0.8)
    assert tr.time_reversed and not tr.conjugated
    assert math.sin(alpha0) == pytest.approx(0.6)


def test_canonicalize_rejects_degenerate():
    with pytest.raises(DomainError):
        canonicalize_signs(1.0, 0.0)
    with pytest.raises(DomainError):
        canonicalize_signs(0.5, 0.5)


def _raw_field(a_raw, b_raw, mu, nu, eps, q, k):
    c = complex(a_raw, b_raw)

    def f(z):
        return z * (complex(mu, nu) - c * abs(z) ** 2) + eps * z ** q * z.conjugate() ** k
    return f


@pytest.mark.parametrize("a_raw,b_raw", [(0.6, -0.8), (-0.6, -0.8), (-0.6, 0.8)])
@pytest.mark.parametrize("kind", [zm(2), MIXED, QUADRATIC])
def test_canonicalize_maps_fixed_points(a_raw, b_raw, kind):
    alpha0, tr = canonicalize_signs(a_raw, b_raw)
    mu, nu = 0.4, 0.3
    q, k = kind.exponents
    raw = _raw_field(a_raw, b_raw, mu, nu, 1.0, q, k)
    cmu, cnu = tr.map_params(mu, nu)
    eqs = fixed_points(ModelParams(cmu, cnu, alpha0, 1.0, kind))
    assert eqs
    for e in eqs:
        z = tr.unmap_state(e.position.z, kind)
        assert abs(raw(z)) < 1e-9
        assert abs(tr.map_state(z, kind) - e.position.z) < 1e-12
