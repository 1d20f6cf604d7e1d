import math

import numpy as np
import pytest

from imperfect_hopf.globalbif import (
    LOG_LAW,
    SQRT_LAW,
    BoundaryPoint,
    ParamPath,
    closed_orbit_gap,
    degenerate_tb_check,
    discriminate,
    fit_period_scaling,
    fit_windows,
    gluing_probe,
    locate_boundary,
    locate_saddle_node,
    period_sweep,
)
from imperfect_hopf.equilibria import StabilityClass, fixed_points
from imperfect_hopf.normalform import CONST, QUADRATIC, DomainError, ModelParams, zm

Q4 = math.pi / 4
MUS = np.linspace(2.001, 2.2, 20)


def _z2(mu, nu):
    return ModelParams(mu, nu, Q4, 1.0, zm(2))


# ----------------------------------------------------------------------------
# period-scaling fits

def test_sqrt_law_recovered():
    T = 5 / np.sqrt(MUS - 2) + 1
    fit = fit_period_scaling(list(zip(MUS, T)), SQRT_LAW)
    assert fit.converged
    assert abs(fit.mu_c - 2) <= 1e-6 and abs(fit.coeff - 5) <= 1e-6 and abs(fit.offset - 1) <= 1e-6
    assert fit.rms_residual < 1e-9
    assert fit.predict(2.05) == pytest.approx(5 / math.sqrt(0.05) + 1, rel=1e-9)


def test_log_law_recovered():
    T = 3 * np.log(1 / (MUS - 2)) + 0.7
    fit = fit_period_scaling(list(zip(MUS, T)), LOG_LAW)
    assert abs(fit.mu_c - 2) <= 1e-6 and abs(fit.coeff - 3) <= 1e-6 and abs(fit.offset - 0.7) <= 1e-6


def test_fit_mu_c_below_samples():
    T = 3 * np.log(1 / (MUS - 2)) + 0.7
    for model in (SQRT_LAW, LOG_LAW):
        fit = fit_period_scaling(list(zip(MUS, T)), model)
        assert fit.mu_c < MUS.min() and fit.rms_residual >= 0
        assert fit.window == (MUS.min(), MUS.max())


def test_fit_errors():
    with pytest.raises(DomainError):
        fit_period_scaling([(1.0, 2.0)] * 4, SQRT_LAW)
    with pytest.raises(DomainError):
        fit_period_scaling([(1.0 + i, -1.0) for i in range(6)], LOG_LAW)
    with pytest.raises(DomainError):
        fit_period_scaling([(1.0 + i, 1.0) for i in range(6)], "CubeLaw")


def test_fit_identifiability_with_noise():
    rng = np.random.default_rng(11)
    mus = 2 + np.geomspace(1e-4, 0.2, 20)
    laws = {SQRT_LAW: 5 / np.sqrt(mus - 2) + 1, LOG_LAW: 3 * np.log(1 / (mus - 2)) + 0.7}
    for true, T in laws.items():
        other = LOG_LAW if true == SQRT_LAW else SQRT_LAW
        wins = 0
        for _ in range(200):
            noisy = T * (1 + 0.01 * rng.standard_normal(len(T)))
            pts = list(zip(mus, noisy))
            wins += fit_period_scaling(pts, true).rms_residual < fit_period_scaling(pts, other).rms_residual
        assert wins >= 190


def test_fit_windows_split():
    d = np.geomspace(1e-5, 1e-1, 20)
    pts = list(zip(d, 2 * np.log(1 / d) + 1))
    fw = fit_windows(pts, 0.0)
    assert set(fw) == {"near", "far"}
    near_hi = fw["near"][LOG_LAW].window[1]
    far_lo = fw["far"][LOG_LAW].window[0]
    assert near_hi < far_lo


# ----------------------------------------------------------------------------
# boundaries

@pytest.fixture(scope="module")
def het_boundary():
    return locate_boundary(_z2(2.2, 0.6), ParamPath((2.2, 0.6), (2.0, 0.6)))


@pytest.fixture(scope="module")
def snic_boundary():
    return locate_boundary(_z2(3.0, 1.55), ParamPath((3.0, 1.55), (3.0, 1.60)))


@pytest.fixture(scope="module")
def cf_boundary():
    return locate_boundary(_z2(0.5, -0.66), ParamPath((0.5, -0.66), (0.5, -0.65)))


def test_het_boundary_location(het_boundary):
    bp = het_boundary
    assert bp.width <= 1e-6
    assert abs(bp.location[0] - 2.01336) <= 1e-3
    mu_sn = bp.saddle_node[0]
    assert abs(mu_sn - 2.01420) <= 1e-3
    assert mu_sn > bp.location[0]
    lo, hi = sorted(p[0] for p in bp.bracket)
    assert lo <= bp.location[0] <= hi


def test_het_boundary_type(het_boundary):
    assert het_boundary.type_guess == "Heteroclinic"
    assert het_boundary.colliding_saddles == 2
    assert discriminate(het_boundary) == "Heteroclinic"


def test_het_two_window_ordering(het_boundary):
    f = het_boundary.fits
    assert f["near"][LOG_LAW].rms_residual < f["near"][SQRT_LAW].rms_residual
    assert f["far"][SQRT_LAW].rms_residual < f["far"][LOG_LAW].rms_residual


def test_het_saddle_eigenvalue_consistency(het_boundary):
    bp = het_boundary
    coeff = bp.fits["near"][LOG_LAW].coeff
    expected = bp.colliding_saddles / bp.saddle_eigenvalue
    assert coeff == pytest.approx(expected, rel=0.10)


def test_monotone_divergence(het_boundary, snic_boundary):
    for bp in (het_boundary, snic_boundary):
        ordered = sorted(bp.samples, key=lambda s: -s.distance)
        T = np.array([s.period for s in ordered])
        assert np.all(np.diff(T) > -1e-9)


def test_snic_boundary(snic_boundary):
    bp = snic_boundary
    assert bp.type_guess == "SNIC"
    assert abs(bp.saddle_node_gap) <= 1e-5
    assert abs(bp.saddle_node_gap) <= 2 * bp.width + 1e-6
    assert abs(bp.location[1] - 1.5858) < 1e-3


def test_cyclic_fold_boundary(cf_boundary):
    bp = cf_boundary
    assert bp.type_guess == "CyclicFold"
    assert bp.saddle_node is None
    # the period stays finite up to the boundary
    assert max(s.period for s in bp.samples) < 30


def test_symmetric_boundary_is_line_l():
    base = ModelParams(1.0, 0.5, Q4, 0.0, CONST)
    bp = locate_boundary(base, ParamPath((1.0, 0.5), (1.0, 1.5)))
    assert bp.width == 0.0
    assert bp.location == pytest.approx((1.0, 1.0), abs=1e-15)
    with pytest.raises(DomainError):
        locate_boundary(base, ParamPath((1.0, 0.5), (1.0, 0.8)))


def test_boundary_rejects_start_without_cycle():
    with pytest.raises(DomainError):
        locate_boundary(_z2(2.0, 0.6), ParamPath((2.0, 0.6), (1.9, 0.6)))


def test_saddle_node_along_path():
    s = locate_saddle_node(_z2(2.2, 0.6), ParamPath((2.2, 0.6), (2.0, 0.6)))
    mu = 2.2 - 0.2 * s
    a = b = math.sin(Q4)
    # SN- of the conj(z) case is the line a nu - b mu = -1
    assert mu == pytest.approx((a * 0.6 + 1) / b, abs=1e-9)


def test_discriminate_conflicting_evidence():
    bp = BoundaryPoint((0.0, 0.0), ((0.0, 0.0), (0.0, 0.0)), 1e-7, "Undetermined", 1e4)
    assert discriminate(bp) == "Undetermined"


def test_period_sweep_increases_towards_boundary():
    locs = [(2.2, 0.6), (2.1, 0.6), (2.05, 0.6), (2.02, 0.6)]
    out = period_sweep(_z2(2.2, 0.6), locs)
    T = [t for _, t in out]
    assert len(T) == 4 and all(np.diff(T) > 0)


# ----------------------------------------------------------------------------
# gluing near TB- of the conj(z) case

def test_gluing_two_small_cycles():
    rep = gluing_probe(_z2(0.5, -0.68))
    assert rep.verdict == "TwoSmallCycles"
    assert sorted(n[0] for n in rep.enclosed) == ["P+", "P+*"]


def test_gluing_glued_cycle():
    rep = gluing_probe(_z2(0.5, -0.66))
    assert rep.verdict == "GluedLargeCycle"
    assert {"P0", "P+", "P+*"} <= set(rep.enclosed[0])
    assert len(rep.stable_cycles) == 1


def test_gluing_after_cyclic_fold():
    rep = gluing_probe(_z2(0.5, -0.65))
    assert rep.verdict == "NoUnstableCycle"


def test_gluing_needs_conj_case():
    with pytest.raises(DomainError):
        gluing_probe(ModelParams(0.5, -0.66, Q4, 1.0, CONST))


# ----------------------------------------------------------------------------
# degenerate TB of the z**2 case

@pytest.mark.parametrize("deg", [30, 45, 60])
def test_degenerate_tb_coefficients(deg):
    alpha0 = math.radians(deg)
    c = math.cos(alpha0 / 2)
    rep = degenerate_tb_check(alpha0, radius=1e-3)
    assert rep.quadratic_coeff == pytest.approx(4 * c, rel=1e-3)
    assert rep.cubic_coeff == pytest.approx(16 * c * c, rel=1e-3)
    assert abs(rep.xy_coeff) <= 1e-6
    assert not rep.ill_conditioned
    assert rep.hamiltonian_residual <= 1e-6


def test_degenerate_tb_small_angle_limit():
    rep = degenerate_tb_check(1e-4, radius=1e-3, orbit_check=False)
    assert rep.quadratic_coeff == pytest.approx(4, rel=1e-6)
    assert rep.cubic_coeff == pytest.approx(16, rel=1e-6)
    assert abs(rep.xy_coeff) <= 1e-6


def test_degenerate_tb_radius_convergence():
    # the shifted field is polynomial, so every radius already sits at round-off
    alpha0 = Q4
    c = math.cos(alpha0 / 2)
    for r in (8e-3, 4e-3, 2e-3, 1e-3):
        rep = degenerate_tb_check(alpha0, radius=r, orbit_check=False)
        err = abs(rep.quadratic_coeff / (4 * c) - 1) + abs(rep.cubic_coeff / (16 * c * c) - 1)
        assert err <= 1e-6 and abs(rep.xy_coeff) <= 1e-6


def test_degenerate_tb_linear_part_is_jordan():
    rep = degenerate_tb_check(Q4, orbit_check=False)
    assert np.allclose(rep.linear_part, [[0, 1], [0, 0]], atol=1e-8)


def test_degenerate_tb_rejects_bad_radius():
    with pytest.raises(DomainError):
        degenerate_tb_check(Q4, radius=0.0)


def test_closed_orbit_family_on_h0():
    assert closed_orbit_gap(Q4) <= 1e-6


def test_h0_centre_is_non_hyperbolic():
    a, b = math.sin(Q4), math.cos(Q4)
    p = ModelParams(0.0, 0.5 * b / (a * a), Q4, 1.0, QUADRATIC)
    cent = [e for e in fixed_points(p) if e.det > 0 and e.label != "P0"]
    assert cent and all(abs(e.trace) < 1e-12 for e in cent)
    assert all(e.stability == StabilityClass.NON_HYPERBOLIC for e in cent)
