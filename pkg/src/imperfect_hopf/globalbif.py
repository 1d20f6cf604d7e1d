"""Infinite-period boundaries, period-scaling fits and the degenerate TB check.

Global bifurcations are located by bisection on cycle existence along a
straight path in the (mu, nu) plane.  Whether the period diverges like a
square root (SNIC) or a logarithm (homoclinic or heteroclinic collision)
is decided from least-squares fits and from where the saddle-node of
equilibria falls relative to the loss of the cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .equilibria import StabilityClass, fixed_points
from .flow import (
    CycleNotFound,
    Section,
    LimitCycle,
    SeedPolicy,
    StiffnessError,
    Tolerances,
    find_cycles,
    find_limit_cycle,
    return_map,
)
from .normalform import QUADRATIC, DomainError, ModelParams, State, zm

__all__ = [
    "PeriodScalingFit",
    "ParamPath",
    "BoundaryPoint",
    "PeriodSample",
    "fit_period_scaling",
    "fit_windows",
    "locate_boundary",
    "locate_saddle_node",
    "period_sweep",
    "discriminate",
    "gluing_probe",
    "GluingReport",
    "degenerate_tb_check",
    "DegenerateTBReport",
    "locate_snic_het",
    "SnicHetBracket",
]

SQRT_LAW = "SqrtLaw"
LOG_LAW = "LogLaw"
FOLD_LAW = "FoldLaw"


@dataclass(frozen=True)
class PeriodScalingFit:
    """``T = coeff / sqrt(x - mu_c) + offset`` or ``T = coeff * ln(1/(x - mu_c)) + offset``.

    ``x`` is the path coordinate of the samples; for a LogLaw ``coeff`` is
    the number of saddles passed divided by the saddle eigenvalue.  The
    FoldLaw ``T = offset - coeff * sqrt(x - mu_c)`` describes a period
    that stays finite.
    """

    model: str
    mu_c: float
    coeff: float
    offset: float
    rms_residual: float
    window: Tuple[float, float]
    converged: bool = True
    iterations: int = 0

    def predict(self, x) -> np.ndarray:
        d = np.asarray(x, dtype=float) - self.mu_c
        if np.any(d <= 0):
            raise DomainError("the scaling laws are only defined above mu_c")
        g, _ = _basis(self.model, d)
        return self.coeff * g + self.offset


def _basis(model: str, d: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Basis function g(d) and its derivative."""
    if model == SQRT_LAW:
        return d ** -0.5, -0.5 * d ** -1.5
    if model == LOG_LAW:
        return -np.log(d), -1.0 / d
    if model == FOLD_LAW:
        return -np.sqrt(d), -0.5 / np.sqrt(d)
    raise DomainError(f"unknown model {model!r}")


def fit_period_scaling(samples: Sequence[Tuple[float, float]], model: str, *,
                       max_iter: int = 200) -> PeriodScalingFit:
    """Nonlinear least squares for (mu_c, coeff, offset).

    Levenberg-Marquardt on ``theta = ln(min(x) - mu_c)``, which keeps
    mu_c strictly below the samples.  The start comes from a scan over
    theta with the linear parameters solved exactly at each trial.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 5:
        raise DomainError("need at least 5 (x, T) samples")
    x, T = arr[:, 0], arr[:, 1]
    if not np.all(np.isfinite(arr)) or np.any(T <= 0):
        raise DomainError("periods must be finite and positive")
    xmin = float(x.min())
    span = float(np.ptp(x)) or 1.0

    def linear(theta):
        d = x - (xmin - math.exp(theta))
        g, _ = _basis(model, d)
        A = np.column_stack([g, np.ones_like(g)])
        coef, *_ = np.linalg.lstsq(A, T, rcond=None)
        r = A @ coef - T
        return float(r @ r), coef

    thetas = np.log(span) + np.linspace(math.log(1e-9), math.log(10.0), 121)
    floor = math.log(1e-12 * span)
    costs = [linear(th)[0] for th in thetas]
    theta = float(thetas[int(np.argmin(costs))])
    k, o = linear(theta)[1]
    p = np.array([theta, k, o])

    def resid(p):
        e = max(math.exp(p[0]), 1e-300)
        d = x - xmin + e
        g, dg = _basis(model, d)
        r = p[1] * g + p[2] - T
        J = np.column_stack([p[1] * dg * e, g, np.ones_like(g)])
        return r, J

    r, J = resid(p)
    cost = float(r @ r)
    lam = 1e-3
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        A = J.T @ J
        g = J.T @ r
        step = np.linalg.solve(A + lam * np.diag(np.maximum(np.diag(A), 1e-300)), -g)
        trial = p + step
        trial[0] = max(trial[0], floor)
        if not np.all(np.isfinite(trial)) or trial[0] > 50:
            lam *= 10
            continue
        r_new, J_new = resid(trial)
        c_new = float(r_new @ r_new)
        if c_new <= cost:
            small = np.all(np.abs(step) <= 1e-12 * (np.abs(p) + 1e-12))
            flat = cost - c_new <= 1e-15 * max(cost, 1e-300)
            p, r, J, cost = trial, r_new, J_new, c_new
            lam = max(lam / 3, 1e-12)
            if small or flat or cost == 0.0:
                converged = True
                break
        else:
            lam *= 4
            if lam > 1e16:
                converged = True  # no descent direction left
                break
    mu_c = xmin - math.exp(p[0])
    rms = math.sqrt(cost / len(x))
    return PeriodScalingFit(model, mu_c, float(p[1]), float(p[2]), rms,
                            (float(x.min()), float(x.max())), converged, it)


def fit_windows(samples: Sequence[Tuple[float, float]], mu_c: float, near: float = 0.3,
                far: float = 0.5) -> Dict[str, Dict[str, PeriodScalingFit]]:
    """Both laws on the nearest ``near`` and farthest ``far`` fractions of the samples."""
    arr = np.asarray(sorted(samples, key=lambda s: s[0] - mu_c), dtype=float)
    n = len(arr)
    n_near = max(5, int(round(near * n)))
    n_far = max(5, int(round(far * n)))
    if n_near + n_far > n:
        raise DomainError("not enough samples for disjoint near and far windows")
    out = {}
    for name, part in (("near", arr[:n_near]), ("far", arr[n - n_far:])):
        out[name] = {m: fit_period_scaling(part, m) for m in (SQRT_LAW, LOG_LAW)}
    return out


# ----------------------------------------------------------------------------
# boundary location

@dataclass(frozen=True)
class ParamPath:
    """Straight path from ``start`` (cycle present) to ``end`` in the (mu, nu) plane."""

    start: Tuple[float, float]
    end: Tuple[float, float]

    @property
    def length(self) -> float:
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])

    def at(self, s: float) -> Tuple[float, float]:
        return (self.start[0] + s * (self.end[0] - self.start[0]),
                self.start[1] + s * (self.end[1] - self.start[1]))


@dataclass(frozen=True)
class PeriodSample:
    distance: float  # path length between the sample and the boundary
    location: Tuple[float, float]
    period: float


@dataclass
class BoundaryPoint:
    """A located cycle-loss boundary with the evidence used to type it."""

    location: Tuple[float, float]
    bracket: Tuple[Tuple[float, float], Tuple[float, float]]
    width: float
    type_guess: str
    horizon: float
    saddle_node: Optional[Tuple[float, float]] = None
    saddle_node_gap: Optional[float] = None
    saddle_eigenvalue: Optional[float] = None
    colliding_saddles: int = 0
    samples: List[PeriodSample] = field(default_factory=list)
    fits: Dict[str, Dict[str, PeriodScalingFit]] = field(default_factory=dict)
    bounded_rms: Optional[float] = None
    last_cycle: Optional[LimitCycle] = None
    notes: List[str] = field(default_factory=list)


def _probe(params: ModelParams, seeds: Sequence[State], max_period: float, budget: float,
           transient: float, tol: Tolerances) -> Optional[LimitCycle]:
    for seed in seeds:
        try:
            cyc = find_limit_cycle(params, seed, transient=transient, max_time=budget,
                                   tolerances=tol)
        except (CycleNotFound, StiffnessError):
            continue
        if cyc.stability == "Stable" and cyc.period <= max_period:
            return cyc
    return None


def _seeds(cyc: Optional[LimitCycle], extra: Sequence[State]) -> List[State]:
    out = []
    if cyc is not None:
        out.append(State(*cyc.section.point(cyc.crossing_radius)))
    return out + list(extra)


def locate_saddle_node(base: ModelParams, path: ParamPath, tol: float = 1e-10) -> Optional[float]:
    """Path coordinate where the equilibrium count changes, or None."""
    def count(s):
        mu, nu = path.at(s)
        return len(fixed_points(base.with_(mu=mu, nu=nu)))

    lo, hi = 0.0, 1.0
    c_lo, c_hi = count(lo), count(hi)
    if c_lo == c_hi:
        return None
    while (hi - lo) * path.length > tol:
        mid = 0.5 * (lo + hi)
        if count(mid) == c_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def locate_boundary(base: ModelParams, path: ParamPath, *, seed: Optional[State] = None,
                    tol: float = 1e-6, max_period: float = 1e4, budget: float = 2e4,
                    transient: float = 200.0, n_samples: int = 17,
                    sample_range: Tuple[float, float] = (4e-6, 4e-2),
                    tolerances: Tolerances = Tolerances()) -> BoundaryPoint:
    """Bisect the loss of the stable cycle along ``path`` and gather evidence.

    The cycle found at each probe seeds the next one.  Cycles with period
    above ``max_period`` count as absent, so the boundary is reported for
    that horizon.  Evidence: the saddle-node of equilibria on the path,
    periods at ``n_samples`` geometrically spaced distances before the
    boundary, near/far fits of both laws, a fit of the finite-period law
    and the saddle closest to the last cycle.
    """
    if base.effective_kind.tag == "none":
        return _symmetric_boundary(base, path)
    L = path.length
    if not L > 0:
        raise DomainError("degenerate path")
    far_seed = [State(2.0 + 2 * math.sqrt(max(abs(base.mu), abs(base.nu), 1.0)), 0.0)]
    extra = ([seed] if seed else []) + far_seed

    def params_at(s):
        mu, nu = path.at(s)
        return base.with_(mu=mu, nu=nu)

    def probe(s, cyc):
        return _probe(params_at(s), _seeds(cyc, extra), max_period, budget, transient, tolerances)

    cyc = probe(0.0, None)
    if cyc is None:
        raise DomainError("no stable cycle at the start of the path")
    end = probe(1.0, cyc)
    if end is not None:
        raise DomainError("the stable cycle persists to the end of the path")
    lo, hi = 0.0, 1.0
    last = cyc
    while (hi - lo) * L > tol:
        mid = 0.5 * (lo + hi)
        c = probe(mid, last)
        if c is not None:
            lo, last = mid, c
        else:
            hi = mid
    s_c = lo
    bp = BoundaryPoint(location=path.at(0.5 * (lo + hi)), bracket=(path.at(lo), path.at(hi)),
                       width=(hi - lo) * L, type_guess="Undetermined", horizon=max_period,
                       last_cycle=last)
    s_sn = locate_saddle_node(base, path)
    if s_sn is not None:
        bp.saddle_node = path.at(s_sn)
        bp.saddle_node_gap = (s_sn - s_c) * L
    # periods before the boundary
    samples = []
    seedcyc = last
    for dist in np.geomspace(sample_range[0], sample_range[1], n_samples):
        s = s_c - dist / L
        if s < 0:
            break
        c = probe(s, seedcyc)
        if c is None:
            continue
        seedcyc = c
        samples.append(PeriodSample(float(dist), path.at(s), c.period))
    bp.samples = samples
    _saddle_evidence(bp, params_at(s_c), last)
    if len(samples) >= 10:
        pts = [(s.distance, s.period) for s in samples]
        # fit in the coordinate x = distance to the boundary, mu_c free near 0
        # coordinate: distance to the boundary, which sits at 0
        bp.fits = fit_windows(pts, 0.0)
        near_pts = pts[:max(5, int(round(0.3 * len(pts))))]
        bp.bounded_rms = fit_period_scaling(near_pts, FOLD_LAW).rms_residual
    bp.type_guess = discriminate(bp)
    return bp


def _saddle_evidence(bp: BoundaryPoint, params: ModelParams, cyc: LimitCycle) -> None:
    saddles = [e for e in fixed_points(params) if e.stability == StabilityClass.SADDLE]
    if not saddles:
        return
    pos = np.array([[e.position.x, e.position.y] for e in saddles])
    dist = cyc.distance_to(pos)
    j = int(np.argmin(dist))
    near = saddles[j]
    bp.saddle_eigenvalue = float(max(ev.real for ev in near.eigenvalues))
    m = params.effective_kind.symmetry_order
    count = 1
    if m >= 2:
        z = near.position.z
        for k in range(1, m):
            img = z * complex(math.cos(2 * math.pi * k / m), math.sin(2 * math.pi * k / m))
            for e, dd in zip(saddles, dist):
                if abs(e.position.z - img) < 1e-8 and dd <= 2 * dist[j] + 1e-6:
                    count += 1
    bp.colliding_saddles = count


def _symmetric_boundary(base: ModelParams, path: ParamPath) -> BoundaryPoint:
    """eps = 0: the pinning band collapses onto line L (v = 0)."""
    a, b = base.a, base.b

    def v(s):
        mu, nu = path.at(s)
        return a * nu - b * mu

    v0, v1 = v(0.0), v(1.0)
    if v0 == 0 or v0 * v1 > 0:
        raise DomainError("path does not cross line L")
    s = v0 / (v0 - v1)
    loc = path.at(s)
    bp = BoundaryPoint(loc, (loc, loc), 0.0, "Undetermined", float("inf"))
    bp.notes.append("symmetric system: the band of steady states is line L itself")
    return bp


def discriminate(bp: BoundaryPoint, near: str = "near", far: str = "far") -> str:
    """Type of an infinite-period (or finite-period) cycle loss.

    SNIC: the saddle-node of equilibria coincides with the cycle loss and
    the square-root law wins on both windows.  Homoclinic: the
    saddle-node precedes the loss, or the logarithmic law wins near the
    boundary; upgraded to Heteroclinic when a symmetric image of the
    colliding saddle sits on the cycle too.  CyclicFold: the period stays
    bounded.  Anything else is Undetermined.
    """
    fits = bp.fits or {}
    sqrt_all = log_near = False
    k_sqrt = None
    if near in fits and far in fits:
        sqrt_all = all(fits[w][SQRT_LAW].rms_residual < fits[w][LOG_LAW].rms_residual
                       for w in (near, far))
        log_near = fits[near][LOG_LAW].rms_residual < fits[near][SQRT_LAW].rms_residual
        k_sqrt = abs(fits[near][SQRT_LAW].coeff)
    slack = 2 * bp.width
    if k_sqrt is not None and math.isfinite(bp.horizon):
        # a square-root law exceeds the horizon this far before the fold
        slack += 2 * (k_sqrt / bp.horizon) ** 2
    coincide = bp.saddle_node_gap is not None and abs(bp.saddle_node_gap) <= slack
    precedes = bp.saddle_node_gap is not None and bp.saddle_node_gap < -slack
    bounded = False
    if bp.bounded_rms is not None and near in fits:
        best = min(f.rms_residual for f in fits[near].values())
        bounded = bp.bounded_rms < 0.5 * best
    if coincide:
        return "SNIC" if sqrt_all and not log_near else "Undetermined"
    if bounded:
        return "CyclicFold" if bp.saddle_node_gap is None else "Undetermined"
    if precedes or log_near:
        return "Heteroclinic" if bp.colliding_saddles >= 2 else "Homoclinic"
    return "Undetermined"


def period_sweep(base: ModelParams, locations: Sequence[Tuple[float, float]], *,
                 seed: Optional[State] = None, transient: float = 200.0,
                 budget: float = 2e4, tolerances: Tolerances = Tolerances()) -> List[Tuple[Tuple[float, float], float]]:
    """Periods of the stable cycle at successive locations (each seeds the next)."""
    out = []
    cyc = None
    extra = [seed] if seed else [State(3.0, 0.0)]
    for mu, nu in locations:
        c = _probe(base.with_(mu=mu, nu=nu), _seeds(cyc, extra), float("inf"), budget,
                   transient, tolerances)
        if c is None:
            continue
        cyc = c
        out.append(((mu, nu), c.period))
    return out


# ----------------------------------------------------------------------------
# gluing and the SnicHet point in the conj(z) case

@dataclass
class GluingReport:
    verdict: str  # TwoSmallCycles, GluedLargeCycle, NoUnstableCycle or Undetermined
    unstable_cycles: List[LimitCycle]
    enclosed: List[List[str]]
    stable_cycles: List[LimitCycle]


def gluing_probe(params: ModelParams, policy: SeedPolicy = SeedPolicy(cycle_transient=200.0,
                                                                       cycle_max_time=5e3)) -> GluingReport:
    """Configuration of the unstable cycles near TB- of the conj(z) case.

    Unstable cycles are found as attractors of the reversed flow; each is
    classified by the equilibria it encloses.
    """
    kind = params.effective_kind
    if not (kind.tag == "zm" and kind.m == 2):
        raise DomainError("gluing_probe needs kind=ZmResidual(2)")
    eqs = fixed_points(params)
    cycles = find_cycles(params, policy, eqs)
    unstable = [c for c in cycles if c.stability == "Unstable"]
    stable = [c for c in cycles if c.stability == "Stable"]
    enclosed = [[e.name for e in eqs if c.encloses(e.position.x, e.position.y)] for c in unstable]
    if not unstable:
        verdict = "NoUnstableCycle"
    elif len(unstable) == 2 and all(len(n) == 1 and n[0] != "P0" for n in enclosed) \
            and enclosed[0] != enclosed[1]:
        verdict = "TwoSmallCycles"
    elif len(unstable) == 1 and {"P0", "P+", "P+*"} <= set(enclosed[0]):
        verdict = "GluedLargeCycle"
    else:
        verdict = "Undetermined"
    return GluingReport(verdict, unstable, enclosed, stable)


@dataclass
class SnicHetBracket:
    """Where the heteroclinic boundary meets SN- (conj(z) case).

    ``nu_bracket`` encloses the transition from cycle loss before the
    saddle-node (heteroclinic) to cycle loss on it (SNIC); the matching
    points on SN- are ``mu_bracket``.
    """

    nu_bracket: Tuple[float, float]
    mu_bracket: Tuple[float, float]
    probe_offset: float

    @property
    def location(self) -> Tuple[float, float]:
        return 0.5 * sum(self.mu_bracket), 0.5 * sum(self.nu_bracket)

    def contains(self, mu: float, nu: float, margin: float = 0.0) -> bool:
        (m0, m1), (n0, n1) = sorted(self.mu_bracket), sorted(self.nu_bracket)
        return m0 - margin <= mu <= m1 + margin and n0 - margin <= nu <= n1 + margin


def locate_snic_het(alpha0: float, nu_range: Tuple[float, float] = (0.0, 1.6), *,
                    offset: float = 2e-6, tol: float = 1e-4, max_period: float = 1e4,
                    budget: float = 2e4) -> SnicHetBracket:
    """Bisect along SN- for the end of the heteroclinic segment.

    A point of SN- is heteroclinic-type when the stable cycle C- survives
    a distance ``offset`` inside the pinning region, i.e. the saddle-node
    happened off the cycle.  Past SnicHet- the cycle is lost exactly at
    SN- (SNIC) and no cycle survives inside.
    """
    a, b = math.sin(alpha0), math.cos(alpha0)

    def mu_sn(nu):
        return (a * nu + 1) / b

    def het_type(nu):
        mu = mu_sn(nu)
        p = ModelParams(mu - offset / b, nu, alpha0, 1.0, zm(2))
        outside = ModelParams(mu + 1e-2, nu, alpha0, 1.0, p.kind)
        c0 = _probe(outside, [State(3.0, 0.0)], max_period, budget, 200.0, Tolerances())
        if c0 is None:
            raise DomainError(f"no cycle C- outside the pinning region at nu={nu}")
        c = _probe(p, _seeds(c0, []), max_period, budget, 200.0, Tolerances())
        return c is not None

    lo, hi = nu_range
    if not het_type(lo):
        raise DomainError("lower end of nu_range is not heteroclinic-type")
    if het_type(hi):
        raise DomainError("upper end of nu_range is still heteroclinic-type")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if het_type(mid):
            lo = mid
        else:
            hi = mid
    return SnicHetBracket((lo, hi), (mu_sn(lo), mu_sn(hi)), offset)


# ----------------------------------------------------------------------------
# degenerate Takens-Bogdanov point of the z**2 case

@dataclass
class DegenerateTBReport:
    """Fitted normal-form coefficients at TB- of the z**2 case.

    In Jordan coordinates ``x' = y + f(x, y)``, ``y' = g(x, y)`` the
    reported quantities are the coefficients of ``x**2`` (quadratic),
    ``x*y`` (xy) and ``x**3`` (cubic) of the normal form reached by the
    usual near-identity change of variables.
    """

    alpha0: float
    radius: float
    quadratic_coeff: float
    xy_coeff: float
    cubic_coeff: float
    linear_part: np.ndarray
    fit_rms: float
    condition: float
    ill_conditioned: bool
    hamiltonian_residual: Optional[float] = None


_MONOMIALS = [(i, j) for d in range(4) for i in range(d, -1, -1) for j in [d - i]]


def _tb_jordan_field(alpha0: float):
    """Field of the z**2 case at TB-, in Jordan coordinates centred on the fold."""
    a, b = math.sin(alpha0), math.cos(alpha0)
    c = complex(a, b)
    mu, nu = 0.0, -1.0 / (2 * (1 + b))
    zs = (c + 1j) / (2 * (1 + b))
    ch = math.cos(alpha0 / 2)
    rot = complex(math.cos(alpha0), math.sin(alpha0))
    lin = complex(mu, nu)

    def F(x1, y1):
        zeta = (y1 + 2j * x1) / rot
        z = zs + zeta / (2 * ch)
        zd = (z * (lin - c * (z * np.conj(z))) + z * z) * 8 * ch ** 3
        w = zd * rot
        return w.imag / 2, w.real
    return F


def degenerate_tb_check(alpha0: float, radius: float = 1e-3, n_rings: int = 12,
                        n_angles: int = 24, orbit_check: bool = True) -> DegenerateTBReport:
    """Least-squares cubic fit of the field on a disc around TB- (z**2 case).

    With ``x' = y + f``, ``y' = g`` the normal form coefficients are
    ``A = g20``, ``B = 2 f20 + g11`` and ``C = f11 g20 - f20 g11 + g30``.
    ``orbit_check`` also measures the return gap of closed orbits on the
    Hopf segment H0, where the system has the integrating factor r**-4.
    """
    if not 0 < alpha0 < math.pi / 2:
        raise DomainError("alpha0 must lie in (0, pi/2)")
    if not radius > 0:
        raise DomainError("radius must be positive")
    F = _tb_jordan_field(alpha0)
    rr = radius * np.sqrt((np.arange(n_rings) + 0.5) / n_rings)
    th = 2 * np.pi * (np.arange(n_angles) + 0.25) / n_angles
    R, TH = np.meshgrid(rr, th)
    x, y = (R * np.cos(TH)).ravel(), (R * np.sin(TH)).ravel()
    M = np.column_stack([(x / radius) ** i * (y / radius) ** j for i, j in _MONOMIALS])
    scale = np.array([radius ** (i + j) for i, j in _MONOMIALS])
    u, v = F(x, y)
    cu, res_u, *_ = np.linalg.lstsq(M, u, rcond=None)
    cv, res_v, *_ = np.linalg.lstsq(M, v, rcond=None)
    cond = float(np.linalg.cond(M))
    fu = dict(zip(_MONOMIALS, cu / scale))
    gv = dict(zip(_MONOMIALS, cv / scale))
    A = gv[(2, 0)]
    B = 2 * fu[(2, 0)] + gv[(1, 1)]
    C = fu[(1, 1)] * gv[(2, 0)] - fu[(2, 0)] * gv[(1, 1)] + gv[(3, 0)]
    linear = np.array([[fu[(1, 0)], fu[(0, 1)]], [gv[(1, 0)], gv[(0, 1)]]])
    fit = np.concatenate([M @ cu - u, M @ cv - v])
    rms = float(np.sqrt(np.mean(fit ** 2)))
    # the field is an exact cubic: residuals far above round-off mean a bad fit
    scale_v = float(np.max(np.abs(np.concatenate([u, v])))) or 1.0
    ill = cond > 1e8 or rms > 1e-6 * scale_v
    rep = DegenerateTBReport(alpha0, radius, float(A), float(B), float(C), linear, rms, cond, ill)
    if orbit_check:
        rep.hamiltonian_residual = closed_orbit_gap(alpha0)
    return rep


def closed_orbit_gap(alpha0: float, offsets: Sequence[float] = (0.02, 0.05, 0.1)) -> float:
    """Largest return gap of orbits around the centre on H0 (z**2 case, mu=0).

    H0 is the segment of mu = 0 between the two TB points; its midpoint is
    used.  A continuous family of closed orbits gives gaps at round-off.
    """
    a, b = math.sin(alpha0), math.cos(alpha0)
    nu = 0.5 * ((b + 1) / (2 * a * a) + (b - 1) / (2 * a * a))
    p = ModelParams(0.0, nu, alpha0, 1.0, QUADRATIC)
    centres = [e for e in fixed_points(p) if e.det > 0 and e.label != "P0"]
    if not centres:
        raise DomainError("no centre on H0")
    e = centres[0]
    worst = 0.0
    for off in offsets:
        for direction in (1, -1):
            sec = Section(0.0, (e.position.x, e.position.y), direction)
            try:
                rho, _, _ = return_map(p, sec, off, max_time=1e3)
            except CycleNotFound:
                continue
            worst = max(worst, abs(rho - off))
            break
    return worst
