"""Local bifurcation curves, codimension-two points and pinning geometry.

Curves are returned as adaptively sampled polylines in the (mu, nu) plane
of the unit system (eps = 1).  ``scale_curve`` maps them to an explicit eps
for the cases where the eps-scaling applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .equilibria import Equilibrium, fixed_points, newton_polish
from .normalform import (
    CONST,
    DomainError,
    ModelParams,
    PerturbationKind,
    UVPoint,
    from_uv,
    zm,
)

__all__ = [
    "BifCurve",
    "Codim2Point",
    "EllipseGeometry",
    "CurveSet",
    "adaptive_sample",
    "sn_curve_const",
    "hopf_curve_const",
    "codim2_const",
    "curves_const",
    "curves_z2",
    "curves_quadratic",
    "z2_ellipse_geometry",
    "pinning_width",
    "measure_pinning_width",
    "transverse_boundary",
    "zm_horn",
    "near_coalescences",
    "first_lyapunov",
    "locate_bautin",
    "scale_curve",
]

CHORD_TOL = 1e-4


@dataclass(frozen=True)
class BifCurve:
    """A sampled codimension-one bifurcation curve.

    ``samples`` is an (N, 2) array of (mu, nu) points ordered by the curve
    parameter ``params``; ``label`` is one of SNplus, SNminus, SN0, Hplus,
    Hminus, H0, PFplus, PFminus, Parabola, EllipseArc, Line.
    """

    label: str
    samples: np.ndarray
    params: np.ndarray
    param_range: Tuple[float, float]
    param_name: str = "s"
    alpha0: float = math.pi / 4
    degenerate: bool = False

    def uv(self) -> np.ndarray:
        a, b = math.sin(self.alpha0), math.cos(self.alpha0)
        mu, nu = self.samples[:, 0], self.samples[:, 1]
        return np.column_stack([a * mu + b * nu, a * nu - b * mu])

    def __len__(self):
        return len(self.samples)


@dataclass(frozen=True)
class Codim2Point:
    """Codimension-two point: Cusp+/-, TB+/-, TB, dPF+/-."""

    label: str
    location: Tuple[float, float]
    curve_parameter: Optional[float] = None
    alpha0: float = math.pi / 4
    note: str = ""

    @property
    def uv(self) -> Tuple[float, float]:
        a, b = math.sin(self.alpha0), math.cos(self.alpha0)
        mu, nu = self.location
        return a * mu + b * nu, a * nu - b * mu


@dataclass
class CurveSet:
    """All local curves and codim-2 points of one case."""

    kind: PerturbationKind
    alpha0: float
    curves: List[BifCurve] = field(default_factory=list)
    points: List[Codim2Point] = field(default_factory=list)
    extras: Dict[str, object] = field(default_factory=dict)

    def curve(self, label: str) -> BifCurve:
        for c in self.curves:
            if c.label == label:
                return c
        raise KeyError(label)

    def point(self, label: str) -> Codim2Point:
        for p in self.points:
            if p.label == label:
                return p
        raise KeyError(label)


def adaptive_sample(fun: Callable[[float], Tuple[float, float]], t0: float, t1: float,
                    tol: float = CHORD_TOL, n0: int = 16, max_depth: int = 18):
    """Sample a parametrized curve until every chord is within ``tol``.

    An interval is split when the curve point at its midpoint deviates from
    the chord midpoint by more than ``tol``.
    """
    ts = list(np.linspace(t0, t1, n0 + 1))
    pts = [np.asarray(fun(t), dtype=float) for t in ts]
    out_t, out_p = [ts[0]], [pts[0]]
    stack = [(ts[i], pts[i], ts[i + 1], pts[i + 1], 0) for i in range(n0)][::-1]
    while stack:
        ta, pa, tb, pb, depth = stack.pop()
        tm = 0.5 * (ta + tb)
        pm = np.asarray(fun(tm), dtype=float)
        if depth < max_depth and np.hypot(*(pm - 0.5 * (pa + pb))) > tol:
            stack.append((tm, pm, tb, pb, depth + 1))
            stack.append((ta, pa, tm, pm, depth + 1))
        else:
            out_t.append(tb)
            out_p.append(pb)
    return np.array(out_t), np.array(out_p)


def _curve(label, fun, t0, t1, alpha0, name="s", tol=CHORD_TOL, degenerate=False):
    ts, pts = adaptive_sample(fun, t0, t1, tol)
    return BifCurve(label, pts, ts, (t0, t1), name, alpha0, degenerate)


def scale_curve(curve: BifCurve, factor: float) -> BifCurve:
    """Multiply the samples by ``factor`` (eps**(2 delta) undoes the unit scaling)."""
    return replace(curve, samples=curve.samples * factor)


# ----------------------------------------------------------------------------
# constant perturbation

def sn_curve_const(s: float) -> Tuple[UVPoint, float, float]:
    """Saddle-node curve of the constant case; returns ``(uv, rho2, rho0)``.

    ``rho2`` is the double root of the fixed-point cubic and ``rho0`` the
    simple one (``rho0 * rho2**2 = 1``).
    """
    if not math.isfinite(s):
        raise DomainError("s must be finite")
    den = (2 * (1 + 3 * s * s)) ** (2.0 / 3.0)
    uv = UVPoint(3 * (1 + s * s) / den, 2 * math.sqrt(3) * s / den)
    rho2 = ((1 + 3 * s * s) / 4) ** (1.0 / 3.0)
    rho0 = (4 / (1 + 3 * s * s)) ** (2.0 / 3.0)
    return uv, rho2, rho0


def _const_cubic_uv(u: float, v: float, rho: float) -> Tuple[float, float, float]:
    """f, f', f'' of rho**3 - 2u rho**2 + (u**2+v**2) rho - 1."""
    q = u * u + v * v
    return (rho ** 3 - 2 * u * rho ** 2 + q * rho - 1,
            3 * rho ** 2 - 4 * u * rho + q,
            6 * rho - 4 * u)


def hopf_curve_const(s: float, alpha0: float) -> Tuple[float, float, bool]:
    """Point ``(mu, nu, valid)`` on the T = 0 locus of the constant case.

    ``valid`` is true where the determinant is positive there, so that the
    point is a genuine Hopf bifurcation.
    """
    if not abs(s) < 1:
        raise DomainError("hopf_curve_const needs |s| < 1")
    a, b = math.sin(alpha0), math.cos(alpha0)
    w = math.sqrt(1 - s * s)
    k = a ** (1 / 3) * (1 - s * s) ** (1 / 3)
    mu, nu = 2 * k, k * (b / a + s / w)
    det = a ** (2 / 3) * (1 - s * s) ** (-1 / 3) * (2 * s * s - 1 - 2 * (b / a) * s * w)
    return mu, nu, det > 0


def codim2_const(alpha0: float) -> List[Codim2Point]:
    """Cusp+/- and TB+/- of the constant case, with SN-curve parameters.

    TB- sits on SN- for alpha0 < 60 deg and on SN0 beyond, coinciding with
    Cusp- at exactly 60 deg; the ``note`` of TB- records the branch.
    """
    a, b = math.sin(alpha0), math.cos(alpha0)
    r3 = math.sqrt(3)
    pts = []
    for sg, lab in ((1, "CuspPlus"), (-1, "CuspMinus")):
        loc = (1.5 * (a - sg * b / r3), 1.5 * (b + sg * a / r3))
        pts.append(Codim2Point(lab, loc, float(sg), alpha0))
    for sg, lab in ((1, "TBplus"), (-1, "TBminus")):
        den = (2 * (1 + sg * b)) ** (1 / 3)
        loc = (2 * a / den, (2 * b + sg) / den)
        # SN-curve parameter of TB+/-
        s = sg * math.sqrt((1 - sg * b) / (3 * (1 + sg * b)))
        pts.append(Codim2Point(lab, loc, s, alpha0, _sn_branch(s)))
    return pts


def _sn_branch(s: float, tol: float = 1e-9) -> str:
    if abs(s + 1) <= tol:
        return "CuspMinus"
    if abs(s - 1) <= tol:
        return "CuspPlus"
    if s < -1:
        return "SNminus"
    if s > 1:
        return "SNplus"
    return "SN0"


def curves_const(alpha0: float, s_max: float = 6.0, hopf_margin: float = 1e-3,
                 tol: float = CHORD_TOL) -> CurveSet:
    """SN-, SN0, SN+ and H+/H- of the constant case (eps = 1)."""
    b = math.cos(alpha0)

    def sn(s):
        uv = sn_curve_const(s)[0]
        return from_uv(uv, alpha0)

    def hopf(s):
        mu, nu, _ = hopf_curve_const(s, alpha0)
        return mu, nu

    out = CurveSet(CONST, alpha0)
    out.curves += [
        _curve("SNminus", sn, -s_max, -1.0, alpha0, tol=tol),
        _curve("SN0", sn, -1.0, 1.0, alpha0, tol=tol),
        _curve("SNplus", sn, 1.0, s_max, alpha0, tol=tol),
        _curve("Hminus", hopf, -1 + hopf_margin, -math.sqrt((1 - b) / 2), alpha0, tol=tol),
        _curve("Hplus", hopf, math.sqrt((1 + b) / 2), 1 - hopf_margin, alpha0, tol=tol),
    ]
    out.points = codim2_const(alpha0)
    return out


# ----------------------------------------------------------------------------
# eps * conj(z)

@dataclass(frozen=True)
class EllipseGeometry:
    """Hopf ellipse ``mu**2 - 4ab mu nu + 4a**2 nu**2 = 4a**2`` of the conj(z) case."""

    semi_major: float
    semi_minor: float
    eccentricity: float
    ell_minus: float
    ell_plus: float


def z2_ellipse_geometry(alpha0: float) -> EllipseGeometry:
    a = math.sin(alpha0)
    root = math.sqrt(1 + 8 * a * a)
    lp = 0.5 * (1 + 4 * a * a + root)
    lm = 0.5 * (1 + 4 * a * a - root)
    e = math.sqrt(2.0 / (1 + (1 + 4 * a * a) / root))
    return EllipseGeometry(2 * a / math.sqrt(lm), 2 * a / math.sqrt(lp), e, lm, lp)


def z2_ellipse_residual(alpha0: float, mu, nu):
    a, b = math.sin(alpha0), math.cos(alpha0)
    return mu * mu - 4 * a * b * mu * nu + 4 * a * a * nu * nu - 4 * a * a


def curves_z2(alpha0: float, extent: float = 4.0, tol: float = CHORD_TOL) -> CurveSet:
    """PF+/-, SN+/-, H+/-, H0 and the codim-2 points of the conj(z) case."""
    a, b = math.sin(alpha0), math.cos(alpha0)
    beta = math.atan2(b, a)  # direction of increasing u

    def circle(t):
        return math.cos(t), math.sin(t)

    def sn_line(sign):
        # v = sign, u >= 0
        return lambda u: from_uv(UVPoint(u, sign), alpha0)

    def h0(nu):
        return 2 * a * b * nu + 2 * a * math.sqrt(max(1 - a * a * nu * nu, 0.0)), nu

    nu_tb = (b * b - a * a) / a
    out = CurveSet(zm(2), alpha0)
    out.curves += [
        _curve("PFplus", circle, beta + math.pi / 2, beta + 3 * math.pi / 2, alpha0, "theta", tol),
        _curve("PFminus", circle, beta - math.pi / 2, beta + math.pi / 2, alpha0, "theta", tol),
        _curve("SNplus", sn_line(1.0), 0.0, extent, alpha0, "u", tol),
        _curve("SNminus", sn_line(-1.0), 0.0, extent, alpha0, "u", tol),
        _curve("Hplus", lambda nu: (0.0, nu), 1.0, extent, alpha0, "nu", tol),
        _curve("Hminus", lambda nu: (0.0, nu), -extent, -1.0, alpha0, "nu", tol),
        _curve("H0", h0, -1.0, nu_tb, alpha0, "nu", tol),
    ]
    out.points = [
        Codim2Point("TBplus", (0.0, 1.0), None, alpha0),
        Codim2Point("TBminus", (0.0, -1.0), None, alpha0),
        Codim2Point("TB", (2 * b, nu_tb), nu_tb, alpha0),
        Codim2Point("dPFplus", (-b, a), None, alpha0),
        Codim2Point("dPFminus", (b, -a), None, alpha0),
    ]
    out.extras["ellipse"] = z2_ellipse_geometry(alpha0)
    return out


# ----------------------------------------------------------------------------
# quadratic perturbations

def parabola_residual(alpha0: float, mu, nu):
    a, b = math.sin(alpha0), math.cos(alpha0)
    u, v = a * mu + b * nu, a * nu - b * mu
    return u - v * v + 0.25


def z3_ellipse_residual(alpha0: float, mu, nu):
    a, b = math.sin(alpha0), math.cos(alpha0)
    return (b * mu - 2 * a * nu) ** 2 + (a * mu - 1) ** 2 - 1


def z3_tb_points(alpha0: float) -> List[Tuple[float, float]]:
    """Tangency points of the Hopf ellipse with the parabola (conj(z)**2 case)."""
    a, b = math.sin(alpha0), math.cos(alpha0)
    g = 1 - 4 * a * a
    if g < 0:
        return []
    sq = math.sqrt(g)
    pts = []
    for s in (1, -1):
        mu = (1 - 2 * a * a - s * b * sq) / a
        nu = sq * (b * sq - s * (1 - 2 * a * a)) / (2 * a * a)
        pts.append((mu, nu))
    return pts


def curves_quadratic(kind: PerturbationKind, alpha0: float, extent: float = 3.0,
                     tol: float = CHORD_TOL) -> CurveSet:
    """Parabola, Hopf lines of P0 and, where present, H0 for the quadratic cases."""
    if not (kind.tag in ("mixed", "quadratic") or (kind.tag == "zm" and kind.m == 3)):
        raise DomainError("curves_quadratic needs kind in {Mixed, Quadratic, ZmResidual(3)}")
    a, b = math.sin(alpha0), math.cos(alpha0)

    def parabola(v):
        return from_uv(UVPoint(v * v - 0.25, v), alpha0)

    out = CurveSet(kind, alpha0)
    out.curves.append(_curve("Parabola", parabola, -extent, extent, alpha0, "v", tol))
    nu_hi, nu_lo = (b + 1) / (2 * a * a), (b - 1) / (2 * a * a)
    axis = lambda nu: (0.0, nu)  # noqa: E731
    if kind.tag == "quadratic":
        top = max(extent, nu_hi + 1.0)
        out.curves += [
            _curve("Hplus", axis, nu_hi, top, alpha0, "nu", tol),
            _curve("H0", axis, nu_lo, nu_hi, alpha0, "nu", tol, degenerate=True),
            _curve("Hminus", axis, min(-extent, nu_lo - 1.0), nu_lo, alpha0, "nu", tol),
        ]
        out.points += [
            Codim2Point("TBplus", (0.0, nu_hi), None, alpha0, "degenerate"),
            Codim2Point("TBminus", (0.0, nu_lo), None, alpha0, "degenerate"),
        ]
    else:
        out.curves += [
            _curve("Hplus", axis, 0.0, extent, alpha0, "nu", tol),
            _curve("Hminus", axis, -extent, 0.0, alpha0, "nu", tol),
        ]
    if kind.tag == "zm" and a < 0.5:
        tb = z3_tb_points(alpha0)
        thetas = [_z3_ellipse_angle(alpha0, *p) for p in tb]
        t0, t1 = sorted(thetas)
        arc = _z3_hopf_arc(alpha0, t0, t1)
        out.curves.append(_curve("H0", lambda t: _z3_ellipse_point(alpha0, t),
                                 arc[0], arc[1], alpha0, "theta", tol))
        out.points += [Codim2Point(lab, p, None, alpha0)
                       for lab, p in zip(("TBplus", "TBminus"), tb)]
    return out


def _z3_ellipse_point(alpha0: float, theta: float) -> Tuple[float, float]:
    # b mu - 2 a nu = sin(theta), a mu - 1 = cos(theta)
    a, b = math.sin(alpha0), math.cos(alpha0)
    mu = (1 + math.cos(theta)) / a
    return mu, (b * mu - math.sin(theta)) / (2 * a)


def _z3_ellipse_angle(alpha0: float, mu: float, nu: float) -> float:
    a, b = math.sin(alpha0), math.cos(alpha0)
    return math.atan2(b * mu - 2 * a * nu, a * mu - 1)


def _z3_hopf_arc(alpha0: float, t0: float, t1: float) -> Tuple[float, float]:
    """Pick the ellipse arc between the TB points on which P+/- have T=0, D>0."""
    for lo, hi in ((t0, t1), (t1, t0 + 2 * math.pi)):
        mu, nu = _z3_ellipse_point(alpha0, 0.5 * (lo + hi))
        p = ModelParams(mu, nu, alpha0, 1.0, zm(3))
        for eq in fixed_points(p)[1:]:
            if abs(eq.trace) < 1e-7 and eq.det > 0:
                return lo, hi
    raise DomainError("no Hopf arc found on the ellipse")


# ----------------------------------------------------------------------------
# pinning region

def pinning_width(kind: PerturbationKind, d: float, epsilon: float) -> float:
    """Leading-order width ``2 eps d**((p-1)/2)`` of the pinning band at distance d."""
    if not d > 0:
        raise DomainError("d must be positive")
    if kind.tag == "none":
        raise DomainError("kind None has no pinning region")
    p = kind.order
    return 2 * epsilon * d ** ((p - 1) / 2)


def _pinned(params: ModelParams) -> bool:
    """True where the band of steady (nontrivial) solutions is present."""
    n = len(fixed_points(params))
    return n >= 3 if params.kind.tag == "const" else n >= 2


def transverse_boundary(kind: PerturbationKind, u: float, epsilon: float, alpha0: float,
                        side: int = 1, tol: float = 1e-12, v_guess: Optional[float] = None) -> float:
    """Bisect along v at fixed u for the edge of the pinning band on one side.

    Returns the signed v of the boundary; the band is assumed to contain v=0.
    """
    def pinned(v):
        mu, nu = from_uv(UVPoint(u, v), alpha0)
        return _pinned(ModelParams(mu, nu, alpha0, epsilon, kind))

    if not pinned(0.0):
        raise DomainError(f"u={u} is not inside the pinning band on line L")
    guess = v_guess if v_guess else 0.5 * pinning_width(kind, max(u, 1e-12), epsilon)
    lo, hi = 0.0, 2 * abs(guess) + 1e-12
    while pinned(side * hi):
        lo, hi = hi, 2 * hi
        if hi > 1e6:
            raise DomainError("pinning band does not close")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if pinned(side * mid):
            lo = mid
        else:
            hi = mid
    return side * 0.5 * (lo + hi)


def measure_pinning_width(kind: PerturbationKind, d: float, epsilon: float,
                          alpha0: float = math.pi / 4, tol: float = 1e-12) -> float:
    """Width of the steady-solution band at u=d, by bisection on both sides."""
    if not d > 0:
        raise DomainError("d must be positive")
    up = transverse_boundary(kind, d, epsilon, alpha0, +1, tol)
    lo = transverse_boundary(kind, d, epsilon, alpha0, -1, tol)
    return up - lo


def zm_horn(m: int, epsilon: float, u_range: Tuple[float, float] = (0.0, 2.0),
            alpha0: float = math.pi / 4, n: int = 41, refine: bool = False) -> Tuple[BifCurve, BifCurve]:
    """Upper and lower boundaries ``v = +/- eps u**((m-2)/2)`` of the Z_m horn.

    With ``refine`` each sample (except u=0) is replaced by the bisected
    edge of the region holding the 2m nontrivial equilibria.
    """
    if m < 4:
        raise DomainError("zm_horn needs m >= 4")
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    us = np.linspace(u_range[0], u_range[1], n)
    kind = zm(m)
    out = []
    for side, label in ((1, "SNplus"), (-1, "SNminus")):
        vs = side * epsilon * np.maximum(us, 0.0) ** ((m - 2) / 2)
        if refine:
            vs = np.array([transverse_boundary(kind, u, epsilon, alpha0, side, 1e-12, v)
                           if u > 0 else 0.0 for u, v in zip(us, vs)])
        a, b = math.sin(alpha0), math.cos(alpha0)
        samples = np.column_stack([a * us - b * vs, b * us + a * vs])
        out.append(BifCurve(label, samples, us, (float(us[0]), float(us[-1])), "u", alpha0))
    return out[0], out[1]


def near_coalescences(equilibria: Sequence[Equilibrium], tol: float) -> List[Tuple[Equilibrium, Equilibrium]]:
    """Pairs of nontrivial equilibria closer than ``tol`` (greedy nearest match)."""
    nontrivial = [e for e in equilibria if e.label != "P0"]
    used = set()
    pairs = []
    for i, e in enumerate(nontrivial):
        if i in used:
            continue
        best, dist = None, tol
        for j in range(i + 1, len(nontrivial)):
            if j in used:
                continue
            f = nontrivial[j]
            dd = math.hypot(e.position.x - f.position.x, e.position.y - f.position.y)
            if dd < dist:
                best, dist = j, dd
        if best is not None:
            used.update((i, best))
            pairs.append((e, nontrivial[best]))
    return pairs


# ----------------------------------------------------------------------------
# first Lyapunov coefficient

def _poly_mul(p: np.ndarray, q: np.ndarray, deg: int) -> np.ndarray:
    out = np.zeros((deg + 1, deg + 1), dtype=complex)
    for (i, j), c in np.ndenumerate(p):
        if c == 0:
            continue
        for (k, l), d in np.ndenumerate(q):
            if d != 0 and i + j + k + l <= deg:
                out[i + k, j + l] += c * d
    return out


def _field_taylor(params: ModelParams, z0: complex, deg: int = 3) -> np.ndarray:
    """Coefficients P[j, k] of w**j conj(w)**k in F(z0 + w)."""
    one = np.zeros((deg + 1, deg + 1), dtype=complex)
    one[0, 0] = 1
    z = one * z0
    z[1, 0] = 1
    zc = one * z0.conjugate()
    zc[0, 1] = 1
    zzc = _poly_mul(z, zc, deg)
    out = _poly_mul(z, complex(params.mu, params.nu) * one - params.c * zzc, deg)
    kind = params.effective_kind
    if kind.tag != "none":
        q, k = kind.exponents
        mono = one.copy()
        for _ in range(q):
            mono = _poly_mul(mono, z, deg)
        for _ in range(k):
            mono = _poly_mul(mono, zc, deg)
        out = out + params.epsilon * mono
    return out


def first_lyapunov(params: ModelParams, z0: complex) -> float:
    """First Lyapunov coefficient at an equilibrium with purely imaginary eigenvalues.

    The field is expanded about ``z0``, the linear part brought to
    ``i omega zeta`` and the usual complex formula
    ``Re(i g20 g11 + omega g21) / (2 omega**2)`` applied.
    """
    P = _field_taylor(params, z0)
    alpha, beta = P[1, 0], P[0, 1]
    det = abs(alpha) ** 2 - abs(beta) ** 2
    if det <= 0:
        raise DomainError("linearization has no imaginary eigenvalue pair")
    omega = math.sqrt(det)
    kappa = 0j if abs(beta) < 1e-14 else (1j * omega - alpha) / beta.conjugate()
    # nonlinear part N(w, wbar) and its conjugate polynomial
    N = P.copy()
    N[0, 0] = N[1, 0] = N[0, 1] = 0
    Nc = np.conj(N).T
    G = N + kappa * Nc
    # w = (zeta - kappa zetabar) / (1 - |kappa|^2)
    s = 1.0 / (1 - abs(kappa) ** 2)
    deg = 3
    wz = np.zeros((deg + 1, deg + 1), dtype=complex)
    wz[1, 0], wz[0, 1] = s, -kappa * s
    wcz = np.zeros_like(wz)
    wcz[0, 1], wcz[1, 0] = s, -kappa.conjugate() * s
    H = np.zeros_like(wz)
    for (j, k), c in np.ndenumerate(G):
        if c == 0:
            continue
        term = np.zeros_like(wz)
        term[0, 0] = c
        for _ in range(j):
            term = _poly_mul(term, wz, deg)
        for _ in range(k):
            term = _poly_mul(term, wcz, deg)
        H += term
    g20, g11, g21 = 2 * H[2, 0], H[1, 1], 2 * H[2, 1]
    return float((1j * g20 * g11 + omega * g21).real / (2 * omega ** 2))


def _const_hopf_point(s: float, alpha0: float) -> Tuple[ModelParams, complex]:
    mu, nu, _ = hopf_curve_const(s, alpha0)
    p = ModelParams(mu, nu, alpha0, 1.0, CONST)
    rho = mu / (2 * math.sin(alpha0))
    z0 = -1.0 / (complex(mu, nu) - p.c * rho)
    x, y = newton_polish(p, z0.real, z0.imag)
    return p, complex(x, y)


def locate_bautin(alpha0: float, n_scan: int = 200, tol: float = 1e-12) -> Optional[Codim2Point]:
    """Bautin point on H- of the constant case (sign change of the first Lyapunov coefficient).

    Returns None when the coefficient keeps its sign along H-.
    """
    b = math.cos(alpha0)
    s_lo, s_hi = -1 + 1e-6, -math.sqrt((1 - b) / 2) - 1e-9

    def l1(s):
        return first_lyapunov(*_const_hopf_point(s, alpha0))

    grid = np.linspace(s_lo, s_hi, n_scan)
    vals = [l1(s) for s in grid]
    for i in range(n_scan - 1):
        if vals[i] == 0 or vals[i] * vals[i + 1] < 0:
            lo, hi, flo = grid[i], grid[i + 1], vals[i]
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                fm = l1(mid)
                if fm * flo > 0:
                    lo, flo = mid, fm
                else:
                    hi = mid
            s = 0.5 * (lo + hi)
            mu, nu, _ = hopf_curve_const(s, alpha0)
            return Codim2Point("Ba", (mu, nu), s, alpha0, "Hminus")
    return None
