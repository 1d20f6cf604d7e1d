"""Fixed points of the perturbed normal forms and their linear stability.

The closed-form solvers reduce each case to a polynomial in ``rho = r**2``
and recover the phase from the remaining complex relation; every point is
then Newton-polished on the full planar system.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .normalform import (
    DomainError,
    ModelParams,
    State,
    jacobian_xy,
    vector_field,
)

__all__ = [
    "StabilityClass",
    "Equilibrium",
    "NumericalError",
    "HYPERBOLIC_TOL",
    "classify",
    "newton_polish",
    "fixed_points",
    "fixed_points_const",
    "fixed_points_z2",
    "fixed_points_quadratic",
    "fixed_points_zm",
    "const_cubic",
]

HYPERBOLIC_TOL = 1e-9
ROOT_TOL = 1e-10
RESIDUAL_TOL = 1e-10


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class StabilityClass(str, Enum):
    STABLE_NODE = "StableNode"
    STABLE_FOCUS = "StableFocus"
    SADDLE = "Saddle"
    UNSTABLE_NODE = "UnstableNode"
    UNSTABLE_FOCUS = "UnstableFocus"
    NON_HYPERBOLIC = "NonHyperbolic"

    @property
    def is_stable(self) -> bool:
        return self in (StabilityClass.STABLE_NODE, StabilityClass.STABLE_FOCUS)


@dataclass(frozen=True)
class Equilibrium:
    position: State
    trace: float
    det: float
    disc: float
    eigenvalues: Tuple[complex, complex]
    stability: StabilityClass
    label: str = ""
    index: Optional[int] = None
    merged: bool = False

    @property
    def name(self) -> str:
        return self.label if self.index is None else f"{self.label}[{self.index}]"

    def with_label(self, label: str, index: Optional[int] = None,
                   merged: bool = False) -> "Equilibrium":
        return Equilibrium(self.position, self.trace, self.det, self.disc,
                           self.eigenvalues, self.stability, label, index, merged)


def _stability(T: float, D: float, Q: float, tol: float = HYPERBOLIC_TOL) -> StabilityClass:
    if D < -tol:
        return StabilityClass.SADDLE
    if abs(D) <= tol or abs(T) <= tol:
        return StabilityClass.NON_HYPERBOLIC
    if T < 0:
        return StabilityClass.STABLE_NODE if Q >= 0 else StabilityClass.STABLE_FOCUS
    return StabilityClass.UNSTABLE_NODE if Q >= 0 else StabilityClass.UNSTABLE_FOCUS


def _residual(params: ModelParams, x: float, y: float) -> float:
    fx, fy = vector_field(params)(x, y)
    return math.hypot(fx, fy)


def classify(params: ModelParams, position: State, *, label: str = "",
             index: Optional[int] = None, tol: float = 1e-6) -> Equilibrium:
    """Fill in trace, determinant, discriminant, eigenvalues and class."""
    res = _residual(params, position.x, position.y)
    if not res <= tol:
        raise DomainError(f"position is not an equilibrium (|rhs| = {res:.3g})")
    j11, j12, j21, j22 = jacobian_xy(params, position.x, position.y)
    T = j11 + j22
    D = j11 * j22 - j12 * j21
    Q = T * T - 4 * D
    sq = cmath.sqrt(Q)
    eig = (0.5 * (T + sq), 0.5 * (T - sq))
    return Equilibrium(position, T, D, Q, eig, _stability(T, D, Q), label, index)


def newton_polish(params: ModelParams, x: float, y: float, *, max_iter: int = 30,
                  target: float = 1e-14) -> Tuple[float, float]:
    """Newton iterations on the planar system, accepting only improving steps."""
    f = vector_field(params)
    fx, fy = f(x, y)
    res = math.hypot(fx, fy)
    for _ in range(max_iter):
        if res <= target:
            break
        j11, j12, j21, j22 = jacobian_xy(params, x, y)
        det = j11 * j22 - j12 * j21
        if det == 0:
            break
        dx = (j22 * fx - j12 * fy) / det
        dy = (-j21 * fx + j11 * fy) / det
        step = 1.0
        improved = False
        while step > 1e-4:
            xn, yn = x - step * dx, y - step * dy
            gx, gy = f(xn, yn)
            rn = math.hypot(gx, gy)
            if rn < res:
                x, y, fx, fy, res = xn, yn, gx, gy, rn
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    return x, y


def _finish(params: ModelParams, z: complex, label: str, index=None,
            merged: bool = False) -> Optional[Equilibrium]:
    x, y = newton_polish(params, z.real, z.imag)
    res = _residual(params, x, y)
    if res > RESIDUAL_TOL * max(1.0, abs(z) ** 3):
        if merged:
            # real part of a nearly real complex pair just outside a fold
            return None
        raise NumericalError(f"polish of {label} stalled at |rhs| = {res:.3g}")
    return classify(params, State(x, y), label=label, index=index).with_label(
        label, index, merged)


def _append(out: list, eq: Optional[Equilibrium]) -> None:
    if eq is not None:
        out.append(eq)


def _origin(params: ModelParams) -> Equilibrium:
    return classify(params, State(0.0, 0.0), label="P0")


def _positive_real_roots(coeffs: Sequence[float], polish) -> List[float]:
    """Positive real roots of a polynomial (highest degree first).

    Companion-matrix eigenvalues followed by Newton steps on the polynomial.
    """
    roots = np.roots(np.asarray(coeffs, dtype=float))
    out = []
    scale = max(1.0, float(np.max(np.abs(roots)))) if len(roots) else 1.0
    for rt in roots:
        if abs(rt.imag) > 1e-7 * scale:
            continue
        rho = polish(rt.real)
        if rho > -ROOT_TOL:
            out.append(max(rho, 0.0))
    return sorted(out)


def _poly_newton(coeffs: Sequence[float], steps: int = 2):
    p = np.poly1d(coeffs)
    dp = p.deriv()

    def polish(x):
        for _ in range(steps):
            d = dp(x)
            if d == 0:
                break
            x_new = x - p(x) / d
            if abs(p(x_new)) >= abs(p(x)):
                break
            x = x_new
        return float(x)
    return polish


def _dedupe_rhos(rhos: List[float], tol: float = 1e-7) -> List[Tuple[float, bool]]:
    """Merge numerically coincident roots; the flag marks a merged pair.

    A double root splits by about sqrt(machine eps) under round-off, hence
    the loose default.
    """
    out: List[Tuple[float, bool]] = []
    for rho in rhos:
        if out and abs(rho - out[-1][0]) <= tol * max(1.0, rho):
            out[-1] = (0.5 * (rho + out[-1][0]), True)
        else:
            out.append((rho, False))
    return out


def const_cubic(params: ModelParams) -> np.ndarray:
    """Coefficients of ``f(rho) = rho**3 - 2u rho**2 + |mu + i nu|**2 rho - eps**2``."""
    m2 = params.mu ** 2 + params.nu ** 2
    return np.array([1.0, -2.0 * params.u, m2, -params.epsilon ** 2])


def fixed_points_const(params: ModelParams) -> List[Equilibrium]:
    """One or three equilibria of the constant-perturbation case."""
    if params.kind.tag != "const":
        raise DomainError("fixed_points_const needs kind=Const")
    if params.epsilon == 0:
        return fixed_points(params)
    coeffs = const_cubic(params)
    rhos = _positive_real_roots(coeffs, _poly_newton(coeffs))
    lin = complex(params.mu, params.nu)
    c = params.c
    out = []
    for i, (rho, merged) in enumerate(_dedupe_rhos(rhos)):
        z = -params.epsilon / (lin - c * rho)
        _append(out, _finish(params, z, "P", i, merged))
    return out


def _phases_from(w: complex, m: int) -> List[float]:
    """All phi with exp(i m phi) parallel to ``w``."""
    base = cmath.phase(w)
    return [(base + 2 * math.pi * j) / m for j in range(m)]


def fixed_points_z2(params: ModelParams) -> List[Equilibrium]:
    """P0 plus up to two Z2-symmetric pairs for the eps*conj(z) case."""
    kind = params.kind
    if not (kind.tag == "zm" and kind.m == 2):
        raise DomainError("fixed_points_z2 needs kind=ZmResidual(2)")
    if params.epsilon == 0:
        return fixed_points(params)
    eps = params.epsilon
    out = [_origin(params)]
    u, v = params.u, params.v
    delta2 = eps * eps - v * v
    if delta2 < -ROOT_TOL:
        return out
    delta = math.sqrt(max(delta2, 0.0))
    merged = delta <= ROOT_TOL
    lin = complex(params.mu, params.nu)
    c = params.c
    branches = [("P+", u + delta)] if merged else [("P+", u + delta), ("P-", u - delta)]
    for label, rho in branches:
        if rho <= ROOT_TOL:
            continue
        w = lin - c * rho
        # exp(2 i phi) = -conj(w) / eps
        phi = _phases_from(-w.conjugate(), 2)[0]
        z = math.sqrt(rho) * cmath.exp(1j * phi)
        _append(out, _finish(params, z, label, merged=merged))
        _append(out, _finish(params, -z, label + "*", merged=merged))
    return out


def _quadratic_roots(params: ModelParams) -> List[Tuple[str, float, bool]]:
    eps2 = params.epsilon ** 2
    u, v = params.u, params.v
    disc = eps2 * u + eps2 * eps2 / 4 - v * v
    if disc < -ROOT_TOL:
        return []
    sq = math.sqrt(max(disc, 0.0))
    centre = u + eps2 / 2
    if sq <= ROOT_TOL:
        return [("P+", centre, True)]
    return [("P+", centre + sq, False), ("P-", centre - sq, False)]


def fixed_points_quadratic(params: ModelParams) -> List[Equilibrium]:
    """P0 plus P+/P- for z*conj(z), z**2 (singletons) and conj(z)**2 (triplets)."""
    kind = params.kind
    if not (kind.tag in ("mixed", "quadratic") or (kind.tag == "zm" and kind.m == 3)):
        raise DomainError("fixed_points_quadratic needs kind in {Mixed, Quadratic, ZmResidual(3)}")
    if params.epsilon == 0:
        return fixed_points(params)
    eps = params.epsilon
    out = [_origin(params)]
    lin = complex(params.mu, params.nu)
    c = params.c
    for label, rho, merged in _quadratic_roots(params):
        if rho <= ROOT_TOL:
            # r_-^2 = 0 coalesces with P0 (e.g. at mu = nu = 0)
            out[0] = out[0].with_label("P0", None, True)
            continue
        r = math.sqrt(rho)
        w = c * rho - lin  # equals eps * monomial / z at a fixed point
        if kind.tag == "quadratic":
            zs = [w / eps]
        elif kind.tag == "mixed":
            zs = [(w / eps).conjugate()]
        else:
            # r exp(-3 i phi) = w / eps
            zs = [r * cmath.exp(1j * phi) for phi in _phases_from((w / eps).conjugate(), 3)]
        for i, z in enumerate(zs):
            idx = i if len(zs) > 1 else None
            _append(out, _finish(params, z, label, idx, merged))
    return out


def _zm_polynomial(params: ModelParams) -> np.ndarray:
    """Coefficients in rho of ``(rho - u)**2 + v**2 - eps**2 rho**(m-2)``."""
    m = params.kind.m
    u, v = params.u, params.v
    deg = max(2, m - 2)
    coeffs = np.zeros(deg + 1)
    coeffs[deg - 2] += 1.0
    coeffs[deg - 1] += -2.0 * u
    coeffs[deg] += u * u + v * v
    coeffs[deg - (m - 2)] -= params.epsilon ** 2
    return coeffs


def fixed_points_zm(params: ModelParams, *, local_only: bool = True) -> List[Equilibrium]:
    """P0 plus up to 2m equilibria near line L for eps*conj(z)**(m-1).

    For m >= 5 the polynomial in rho also has large roots where the
    perturbation outweighs the cubic term (``eps * rho**((m-4)/2) ~ 1``);
    they are far outside the regime the normal form describes and are
    dropped unless ``local_only`` is false.
    """
    kind = params.kind
    if kind.tag != "zm":
        raise DomainError("fixed_points_zm needs kind=ZmResidual(m)")
    if params.epsilon == 0:
        return fixed_points(params)
    m = kind.m
    eps = params.epsilon
    coeffs = _zm_polynomial(params)
    rhos = _positive_real_roots(coeffs, _poly_newton(coeffs, steps=3))
    if local_only and m > 4:
        rhos = [rho for rho in rhos if eps * rho ** ((m - 4) / 2) < 0.5]
    rhos = [rho for rho in rhos if rho > ROOT_TOL]
    out = [_origin(params)]
    lin = complex(params.mu, params.nu)
    c = params.c
    groups = _dedupe_rhos(rhos)
    labels = {1: ["P+"], 2: ["P-", "P+"]}.get(len(groups),
                                            [f"P{i}" for i in range(len(groups))])
    for label, (rho, merged) in zip(labels, groups):
        r = math.sqrt(rho)
        w = lin - c * rho
        # exp(i m phi) = -conj(w) / (eps r**(m-2))
        for i, phi in enumerate(_phases_from(-w.conjugate(), m)):
            z = r * cmath.exp(1j * phi)
            _append(out, _finish(params, z, label, i, merged))
    return out


def fixed_points(params: ModelParams) -> List[Equilibrium]:
    """Dispatch on the perturbation kind.

    With no perturbation (or eps = 0) only P0 is returned; on line L with
    mu > 0 the symmetric system additionally has a whole circle of
    equilibria of radius sqrt(mu/a), which is not enumerable.
    """
    kind = params.effective_kind
    if kind.tag == "none":
        return [_origin(params)]
    if kind.tag == "const":
        return fixed_points_const(params)
    if kind.tag == "zm" and kind.m == 2:
        return fixed_points_z2(params)
    if kind.tag in ("mixed", "quadratic") or kind.m == 3:
        return fixed_points_quadratic(params)
    return fixed_points_zm(params)
