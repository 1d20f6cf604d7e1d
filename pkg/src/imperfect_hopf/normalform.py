"""Perturbed zero-frequency Hopf normal forms.

Every model in this package is the planar system

    dz/dt = z (mu + i nu - c |z|^2) + eps * z**q * conj(z)**k,

with ``c = sin(alpha0) + i cos(alpha0)`` and a single symmetry-breaking
monomial selected by :class:`PerturbationKind`.  The monomial has total
order ``p = q + k``.

Functions here are pure and accept either Python floats or numpy arrays
for the phase-space coordinates, so the same code path serves the
adaptive integrator (scalar) and the grid solvers (vectorized).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Callable, Tuple

import numpy as np

__all__ = [
    "PerturbationKind",
    "NONE",
    "CONST",
    "MIXED",
    "QUADRATIC",
    "zm",
    "ModelParams",
    "State",
    "UVPoint",
    "ScaleFactors",
    "SignTransform",
    "DomainError",
    "rhs",
    "rhs_xy",
    "jacobian",
    "jacobian_xy",
    "polar_rhs",
    "vector_field",
    "to_uv",
    "from_uv",
    "rescale_epsilon",
    "unscale_epsilon",
    "canonicalize_signs",
]


class DomainError(ValueError):
    """Raised when an input lies outside an operation's domain."""


@dataclass(frozen=True)
class PerturbationKind:
    """Which monomial breaks the SO(2) symmetry.

    ``tag`` is one of ``"none"``, ``"const"``, ``"mixed"``, ``"quadratic"``
    or ``"zm"``; ``m`` is only meaningful for ``"zm"`` (residual symmetry
    Z_m, monomial ``conj(z)**(m-1)``).
    """

    tag: str
    m: int | None = None

    def __post_init__(self):
        if self.tag not in ("none", "const", "mixed", "quadratic", "zm"):
            raise DomainError(f"unknown perturbation kind {self.tag!r}")
        if self.tag == "zm":
            if self.m is None or int(self.m) != self.m or self.m < 2:
                raise DomainError("ZmResidual(m) requires an integer m >= 2")
        elif self.m is not None:
            raise DomainError(f"kind {self.tag!r} takes no m")

    @property
    def exponents(self) -> Tuple[int, int]:
        """``(q, k)`` such that the monomial is ``z**q * conj(z)**k``."""
        if self.tag == "const":
            return 0, 0
        if self.tag == "mixed":
            return 1, 1
        if self.tag == "quadratic":
            return 2, 0
        if self.tag == "zm":
            return 0, self.m - 1
        return 0, 0

    @property
    def order(self) -> int:
        q, k = self.exponents
        return q + k

    @property
    def phase_harmonic(self) -> int:
        """Integer n with monomial/z = r**(p-1) * exp(i n phi)."""
        q, k = self.exponents
        return q - k - 1

    @property
    def symmetry_order(self) -> int:
        """Order of the residual rotation group (1 if none remains, 0 for SO(2))."""
        if self.tag == "none":
            return 0
        return abs(self.phase_harmonic) if self.tag == "zm" else 1

    def __str__(self):
        return f"zm{self.m}" if self.tag == "zm" else self.tag


NONE = PerturbationKind("none")
CONST = PerturbationKind("const")
MIXED = PerturbationKind("mixed")
QUADRATIC = PerturbationKind("quadratic")


def zm(m: int) -> PerturbationKind:
    """ZmResidual(m): ``m=2`` is the eps*conj(z) case, ``m=3`` eps*conj(z)**2."""
    return PerturbationKind("zm", m)


def _check_finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise DomainError("non-finite input")


@dataclass(frozen=True)
class ModelParams:
    """A point in parameter space plus the perturbation selector."""

    mu: float
    nu: float
    alpha0: float
    epsilon: float = 1.0
    kind: PerturbationKind = NONE

    def __post_init__(self):
        _check_finite(self.mu, self.nu, self.alpha0, self.epsilon)
        if not 0.0 < self.alpha0 < math.pi / 2:
            raise DomainError("alpha0 must lie in the open interval (0, pi/2)")
        if self.epsilon < 0:
            raise DomainError("epsilon must be non-negative")
        if not isinstance(self.kind, PerturbationKind):
            raise DomainError("kind must be a PerturbationKind")

    @property
    def a(self) -> float:
        return math.sin(self.alpha0)

    @property
    def b(self) -> float:
        return math.cos(self.alpha0)

    @property
    def c(self) -> complex:
        return complex(self.a, self.b)

    @property
    def effective_kind(self) -> PerturbationKind:
        """The kind after noting that eps=0 restores SO(2) symmetry."""
        return NONE if self.epsilon == 0 else self.kind

    @property
    def u(self) -> float:
        return self.a * self.mu + self.b * self.nu

    @property
    def v(self) -> float:
        return self.a * self.nu - self.b * self.mu

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    @classmethod
    def from_uv(cls, u, v, alpha0, epsilon=1.0, kind=NONE) -> "ModelParams":
        mu, nu = from_uv(UVPoint(u, v), alpha0)
        return cls(mu, nu, alpha0, epsilon, kind)


@dataclass(frozen=True)
class State:
    """Cartesian components of the complex amplitude ``z = x + i y``."""

    x: float
    y: float

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def phi(self) -> float:
        return math.atan2(self.y, self.x) % (2 * math.pi)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_polar(cls, r: float, phi: float) -> "State":
        return cls(r * math.cos(phi), r * math.sin(phi))

    @classmethod
    def from_complex(cls, z: complex) -> "State":
        return cls(z.real, z.imag)

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x, self.y], dtype=dtype)


@dataclass(frozen=True)
class UVPoint:
    """Parameter-plane coordinates rotated by alpha0; line L is ``v = 0``."""

    u: float
    v: float


def to_uv(params: ModelParams) -> UVPoint:
    return UVPoint(params.u, params.v)


def from_uv(uv: UVPoint, alpha0: float) -> Tuple[float, float]:
    a, b = math.sin(alpha0), math.cos(alpha0)
    return a * uv.u - b * uv.v, b * uv.u + a * uv.v


def vector_field(params: ModelParams) -> Callable:
    """Return ``f(x, y) -> (dx, dy)`` with all parameters bound.

    Works on floats and on numpy arrays of equal shape.
    """
    lin = complex(params.mu, params.nu)
    c = params.c
    kind = params.effective_kind
    eps = params.epsilon
    q, k = kind.exponents

    if kind.tag == "none":
        def f(x, y):
            z = x + 1j * y
            w = z * (lin - c * (x * x + y * y))
            return w.real, w.imag
    elif kind.tag == "const":
        def f(x, y):
            z = x + 1j * y
            w = z * (lin - c * (x * x + y * y)) + eps
            return w.real, w.imag
    else:
        def f(x, y):
            z = x + 1j * y
            zc = x - 1j * y
            w = z * (lin - c * (x * x + y * y)) + eps * z ** q * zc ** k
            return w.real, w.imag
    return f


def rhs_xy(params: ModelParams, x, y):
    """Vectorized right-hand side; returns ``(dx/dt, dy/dt)``."""
    return vector_field(params)(x, y)


def rhs(params: ModelParams, state: State) -> Tuple[float, float]:
    """Real and imaginary parts of dz/dt at ``state``."""
    _check_finite(state.x, state.y)
    return vector_field(params)(state.x, state.y)


def jacobian_xy(params: ModelParams, x, y):
    """Analytic Jacobian entries ``(j11, j12, j21, j22)``, vectorized.

    Uses Wirtinger derivatives: with ``F(z, zbar)`` the complex field,
    d/dx = F_z + F_zbar and d/dy = i (F_z - F_zbar).
    """
    lin = complex(params.mu, params.nu)
    c = params.c
    kind = params.effective_kind
    eps = params.epsilon
    q, k = kind.exponents
    z = x + 1j * y
    zc = x - 1j * y
    fz = lin - 2 * c * z * zc
    fzc = -c * z * z
    if kind.tag not in ("none", "const"):
        if q:
            fz = fz + eps * q * z ** (q - 1) * zc ** k
        if k:
            fzc = fzc + eps * k * z ** q * zc ** (k - 1)
    dx = fz + fzc
    dy = 1j * (fz - fzc)
    return dx.real, dy.real, dx.imag, dy.imag


def jacobian(params: ModelParams, state: State) -> np.ndarray:
    _check_finite(state.x, state.y)
    j11, j12, j21, j22 = jacobian_xy(params, state.x, state.y)
    return np.array([[j11, j12], [j21, j22]], dtype=float)


POLAR_R_FLOOR = 1e-9


def polar_rhs(params: ModelParams, r: float, phi: float) -> Tuple[float, float]:
    """``(dr/dt, dphi/dt)`` from the modulus/phase form of the model.

    For the constant perturbation dphi/dt carries a genuine 1/r term; below
    ``r = 1e-9`` the radius is clamped so the value stays finite.
    """
    _check_finite(r, phi)
    a, b = params.a, params.b
    kind = params.effective_kind
    eps = params.epsilon
    rdot = r * (params.mu - a * r * r)
    phidot = params.nu - b * r * r
    if kind.tag == "none":
        return rdot, phidot
    p = kind.order
    n = kind.phase_harmonic
    rdot += eps * r ** p * math.cos(n * phi)
    if p == 0:
        phidot += eps * math.sin(n * phi) / max(r, POLAR_R_FLOOR)
    else:
        phidot += eps * r ** (p - 1) * math.sin(n * phi)
    return rdot, phidot


@dataclass(frozen=True)
class ScaleFactors:
    """Maps the eps=1 system onto the eps system.

    ``z = z_scale * z1``, ``t = t_scale * t1``, ``(mu, nu) = param_scale *
    (mu1, nu1)`` where the ``1`` quantities belong to the unit system.
    """

    delta: float
    z_scale: float
    t_scale: float
    param_scale: float


def _scale_factors(kind: PerturbationKind, epsilon: float) -> ScaleFactors:
    if kind.tag == "none":
        raise DomainError("kind None has no monomial to normalize")
    p = kind.order
    if p >= 3:
        raise DomainError(
            f"order-{p} monomial is not removable by scaling (needs p <= 2)")
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    delta = 1.0 / (3 - p)
    return ScaleFactors(delta, epsilon ** delta, epsilon ** (-2 * delta),
                        epsilon ** (2 * delta))


def rescale_epsilon(params: ModelParams) -> Tuple[ModelParams, ScaleFactors]:
    """Equivalent parameters with eps=1 and the factors linking both systems.

    A trajectory ``z1(t1)`` of the returned unit system gives the original
    trajectory ``z(t) = z_scale * z1(t / t_scale)``.
    """
    sf = _scale_factors(params.kind, params.epsilon)
    unit = params.with_(mu=params.mu / sf.param_scale,
                        nu=params.nu / sf.param_scale, epsilon=1.0)
    return unit, sf


def unscale_epsilon(unit: ModelParams, epsilon: float) -> Tuple[ModelParams, ScaleFactors]:
    """Inverse of :func:`rescale_epsilon`: restore an explicit eps."""
    sf = _scale_factors(unit.kind, epsilon)
    orig = unit.with_(mu=unit.mu * sf.param_scale,
                      nu=unit.nu * sf.param_scale, epsilon=epsilon)
    return orig, sf


@dataclass(frozen=True)
class SignTransform:
    """Reduction of a general cubic coefficient to the a>0, b>0 quadrant.

    ``time_reversed``: t -> -t together with (mu, nu) -> (-mu, -nu); this
    flips the signs of a and b and of eps, the latter undone by a phase
    shift of z.  ``conjugated``: z -> conj(z) with nu -> -nu, flipping b.
    """

    time_reversed: bool
    conjugated: bool

    def phase_shift(self, kind: PerturbationKind) -> float:
        """Rotation of z needed to restore eps > 0 after time reversal."""
        if not self.time_reversed or kind.tag == "none":
            return 0.0
        return math.pi / kind.phase_harmonic

    def map_params(self, mu: float, nu: float) -> Tuple[float, float]:
        """Original (mu, nu) -> canonical (mu, nu)."""
        if self.time_reversed:
            mu, nu = -mu, -nu
        if self.conjugated:
            nu = -nu
        return mu, nu

    def map_state(self, z: complex, kind: PerturbationKind) -> complex:
        """Original phase-space point -> canonical phase-space point."""
        w = z * cmath.exp(-1j * self.phase_shift(kind))
        return w.conjugate() if self.conjugated else w

    def unmap_state(self, w: complex, kind: PerturbationKind) -> complex:
        """Canonical phase-space point -> original phase-space point."""
        if self.conjugated:
            w = w.conjugate()
        return w * cmath.exp(1j * self.phase_shift(kind))


def canonicalize_signs(a_raw: float, b_raw: float) -> Tuple[float, SignTransform]:
    """Reduce ``c = a_raw + i b_raw`` with |c| = 1 to alpha0 in (0, pi/2)."""
    _check_finite(a_raw, b_raw)
    if abs(a_raw * a_raw + b_raw * b_raw - 1.0) > 1e-9:
        raise DomainError("a_raw**2 + b_raw**2 must equal 1")
    if a_raw == 0 or b_raw == 0:
        raise DomainError("degenerate tilt: a and b must both be non-zero")
    time_reversed = a_raw < 0
    if time_reversed:
        a_raw, b_raw = -a_raw, -b_raw
    conjugated = b_raw < 0
    if conjugated:
        b_raw = -b_raw
    return math.atan2(a_raw, b_raw), SignTransform(time_reversed, conjugated)
