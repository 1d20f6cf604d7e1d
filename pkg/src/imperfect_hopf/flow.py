"""Trajectories, limit cycles and phase portraits.

The integrator is a scalar Dormand-Prince 5(4) pair with FSAL; the planar
fields here are cheap, so stepping in plain Python floats is several times
faster than going through a vectorized general-purpose solver.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .equilibria import Equilibrium, StabilityClass, fixed_points
from .normalform import DomainError, ModelParams, State, jacobian, vector_field

__all__ = [
    "Tolerances",
    "StiffnessError",
    "CycleNotFound",
    "Trajectory",
    "LimitCycle",
    "Portrait",
    "SeedPolicy",
    "integrate",
    "find_limit_cycle",
    "find_cycles",
    "return_map",
    "portrait",
]

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                                22 / 525, -1 / 40)

H_MIN = 1e-14


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-10
    abs: float = 1e-12

    def __post_init__(self):
        if not (self.rel > 0 and self.abs > 0):
            raise DomainError("tolerances must be positive")


class StiffnessError(RuntimeError):
    """Step size fell below the underflow limit."""

    def __init__(self, message: str, t: float, state: State):
        super().__init__(message)
        self.t = t
        self.state = state


class CycleNotFound(RuntimeError):
    """No periodic orbit within the time budget.

    ``reason`` is ``"fixed_point"`` when the tail comes to rest,
    ``"escape"`` when it leaves every bounded region, and ``"horizon"``
    when it is still moving at the end of the budget.
    """

    def __init__(self, reason: str, tail_speed: float, last: State, t: float):
        super().__init__(f"no limit cycle ({reason}, tail speed {tail_speed:.3g}, t={t:.6g})")
        self.reason = reason
        self.tail_speed = tail_speed
        self.last = last
        self.t = t


def _dopri_step(f, x, y, kx1, ky1, h):
    """One step; returns the 5th order point, its slope and the error vector."""
    kx2, ky2 = f(x + h * _A21 * kx1, y + h * _A21 * ky1)
    kx3, ky3 = f(x + h * (_A31 * kx1 + _A32 * kx2), y + h * (_A31 * ky1 + _A32 * ky2))
    kx4, ky4 = f(x + h * (_A41 * kx1 + _A42 * kx2 + _A43 * kx3),
                 y + h * (_A41 * ky1 + _A42 * ky2 + _A43 * ky3))
    kx5, ky5 = f(x + h * (_A51 * kx1 + _A52 * kx2 + _A53 * kx3 + _A54 * kx4),
                 y + h * (_A51 * ky1 + _A52 * ky2 + _A53 * ky3 + _A54 * ky4))
    kx6, ky6 = f(x + h * (_A61 * kx1 + _A62 * kx2 + _A63 * kx3 + _A64 * kx4 + _A65 * kx5),
                 y + h * (_A61 * ky1 + _A62 * ky2 + _A63 * ky3 + _A64 * ky4 + _A65 * ky5))
    xn = x + h * (_B1 * kx1 + _B3 * kx3 + _B4 * kx4 + _B5 * kx5 + _B6 * kx6)
    yn = y + h * (_B1 * ky1 + _B3 * ky3 + _B4 * ky4 + _B5 * ky5 + _B6 * ky6)
    kx7, ky7 = f(xn, yn)
    ex = h * (_E1 * kx1 + _E3 * kx3 + _E4 * kx4 + _E5 * kx5 + _E6 * kx6 + _E7 * kx7)
    ey = h * (_E1 * ky1 + _E3 * ky3 + _E4 * ky4 + _E5 * ky5 + _E6 * ky6 + _E7 * ky7)
    return xn, yn, kx7, ky7, ex, ey


def _steps(f, t, x, y, tol: Tolerances, h: Optional[float] = None,
           fixed_step: Optional[float] = None) -> Iterator[Tuple[float, float, float, float, float]]:
    """Endless generator of accepted steps ``(t, x, y, fx, fy)``; the first item is the start."""
    fx, fy = f(x, y)
    yield t, x, y, fx, fy
    if fixed_step is not None:
        while True:
            x, y, fx, fy, _, _ = _dopri_step(f, x, y, fx, fy, fixed_step)
            t += fixed_step
            yield t, x, y, fx, fy
    rtol, atol = tol.rel, tol.abs
    if h is None:
        sc = atol + rtol * math.hypot(x, y)
        d0 = math.hypot(x, y) / sc
        d1 = math.hypot(fx, fy) / sc
        h = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-4
        h = min(h, 0.1)
    while True:
        while True:
            xn, yn, fxn, fyn, ex, ey = _dopri_step(f, x, y, fx, fy, h)
            sx = atol + rtol * max(abs(x), abs(xn))
            sy = atol + rtol * max(abs(y), abs(yn))
            err = math.sqrt(0.5 * ((ex / sx) ** 2 + (ey / sy) ** 2))
            if err <= 1.0:
                break
            if not math.isfinite(err):
                h *= 0.1
            else:
                h *= max(0.2, 0.9 * err ** -0.2)
            if h < H_MIN:
                raise StiffnessError(f"step size underflow at t={t:.6g}", t, State(x, y))
        t += h
        x, y, fx, fy = xn, yn, fxn, fyn
        yield t, x, y, fx, fy
        h *= min(5.0, 0.9 * err ** -0.2) if err > 0 else 5.0


def _oriented(params: ModelParams, reverse: bool) -> Callable:
    f = vector_field(params)
    if not reverse:
        return f

    def g(x, y):
        fx, fy = f(x, y)
        return -fx, -fy
    return g


@dataclass
class Trajectory:
    """Accepted steps of one integration with cubic Hermite dense output.

    ``times`` increase even for reverse-time runs (``reverse`` is then set
    and the orbit is traversed backwards).  ``status`` is ``"complete"``,
    ``"rest"`` (stopped at an equilibrium) or ``"escaped"``.
    """

    times: np.ndarray
    states: np.ndarray
    derivs: np.ndarray
    params: ModelParams
    reverse: bool = False
    status: str = "complete"

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> State:
        return State(float(self.states[-1, 0]), float(self.states[-1, 1]))

    def state_list(self) -> List[State]:
        return [State(float(x), float(y)) for x, y in self.states]

    def interpolate(self, t) -> np.ndarray:
        """Cubic Hermite interpolation at time(s) ``t`` inside the span."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t < self.times[0]) or np.any(t > self.times[-1]):
            raise DomainError("interpolation time outside trajectory span")
        i = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, len(self.times) - 2)
        t0, t1 = self.times[i], self.times[i + 1]
        h = (t1 - t0)[:, None]
        s = ((t - t0) / (t1 - t0))[:, None]
        y0, y1 = self.states[i], self.states[i + 1]
        d0, d1 = self.derivs[i] * h, self.derivs[i + 1] * h
        h00 = 2 * s ** 3 - 3 * s ** 2 + 1
        h10 = s ** 3 - 2 * s ** 2 + s
        h01 = -2 * s ** 3 + 3 * s ** 2
        h11 = s ** 3 - s ** 2
        return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1


def integrate(params: ModelParams, initial: State, t_end: float,
              tolerances: Tolerances = Tolerances(), *, reverse: bool = False,
              max_radius: Optional[float] = None, rest_speed: Optional[float] = None,
              fixed_step: Optional[float] = None, max_steps: int = 10_000_000) -> Trajectory:
    """Adaptive Dormand-Prince integration from ``initial`` over ``[0, t_end]``.

    Optional early stops: leaving the disc ``r < max_radius`` (status
    ``"escaped"``) and the speed dropping below ``rest_speed`` (status
    ``"rest"``).  ``fixed_step`` switches off step control.
    """
    if not t_end > 0:
        raise DomainError("t_end must be positive")
    if not (math.isfinite(initial.x) and math.isfinite(initial.y)):
        raise DomainError("non-finite initial state")
    f = _oriented(params, reverse)
    ts, xs, ys, fxs, fys = [], [], [], [], []
    status = "complete"
    prev = None
    for n, (t, x, y, fx, fy) in enumerate(_steps(f, 0.0, initial.x, initial.y, tolerances,
                                                  fixed_step=fixed_step)):
        if t > t_end and prev is not None:
            # land exactly on t_end with one extra step from the previous point
            t0, x0, y0, fx0, fy0 = prev
            x, y, fx, fy, _, _ = _dopri_step(f, x0, y0, fx0, fy0, t_end - t0)
            t = t_end
        ts.append(t)
        xs.append(x)
        ys.append(y)
        fxs.append(fx)
        fys.append(fy)
        if t >= t_end:
            break
        if max_radius is not None and x * x + y * y > max_radius * max_radius:
            status = "escaped"
            break
        if rest_speed is not None and math.hypot(fx, fy) < rest_speed:
            status = "rest"
            break
        if n >= max_steps:
            raise StiffnessError("step budget exhausted", t, State(x, y))
        prev = (t, x, y, fx, fy)
    states = np.column_stack([xs, ys])
    derivs = np.column_stack([fxs, fys])
    return Trajectory(np.array(ts), states, derivs, params, reverse, status)


# ----------------------------------------------------------------------------
# Poincare section on a ray

@dataclass(frozen=True)
class Section:
    """Ray from ``centre`` at angle ``angle``; ``direction`` +1 counts counter-clockwise crossings."""

    angle: float
    centre: Tuple[float, float] = (0.0, 0.0)
    direction: int = 1

    def signed(self, x: float, y: float) -> float:
        cx, cy = self.centre
        return self.direction * (-(x - cx) * math.sin(self.angle) + (y - cy) * math.cos(self.angle))

    def along(self, x: float, y: float) -> float:
        cx, cy = self.centre
        return (x - cx) * math.cos(self.angle) + (y - cy) * math.sin(self.angle)

    def point(self, rho: float) -> Tuple[float, float]:
        cx, cy = self.centre
        return cx + rho * math.cos(self.angle), cy + rho * math.sin(self.angle)

    def rate(self, fx: float, fy: float) -> float:
        return self.direction * (-fx * math.sin(self.angle) + fy * math.cos(self.angle))


def _polish_crossing(f, sec: Section, t0, x0, y0, fx0, fy0, h_guess):
    """Time and point of the section crossing inside a step, to round-off.

    Re-steps from the start of the accepted step with a trial length and
    applies Newton on the signed distance.
    """
    h = h_guess
    for _ in range(8):
        x, y, fx, fy, _, _ = _dopri_step(f, x0, y0, fx0, fy0, h)
        s = sec.signed(x, y)
        ds = sec.rate(fx, fy)
        if ds == 0:
            break
        dh = -s / ds
        h += dh
        if abs(dh) < 1e-15 * max(1.0, abs(t0)):
            break
    x, y, fx, fy, _, _ = _dopri_step(f, x0, y0, fx0, fy0, h)
    return t0 + h, x, y


def _crossings(f, sec: Section, stepper) -> Iterator[Tuple[float, float, float, list]]:
    """Yield ``(t, x, y, path)`` at each oriented crossing of ``sec``.

    ``path`` holds the accepted steps ``(t, x, y, fx, fy)`` since the
    previous crossing, both crossing points included.
    """
    prev = next(stepper)
    path = [prev]
    s_prev = sec.signed(prev[1], prev[2])
    for cur in stepper:
        t, x, y, fx, fy = cur
        s = sec.signed(x, y)
        if s_prev < 0 <= s and sec.along(x, y) > 0:
            # linear guess, then Newton from the step start
            t0, x0, y0, fx0, fy0 = prev
            theta = s_prev / (s_prev - s) if s != s_prev else 1.0
            tc, xc, yc = _polish_crossing(f, sec, t0, x0, y0, fx0, fy0, theta * (t - t0))
            if sec.along(xc, yc) > 0:
                fxc, fyc = f(xc, yc)
                path.append((tc, xc, yc, fxc, fyc))
                yield tc, xc, yc, path
                path = [(tc, xc, yc, fxc, fyc)]
        path.append(cur)
        prev = cur
        s_prev = s


@dataclass
class LimitCycle:
    """A periodic orbit.

    ``samples`` is a closed loop (first and last row coincide),
    ``floquet_magnitude`` the modulus of the nontrivial multiplier in
    forward time and ``winding`` the number of turns about the origin.
    """

    samples: np.ndarray
    period: float
    stability: str
    winding: int
    floquet_magnitude: float
    section: Section = field(default_factory=lambda: Section(0.0))
    crossing_radius: float = 0.0

    def encloses(self, x: float, y: float) -> bool:
        """Point-in-polygon test (even-odd rule) against the sampled loop."""
        px, py = self.samples[:, 0], self.samples[:, 1]
        qx, qy = np.roll(px, -1), np.roll(py, -1)
        cond = (py > y) != (qy > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = px + (y - py) * (qx - px) / (qy - py)
        return bool(np.count_nonzero(cond & (x < xint)) % 2)

    def distance_to(self, pts: np.ndarray) -> np.ndarray:
        """Distance from each point to the sampled loop (as a polyline)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        a = self.samples[:-1]
        ab = self.samples[1:] - a
        L2 = np.maximum(np.einsum("ij,ij->i", ab, ab), 1e-300)
        out = np.empty(len(pts))
        for i, p in enumerate(pts):
            ap = p - a
            t = np.clip(np.einsum("ij,ij->i", ap, ab) / L2, 0.0, 1.0)
            q = a + t[:, None] * ab - p
            out[i] = math.sqrt(float(np.min(np.einsum("ij,ij->i", q, q))))
        return out

    @property
    def mean_radius(self) -> float:
        return float(np.mean(np.hypot(self.samples[:, 0], self.samples[:, 1])))


def return_map(params: ModelParams, sec: Section, rho: float, *, reverse: bool = False,
               tol: Tolerances = Tolerances(), max_time: float = 1e4,
               max_radius: float = 1e3) -> Tuple[float, float, list]:
    """First return ``(rho', T, path)`` to ``sec`` starting at distance ``rho`` along it."""
    f = _oriented(params, reverse)
    x0, y0 = sec.point(rho)
    stepper = _steps(f, 0.0, x0, y0, tol)
    for t, x, y, path in _crossings(f, sec, _bounded(stepper, max_time, max_radius)):
        return sec.along(x, y), t, path
    raise CycleNotFound("horizon", float("nan"), State(x0, y0), max_time)


def _bounded(stepper, max_time, max_radius, rest_speed=0.0):
    for item in stepper:
        t, x, y, fx, fy = item
        if t > max_time or x * x + y * y > max_radius * max_radius:
            return
        if rest_speed and math.hypot(fx, fy) < rest_speed:
            return
        yield item


def _densify(path: np.ndarray, k: int = 32) -> np.ndarray:
    """Hermite-refine rows ``(t, x, y, fx, fy)`` into ``k`` points per step."""
    t, y, d = path[:, 0], path[:, 1:3], path[:, 3:5]
    h = np.diff(t)[:, None, None]
    s = (np.arange(k) / k)[None, :, None]
    h00 = 2 * s ** 3 - 3 * s ** 2 + 1
    h10 = s ** 3 - 2 * s ** 2 + s
    h01 = -2 * s ** 3 + 3 * s ** 2
    h11 = s ** 3 - s ** 2
    pts = (h00 * y[:-1, None] + h10 * h * d[:-1, None]
           + h01 * y[1:, None] + h11 * h * d[1:, None])
    return np.vstack([pts.reshape(-1, 2), y[-1:]])


def _winding(path: np.ndarray) -> int:
    ang = np.arctan2(path[:, 1], path[:, 0])
    d = np.diff(ang)
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return int(round(float(np.sum(d)) / (2 * np.pi)))


def find_limit_cycle(params: ModelParams, seed: State, section: float = 0.0, *,
                     reverse: bool = False, tolerances: Tolerances = Tolerances(),
                     transient: float = 500.0, max_time: float = 1e4,
                     max_radius: float = 1e3, match_tol: float = 1e-9,
                     rest_speed: float = 1e-10, crossing_window: float = 2000.0,
                     centre: Optional[Tuple[float, float]] = None) -> LimitCycle:
    """Locate the periodic orbit attracting ``seed`` (in reversed time if ``reverse``).

    After ``transient`` the orbit is followed on the ray at angle
    ``section`` from ``centre``.  By default the ray starts at the origin;
    if it is not crossed within ``crossing_window`` the centroid of the
    recent tail is used instead (cycles that do not surround the origin).
    Once successive crossings settle, the crossing distance is refined by
    Newton on the return map and the cycle is accepted when one more
    return agrees within ``match_tol``.  Raises :class:`CycleNotFound`.
    """
    f = _oriented(params, reverse)
    stepper = _bounded(_steps(f, 0.0, seed.x, seed.y, tolerances), max_time, max_radius,
                       rest_speed)
    tail: deque = deque(maxlen=4000)
    last = None
    for item in stepper:
        last = item
        tail.append((item[1], item[2]))
        if item[0] >= transient:
            break
    if last[0] < transient:
        _give_up(f, last, max_radius, rest_speed)
    centres = [centre] if centre is not None else [(0.0, 0.0), None]
    for cen in centres:
        if cen is None:
            arr = np.asarray(tail)
            cen = (float(arr[:, 0].mean()), float(arr[:, 1].mean()))
        probe = Section(section, cen, 1)
        s_prev = probe.signed(last[1], last[2])
        direction = 0
        t_stop = last[0] + crossing_window
        for item in stepper:
            last = item
            tail.append((item[1], item[2]))
            s = probe.signed(item[1], item[2])
            if (s_prev < 0 <= s or s_prev > 0 >= s) and s != s_prev \
                    and probe.along(item[1], item[2]) > 0:
                direction = 1 if s > s_prev else -1
                break
            s_prev = s
            if item[0] > t_stop:
                break
        if direction:
            sec = Section(section, cen, direction)
            return _settle(params, f, sec, itertools.chain([last], stepper), reverse,
                           tolerances, max_radius, match_tol, rest_speed)
        if last[0] < t_stop:
            _give_up(f, last, max_radius, rest_speed)
    _give_up(f, last, max_radius, rest_speed)


def _give_up(f, last, max_radius, rest_speed):
    t, x, y = last[0], last[1], last[2]
    speed = math.hypot(*f(x, y))
    if x * x + y * y > max_radius * max_radius:
        reason = "escape"
    elif speed < max(rest_speed, 1e-6):
        reason = "fixed_point"
    else:
        reason = "horizon"
    raise CycleNotFound(reason, speed, State(x, y), t)


def _settle(params, f, sec: Section, steps, reverse, tol, max_radius,
            match_tol, rest_speed) -> LimitCycle:
    radii: List[float] = []
    times: List[float] = []
    last = None

    def watch(gen):
        nonlocal last
        for item in gen:
            last = item
            yield item

    for tc, xc, yc, _ in _crossings(f, sec, watch(steps)):
        radii.append(sec.along(xc, yc))
        times.append(tc)
        if len(radii) < 3:
            continue
        rho = radii[-1]
        if rho < 1e-7:
            break
        d1 = radii[-1] - radii[-2]
        d0 = radii[-2] - radii[-3]
        close = abs(d1) <= 1e-6 * max(1.0, rho)
        contracting = d0 != 0 and abs(d1) < 0.9 * abs(d0)
        if close or (contracting and abs(d1) < 1e-2 * max(1.0, rho)):
            cyc = _newton_cycle(params, sec, rho, reverse, tol, max_radius, match_tol,
                                period_hint=times[-1] - times[-2])
            if cyc is not None:
                return cyc
    _give_up(f, last, max_radius, rest_speed)


def _newton_cycle(params, sec, rho, reverse, tol, max_radius, match_tol, period_hint):
    """Newton on ``g(rho) = P(rho) - rho``; returns None if it does not converge."""
    horizon = max(50.0, 5 * period_hint)
    try:
        for _ in range(12):
            p0, T, path = return_map(params, sec, rho, reverse=reverse, tol=tol,
                                     max_time=horizon, max_radius=max_radius)
            g = p0 - rho
            if abs(g) <= 0.1 * match_tol:
                break
            h = 1e-7 * max(1.0, rho)
            p1, _, _ = return_map(params, sec, rho + h, reverse=reverse, tol=tol,
                                  max_time=horizon, max_radius=max_radius)
            slope = (p1 - p0) / h - 1.0
            step = -g / slope if slope != 0 else -g
            # keep the step inside a trust region on the section
            lim = 0.25 * max(rho, 1e-3)
            step = max(-lim, min(lim, step))
            rho = rho + step
            if rho <= 0:
                return None
        p0, T, path = return_map(params, sec, rho, reverse=reverse, tol=tol,
                                 max_time=horizon, max_radius=max_radius)
    except CycleNotFound:
        return None
    if abs(p0 - rho) > match_tol:
        return None
    h = 1e-6 * max(1.0, rho)
    try:
        pp, _, _ = return_map(params, sec, rho + h, reverse=reverse, tol=tol,
                              max_time=2 * T + 10, max_radius=max_radius)
        pm, _, _ = return_map(params, sec, rho - h, reverse=reverse, tol=tol,
                              max_time=2 * T + 10, max_radius=max_radius)
        mult = abs((pp - pm) / (2 * h))
    except CycleNotFound:
        mult = float("nan")
    if reverse and mult > 0:
        mult = 1.0 / mult
    # the stored loop comes from a tighter pass so that Hermite samples sit on the orbit
    fine = Tolerances(max(tol.rel * 1e-2, 1e-13), max(tol.abs * 1e-2, 1e-15))
    try:
        _, _, path = return_map(params, sec, rho, reverse=reverse, tol=fine,
                                max_time=2 * T + 10, max_radius=max_radius)
    except CycleNotFound:
        pass
    loop = _densify(np.asarray(path, dtype=float))
    stability = "Stable" if mult < 1 - 1e-6 else "Unstable"
    wind = _winding(loop)
    if reverse:
        loop = loop[::-1]
        wind = -wind
    return LimitCycle(loop, T, stability, wind, mult, sec, rho)


# ----------------------------------------------------------------------------
# phase portraits

@dataclass(frozen=True)
class SeedPolicy:
    """How portrait trajectories and cycle searches are seeded."""

    ring_radii: Tuple[float, ...] = ()
    ring_points: int = 8
    grid: int = 5
    grid_extent: float = 0.0
    background_time: float = 50.0
    separatrix_offset: float = 1e-6
    separatrix_time: float = 200.0
    cycle_transient: float = 500.0
    cycle_max_time: float = 1e4
    reverse_cycles: bool = True
    equilibrium_offset: float = 1e-3


@dataclass
class Portrait:
    params: ModelParams
    equilibria: List[Equilibrium]
    cycles: List[LimitCycle]
    separatrices: List[Tuple[str, Trajectory]]
    background: List[Trajectory]

    @property
    def stable_cycles(self) -> List[LimitCycle]:
        return [c for c in self.cycles if c.stability == "Stable"]

    @property
    def unstable_cycles(self) -> List[LimitCycle]:
        return [c for c in self.cycles if c.stability == "Unstable"]


def _same_cycle(c1: LimitCycle, c2: LimitCycle, tol: float = 1e-4) -> bool:
    if abs(c1.period - c2.period) > 1e-6 * max(c1.period, c2.period):
        return False
    size = float(np.ptp(c1.samples, axis=0).max())
    sub = c2.samples[:: max(1, len(c2.samples) // 64)]
    return float(np.max(c1.distance_to(sub))) < tol * max(size, 1e-3)


def _dedupe(cycles: List[LimitCycle]) -> List[LimitCycle]:
    out: List[LimitCycle] = []
    for c in cycles:
        if not any(_same_cycle(o, c) or _same_cycle(c, o) for o in out):
            out.append(c)
    return out


def _extent(eqs: Sequence[Equilibrium], params: ModelParams) -> float:
    r_eq = max((e.position.r for e in eqs), default=0.0)
    r_rw = math.sqrt(max(params.mu, 0.0) / params.a) if params.mu > 0 else 0.0
    return 1.5 * max(r_eq, r_rw, 0.5) + 0.5


def find_cycles(params: ModelParams, policy: SeedPolicy = SeedPolicy(),
                equilibria: Optional[List[Equilibrium]] = None,
                tolerances: Tolerances = Tolerances()) -> List[LimitCycle]:
    """Stable cycles by forward runs and unstable ones by reverse-time runs.

    Forward seeds: a far ring and points near every non-attracting
    equilibrium.  Reverse seeds: the same ring and points near every
    attracting equilibrium (which repel in reversed time).
    """
    eqs = fixed_points(params) if equilibria is None else equilibria
    ext = _extent(eqs, params)
    radii = policy.ring_radii or (ext,)
    ring = [State.from_polar(r, 2 * math.pi * (k + 0.5) / policy.ring_points)
            for r in radii for k in range(policy.ring_points)]
    off = policy.equilibrium_offset
    near_unstable, near_stable = [], []
    for e in eqs:
        pts = [State(e.position.x + off * math.cos(t), e.position.y + off * math.sin(t))
               for t in (0.3, 0.3 + math.pi / 2, 0.3 + math.pi, 0.3 + 3 * math.pi / 2)]
        if e.stability.is_stable:
            near_stable += pts
        elif e.stability in (StabilityClass.UNSTABLE_FOCUS, StabilityClass.UNSTABLE_NODE,
                             StabilityClass.NON_HYPERBOLIC):
            near_unstable += pts
    jobs = [(s, False) for s in ring + near_unstable]
    if policy.reverse_cycles:
        jobs += [(s, True) for s in ring + near_stable]
    found = []
    for seed, rev in jobs:
        try:
            cyc = find_limit_cycle(params, seed, 0.0, reverse=rev, tolerances=tolerances,
                                   transient=policy.cycle_transient,
                                   max_time=policy.cycle_max_time, max_radius=50 * ext)
        except (CycleNotFound, StiffnessError):
            continue
        if any(_same_cycle(c, cyc) or _same_cycle(cyc, c) for c in found):
            continue
        found.append(cyc)
    return _dedupe(found)


def portrait(params: ModelParams, policy: SeedPolicy = SeedPolicy(),
             tolerances: Tolerances = Tolerances()) -> Portrait:
    """Equilibria, separatrices, limit cycles and a background grid.

    Deterministic for a fixed policy: seeds are generated in a fixed order
    and results are kept in that order.
    """
    eqs = fixed_points(params)
    ext = _extent(eqs, params)
    seps = []
    for e in eqs:
        if e.stability != StabilityClass.SADDLE:
            continue
        J = jacobian(params, e.position)
        w, V = np.linalg.eig(J)
        for lam, vec in zip(w.real, V.T.real):
            vec = vec / np.hypot(*vec)
            rev = lam < 0
            tag = "stable" if rev else "unstable"
            for sgn in (1, -1):
                s0 = State(e.position.x + sgn * policy.separatrix_offset * vec[0],
                           e.position.y + sgn * policy.separatrix_offset * vec[1])
                tr = integrate(params, s0, policy.separatrix_time, tolerances, reverse=rev,
                               max_radius=10 * ext, rest_speed=1e-9)
                seps.append((f"{e.name}:{tag}:{'+' if sgn > 0 else '-'}", tr))
    cycles = find_cycles(params, policy, eqs, tolerances)
    back = []
    if policy.grid > 0:
        g = policy.grid_extent or ext
        for x in np.linspace(-g, g, policy.grid):
            for y in np.linspace(-g, g, policy.grid):
                back.append(integrate(params, State(float(x), float(y)), policy.background_time,
                                      tolerances, max_radius=10 * ext, rest_speed=1e-9))
    return Portrait(params, eqs, cycles, seps, back)
