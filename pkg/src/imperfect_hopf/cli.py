"""Command-line front end: fixed points, curves, portraits, boundaries and fits.

Every output embeds the resolved configuration and a format version.
Floats are written with 17 significant digits so identical
configurations give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .curves import (
    CurveSet,
    curves_const,
    curves_quadratic,
    curves_z2,
    measure_pinning_width,
    pinning_width,
    zm_horn,
)
from .equilibria import NumericalError, fixed_points
from .flow import CycleNotFound, SeedPolicy, StiffnessError, Tolerances, portrait
from .globalbif import (
    LOG_LAW,
    SQRT_LAW,
    ParamPath,
    fit_period_scaling,
    locate_boundary,
)
from .normalform import (
    CONST,
    MIXED,
    QUADRATIC,
    DomainError,
    ModelParams,
    PerturbationKind,
    UVPoint,
    canonicalize_signs,
    from_uv,
    zm,
)

FORMAT_VERSION = "1.0"
EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
KINDS = ("const", "z2", "z3", "zzbar", "z2pos", "zm")


class UsageError(Exception):
    pass


# ----------------------------------------------------------------------------
# formatting

def fmt(x: float) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return f"{x:.17g}"


def to_json(obj: Any, indent: int = 0) -> str:
    """JSON with 17-significant-digit floats; non-finite floats become null."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return {None: "null", True: "true", False: "false"}[None if obj is None else bool(obj)]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{inner}{to_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]], meta: Dict[str, Any]) -> str:
    buf = io.StringIO()
    buf.write(f"# format_version={FORMAT_VERSION}\n")
    buf.write("# config=" + json.dumps(meta, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, path: Optional[str]) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ----------------------------------------------------------------------------
# configuration

@dataclass
class RunConfig:
    command: str
    kind: str
    m: Optional[int]
    alpha0_deg: float
    mu: Optional[float]
    nu: Optional[float]
    epsilon: float
    tol_rel: float
    tol_abs: float
    t_max: float
    jobs: int
    out: Optional[str]
    format: str
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def alpha0(self) -> float:
        return math.radians(self.alpha0_deg)

    @property
    def perturbation(self) -> PerturbationKind:
        return kind_from_name(self.kind, self.m)

    def params(self) -> ModelParams:
        if self.mu is None or self.nu is None:
            raise UsageError("give --mu/--nu or --u/--v")
        return ModelParams(self.mu, self.nu, self.alpha0, self.epsilon, self.perturbation)

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances(self.tol_rel, self.tol_abs)

    def record(self) -> Dict[str, Any]:
        d = asdict(self)
        d.pop("extra")
        d.update(self.extra)
        return d


def kind_from_name(name: str, m: Optional[int]) -> PerturbationKind:
    if name == "const":
        return CONST
    if name == "zzbar":
        return MIXED
    if name == "z2pos":
        return QUADRATIC
    if name == "z2":
        return zm(2)
    if name == "z3":
        return zm(3)
    if name == "zm":
        if m is None or m < 2:
            raise UsageError("--kind zm needs --m >= 2")
        return zm(m)
    raise UsageError(f"unknown kind {name!r}")


def _finite(name: str, x: Optional[float]) -> None:
    if x is not None and not math.isfinite(x):
        raise UsageError(f"{name} must be finite")


def resolve(ns: argparse.Namespace) -> RunConfig:
    """Validate every numeric flag before any computation starts."""
    for name in ("alpha0", "mu", "nu", "u", "v", "epsilon", "tol_rel", "tol_abs", "t_max"):
        _finite(name, getattr(ns, name, None))
    if not 0 < ns.alpha0 < 90:
        raise UsageError("--alpha0 must lie in (0, 90) degrees")
    if ns.epsilon < 0:
        raise UsageError("--epsilon must be non-negative")
    if not (ns.tol_rel > 0 and ns.tol_abs > 0):
        raise UsageError("tolerances must be positive")
    if not ns.t_max > 0:
        raise UsageError("--t-max must be positive")
    if ns.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    kind_from_name(ns.kind, ns.m)
    have_mn = ns.mu is not None or ns.nu is not None
    have_uv = ns.u is not None or ns.v is not None
    if have_mn and have_uv:
        raise UsageError("give either --mu/--nu or --u/--v, not both")
    mu, nu = ns.mu, ns.nu
    if have_uv:
        if ns.u is None or ns.v is None:
            raise UsageError("--u and --v go together")
        mu, nu = from_uv(UVPoint(ns.u, ns.v), math.radians(ns.alpha0))
    elif have_mn and (mu is None or nu is None):
        raise UsageError("--mu and --nu go together")
    return RunConfig(ns.command, ns.kind, ns.m, ns.alpha0, mu, nu, ns.epsilon, ns.tol_rel,
                     ns.tol_abs, ns.t_max, ns.jobs, ns.out, ns.format)


# ----------------------------------------------------------------------------
# commands

def _eq_rows(eqs) -> List[List[Any]]:
    rows = []
    for e in eqs:
        l1, l2 = e.eigenvalues
        rows.append([e.label, "" if e.index is None else str(e.index), e.position.x, e.position.y,
                     e.position.r, e.position.phi, e.trace, e.det, e.disc,
                     l1.real, l1.imag, l2.real, l2.imag, e.stability.value])
    return rows


EQ_HEADER = ["label", "index", "x", "y", "r", "phi", "T", "D", "Q",
             "eig1_re", "eig1_im", "eig2_re", "eig2_im", "class"]


def cmd_fixed_points(cfg: RunConfig) -> None:
    eqs = fixed_points(cfg.params())
    rows = _eq_rows(eqs)
    if cfg.format == "csv":
        _emit(_csv_text(EQ_HEADER, rows, cfg.record()), cfg.out)
    else:
        report = {"format_version": FORMAT_VERSION, "config": cfg.record(),
                  "equilibria": [dict(zip(EQ_HEADER, r)) for r in rows]}
        _emit(to_json(report) + "\n", cfg.out)


def curve_set(cfg: RunConfig) -> CurveSet:
    kind = cfg.perturbation
    if kind.tag == "const":
        return curves_const(cfg.alpha0)
    if kind.tag == "zm" and kind.m == 2:
        return curves_z2(cfg.alpha0)
    if kind.tag in ("mixed", "quadratic") or (kind.tag == "zm" and kind.m == 3):
        return curves_quadratic(kind, cfg.alpha0)
    eps = cfg.epsilon if cfg.epsilon > 0 else 0.02
    upper, lower = zm_horn(kind.m, eps, alpha0=cfg.alpha0, refine=True)
    return CurveSet(kind, cfg.alpha0, [upper, lower])


def cmd_curves(cfg: RunConfig) -> None:
    cs = curve_set(cfg)
    a, b = math.sin(cfg.alpha0), math.cos(cfg.alpha0)
    rows = []
    for c in cs.curves:
        uv = c.uv()
        for (mu, nu), s, (u, v) in zip(c.samples, c.params, uv):
            rows.append([c.label, s, mu, nu, u, v])
    for p in cs.points:
        mu, nu = p.location
        s = p.curve_parameter if p.curve_parameter is not None else float("nan")
        rows.append([p.label, s, mu, nu, a * mu + b * nu, a * nu - b * mu])
    header = ["kind", "param", "mu", "nu", "u", "v"]
    index = {
        "format_version": FORMAT_VERSION,
        "config": cfg.record(),
        "curves": [{"label": c.label, "samples": len(c), "param_name": c.param_name,
                    "param_range": list(c.param_range), "degenerate": c.degenerate}
                   for c in cs.curves],
        "points": [{"label": p.label, "mu": p.location[0], "nu": p.location[1],
                    "u": p.uv[0], "v": p.uv[1], "note": p.note} for p in cs.points],
    }
    if cfg.out and cfg.out != "-":
        os.makedirs(cfg.out, exist_ok=True)
        _emit(_csv_text(header, rows, cfg.record()), os.path.join(cfg.out, "curves.csv"))
        _emit(to_json(index) + "\n", os.path.join(cfg.out, "index.json"))
    elif cfg.format == "csv":
        _emit(_csv_text(header, rows, cfg.record()), None)
    else:
        index["rows"] = [dict(zip(header, r)) for r in rows]
        _emit(to_json(index) + "\n", None)


def cmd_portrait(cfg: RunConfig) -> None:
    p = cfg.params()
    policy = SeedPolicy(grid=int(cfg.extra.get("grid", 5)),
                        cycle_transient=min(500.0, cfg.t_max / 2), cycle_max_time=cfg.t_max)
    port = portrait(p, policy, cfg.tolerances)
    rows = []
    manifest_traj = []
    tid = 0

    def add(role, times, states, name=""):
        nonlocal tid
        manifest_traj.append({"id": tid, "role": role, "name": name, "points": len(times)})
        for t, (x, y) in zip(times, states):
            rows.append([tid, role, t, x, y])
        tid += 1

    for name, tr in port.separatrices:
        add("separatrix", tr.times, tr.states, name)
    for k, c in enumerate(port.cycles):
        n = len(c.samples)
        add("cycle", np.linspace(0, c.period, n), c.samples, f"C{k}")
    for tr in port.background:
        add("background", tr.times, tr.states)
    manifest = {
        "format_version": FORMAT_VERSION,
        "config": cfg.record(),
        "equilibria": [dict(zip(EQ_HEADER, r)) for r in _eq_rows(port.equilibria)],
        "cycles": [{"name": f"C{k}", "period": c.period, "stability": c.stability,
                    "winding": c.winding, "floquet_magnitude": c.floquet_magnitude,
                    "mean_radius": c.mean_radius} for k, c in enumerate(port.cycles)],
        "trajectories": manifest_traj,
    }
    header = ["trajectory", "role", "t", "x", "y"]
    if cfg.out and cfg.out != "-":
        os.makedirs(cfg.out, exist_ok=True)
        _emit(_csv_text(header, rows, cfg.record()), os.path.join(cfg.out, "trajectories.csv"))
        _emit(to_json(manifest) + "\n", os.path.join(cfg.out, "manifest.json"))
    elif cfg.format == "csv":
        _emit(_csv_text(header, rows, cfg.record()), None)
    else:
        _emit(to_json(manifest) + "\n", None)


def _fit_record(f) -> Dict[str, Any]:
    return {"model": f.model, "mu_c": f.mu_c, "coeff": f.coeff, "offset": f.offset,
            "rms_residual": f.rms_residual, "window": list(f.window),
            "converged": f.converged, "iterations": f.iterations}


def cmd_boundary(cfg: RunConfig) -> None:
    start, end = cfg.extra["start"], cfg.extra["end"]
    base = ModelParams(start[0], start[1], cfg.alpha0, cfg.epsilon, cfg.perturbation)
    bp = locate_boundary(base, ParamPath(tuple(start), tuple(end)),
                         max_period=cfg.extra["max_period"], budget=cfg.t_max,
                         tolerances=cfg.tolerances)
    report = {
        "format_version": FORMAT_VERSION,
        "config": cfg.record(),
        "location": list(bp.location),
        "bracket": [list(bp.bracket[0]), list(bp.bracket[1])],
        "width": bp.width,
        "horizon": bp.horizon,
        "type_guess": bp.type_guess,
        "saddle_node": None if bp.saddle_node is None else list(bp.saddle_node),
        "saddle_node_gap": bp.saddle_node_gap,
        "saddle_eigenvalue": bp.saddle_eigenvalue,
        "colliding_saddles": bp.colliding_saddles,
        "bounded_rms": bp.bounded_rms,
        "fits": {w: {m: _fit_record(f) for m, f in d.items()} for w, d in bp.fits.items()},
        "samples": [{"distance": s.distance, "mu": s.location[0], "nu": s.location[1],
                     "period": s.period} for s in bp.samples],
        "notes": bp.notes,
    }
    _emit(to_json(report) + "\n", cfg.out)


def _read_samples(path: str) -> List[List[float]]:
    fh = sys.stdin if path == "-" else open(path, encoding="utf-8")
    try:
        rows = []
        skipped_header = False
        for row in csv.reader(line for line in fh if not line.startswith("#")):
            if not row:
                continue
            try:
                rows.append([float(row[0]), float(row[1])])
            except (ValueError, IndexError):
                # one leading header row is allowed
                if rows or skipped_header:
                    raise UsageError(f"bad sample row {row!r}")
                skipped_header = True
        return rows
    finally:
        if fh is not sys.stdin:
            fh.close()


def cmd_period_fit(cfg: RunConfig) -> None:
    samples = _read_samples(cfg.extra["samples"])
    models = [SQRT_LAW, LOG_LAW] if cfg.extra["model"] == "both" else [cfg.extra["model"]]
    fits = [fit_period_scaling(samples, m) for m in models]
    report = {"format_version": FORMAT_VERSION, "config": cfg.record(),
              "n_samples": len(samples), "fits": [_fit_record(f) for f in fits]}
    if len(fits) == 2:
        report["best"] = min(fits, key=lambda f: f.rms_residual).model
    _emit(to_json(report) + "\n", cfg.out)


def _width_job(args):
    kind, d, eps, alpha0 = args
    return measure_pinning_width(kind, d, eps, alpha0)


def cmd_width(cfg: RunConfig) -> None:
    kind = cfg.perturbation
    ds = cfg.extra["d"]
    jobs = [(kind, d, cfg.epsilon, cfg.alpha0) for d in ds]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            measured = list(pool.map(_width_job, jobs))
    else:
        measured = [_width_job(j) for j in jobs]
    rows = []
    for d, w in zip(ds, measured):
        law = pinning_width(kind, d, cfg.epsilon)
        rows.append([d, w, law, w / law - 1])
    header = ["d", "measured", "law", "relative_error"]
    if cfg.format == "csv":
        _emit(_csv_text(header, rows, cfg.record()), cfg.out)
    else:
        report = {"format_version": FORMAT_VERSION, "config": cfg.record(),
                  "widths": [dict(zip(header, r)) for r in rows]}
        _emit(to_json(report) + "\n", cfg.out)


def cmd_canonicalize(cfg: RunConfig) -> None:
    a_raw, b_raw = cfg.extra["a_raw"], cfg.extra["b_raw"]
    alpha0, tr = canonicalize_signs(a_raw, b_raw)
    report = {"format_version": FORMAT_VERSION, "config": cfg.record(),
              "alpha0_deg": math.degrees(alpha0), "time_reversed": tr.time_reversed,
              "conjugated": tr.conjugated, "phase_shift": tr.phase_shift(cfg.perturbation)}
    if cfg.mu is not None:
        mu, nu = tr.map_params(cfg.mu, cfg.nu)
        report["mu"], report["nu"] = mu, nu
    _emit(to_json(report) + "\n", cfg.out)


COMMANDS = {
    "fixed-points": cmd_fixed_points,
    "curves": cmd_curves,
    "portrait": cmd_portrait,
    "boundary": cmd_boundary,
    "period-fit": cmd_period_fit,
    "width": cmd_width,
    "canonicalize": cmd_canonicalize,
}


# ----------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--kind", choices=KINDS, default="const")
    common.add_argument("--m", type=int, default=None, help="symmetry order for --kind zm")
    common.add_argument("--alpha0", type=float, default=45.0, help="cubic tilt in degrees")
    common.add_argument("--mu", type=float)
    common.add_argument("--nu", type=float)
    common.add_argument("--u", type=float)
    common.add_argument("--v", type=float)
    common.add_argument("--epsilon", type=float, default=1.0)
    common.add_argument("--tol-rel", type=float, default=1e-10)
    common.add_argument("--tol-abs", type=float, default=1e-12)
    common.add_argument("--t-max", type=float, default=2e4, help="integration budget")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", default=None, help="output file (directory for curves/portrait)")
    common.add_argument("--format", choices=("csv", "json"), default="json")

    p = _Parser(prog="imperfect-hopf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("fixed-points", parents=[common], help="equilibria and their classes")
    sub.add_parser("curves", parents=[common], help="local bifurcation curves and codim-2 points")
    sp = sub.add_parser("portrait", parents=[common], help="trajectories, cycles, separatrices")
    sp.add_argument("--grid", type=int, default=5)
    sb = sub.add_parser("boundary", parents=[common], help="locate a cycle-loss boundary")
    sb.add_argument("--start", type=float, nargs=2, required=True, metavar=("MU", "NU"))
    sb.add_argument("--end", type=float, nargs=2, required=True, metavar=("MU", "NU"))
    sb.add_argument("--max-period", type=float, default=1e4)
    sf = sub.add_parser("period-fit", parents=[common], help="fit period scaling laws")
    sf.add_argument("--samples", required=True, help="CSV of (mu, T) rows, '-' for stdin")
    sf.add_argument("--model", choices=(SQRT_LAW, LOG_LAW, "both"), default="both")
    sw = sub.add_parser("width", parents=[common], help="pinning-band widths")
    sw.add_argument("--d", type=float, nargs="+", default=[1.0, 2.0, 4.0])
    sc = sub.add_parser("canonicalize", parents=[common], help="reduce signs of a and b")
    sc.add_argument("--a-raw", type=float, required=True)
    sc.add_argument("--b-raw", type=float, required=True)
    return p


_EXTRA = {
    "portrait": ("grid",),
    "boundary": ("start", "end", "max_period"),
    "period-fit": ("samples", "model"),
    "width": ("d",),
    "canonicalize": ("a_raw", "b_raw"),
}


def _error(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        cfg = resolve(ns)
        for name in _EXTRA.get(ns.command, ()):
            cfg.extra[name] = getattr(ns, name)
        for name in ("max_period",):
            if name in cfg.extra and not cfg.extra[name] > 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if "d" in cfg.extra and not all(d > 0 and math.isfinite(d) for d in cfg.extra["d"]):
            raise UsageError("--d values must be positive")
        COMMANDS[ns.command](cfg)
    except (UsageError, DomainError) as exc:
        return _error(EXIT_USAGE, type(exc).__name__, str(exc))
    except (NumericalError, CycleNotFound, StiffnessError, np.linalg.LinAlgError,
            FloatingPointError) as exc:
        return _error(EXIT_NUMERIC, type(exc).__name__, str(exc))
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except OSError as exc:
        return _error(EXIT_USAGE, type(exc).__name__, str(exc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
