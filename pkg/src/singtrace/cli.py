"""Command-line front end: worked examples, spectra, scattering data and kernels.

Exit codes: 0 success, 1 accuracy threshold missed, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.special import zeta

from . import __version__
from .errors import DomainError, SingTraceError
from .kernels import kernel_from_spectra, pl_coeffs_even
from .potential import BUILTIN_CASES, Potential, builtin
from .regsol import SIGMA_CASES, closed_scattering, numeric_scattering
from .spectrum import SHOOT_TOL, TailModel, closed_spectrum, shoot_spectrum
from .trace import QuadPolicy, finite_interval_v0, halfline_v0_difference

EXIT_OK, EXIT_THRESHOLD, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
FORMATS = ("csv", "json")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    fmt: str = "json"
    out: Optional[str] = None
    tol: Optional[float] = None
    nu_max: Optional[int] = None
    k_max: Optional[float] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.nu_max is not None and self.nu_max < 0:
            raise UsageError("--nu-max must be non-negative")
        if self.k_max is not None and not self.k_max > 0:
            raise UsageError("--k-max must be positive")

    def provenance(self) -> dict:
        return {"program": "singtrace", "version": __version__, "command": self.command,
                "settings": {"tol": self.tol, "nu_max": self.nu_max, "k_max": self.k_max, **self.params}}


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".15g")


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def render_table(cfg: RunConfig, columns: Sequence[str], rows: List[Sequence]) -> str:
    head = cfg.provenance()
    if cfg.fmt == "json":
        body = {"provenance": head, "columns": list(columns), "rows": [list(r) for r in rows]}
        return json.dumps(_jsonable(body), indent=2) + "\n"
    lines = ["# " + json.dumps(_jsonable(head), sort_keys=True), ",".join(columns)]
    lines += [",".join(_fmt(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def render_report(cfg: RunConfig, report: dict) -> str:
    if cfg.fmt == "json":
        return json.dumps(_jsonable({"provenance": cfg.provenance(), **report}), indent=2) + "\n"
    flat = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(f"{prefix}.{k}" if prefix else k, v)
        else:
            flat.append((prefix, obj))

    walk("", report)
    lines = ["# " + json.dumps(_jsonable(cfg.provenance()), sort_keys=True), "key,value"]
    lines += [f"{k},{_fmt(v) if not isinstance(v, bool) else str(v).lower()}" for k, v in flat]
    return "\n".join(lines) + "\n"


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

_Z3 = float(zeta(3.0))
EXAMPLE_EXACT = {
    1: 1.0 / 12.0,
    2: 56 * _Z3 / math.pi**4 - 1.0,
    3: 56 * _Z3 / math.pi**4,
    4: -math.pi**2 / 12.0,
}
EXAMPLE_THRESHOLD = {1: 1e-10, 2: 1e-8, 3: 1e-8, 4: 5e-10}
NUMERIC_EX1_THRESHOLD = 1e-6


def _quad_policy(cfg: RunConfig) -> QuadPolicy:
    kw = {}
    if cfg.k_max is not None:
        kw["k_max"] = cfg.k_max
    if cfg.tol is not None:
        kw["rel_tol"] = cfg.tol
    return QuadPolicy(**kw)


def cmd_example(cfg: RunConfig, n: int, numeric: bool = False) -> dict:
    """Run example n end to end and compare with its closed-form value."""
    if n not in EXAMPLE_EXACT:
        raise UsageError("example number must be 1, 2, 3 or 4")
    t0 = time.perf_counter()
    threshold = EXAMPLE_THRESHOLD[n]
    if n == 1:
        if numeric:
            sigma = numeric_scattering(builtin("v1"), tol=cfg.tol or 1e-11)
            threshold = NUMERIC_EX1_THRESHOLD
        else:
            sigma = closed_scattering("v1")
        res = halfline_v0_difference(sigma, closed_scattering("vtilde1"), quad_policy=_quad_policy(cfg))
        v0 = res.v0_diff
    elif n == 2:
        res = halfline_v0_difference(closed_scattering("v2"), closed_scattering("vtilde2"),
                                     quad_policy=_quad_policy(cfg))
        v0 = res.v0_diff
    elif n == 3:
        bound = closed_spectrum("vtilde3_bound", cfg.nu_max or 1000)
        res = halfline_v0_difference(closed_scattering("v3"), closed_scattering("vtilde3"), (), bound,
                                     quad_policy=_quad_policy(cfg))
        v0 = res.v0_diff
    else:
        m = cfg.nu_max or 10000
        res = finite_interval_v0(closed_spectrum("v4", m), closed_spectrum("vtilde4", m), builtin("v4"))
        v0 = res.v0
    exact = EXAMPLE_EXACT[n]
    err = abs(v0 - exact)
    rec = res.to_dict()
    return {"example": n, "numeric_path": bool(numeric), "v0": v0, "exact": exact, "abs_error": err,
            "threshold": threshold, "passed": bool(err <= threshold), "error_estimate": rec["error_estimate"],
            "components": rec["components"], "solver_settings": rec["settings"],
            "wall_time_s": time.perf_counter() - t0}


def load_potential(spec: str) -> Potential:
    """Builtin name, JSON text, or path to a JSON file."""
    if spec in BUILTIN_CASES:
        return builtin(spec)
    text = spec
    if os.path.isfile(spec):
        with open(spec) as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"{spec!r} is neither a builtin potential ({', '.join(BUILTIN_CASES)}) "
                         "nor valid JSON") from None
    try:
        return Potential.from_dict(data)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def cmd_spectrum(cfg: RunConfig, potential: str, method: str = "auto"):
    nu_max = 10 if cfg.nu_max is None else cfg.nu_max
    columns = ("nu", "k", "parity", "kappa")
    if nu_max == 0:
        return columns, []
    closed = potential in ("v4", "vtilde4")
    if method == "closed" or (method == "auto" and closed):
        if not closed:
            raise UsageError(f"no closed-form spectrum for {potential!r}")
        spec = closed_spectrum(potential, nu_max)
    else:
        p = load_potential(potential)
        if not p.is_interval:
            raise UsageError("spectrum needs an interval potential")
        spec = shoot_spectrum(p, nu_max, tol=cfg.tol or SHOOT_TOL)
    rows = [(int(n), float(k), par, float(c)) for n, k, par, c in zip(spec.nu, spec.k, spec.parity, spec.kappa)]
    return columns, rows


def _grid(lo: float, hi: float, num: int) -> np.ndarray:
    if num < 0:
        raise UsageError("grid size must be non-negative")
    if num and not (0 < lo <= hi):
        raise UsageError("grid bounds must satisfy 0 < min <= max")
    return np.linspace(lo, hi, num) if num else np.empty(0)


def cmd_scatter(cfg: RunConfig, case: str, k_min: float, k_num: int, numeric: bool = False):
    columns = ("k", "sigma", "eta")
    ks = _grid(k_min, cfg.k_max if cfg.k_max is not None else 10.0, k_num)
    if numeric:
        if case not in ("v1", "vtilde1", "vtilde2", "vtilde3"):
            raise UsageError("numeric scattering is available for v1, vtilde1, vtilde2, vtilde3")
        if ks.size == 0:
            return columns, []
        hi = float(ks.max())
        data = numeric_scattering(builtin(case), k_range=(0.0, max(hi, 1e-3)), tol=cfg.tol or 1e-11)
    else:
        if case not in SIGMA_CASES:
            raise UsageError(f"unknown case {case!r}; choose from {', '.join(SIGMA_CASES)}")
        data = closed_scattering(case)
    rows = []
    for k in ks:
        try:
            eta = float(data.eta(k))
        except DomainError:
            eta = float("nan")
        rows.append((float(k), float(data.sigma(k)), eta))
    return columns, rows


def cmd_kernel(cfg: RunConfig, z_min: float, z_max: float, z_num: int, coeffs=None, spectra=None):
    columns = ("z", "K", "minus2K_over_z")
    zs = _grid(z_min, z_max, z_num)
    if spectra is None:
        v0, v2, v4 = coeffs
        e = pl_coeffs_even(v0, v2, v4)
        kd: Callable = lambda z: e.k_value(z, z)
    else:
        try:
            name, ring = spectra.split(":")
        except ValueError:
            raise UsageError("--spectra takes NAME:RING, e.g. v4:vtilde4") from None
        if (name, ring) != ("v4", "vtilde4") and name not in ("v4", "vtilde4"):
            raise UsageError("closed spectra are available for v4 and vtilde4 only")
        m = cfg.nu_max or 1600
        s, sr = closed_spectrum(name, m), closed_spectrum(ring, m)
        tm, tr = TailModel.from_potential(builtin(name)), TailModel.from_potential(builtin(ring))
        kd = lambda z: kernel_from_spectra(z, z, s, sr, tail=tm, tail_ring=tr).value
    rows = []
    for z in zs:
        k = float(kd(float(z)))
        rows.append((float(z), k, -2.0 * k / z))
    return columns, rows


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--nu-max", type=int, default=None, help="number of eigenvalues")
    p.add_argument("--k-max", type=float, default=None, help="upper k limit")
    p.add_argument("--tol", type=float, default=None, help="solver or quadrature tolerance")
    p.add_argument("--format", dest="fmt", choices=FORMATS, default=None, help="output format")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="singtrace", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("example", help="run worked example 1-4 and compare with the exact v0")
    p.add_argument("n", type=int)
    p.add_argument("--numeric", action="store_true", help="example 1: extract sigma by ODE integration")
    _common(p)

    p = sub.add_parser("spectrum", help="eigen-momenta and norms on [0, N]")
    p.add_argument("potential", help="builtin name, JSON text or JSON file")
    p.add_argument("--method", choices=("auto", "closed", "shoot"), default="auto")
    _common(p)

    p = sub.add_parser("scatter", help="sigma(k) and eta(k) tables")
    p.add_argument("case")
    p.add_argument("--k-min", type=float, default=0.1)
    p.add_argument("--k-num", type=int, default=50)
    p.add_argument("--numeric", action="store_true", help="fit sigma from ODE solutions")
    _common(p)

    p = sub.add_parser("kernel", help="diagonal kernel K(z, z) and -2 K/z")
    p.add_argument("--v0", type=float, default=0.0)
    p.add_argument("--v2", type=float, default=0.0)
    p.add_argument("--v4", type=float, default=0.0)
    p.add_argument("--spectra", default=None, help="NAME:RING, sums over the two spectra")
    p.add_argument("--z-min", type=float, default=0.01)
    p.add_argument("--z-max", type=float, default=0.05)
    p.add_argument("--z-num", type=int, default=5)
    _common(p)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    default_fmt = "json" if args.command == "example" else "csv"
    try:
        cfg = RunConfig(args.command, args.fmt or default_fmt, args.out, args.tol, args.nu_max, args.k_max)
        if args.command == "example":
            cfg.params.update(n=args.n, numeric=args.numeric)
            report = cmd_example(cfg, args.n, args.numeric)
            _emit(cfg, render_report(cfg, report))
            return EXIT_OK if report["passed"] else EXIT_THRESHOLD
        if args.command == "spectrum":
            cfg.params.update(potential=args.potential, method=args.method)
            cols, rows = cmd_spectrum(cfg, args.potential, args.method)
        elif args.command == "scatter":
            cfg.params.update(case=args.case, k_min=args.k_min, k_num=args.k_num, numeric=args.numeric)
            cols, rows = cmd_scatter(cfg, args.case, args.k_min, args.k_num, args.numeric)
        else:
            cfg.params.update(v0=args.v0, v2=args.v2, v4=args.v4, spectra=args.spectra,
                              z_min=args.z_min, z_max=args.z_max, z_num=args.z_num)
            cols, rows = cmd_kernel(cfg, args.z_min, args.z_max, args.z_num,
                                    (args.v0, args.v2, args.v4), args.spectra)
        _emit(cfg, render_table(cfg, cols, rows))
        return EXIT_OK
    except UsageError as exc:
        print(f"singtrace: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingTraceError, ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"singtrace: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))
