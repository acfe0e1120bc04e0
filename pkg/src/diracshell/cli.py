"""Command-line front end.

Every subcommand produces a table written as CSV (with ``#`` provenance
lines) or as a JSON object ``{config, rows, diagnostics}``. Output is fully
deterministic for a given configuration.

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import __version__, resonance, scattering, spectrum
from .interaction import (
    BoundaryCondition,
    ImpermeableError,
    Strengths,
    boundary_conditions_impermeable,
    delta_shell_wall,
    lambda_from_strengths,
    permeability,
)
from .specfun import SpecfunError
from .spectrum import PhysicalParams

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

CASE_CHOICES = ("general", "scalar", "electrostatic", "magnetic", "delta", "delta_prime")
# the strength flag driving each one-parameter shell
CASE_STRENGTH = {
    "scalar": "B",
    "electrostatic": "A0",
    "magnetic": "Atheta",
    "delta": "A0",
    "delta_prime": "A0",
}
CONFINED_CASES = {
    "magnetic-a0": lambda: boundary_conditions_impermeable(Strengths(Atheta=-2.0)),
    "magnetic-ainf": lambda: boundary_conditions_impermeable(Strengths(Atheta=2.0)),
    "scalar-plus": lambda: boundary_conditions_impermeable(Strengths(B=2.0)),
    "scalar-minus": lambda: boundary_conditions_impermeable(Strengths(B=-2.0)),
    "delta-inf": delta_shell_wall,
}


class UsageError(ValueError):
    pass


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


# ---------------------------------------------------------------- parsing


def parse_range(text: str, name: str = "range") -> np.ndarray:
    """``start:stop:count`` -> linspace (count >= 1)."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise UsageError(f"{name} must look like start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad {name} {text!r}: {exc}") from None
    if count < 1 or not (math.isfinite(start) and math.isfinite(stop)):
        raise UsageError(f"{name} needs finite bounds and count >= 1")
    return np.linspace(start, stop, count)


def parse_sweep(text: str) -> tuple[str | None, np.ndarray]:
    name = None
    if "=" in text:
        name, text = text.split("=", 1)
        name = name.strip()
    return name, parse_range(text, "sweep")


def parse_box(text: str) -> tuple[float, float, float, float]:
    try:
        x0, x1, y0, y1 = (float(v) for v in str(text).split(":"))
    except ValueError:
        raise UsageError(f"box must look like ReMin:ReMax:ImMin:ImMax, got {text!r}") from None
    if x1 < x0 or y1 < y0:
        raise UsageError("box bounds out of order")
    return x0, x1, y0, y1


def parse_resolution(text: str) -> tuple[int, int]:
    parts = str(text).split(":")
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad resolution {text!r}") from None
    if len(vals) == 1:
        vals = vals * 2
    if len(vals) != 2 or min(vals) < 2:
        raise UsageError("resolution must be N or NX:NY with N >= 2")
    return vals[0], vals[1]


def parse_ls(text) -> list[int]:
    try:
        ls = [int(v) for v in str(text).split(",") if v.strip() != ""]
    except ValueError:
        raise UsageError(f"l must be an integer or comma list, got {text!r}") from None
    if not ls or min(ls) < 0:
        raise UsageError("l must be >= 0")
    return ls


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key=value`` file; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for n, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{n}: expected key=value")
                k, v = line.split("=", 1)
                out[k.strip().lstrip("-").replace("-", "_")] = v.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    return out


def thread_count(requested: int | None) -> int:
    cap = os.environ.get("DIRAC_SHELL_THREADS")
    n = requested if requested else 1
    if cap:
        try:
            n = min(n, max(1, int(cap))) if requested else max(1, int(cap))
        except ValueError:
            raise UsageError("DIRAC_SHELL_THREADS must be an integer") from None
    return max(1, n)


# ---------------------------------------------------------------- helpers


def _params(ns, l: int | None = None) -> PhysicalParams:
    ls = parse_ls(ns.l)
    if l is None:
        if len(ls) != 1:
            raise UsageError("this command takes a single l")
        l = ls[0]
    try:
        return PhysicalParams(ns.m, ns.R, l)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _strength_name(ns) -> str | None:
    return CASE_STRENGTH.get(ns.case)


def _strengths(ns, value: float | None = None) -> Strengths:
    """Strengths for the configured case, optionally overriding the case strength."""
    vals = {k: getattr(ns, k) for k in ("B", "A0", "Ar", "Atheta")}
    name = _strength_name(ns)
    if name is not None and value is not None:
        vals[name] = value
    if ns.case == "delta":
        vals["B"] = vals["A0"]
    elif ns.case == "delta_prime":
        vals["B"] = -vals["A0"]
    elif ns.case in ("scalar", "electrostatic", "magnetic"):
        keep = {"scalar": ("B",), "electrostatic": ("A0",), "magnetic": ("Ar", "Atheta")}[ns.case]
        vals = {k: (v if k in keep else 0.0) for k, v in vals.items()}
    return Strengths(**vals)


def _schedule(ns) -> list[float | None]:
    """Strength values requested: a sweep, or the single configured value."""
    if not ns.sweep:
        return [None]
    name, values = parse_sweep(ns.sweep)
    expected = _strength_name(ns)
    if expected is None:
        raise UsageError("--sweep needs a one-parameter --case")
    if name is not None and name != expected:
        raise UsageError(f"case {ns.case} sweeps {expected}, not {name}")
    return [float(v) for v in values]


def _case_value(ns, value):
    name = _strength_name(ns)
    if value is not None:
        return value
    return getattr(ns, name) if name else math.nan


# ---------------------------------------------------------------- commands


def cmd_lambda(ns) -> Table:
    s = _strengths(ns)
    t = Table(["phi", "a", "b", "c", "d", "det", "permeable", "boundary"])
    if permeability(s):
        lam = lambda_from_strengths(s)
        t.rows.append([lam.phi, lam.a, lam.b, lam.c, lam.d, lam.det, 1, ""])
    else:
        bc = boundary_conditions_impermeable(s)
        nan = math.nan
        t.rows.append([nan, nan, nan, nan, nan, nan, 0, "impermeable: " + bc.describe()])
    return t


def cmd_bound(ns) -> Table:
    t = Table(["strength", "E_b", "l"])
    for l in parse_ls(ns.l):
        params = _params(ns, l)
        for v in _schedule(ns):
            s = _strengths(ns, v)
            if not permeability(s):
                t.diagnostics.append(f"l={l} strength {_case_value(ns, v):.15g}: impermeable, skipped")
                continue
            lam = lambda_from_strengths(s)
            for b in spectrum.bound_states(params, lam, tol=ns.tol or 1e-11):
                t.rows.append([_case_value(ns, v), b.E, l])
    return t


def _critical_table(case: str, params: PhysicalParams) -> list[tuple[str, float]]:
    mR, l = params.m * params.R, params.l
    if case == "scalar":
        return [("critical", v) for v in spectrum.scalar_critical_strengths(params)] + [
            ("supercritical", v) for v in spectrum.scalar_supercritical_strengths(params)
        ]
    if case == "electrostatic":
        return [("critical", v) for v in spectrum.electro_critical_strengths(params)] + [
            ("supercritical", v) for v in spectrum.electro_supercritical_strengths(params)
        ]
    if case == "delta":
        # residual 2 A0 + l/(mR); no supercritical states
        return [("critical", -l / (2 * mR))] if l > 0 else []
    if case == "delta_prime":
        # residual -2 A0 + (l+1)/(mR); no critical states
        return [("supercritical", (l + 1) / (2 * mR))]
    if case == "magnetic":
        return []
    raise UsageError("critical needs --case scalar|electrostatic|magnetic|delta|delta_prime")


def cmd_critical(ns) -> Table:
    t = Table(["l", "threshold", "strength", "exists"])
    for l in parse_ls(ns.l):
        params = _params(ns, l)
        found = {"critical": [], "supercritical": []}
        for kind, v in _critical_table(ns.case, params):
            found[kind].append(v)
        for kind in ("critical", "supercritical"):
            if found[kind]:
                t.rows.extend([l, kind, v, 1] for v in found[kind])
            else:
                t.rows.append([l, kind, math.nan, 0])
    return t


def cmd_confined(ns) -> Table:
    if ns.case not in CONFINED_CASES:
        raise UsageError(f"confined needs --case one of {sorted(CONFINED_CASES)}")
    if ns.emax is None:
        raise UsageError("confined needs --emax")
    bc: BoundaryCondition = CONFINED_CASES[ns.case]()
    params = _params(ns)
    t = Table(["branch", "k", "E"])
    t.diagnostics.append(bc.describe())
    for branch in ("particle", "antiparticle"):
        levels = spectrum.confined_spectrum(bc, params, ns.emax, branch)
        t.rows.extend([branch, k, E] for k, E in enumerate(levels, 1))
    return t


def _family_or_none(ns):
    if ns.case in CASE_STRENGTH and not (ns.case == "magnetic" and ns.Ar != 0.0):
        return resonance.family(ns.case)
    return None


def cmd_resonances(ns) -> Table:
    params = _params(ns)
    box = parse_box(ns.box)
    res = parse_resolution(ns.resolution)
    t = Table(["strength", "E_R", "E_I", "class"])
    fam = _family_or_none(ns)
    locus = None
    if fam is not None and box[1] > box[0]:
        locus = resonance.trace_locus(fam, params, box, res)
    for v in _schedule(ns):
        s = _strengths(ns, v)
        if not permeability(s):
            t.diagnostics.append(f"strength {_case_value(ns, v):.15g}: impermeable, skipped")
            continue
        val = _case_value(ns, v)
        kw = dict(tol=ns.tol or resonance.ROOT_TOL, diagnostics=t.diagnostics)
        if fam is not None:
            if locus is None:
                continue
            roots = resonance.find_resonances(fam, params, val, box, resolution=res, locus=locus, **kw)
        else:
            if box[1] <= box[0]:
                continue
            roots = resonance.find_resonances(lambda_from_strengths(s), params, box=box, **kw)
        t.rows.extend([val, r.E_R, r.E_I, r.kind] for r in roots)
    return t


def cmd_locus(ns) -> Table:
    fam = _family_or_none(ns)
    if fam is None:
        raise UsageError("locus needs --case scalar|electrostatic|magnetic|delta|delta_prime")
    params = _params(ns)
    box = parse_box(ns.box)
    t = Table(["branch", "E_R", "E_I"])
    if box[1] <= box[0] or box[3] <= box[2]:
        return t
    loc = resonance.trace_locus(fam, params, box, parse_resolution(ns.resolution))
    for k, br in enumerate(loc.branches):
        t.rows.extend([k, e.real, e.imag] for e in br)
    return t


def _energy_grids(text: str, m: float) -> list[np.ndarray]:
    grids = []
    for part in str(text).split(","):
        E = parse_range(part, "--E")
        if np.any(np.abs(E) <= m):
            raise UsageError(f"energy grid {part!r} intersects [-m, m]")
        if not (np.all(E > m) or np.all(E < -m)):
            raise UsageError(f"energy grid {part!r} straddles the gap")
        grids.append(E)
    return grids


def cmd_timedelay(ns) -> Table:
    params = _params(ns)
    if not ns.E:
        raise UsageError("timedelay needs --E start:stop:count")
    grids = _energy_grids(ns.E, params.m)
    method = {"fd": "finite_difference"}.get(ns.method, ns.method)
    workers = thread_count(ns.threads)
    t = Table(["strength", "E", "tan_delta", "delta", "tau", "res_E_R", "res_scale"])
    fam = _family_or_none(ns)
    lo = min(float(g.min()) for g in grids)
    hi = max(float(g.max()) for g in grids)
    box = (lo - 1.0, hi + 1.0, -3.0, 0.0)
    locus = None
    if ns.overlay and fam is not None:
        locus = resonance.trace_locus(fam, params, box, (241, 61))
    for v in _schedule(ns):
        s = _strengths(ns, v)
        if not permeability(s):
            t.diagnostics.append(f"strength {_case_value(ns, v):.15g}: impermeable, skipped")
            continue
        lam = lambda_from_strengths(s)
        val = _case_value(ns, v)
        sharp = []
        if ns.overlay:
            if fam is not None:
                roots = resonance.find_resonances(fam, params, val, box, locus=locus, diagnostics=t.diagnostics)
            else:
                roots = resonance.find_resonances(lam, params, box=box, diagnostics=t.diagnostics)
            sharp = [r for r in roots if r.kind == "resonance" and abs(r.E_R) > params.m]
        for grid in grids:
            for pt in scattering.phase_shift_scan(params, lam, grid, method=method, workers=workers):
                near = min(sharp, key=lambda r: abs(r.E_R - pt.E), default=None)
                rE, rs = (near.E_R, near.lifetime_scale) if near else (math.nan, math.nan)
                t.rows.append([val, pt.E, pt.tan_delta, pt.delta, pt.tau, rE, rs])
    return t


# ---------------------------------------------------------------- figures


def _ns(**kw) -> argparse.Namespace:
    base = dict(
        m=2.0, R=1.0, l="0", case="general", B=0.0, A0=0.0, Ar=0.0, Atheta=0.0,
        sweep=None, box="-12:12:-3:0", resolution="241:61", E=None, method="analytic",
        overlay=False, tol=None, threads=None, emax=None,
    )
    base.update(kw)
    return argparse.Namespace(**base)


def _resonance_figure(case: str, l: int, values: Sequence[float], box: str) -> Table:
    ns = _ns(case=case, l=str(l), box=box)
    params = _params(ns)
    bx = parse_box(box)
    res = parse_resolution(ns.resolution)
    fam = resonance.family(case)
    loc = resonance.trace_locus(fam, params, bx, res)
    t = Table(["series", "branch", "strength", "E_R", "E_I", "class"])
    for k, br in enumerate(loc.branches):
        t.rows.extend(["locus", k, math.nan, e.real, e.imag, "locus"] for e in br)
    for v in values:
        if not permeability(fam.strengths(v)):
            t.diagnostics.append(f"strength {v:.15g}: impermeable, skipped")
            continue
        roots = resonance.find_resonances(fam, params, v, bx, resolution=res, locus=loc, diagnostics=t.diagnostics)
        t.rows.extend(["root", -1, v, r.E_R, r.E_I, r.kind] for r in roots)
    return t


def _timedelay_figure(case: str, l: int, values: Sequence[float]) -> Table:
    name = CASE_STRENGTH[case]
    t = Table([])
    for v in values:
        sub = cmd_timedelay(_ns(case=case, l=str(l), E="-12:-2.001:2000,2.001:12:2000", overlay=True, **{name: v}))
        t.columns = sub.columns
        t.rows += sub.rows
        t.diagnostics += sub.diagnostics
    return t


def _magnetic_atheta(a: float) -> float:
    return 2.0 * (a - 1.0) / (a + 1.0)


def _bound_figure(case: str, ls: str, sweep: str) -> Table:
    return cmd_bound(_ns(case=case, l=ls, sweep=sweep))


FIGURES: dict[int, tuple[str, Callable[[], Table]]] = {
    1: ("scalar bound states, l=0..3", lambda: _bound_figure("scalar", "0,1,2,3", "B=-6:6:481")),
    2: (
        "scalar resonances and locus, l=1",
        lambda: _resonance_figure(
            "scalar", 1, [-1.9, -1.5, -1.0, -0.5358983848622454, -0.25, 0.25, 0.5, 1.0, 1.5, 1.9], "-6:6:-2:0"
        ),
    ),
    3: ("scalar time delay, l=1", lambda: _timedelay_figure("scalar", 1, [-1.9, -1.0, 1.0, 1.9])),
    4: ("electrostatic bound states, l=0..2", lambda: _bound_figure("electrostatic", "0,1,2", "A0=-8:8:641")),
    5: (
        "electrostatic resonances and locus, l=2",
        lambda: _resonance_figure(
            "electrostatic", 2, [0.25, 0.5, 1.0, 1.0703675169759927, 2.0, 3.0, 4.0, 4.82842712474619, 6.0, 8.0],
            "-12:12:-3:0",
        ),
    ),
    6: (
        "magnetic resonances and locus, l=4",
        lambda: _resonance_figure(
            "magnetic", 4, [_magnetic_atheta(a) for a in (1e-3, 0.25, 0.5, 2.0, 4.0, 1e3)], "-12:12:-3:0"
        ),
    ),
    7: ("delta-shell bound states, l=0..2", lambda: _bound_figure("delta", "0,1,2", "A0=-4:0:401")),
    8: (
        "delta-shell resonances and locus, l=2",
        lambda: _resonance_figure(
            "delta", 2, [-4.0, -2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0, 4.0], "-12:12:-3:0"
        ),
    ),
    9: ("delta-shell time delay, l=2", lambda: _timedelay_figure("delta", 2, [-4.0, -2.0, -1.0, 4.0])),
}


def cmd_figure(ns) -> Table:
    number = ns.number if ns.number is not None else ns.figure
    if number not in FIGURES:
        raise UsageError(f"figure must be one of {sorted(FIGURES)}")
    return FIGURES[number][1]()


# ---------------------------------------------------------------- output


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.15g}" if v != 0 else "0"
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return fmt(v)
        return float(fmt(v))
    if isinstance(v, (np.integer, bool)):
        return int(v)
    return v


def render(table: Table, config: dict, fmt_name: str) -> str:
    if fmt_name == "json":
        obj = {
            "config": config,
            "rows": [dict(zip(table.columns, map(_json_value, r))) for r in table.rows],
            "diagnostics": table.diagnostics,
        }
        return json.dumps(obj, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write(f"# diracshell {__version__}\n")
    for k in sorted(config):
        buf.write(f"# {k}={config[k]}\n")
    for d in table.diagnostics:
        buf.write(f"# diagnostic: {d}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


# ---------------------------------------------------------------- argparse

COMMANDS = {
    "lambda": cmd_lambda,
    "bound": cmd_bound,
    "critical": cmd_critical,
    "confined": cmd_confined,
    "resonances": cmd_resonances,
    "locus": cmd_locus,
    "timedelay": cmd_timedelay,
    "figure": cmd_figure,
}


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("common")
    g.add_argument("--m", type=float, default=1.0, help="mass (default 1)")
    g.add_argument("--R", type=float, default=1.0, help="shell radius (default 1)")
    g.add_argument("--l", default="0", help="orbital index, or comma list where accepted")
    g.add_argument("--out", default="-", help="output path, '-' for stdout")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--tol", type=float, default=None, help="root tolerance override")
    g.add_argument("--threads", type=int, default=None, help="worker threads for scans")
    g.add_argument("--config", default=None, help="key=value file; command-line flags win")


def _strength_flags(p: argparse.ArgumentParser, cases: Sequence[str] = CASE_CHOICES) -> None:
    p.add_argument("--case", choices=list(cases), default=cases[0])
    for name in ("B", "A0", "Ar", "Atheta"):
        p.add_argument(f"--{name}", type=float, default=0.0)
    p.add_argument("--sweep", default=None, help="NAME=start:stop:count over the case strength")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracshell",
        description="Spectra, resonances and time delays of a Dirac particle with a contact shell.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lambda", help="matching matrix for given strengths")
    _common(p)
    _strength_flags(p)

    p = sub.add_parser("bound", help="bound-state energies")
    _common(p)
    _strength_flags(p)

    p = sub.add_parser("critical", help="closed-form threshold strengths")
    _common(p)
    p.add_argument("--case", choices=[c for c in CASE_CHOICES if c != "general"], default=None)

    p = sub.add_parser("confined", help="levels inside an impermeable circle")
    _common(p)
    p.add_argument("--case", choices=sorted(CONFINED_CASES), default=None)
    p.add_argument("--emax", type=float, default=None)

    for name, hlp in (("resonances", "complex-energy roots"), ("locus", "strength-independent locus")):
        p = sub.add_parser(name, help=hlp)
        _common(p)
        _strength_flags(p)
        p.add_argument("--box", default="-12:12:-3:0", help="ReMin:ReMax:ImMin:ImMax")
        p.add_argument("--resolution", default="241:61", help="N or NX:NY grid samples")

    p = sub.add_parser("timedelay", help="phase shift and Wigner time delay")
    _common(p)
    _strength_flags(p)
    p.add_argument("--E", default=None, help="start:stop:count, several separated by commas")
    p.add_argument("--method", choices=("analytic", "finite_difference", "fd"), default="analytic")
    p.add_argument("--overlay", action="store_true", help="add nearest resonance (E_R, -1/E_I) columns")

    p = sub.add_parser("figure", help="emit the data of a figure preset")
    _common(p)
    p.add_argument("number", nargs="?", type=int, default=None)
    p.add_argument("--figure", type=int, default=None)
    return parser


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--box -6:6:-2:0`` into ``--box=-6:6:-2:0`` so argparse keeps the value."""
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and tok[:1] == "-" and (tok[1:2].isdigit() or tok[1:2] == "."):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def parse(argv: Sequence[str] | None) -> argparse.Namespace:
    parser = build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    ns = parser.parse_args(argv)
    if ns.config:
        values = read_config_file(ns.config)
        sub = parser._subparsers._group_actions[0].choices[ns.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(values) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        sub.set_defaults(**values)
        ns = parser.parse_args(argv)
        # defaults taken from the file bypass argparse's choices check
        for action in sub._actions:
            value = getattr(ns, action.dest, None)
            if action.choices is not None and value is not None and value not in action.choices:
                raise UsageError(f"config value {action.dest}={value!r} not in {sorted(action.choices)}")
    if ns.command in ("critical", "confined") and ns.case is None:
        raise UsageError(f"{ns.command} needs --case")
    return ns


def _validate(ns) -> None:
    if not (ns.m > 0 and math.isfinite(ns.m)):
        raise UsageError("--m must be positive")
    if not (ns.R > 0 and math.isfinite(ns.R)):
        raise UsageError("--R must be positive")
    parse_ls(ns.l)
    if ns.tol is not None and not ns.tol > 0:
        raise UsageError("--tol must be positive")


def _config_echo(ns) -> dict:
    out = {}
    for k, v in sorted(vars(ns).items()):
        if k in ("out", "config") or v is None:
            continue
        out[k] = fmt(v) if isinstance(v, float) else v
    return out


def main(argv: Sequence[str] | None = None) -> int:
    try:
        ns = parse(argv)
        _validate(ns)
        table = COMMANDS[ns.command](ns)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except (UsageError, ImpermeableError) as exc:
        print(f"diracshell: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, SpecfunError, RuntimeError) as exc:
        print(f"diracshell: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"diracshell: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = render(table, _config_echo(ns), ns.format)
    if ns.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(ns.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
