"""Complex-energy resonances, strength-independent loci and strength continuation.

Resonances are zeros of the purely outgoing secular function continued to
complex ``E = E_R + i E_I`` with ``E_I < 0`` and ``p = sqrt(E-m) sqrt(E+m)``
on principal branches. For the five named shells the secular condition
separates as ``f(E) = g(strength)`` with ``g`` real, so the locus
``Im f(E) = 0`` does not depend on the strength and every root sits on it.

Shorthands used throughout, with ``z = pR``::

    IK_n(E) = (i pi / 2) J_n(z) H1_n(z)      (= I_n(qR) K_n(qR) in the gap)
    P = R (E + m) IK_l,   Q = R (E - m) IK_{l+1}
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal, Sequence

import numpy as np
from scipy import optimize

from . import specfun
from .interaction import LambdaParams, Strengths, canonical_case, lambda_from_strengths, permeability
from .spectrum import (
    PhysicalParams,
    bound_states,
    critical_residual,
    supercritical_residual,
)

__all__ = [
    "ComplexEnergy",
    "ResonanceFamily",
    "LocusCurve",
    "Trajectory",
    "ThresholdEvent",
    "Continuation",
    "family",
    "outgoing_residual",
    "trace_locus",
    "find_resonances",
    "continuation",
    "THRESHOLD_TOL",
]

log = logging.getLogger(__name__)

Kind = Literal["resonance", "bound", "critical", "supercritical"]

# |closed-form threshold residual| below which a threshold state is reported
THRESHOLD_TOL = 1e-6
ROOT_TOL = 1e-9
DEFLATION = 1e-6
LOCUS_TOL = 1e-8
MAX_NEWTON = 200
# highest Im E sampled; the real axis itself carries the cuts
BOX_TOP = -1e-12


@dataclass(frozen=True)
class ComplexEnergy:
    E_R: float
    E_I: float
    kind: Kind = "resonance"
    residual: float = 0.0

    def __post_init__(self):
        if self.E_I > 1e-12:
            raise ValueError(f"E_I must be <= 0 (decaying), got {self.E_I!r}")

    @property
    def E(self) -> complex:
        return complex(self.E_R, self.E_I)

    @property
    def lifetime_scale(self) -> float:
        """-1/E_I, infinite for real roots."""
        return math.inf if self.E_I == 0 else -1.0 / self.E_I


def _momenta(E, m: float) -> np.ndarray:
    """Principal-branch momenta; real energies get the physical lips."""
    E = np.asarray(E, dtype=complex)
    p = np.sqrt(E - m) * np.sqrt(E + m)
    below = (E.imag == 0) & (E.real < -m)
    if np.any(below):
        p = np.array(p, dtype=complex, copy=True)
        p.imag[below] = -0.0
    return p


def _ik(n: int, p, R: float):
    z = p * R
    return 0.5j * math.pi * specfun.bessel_j(n, z) * specfun.hankel(1, n, z)


def _PQ(E, params: PhysicalParams):
    m, R, l = params.m, params.R, params.l
    E = np.asarray(E, dtype=complex)
    p = _momenta(E, m)
    return R * (E + m) * _ik(l, p, R), R * (E - m) * _ik(l + 1, p, R)


def outgoing_residual(E, params: PhysicalParams, lam: LambdaParams):
    """Purely outgoing secular function; vanishes at bound states and resonances.

    Normalised so that the free matching matrix gives ``1/R`` and real gap
    energies reproduce the modified-Bessel bound-state residual.
    """
    m, R, l = params.m, params.R, params.l
    if isinstance(E, ComplexEnergy):
        E = E.E
    Ea = np.asarray(E, dtype=complex)
    p = _momenta(Ea, m)
    z = p * R
    J0, J1 = specfun.bessel_j(l, z), specfun.bessel_j(l + 1, z)
    H0, H1 = specfun.hankel(1, l, z), specfun.hankel(1, l + 1, z)
    # far Newton probes may overflow the products; the caller rejects those iterates
    with np.errstate(over="ignore", invalid="ignore"):
        P = R * (Ea + m) * 0.5j * math.pi * J0 * H0
        Q = R * (Ea - m) * 0.5j * math.pi * J1 * H1
        out = (lam.c * P - lam.b * Q) / R + 0.5j * math.pi * p * (lam.a * H1 * J0 - lam.d * H0 * J1)
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class ResonanceFamily:
    """Secular condition of a one-parameter shell written as ``f(E) = g(strength)``."""

    case: str
    f: Callable
    g: Callable[[float], float]
    strengths: Callable[[float], Strengths]

    def lam(self, strength: float) -> LambdaParams:
        return lambda_from_strengths(self.strengths(strength))

    def residual(self, E, params: PhysicalParams, strength: float):
        return self.f(E, params) - self.g(strength)


def _f_scalar(E, params):
    P, Q = _PQ(E, params)
    return Q - P


def _f_electro(E, params):
    P, Q = _PQ(E, params)
    return -(P + Q)


def _f_delta(E, params):
    return _PQ(E, params)[0]


def _f_deltaprime(E, params):
    return _PQ(E, params)[1]


def _f_magnetic(E, params):
    # w = H_l J_{l+1} / (H_{l+1} J_l) = a^2 at the roots; the real Moebius map
    # (w - 1)/(w + 1) keeps the locus and stays finite where w has poles
    m, R, l = params.m, params.R, params.l
    z = _momenta(E, m) * R
    num = specfun.hankel(1, l, z) * specfun.bessel_j(l + 1, z)
    den = specfun.hankel(1, l + 1, z) * specfun.bessel_j(l, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (num - den) / (num + den)


def _safe_div(num, den):
    return math.copysign(math.inf, num) if den == 0 else num / den


def _magnetic_g(At: float) -> float:
    # (a^2 - 1)/(a^2 + 1) with a = (2 + At)/(2 - At)
    return 4.0 * At / (4.0 + At * At)


_FAMILIES = {
    "scalar": (_f_scalar, lambda B: _safe_div(4.0 + B * B, 4.0 * B), lambda s: canonical_case("scalar", s)),
    "electrostatic": (
        _f_electro,
        lambda A0: _safe_div(4.0 - A0 * A0, 4.0 * A0),
        lambda s: canonical_case("electrostatic", s),
    ),
    "delta": (_f_delta, lambda A0: _safe_div(-1.0, 2.0 * A0), lambda s: canonical_case("delta", s)),
    "delta_prime": (
        _f_deltaprime,
        lambda A0: _safe_div(-1.0, 2.0 * A0),
        lambda s: canonical_case("delta_prime", s),
    ),
    # strength is Atheta with Ar = 0
    "magnetic": (
        _f_magnetic,
        _magnetic_g,
        # Atheta = 0 (a = 1) is the free point inside a sweep
        lambda s: Strengths(Atheta=float(s)),
    ),
}


def family(case: str) -> ResonanceFamily:
    """The separated secular condition of a named shell.

    The magnetic family is parametrised by ``Atheta`` in (-2, 2) with ``Ar = 0``.
    """
    if case not in _FAMILIES:
        raise ValueError(f"no resonance family for {case!r}; expected one of {sorted(_FAMILIES)}")
    f, g, s = _FAMILIES[case]
    return ResonanceFamily(case, f, g, s)


@dataclass(frozen=True)
class LocusCurve:
    """Polylines of ``Im f(E) = 0`` with ``Re f`` stored at each point.

    ``rim`` keeps the samples ``(E, f(E))`` of the top row of the box, used to
    seed roots lying closer to the real axis than the grid can resolve.
    """

    branches: tuple[np.ndarray, ...]
    values: tuple[np.ndarray, ...]
    rim: tuple[np.ndarray, np.ndarray] = (np.empty(0, complex), np.empty(0, complex))

    @property
    def points(self) -> list[ComplexEnergy]:
        return [ComplexEnergy(float(e.real), float(min(e.imag, 0.0))) for br in self.branches for e in br]

    def __len__(self) -> int:
        return sum(len(b) for b in self.branches)


def _box(box) -> tuple[float, float, float, float]:
    x0, x1, y0, y1 = (float(v) for v in box)
    if x1 < x0 or y1 < y0:
        raise ValueError(f"box bounds out of order: {box!r}")
    return x0, x1, y0, min(y1, BOX_TOP)


def _resolution(resolution) -> tuple[int, int]:
    if isinstance(resolution, Iterable):
        nx, ny = resolution
    else:
        nx = ny = resolution
    nx, ny = int(nx), int(ny)
    if nx < 2 or ny < 2:
        raise ValueError("resolution needs at least 2 samples per axis")
    return nx, ny


def trace_locus(
    fam: ResonanceFamily,
    params: PhysicalParams,
    box,
    resolution=(241, 61),
) -> LocusCurve:
    """Marching-squares contour of ``Im f = 0`` over ``box = (ReE0, ReE1, ImE0, ImE1)``.

    Cell-edge crossings are located with Brent's method along the edge and
    kept only where ``|Im f| <= 1e-8``, which discards sign changes through
    poles of ``f``. The top of the box is clamped just below the real axis.
    """
    x0, x1, y0, y1 = _box(box)
    if x1 == x0 or y1 <= y0:
        return LocusCurve((), ())
    nx, ny = _resolution(resolution)
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    F = fam.f(X + 1j * Y, params)
    V = np.where(np.isfinite(F), F.imag, np.nan)

    def im_f(E):
        return float(np.imag(fam.f(E, params)))

    cache: dict = {}

    def edge_point(key):
        if key in cache:
            return cache[key]
        (i0, j0), (i1, j1) = key
        e0, e1 = complex(xs[i0], ys[j0]), complex(xs[i1], ys[j1])
        v0, v1 = V[i0, j0], V[i1, j1]
        pt = None
        if v0 == 0:
            pt = e0
        elif v1 == 0:
            pt = e1
        else:
            t = optimize.brentq(lambda s: im_f(e0 + s * (e1 - e0)), 0.0, 1.0, xtol=1e-14)
            pt = e0 + t * (e1 - e0)
        fv = complex(fam.f(pt, params))
        ok = math.isfinite(fv.real) and abs(fv.imag) <= LOCUS_TOL
        cache[key] = (pt, fv.real) if ok else None
        return cache[key]

    def crosses(a, b):
        va, vb = V[a], V[b]
        if np.isnan(va) or np.isnan(vb):
            return False
        return (va < 0) != (vb < 0)

    segments = []
    for i in range(nx - 1):
        for j in range(ny - 1):
            corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            edges = []
            for k in range(4):
                a, b = corners[k], corners[(k + 1) % 4]
                if crosses(a, b):
                    edges.append(tuple(sorted((a, b))))
            if len(edges) == 2:
                segments.append((edges[0], edges[1]))
            elif len(edges) == 4:
                # saddle: pair edges according to the sign at the cell centre
                centre = complex(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]))
                vc = im_f(centre)
                if (vc < 0) == (V[corners[0]] < 0):
                    segments += [(edges[0], edges[1]), (edges[2], edges[3])]
                else:
                    segments += [(edges[0], edges[3]), (edges[1], edges[2])]

    adjacency: dict = {}
    for a, b in segments:
        if edge_point(a) is None or edge_point(b) is None:
            continue
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)

    branches, values = [], []
    seen = set()
    # open chains first (start at degree-one nodes), then closed loops
    starts = sorted(adjacency, key=lambda k: (len(adjacency[k]) != 1, k))
    for start in starts:
        if start in seen:
            continue
        chain = [start]
        seen.add(start)
        cur = start
        while True:
            nxt = next((n for n in adjacency[cur] if n not in seen), None)
            if nxt is None:
                break
            chain.append(nxt)
            seen.add(nxt)
            cur = nxt
        pts = [edge_point(k) for k in chain]
        branches.append(np.array([p[0] for p in pts], dtype=complex))
        values.append(np.array([p[1] for p in pts], dtype=float))
    rim = (X[:, -1] + 1j * Y[:, -1], F[:, -1])
    return LocusCurve(tuple(branches), tuple(values), rim)


def _newton(F, E0: complex, tol: float, max_iter: int = MAX_NEWTON):
    """Damped complex Newton with a central-difference derivative.

    Iterates are kept in the lower half-plane. Returns ``(E, |F(E)|, converged)``.
    """
    E = complex(E0)
    fE = F(E)
    for _ in range(max_iter):
        if not np.isfinite(fE):
            return E, math.inf, False
        if abs(fE) <= 1e-3 * tol:
            return E, abs(fE), True
        h = 1e-7 * max(1.0, abs(E))
        d = (F(E + h) - F(E - h)) / (2 * h)
        if d == 0 or not np.isfinite(d):
            return E, abs(fE), False
        step = -fE / d
        lam = 1.0
        for _ in range(30):
            Enew = E + lam * step
            if Enew.imag > 0:
                Enew = complex(Enew.real, 0.5 * E.imag)
            try:
                fnew = F(Enew)
            except (specfun.SpecfunError, ZeroDivisionError):
                fnew = complex(math.nan)
            if np.isfinite(fnew) and abs(fnew) < abs(fE):
                break
            lam *= 0.5
        else:
            return E, abs(fE), abs(fE) <= tol
        small = abs(Enew - E) <= 1e-14 * max(1.0, abs(E))
        E, fE = Enew, fnew
        if small:
            return E, abs(fE), abs(fE) <= tol
    return E, abs(fE), abs(fE) <= tol


def _threshold_roots(params: PhysicalParams, lam: LambdaParams, tol: float) -> list[ComplexEnergy]:
    out = []
    rc = critical_residual(params, lam)
    if abs(rc) <= tol:
        out.append(ComplexEnergy(params.m, 0.0, "critical", abs(rc)))
    rs = supercritical_residual(params, lam)
    if abs(rs) <= tol:
        out.append(ComplexEnergy(-params.m, 0.0, "supercritical", abs(rs)))
    return out


def _assemble(
    candidates: Sequence[ComplexEnergy],
    params: PhysicalParams,
    lam: LambdaParams,
    threshold_tol: float,
) -> list[ComplexEnergy]:
    m = params.m
    roots: list[ComplexEnergy] = []
    for r in _threshold_roots(params, lam, threshold_tol):
        roots.append(r)
    for b in bound_states(params, lam):
        if all(abs(b.E - r.E_R) > DEFLATION or r.E_I != 0 for r in roots):
            roots.append(ComplexEnergy(b.E, 0.0, "bound", abs(b.residual)))
    for c in candidates:
        # real-axis roots in the gap come from the real solver; Newton only
        # reaches them from the unphysical side of the cut
        if abs(c.E_R) < m and abs(c.E_I) <= 1e-8 * m:
            continue
        if abs(c.E_R - m) <= ROOT_TOL or abs(c.E_R + m) <= ROOT_TOL:
            if abs(c.E_I) <= ROOT_TOL:
                continue
        if any(abs(c.E - r.E) < DEFLATION for r in roots):
            continue
        roots.append(c)
    roots.sort(key=lambda r: (r.E_R, r.E_I))
    return roots


def find_resonances(
    target: ResonanceFamily | LambdaParams,
    params: PhysicalParams,
    strength: float | None = None,
    box=(-12.0, 12.0, -3.0, 0.0),
    seeds: Sequence[complex] | None = None,
    resolution=(241, 61),
    locus: LocusCurve | None = None,
    tol: float = ROOT_TOL,
    threshold_tol: float = THRESHOLD_TOL,
    diagnostics: list[str] | None = None,
) -> list[ComplexEnergy]:
    """Bound, threshold and resonant roots, sorted by ``(E_R, E_I)``.

    Family mode (``target`` a :class:`ResonanceFamily`, ``strength`` given)
    brackets ``Re f = g(strength)`` along the traced locus and polishes with
    Newton; a precomputed ``locus`` can be passed to skip tracing. General
    mode (``target`` a :class:`LambdaParams`) runs damped Newton on the
    outgoing residual from ``seeds`` or a seed grid over the box.
    Bound states always come from the real-axis solver; threshold states are
    reported when the closed-form residual is below ``threshold_tol``.
    """
    diag = diagnostics if diagnostics is not None else []
    candidates: list[ComplexEnergy] = []
    x0, x1, y0, y1 = _box(box)

    def inside(E):
        pad = 1e-9 * max(1.0, abs(E))
        return x0 - pad <= E.real <= x1 + pad and y0 - pad <= E.imag <= 0.0

    if isinstance(target, ResonanceFamily):
        if strength is None:
            raise ValueError("family mode needs a strength value")
        s = target.strengths(strength)
        lam = lambda_from_strengths(s)
        g = target.g(strength)
        if not math.isfinite(g):
            return _assemble([], params, lam, threshold_tol)
        if locus is None:
            locus = trace_locus(target, params, box, resolution)
        # polish on the pole-free outgoing residual; f itself may have poles
        ftol = tol * max(1.0, abs(lam.a) + abs(lam.b) + abs(lam.c) + abs(lam.d))

        def F(E):
            return outgoing_residual(E, params, lam)

        for br, vals in zip(locus.branches, locus.values):
            h = vals - g
            for k in range(len(br) - 1):
                if h[k] == 0 or h[k] * h[k + 1] < 0:
                    t = 0.0 if h[k] == 0 else h[k] / (h[k] - h[k + 1])
                    E0 = br[k] + t * (br[k + 1] - br[k])
                    _polish(F, E0, ftol, inside, candidates, diag)
        # roots hugging the real axis outside the gap, where the locus may only touch it
        rim_E, rim_f = locus.rim
        if rim_E.size > 2:
            dist = np.abs(rim_f - g)
            m = params.m
            for k in range(1, rim_E.size - 1):
                if abs(rim_E[k].real) > m and dist[k] <= dist[k - 1] and dist[k] < dist[k + 1]:
                    _polish(F, rim_E[k], ftol, inside, candidates, None)
    else:
        lam = target
        scale = max(1.0, abs(lam.a) + abs(lam.b) + abs(lam.c) + abs(lam.d))
        ftol = tol * scale
        if seeds is None:
            seeds = [complex(x, y) for x in np.linspace(x0, x1, 25) for y in np.linspace(y0, y1, 6)]

        def F(E):
            return outgoing_residual(E, params, lam)

        for E0 in seeds:
            _polish(F, complex(E0), ftol, inside, candidates, diag)

    return _assemble(candidates, params, lam, threshold_tol)


def _polish(F, E0, ftol, inside, out, diag):
    """Newton from one seed; failures are logged to ``diag`` unless it is None."""
    try:
        E, res, ok = _newton(F, E0, ftol)
    except (specfun.SpecfunError, ZeroDivisionError) as exc:
        if diag is not None:
            diag.append(f"seed {E0:.6g}: {exc}")
        return
    if not ok:
        if diag is not None:
            diag.append(f"seed {E0:.6g}: no convergence (|F|={res:.2e})")
        log.debug("seed %s skipped: |F|=%g", E0, res)
        return
    if not inside(E):
        return
    c = ComplexEnergy(float(E.real), float(min(E.imag, 0.0)), "resonance", float(res))
    if all(abs(c.E - o.E) >= DEFLATION for o in out):
        out.append(c)


@dataclass
class Trajectory:
    """One root followed across the strength schedule."""

    strengths: list[float] = field(default_factory=list)
    energies: list[ComplexEnergy] = field(default_factory=list)
    merged: bool = False


@dataclass(frozen=True)
class ThresholdEvent:
    strength: float
    threshold: Literal["critical", "supercritical"]
    kind: Literal["capture", "emission", "touch"]
    residual: float


@dataclass
class Continuation:
    strengths: list[float]
    trajectories: list[Trajectory]
    events: list[ThresholdEvent]
    bound_counts: list[int]
    diagnostics: list[str]


def continuation(
    case: str | ResonanceFamily,
    strengths: Sequence[float],
    params: PhysicalParams,
    box=(-12.0, 12.0, -3.0, 0.0),
    resolution=(241, 61),
    track: bool = True,
) -> Continuation:
    """Follow roots along a monotone strength schedule and detect threshold crossings.

    A threshold event is a sign change of the closed-form critical or
    supercritical residual between consecutive strengths, refined with
    Brent's method. It is a capture when the bound-state count grows across
    it and an emission when it drops. Impermeable strengths are skipped.
    """
    fam = family(case) if isinstance(case, str) else case
    s_arr = np.asarray(strengths, dtype=float)
    if s_arr.size < 2:
        raise ValueError("continuation needs at least two strengths")
    dif = np.diff(s_arr)
    if not (np.all(dif > 0) or np.all(dif < 0)):
        raise ValueError("strength schedule must be strictly monotone")

    diag: list[str] = []
    locus = trace_locus(fam, params, box, resolution) if track else None
    used, lams, counts, roots = [], [], [], []
    for s in s_arr:
        st = fam.strengths(float(s))
        if not permeability(st):
            diag.append(f"strength {s:.15g}: impermeable, skipped")
            continue
        lam = lambda_from_strengths(st)
        used.append(float(s))
        lams.append(lam)
        counts.append(len(bound_states(params, lam)))
        if track:
            roots.append(find_resonances(fam, params, float(s), box, locus=locus, diagnostics=diag))

    events = []
    for name, fn in (("critical", critical_residual), ("supercritical", supercritical_residual)):
        res = [fn(params, lam) for lam in lams]

        def r_of(s, fn=fn):
            return fn(params, fam.lam(s))

        for k in range(len(used) - 1):
            if res[k] == 0 or res[k] * res[k + 1] < 0:
                if res[k] == 0:
                    s_ev = used[k]
                else:
                    lo, hi = sorted((used[k], used[k + 1]))
                    s_ev = optimize.brentq(r_of, lo, hi, xtol=1e-14, rtol=1e-15)
                r_ev = abs(r_of(s_ev))
                if r_ev > THRESHOLD_TOL:
                    continue  # sign change through a pole of Lambda
                dc = counts[k + 1] - counts[k]
                kind = "capture" if dc > 0 else "emission" if dc < 0 else "touch"
                events.append(ThresholdEvent(float(s_ev), name, kind, float(r_ev)))
    events.sort(key=lambda e: (e.strength if dif[0] > 0 else -e.strength))

    trajectories = _link(used, roots) if track else []
    return Continuation(used, trajectories, events, counts, diag)


def _link(strengths, roots) -> list[Trajectory]:
    """Greedy nearest-neighbour matching of roots between consecutive strengths."""
    active: list[Trajectory] = []
    done: list[Trajectory] = []
    for s, rs in zip(strengths, roots):
        pairs = sorted(
            ((abs(t.energies[-1].E - r.E), ti, ri) for ti, t in enumerate(active) for ri, r in enumerate(rs)),
        )
        t_used, r_used = set(), {}
        for dist, ti, ri in pairs:
            if ti in t_used:
                continue
            if ri in r_used:
                if dist < DEFLATION:
                    active[ti].merged = True
                    active[r_used[ri]].merged = True
                continue
            t_used.add(ti)
            r_used[ri] = ti
        nxt = []
        for ti, t in enumerate(active):
            if ti in t_used:
                ri = next(r for r, tt in r_used.items() if tt == ti)
                t.strengths.append(s)
                t.energies.append(rs[ri])
                nxt.append(t)
            else:
                done.append(t)
        for ri, r in enumerate(rs):
            if ri not in r_used:
                nxt.append(Trajectory([s], [r]))
        active = nxt
    done.extend(active)
    done.sort(key=lambda t: (t.strengths[0], t.energies[0].E_R, t.energies[0].E_I))
    return done
