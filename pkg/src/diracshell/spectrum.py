"""Free radial spinors, bound states, threshold states and confined spectra.

Radial spinors are stored as :class:`SpinorValue` ``(phi1, phi2)`` with the
full vector being ``Phi = (phi1, i*phi2)``. Energies are in units of the mass
scale (hbar = c = 1); ``l >= 0`` is the orbital index with ``j = l + 1/2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import integrate, optimize

from . import specfun
from .interaction import BoundaryCondition, LambdaParams, match_spinor

__all__ = [
    "PhysicalParams",
    "Kinematics",
    "SpinorValue",
    "BoundState",
    "DegenerateKinematicsError",
    "NearThresholdError",
    "threshold_guard",
    "kinematics",
    "radial_spinor",
    "radial_current",
    "secular_bound_residual",
    "bound_states",
    "critical_residual",
    "supercritical_residual",
    "scalar_critical_strengths",
    "scalar_supercritical_strengths",
    "electro_critical_strengths",
    "electro_supercritical_strengths",
    "delta_strength_for_bound",
    "deltaprime_strength_for_bound",
    "confined_spectrum",
    "l2_normalization",
]

Region = Literal["inner", "outer"]
Basis = Literal["J", "Y", "H1", "H2", "critical", "supercritical"]

THRESHOLD_REL = 1e-6


class DegenerateKinematicsError(ValueError):
    pass


class NearThresholdError(ValueError):
    """Energy too close to +-m for the bound-state secular equation."""


@dataclass(frozen=True)
class PhysicalParams:
    m: float
    R: float
    l: int

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise ValueError(f"mass must be positive, got {self.m!r}")
        if not (self.R > 0 and math.isfinite(self.R)):
            raise ValueError(f"radius must be positive, got {self.R!r}")
        if int(self.l) != self.l or self.l < 0:
            raise ValueError(f"l must be a non-negative integer, got {self.l!r}")
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "R", float(self.R))
        object.__setattr__(self, "l", int(self.l))

    def with_l(self, l: int) -> "PhysicalParams":
        return PhysicalParams(self.m, self.R, l)


def threshold_guard(m: float) -> float:
    """Distance from +-m inside which the bound-state secular equation is not used."""
    return THRESHOLD_REL * m


@dataclass(frozen=True)
class Kinematics:
    """Energy with its momenta ``p = sqrt(E-m) sqrt(E+m)`` and ``q = -i p``."""

    E: complex
    p: complex
    q: complex


def kinematics(E, m: float) -> Kinematics:
    """Momenta for a (possibly complex) energy.

    Real energies get their physical-side limits: ``p = i sqrt(m^2-E^2)`` in the
    gap, ``p > 0`` above ``m`` and ``p = -sqrt(E^2-m^2)`` below ``-m``, taken on the
    lower lip so that ``H^(1)(pr)`` stays outgoing.
    """
    Ec = complex(E)
    if Ec.imag == 0.0:
        x = Ec.real
        if abs(x) < m:
            p = complex(0.0, math.sqrt(m * m - x * x))
        elif x >= m:
            p = complex(math.sqrt(x * x - m * m), 0.0)
        else:
            p = complex(-math.sqrt(x * x - m * m), -0.0)
        Ec = complex(x, 0.0)
    else:
        p = cmath.sqrt(Ec - m) * cmath.sqrt(Ec + m)
    q = -1j * p
    if p.imag == 0.0 and math.copysign(1.0, p.imag) < 0:
        q = complex(0.0, -p.real)  # keep q = -i p exact on the lower lip
    return Kinematics(Ec, p, q)


@dataclass(frozen=True)
class SpinorValue:
    phi1: complex
    phi2: complex

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.phi1, 1j * self.phi2], dtype=complex)

    @classmethod
    def from_vector(cls, v) -> "SpinorValue":
        v = np.asarray(v, dtype=complex)
        return cls(complex(v[0]), complex(-1j * v[1]))

    def scaled(self, factor: complex) -> "SpinorValue":
        return SpinorValue(self.phi1 * factor, self.phi2 * factor)


def radial_spinor(
    kin: Kinematics,
    params: PhysicalParams,
    region: Region,
    basis: Basis,
    r: float,
) -> SpinorValue:
    """Free radial solution of the given basis evaluated at radius ``r``.

    Inner solutions must be regular at the origin, so only the ``J``,
    ``critical`` and ``supercritical`` bases are accepted there.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    if region not in ("inner", "outer"):
        raise ValueError(f"unknown region {region!r}")
    l, m = params.l, params.m
    if region == "inner" and basis not in ("J", "critical", "supercritical"):
        raise ValueError(f"basis {basis!r} is singular at the origin; not allowed in the inner region")
    if basis == "critical":
        if region == "inner":
            return SpinorValue(complex(r**l), 0j)
        return SpinorValue(complex(r ** (-l)), complex(l / m * r ** (-(l + 1))))
    if basis == "supercritical":
        if region == "inner":
            return SpinorValue(complex(-(l + 1) / m * r**l), complex(r ** (l + 1)))
        return SpinorValue(0j, complex(r ** (-(l + 1))))
    if kin.E + m == 0:
        raise DegenerateKinematicsError("E = -m: use the supercritical basis")
    if kin.p == 0:
        raise DegenerateKinematicsError("E = +m: use the critical basis")
    z = kin.p * r
    if basis == "J":
        f0, f1 = specfun.bessel_j(l, z), specfun.bessel_j(l + 1, z)
    elif basis == "Y":
        f0, f1 = specfun.bessel_y(l, z), specfun.bessel_y(l + 1, z)
    elif basis in ("H1", "H2"):
        kind = 1 if basis == "H1" else 2
        f0, f1 = specfun.hankel(kind, l, z), specfun.hankel(kind, l + 1, z)
    else:
        raise ValueError(f"unknown basis {basis!r}")
    return SpinorValue(complex(f0), complex(kin.p / (kin.E + m) * f1))


def radial_current(phi: SpinorValue) -> float:
    """Radial Dirac current ``Phi^dagger sigma_1 Phi = -2 Im(conj(phi1) phi2)``."""
    return -2.0 * (np.conj(phi.phi1) * phi.phi2).imag


def _check_gap(E: float, m: float) -> float:
    E = float(E)
    eps = threshold_guard(m)
    if abs(E) > m - eps:
        raise NearThresholdError(
            f"E={E!r} is within {eps:g} of the threshold +-{m:g}; "
            "use critical_residual / supercritical_residual there"
        )
    return E


def secular_bound_residual(E: float, params: PhysicalParams, lam: LambdaParams) -> float:
    """Left side of the bound-state secular equation in modified Bessel form."""
    return float(_secular(_check_gap(E, params.m), params, lam))


def _secular(E, params: PhysicalParams, lam: LambdaParams):
    # broadcasts over an array of gap energies
    m, R, l = params.m, params.R, params.l
    q = np.sqrt(m * m - np.square(E))
    x = q * R
    i0, i1 = specfun.bessel_i(l, x), specfun.bessel_i(l + 1, x)
    k0, k1 = specfun.bessel_k(l, x), specfun.bessel_k(l + 1, x)
    return (
        i0 * (lam.a * q * k1 + lam.c * (m + E) * k0)
        + i1 * (lam.b * (m - E) * k1 + lam.d * q * k0)
    )


@dataclass(frozen=True)
class BoundState:
    """Bound state with inner coefficient fixed to ``a_i = 1``.

    ``a_o`` multiplies the outer ``H^(1)`` spinor; ``mismatch`` is the largest
    componentwise deviation of ``Phi_o(R) - Lambda Phi_i(R)`` relative to the
    spinor norm.
    """

    E: float
    a_i: complex
    a_o: complex
    residual: float
    mismatch: float = field(default=0.0)


def _energy_grid(m: float, n: int) -> np.ndarray:
    eps = threshold_guard(m)
    u = np.linspace(-1.0, 1.0, int(n))
    # quadratic clustering towards both thresholds
    return (m - eps) * np.sign(u) * (1.0 - (1.0 - np.abs(u)) ** 2)


def _match_bound(E: float, params: PhysicalParams, lam: LambdaParams) -> tuple[complex, float]:
    kin = kinematics(E, params.m)
    inner = radial_spinor(kin, params, "inner", "J", params.R).vector
    outer = radial_spinor(kin, params, "outer", "H1", params.R).vector
    target = match_spinor(lam, inner)
    k = int(np.argmax(np.abs(outer)))
    a_o = target[k] / outer[k]
    diff = a_o * outer - target
    scale = max(np.linalg.norm(target), np.linalg.norm(a_o * outer))
    return complex(a_o), float(np.max(np.abs(diff)) / scale)


def bound_states(
    params: PhysicalParams,
    lam: LambdaParams,
    n_grid: int = 2000,
    tol: float = 1e-11,
    match_tol: float = 1e-9,
) -> list[BoundState]:
    """All bound-state energies in ``(-m + eps, m - eps)``, ascending.

    Sign changes of the secular residual on a threshold-clustered grid are
    refined with Brent's method. Every root is checked against the matching
    condition; a root failing it raises ``ArithmeticError``.
    """
    grid = _energy_grid(params.m, n_grid)
    vals = np.asarray(_secular(grid, params, lam), dtype=float)

    def f(E):
        return secular_bound_residual(E, params, lam)

    roots: list[float] = []
    for i in range(len(grid) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if v0 == 0.0:
            roots.append(float(grid[i]))
        elif v0 * v1 < 0:
            roots.append(optimize.brentq(f, grid[i], grid[i + 1], xtol=tol, rtol=4 * np.finfo(float).eps))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))

    states = []
    for E in sorted(set(roots)):
        a_o, mismatch = _match_bound(E, params, lam)
        if mismatch > match_tol:
            raise ArithmeticError(f"bound state at E={E} fails the matching check ({mismatch:.2e})")
        states.append(BoundState(E, 1.0 + 0j, a_o, float(f(E)), mismatch))
    return states


def critical_residual(params: PhysicalParams, lam: LambdaParams) -> float:
    """Zero iff a critical state (E = +m) exists."""
    return lam.c + lam.a * params.l / (params.m * params.R)


def supercritical_residual(params: PhysicalParams, lam: LambdaParams) -> float:
    """Zero iff a supercritical state (E = -m) exists."""
    return lam.b + lam.a * (params.l + 1) / (params.m * params.R)


def _scalar_threshold(mR: float, n: int) -> list[float]:
    if n <= 0:
        return []
    disc = mR * mR - n * n
    if disc < -1e-12 * mR * mR:
        return []
    root = math.sqrt(max(disc, 0.0))
    return sorted([-2.0 / n * (mR + root), -2.0 / n * (mR - root)])


def scalar_critical_strengths(params: PhysicalParams) -> list[float]:
    """Scalar strengths B with a critical state; empty unless 0 < l <= mR."""
    return _scalar_threshold(params.m * params.R, params.l)


def scalar_supercritical_strengths(params: PhysicalParams) -> list[float]:
    """Scalar strengths with a supercritical state (critical formula with l -> l+1)."""
    return _scalar_threshold(params.m * params.R, params.l + 1)


def electro_critical_strengths(params: PhysicalParams) -> list[float]:
    """Electrostatic A0 values with a critical state (l > 0), descending."""
    l, mR = params.l, params.m * params.R
    if l == 0:
        return []
    root = math.sqrt(1.0 + l * l / (mR * mR))
    return sorted([2 * mR / l * (1 + root), 2 * mR / l * (1 - root)], reverse=True)


def electro_supercritical_strengths(params: PhysicalParams) -> list[float]:
    """Electrostatic A0 values with a supercritical state, descending."""
    n, mR = params.l + 1, params.m * params.R
    root = math.sqrt(1.0 + n * n / (mR * mR))
    return sorted([-2 * mR / n * (1 + root), -2 * mR / n * (1 - root)], reverse=True)


def _ik(n: int, x: float) -> float:
    return specfun.bessel_i(n, x) * specfun.bessel_k(n, x)


def delta_strength_for_bound(E: float, params: PhysicalParams) -> float:
    """Delta-shell strength A0 = B placing a bound state at E (always negative)."""
    m, R, l = params.m, params.R, params.l
    if not abs(E) < m:
        raise ValueError("bound states need |E| < m")
    q = math.sqrt(m * m - E * E)
    return -1.0 / (2.0 * R * (E + m) * _ik(l, q * R))


def deltaprime_strength_for_bound(E: float, params: PhysicalParams) -> float:
    """Delta-prime-shell strength A0 = -B placing a bound state at E (always positive)."""
    m, R, l = params.m, params.R, params.l
    if not abs(E) < m:
        raise ValueError("bound states need |E| < m")
    q = math.sqrt(m * m - E * E)
    return 1.0 / (2.0 * R * (m - E) * _ik(l + 1, q * R))


def _wall_function(bc: BoundaryCondition, params: PhysicalParams, sign: int):
    """alpha*(E+m)*J_l(pR) + beta*p*J_{l+1}(pR) as a function of p > 0."""
    alpha, beta = bc.inner
    m, R, l = params.m, params.R, params.l

    def g(p):
        E = sign * math.sqrt(m * m + p * p)
        z = p * R
        return alpha * (E + m) * specfun.bessel_j(l, z) + beta * p * specfun.bessel_j(l + 1, z)

    return g


def confined_spectrum(
    bc: BoundaryCondition,
    params: PhysicalParams,
    E_max: float,
    branch: Literal["particle", "antiparticle"] = "particle",
    tol: float = 1e-13,
) -> list[float]:
    """Energies |E| in [m, E_max] of a particle (or antiparticle) trapped inside the wall.

    Particle energies are positive, antiparticle energies negative; the list
    is sorted by increasing |E|. Threshold energies are included when the
    critical (E = m) or supercritical (E = -m) inner solution obeys the wall.
    """
    m, R, l = params.m, params.R, params.l
    if not E_max > m:
        raise ValueError("E_max must exceed m")
    if branch not in ("particle", "antiparticle"):
        raise ValueError(f"unknown branch {branch!r}")
    sign = 1 if branch == "particle" else -1
    alpha, beta = bc.inner
    p_max = math.sqrt(E_max * E_max - m * m)

    levels: list[float] = []
    if sign > 0 and alpha == 0.0:
        levels.append(m)
    if sign < 0:
        # supercritical inner spinor (-(l+1)/m R^l, R^{l+1})
        lhs = -alpha * (l + 1) / m + beta * R
        if abs(lhs) <= 1e-12 * (abs(alpha) * (l + 1) / m + abs(beta) * R):
            levels.append(-m)

    if alpha == 0.0 or beta == 0.0:
        order = l + 1 if alpha == 0.0 else l
        k = 1
        while True:
            p = specfun.bessel_j_zero(order, k) / R
            if p > p_max:
                break
            levels.append(sign * math.sqrt(m * m + p * p))
            k += 1
    else:
        g = _wall_function(bc, params, sign)
        step = 0.02 / R
        ps = np.arange(step, p_max + step, step)
        vals = [g(p) for p in ps]
        for i in range(len(ps) - 1):
            if vals[i] == 0.0:
                p = ps[i]
            elif vals[i] * vals[i + 1] < 0:
                p = optimize.brentq(g, ps[i], ps[i + 1], xtol=tol)
            else:
                continue
            if p <= p_max:
                levels.append(sign * math.sqrt(m * m + p * p))
    return sorted(levels, key=abs)


def l2_normalization(state: BoundState, params: PhysicalParams) -> float:
    """Factor making the bound state square-integrable to one with measure r dr.

    Multiply ``a_i`` and ``a_o`` by the returned factor.
    """
    m, R = params.m, params.R
    kin = kinematics(state.E, m)

    def density(r, region, basis, coeff):
        s = radial_spinor(kin, params, region, basis, r)
        return abs(coeff) ** 2 * (abs(s.phi1) ** 2 + abs(s.phi2) ** 2) * r

    inner, _ = integrate.quad(density, 0.0, R, args=("inner", "J", state.a_i), limit=200)
    # e^{-2q(r-R)} is negligible past 40/q; also keeps q*r below the overflow guard
    r_far = R + 40.0 / kin.q.real
    outer, _ = integrate.quad(density, R, r_far, args=("outer", "H1", state.a_o), limit=200)
    return 1.0 / math.sqrt(inner + outer)
