"""Scattering phase shifts and Wigner time delays for |E| > m.

``tan(delta_l) = N / D`` with ``N`` and ``D`` built from ``J`` and ``Y`` at
``pR``, ``p = sqrt(E^2 - m^2) > 0``. The time delay is evaluated in the
pole-free form ``tau = 2 (N' D - N D') / (N^2 + D^2)``, which coincides with
``2/(1+tan^2) d(tan)/dE`` wherever ``D != 0``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import specfun
from .interaction import LambdaParams
from .spectrum import PhysicalParams

__all__ = [
    "ScanPoint",
    "phase_parts",
    "tan_phase_shift",
    "phase_shift",
    "wigner_time_delay",
    "time_delay_tan_form",
    "phase_shift_scan",
]

UNWRAP_REFINE = math.pi / 4
MAX_REFINE_DEPTH = 40


@dataclass(frozen=True)
class ScanPoint:
    E: float
    tan_delta: float
    delta: float
    tau: float


def _momentum(E: float, m: float) -> float:
    E = float(E)
    if not abs(E) > m:
        raise ValueError(f"scattering needs |E| > m, got E={E!r} with m={m!r}")
    return math.sqrt(E * E - m * m)


def phase_parts(E: float, params: PhysicalParams, lam: LambdaParams, derivatives: bool = False):
    """Numerator and denominator of tan(delta_l), optionally with their E-derivatives."""
    m, R, l = params.m, params.R, params.l
    p = _momentum(E, m)
    z = p * R
    a, b, c, d = lam.a, lam.b, lam.c, lam.d
    J0, J1 = specfun.bessel_j(l, z), specfun.bessel_j(l + 1, z)
    Y0, Y1 = specfun.bessel_y(l, z), specfun.bessel_y(l + 1, z)
    N = p * (a - d) * J1 * J0 - b * (E - m) * J1**2 + c * (m + E) * J0**2
    D = J0 * (a * p * Y1 + c * (m + E) * Y0) - J1 * (b * (E - m) * Y1 + d * p * Y0)
    if not derivatives:
        return N, D

    Jm, Ym = specfun.bessel_j(l - 1, z), specfun.bessel_y(l - 1, z)
    dJ0 = Jm - l / z * J0
    dJ1 = J0 - (l + 1) / z * J1
    dY0 = Ym - l / z * Y0
    dY1 = Y0 - (l + 1) / z * Y1
    dp = E / p
    dz = R * dp

    dN = (
        dp * (a - d) * J1 * J0
        + p * (a - d) * (dJ1 * J0 + J1 * dJ0) * dz
        - b * J1**2
        - 2 * b * (E - m) * J1 * dJ1 * dz
        + c * J0**2
        + 2 * c * (m + E) * J0 * dJ0 * dz
    )
    inner = a * p * Y1 + c * (m + E) * Y0
    d_inner = a * dp * Y1 + a * p * dY1 * dz + c * Y0 + c * (m + E) * dY0 * dz
    outer = b * (E - m) * Y1 + d * p * Y0
    d_outer = b * Y1 + b * (E - m) * dY1 * dz + d * dp * Y0 + d * p * dY0 * dz
    dD = dJ0 * dz * inner + J0 * d_inner - dJ1 * dz * outer - J1 * d_outer
    return N, D, dN, dD


def tan_phase_shift(E: float, params: PhysicalParams, lam: LambdaParams) -> float:
    """tan(delta_l) at energy E; a vanishing denominator gives a signed infinity."""
    N, D = phase_parts(E, params, lam)
    if D == 0.0:
        return math.copysign(math.inf, N) if N != 0.0 else 0.0
    return N / D


def phase_shift(E: float, params: PhysicalParams, lam: LambdaParams) -> float:
    """Principal value of delta_l in (-pi/2, pi/2]."""
    N, D = phase_parts(E, params, lam)
    return _principal(N, D)


def _principal(N: float, D: float) -> float:
    if D == 0.0:
        return math.pi / 2 if N != 0.0 else 0.0
    return math.atan(N / D)


def _wrap(x: float) -> float:
    """Reduce to (-pi/2, pi/2]."""
    return x - math.pi * math.ceil(x / math.pi - 0.5)


def _tau_analytic(E, params, lam) -> float:
    N, D, dN, dD = phase_parts(E, params, lam, derivatives=True)
    den = N * N + D * D
    return 2.0 * (dN * D - N * dD) / den


def time_delay_tan_form(E: float, params: PhysicalParams, lam: LambdaParams) -> float:
    """tau from 2/(1+tan^2) * d(tan delta)/dE; singular where D vanishes."""
    N, D, dN, dD = phase_parts(E, params, lam, derivatives=True)
    t = N / D
    dt = (dN * D - N * dD) / (D * D)
    return 2.0 / (1.0 + t * t) * dt


def _tau_fd(E, params, lam) -> float:
    m = params.m
    h = 1e-5 * max(1.0, abs(E))
    # stay clear of the threshold
    h = min(h, 0.5 * (abs(E) - m))

    def slope(step):
        up = _principal(*phase_parts(E + step, params, lam))
        dn = _principal(*phase_parts(E - step, params, lam))
        return _wrap(up - dn) / (2.0 * step)

    s1, s2 = slope(h), slope(h / 2)
    return 2.0 * (4.0 * s2 - s1) / 3.0


def wigner_time_delay(
    E: float,
    params: PhysicalParams,
    lam: LambdaParams,
    method: Literal["analytic", "finite_difference"] = "analytic",
) -> float:
    """Wigner time delay tau_l = 2 d(delta_l)/dE."""
    _momentum(E, params.m)
    if method == "analytic":
        return _tau_analytic(E, params, lam)
    if method in ("finite_difference", "fd"):
        return _tau_fd(E, params, lam)
    raise ValueError(f"unknown method {method!r}")


def _evaluate(E, params, lam, method):
    N, D = phase_parts(E, params, lam)
    t = math.copysign(math.inf, N) if D == 0.0 else N / D
    return E, t, _principal(N, D), wigner_time_delay(E, params, lam, method)


def phase_shift_scan(
    params: PhysicalParams,
    lam: LambdaParams,
    energies: Sequence[float],
    method: Literal["analytic", "finite_difference"] = "analytic",
    workers: int | None = None,
) -> list[ScanPoint]:
    """tan(delta), continuous delta and tau over an energy grid on one side of the gap.

    delta starts from its principal value at the end closest to the threshold
    and is unwrapped outward; wherever neighbouring values differ by more than
    pi/4, or where the step disagrees with the integrated time delay, the
    interval is bisected; the inserted energies are part of the output.
    """
    m = params.m
    Es = np.asarray(sorted(set(float(e) for e in energies)), dtype=float)
    if Es.size == 0:
        return []
    if not (np.all(Es > m) or np.all(Es < -m)):
        raise ValueError("energy grid must lie entirely in (m, inf) or (-inf, -m)")
    if Es[0] < 0:
        Es = Es[::-1]  # walk outward from the threshold

    def run(batch):
        if workers and workers > 1 and len(batch) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(lambda e: _evaluate(e, params, lam, method), batch))
        return [_evaluate(e, params, lam, method) for e in batch]

    rows = run(list(Es))
    out = [rows[0]]
    for nxt in rows[1:]:
        out.extend(_refine(out[-1], nxt, params, lam, method, 0))

    deltas = [out[0][2]]
    for prev, cur in zip(out, out[1:]):
        deltas.append(deltas[-1] + _wrap(cur[2] - prev[2]))
    points = [ScanPoint(r[0], r[1], dlt, r[3]) for r, dlt in zip(out, deltas)]
    points.sort(key=lambda sp: sp.E)
    return points


def _refine(left, right, params, lam, method, depth):
    """Points after ``left`` up to and including ``right`` with small phase steps.

    An interval is bisected when the wrapped phase step is large or when it
    disagrees with the trapezoid estimate of the integral of tau/2, which
    catches whole turns of pi hidden between coarse grid points.
    """
    step = _wrap(right[2] - left[2])
    estimate = 0.25 * (left[3] + right[3]) * (right[0] - left[0])
    small = abs(step) <= UNWRAP_REFINE and abs(estimate - step) <= UNWRAP_REFINE
    if small or depth >= MAX_REFINE_DEPTH or not math.isfinite(estimate):
        return [right]
    if abs(right[0] - left[0]) <= 1e-12 * max(1.0, abs(left[0])):
        return [right]
    mid = _evaluate(0.5 * (left[0] + right[0]), params, lam, method)
    return _refine(left, mid, params, lam, method, depth + 1) + _refine(mid, right, params, lam, method, depth + 1)
