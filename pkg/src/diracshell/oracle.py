"""Arbitrary-precision power-series evaluator for integer-order Bessel functions.

This module is deliberately independent of :mod:`diracshell.specfun`: it only
uses mpmath for multiprecision arithmetic (``mpf``/``mpc``, ``log``, ``pi``,
Euler's constant) and sums the defining ascending series directly. It is slow
and meant for verification, never for production scans.

Working precision is chosen from the argument size so that the cancellation
in the alternating series (worst case ``exp(|z|)`` against ``exp(-|z|)``)
leaves at least 30 correct significant digits.
"""

from __future__ import annotations

import math

import mpmath

__all__ = [
    "oracle_j",
    "oracle_y",
    "oracle_h",
    "oracle_i",
    "oracle_k",
    "oracle_j_zero",
    "working_digits",
]


def working_digits(z: complex) -> int:
    """Decimal digits needed to evaluate the series at ``z`` with >=30 digits left."""
    return 50 + int(math.ceil(0.87 * abs(z)))


def _series(n: int, w, sign: int):
    """Sum_k (sign*w)^k / (k! (n+k)!) and the digamma-weighted companion sum.

    ``w`` is ``(z/2)**2``. Returns ``(s, t)`` where ``t`` carries the weights
    ``psi(k+1) + psi(n+k+1)``. Terms are added until the tail bound drops
    below the working epsilon relative to the running maximum term.
    """
    eps = mpmath.mpf(10) ** (-mpmath.mp.dps)
    x = sign * w
    term = 1 / mpmath.factorial(n)
    psi_k = -mpmath.euler
    psi_nk = -mpmath.euler + mpmath.fsum(mpmath.mpf(1) / j for j in range(1, n + 1))
    s = term
    t = term * (psi_k + psi_nk)
    biggest = abs(term)
    absw = abs(w)
    k = 0
    while True:
        k += 1
        term = term * x / (k * (n + k))
        psi_k += mpmath.mpf(1) / k
        psi_nk += mpmath.mpf(1) / (n + k)
        s += term
        t += term * (psi_k + psi_nk)
        mag = abs(term)
        biggest = max(biggest, mag)
        ratio = absw / ((k + 1) * (n + k + 1))
        if ratio < 0.5:
            # geometric tail bound, psi weights grow only logarithmically
            tail = mag * ratio / (1 - ratio) * (2 * abs(psi_nk) + 2)
            if tail <= eps * biggest:
                return s, t


def _check_order(n: int) -> int:
    if int(n) != n:
        raise ValueError(f"integer order required, got {n!r}")
    return int(n)


def oracle_j(n: int, z: complex) -> mpmath.mpc:
    """J_n(z) from the ascending series."""
    n = _check_order(n)
    if n < 0:
        return (-1) ** n * oracle_j(-n, z)
    with mpmath.workdps(working_digits(z)):
        z = mpmath.mpmathify(z)
        half = z / 2
        s, _ = _series(n, half * half, -1)
        return +(half**n * s)


def oracle_y(n: int, z: complex) -> mpmath.mpc:
    """Y_n(z), principal branch (cut along the negative real axis)."""
    n = _check_order(n)
    if n < 0:
        return (-1) ** n * oracle_y(-n, z)
    if z == 0:
        raise ZeroDivisionError("Y_n has a logarithmic singularity at z = 0")
    with mpmath.workdps(working_digits(z)):
        z = mpmath.mpc(z)
        half = z / 2
        w = half * half
        s, t = _series(n, w, -1)
        jn = half**n * s
        finite = mpmath.mpf(0)
        for k in range(n):
            finite += mpmath.factorial(n - k - 1) / mpmath.factorial(k) * half ** (2 * k - n)
        y = (2 * jn * mpmath.log(half) - finite - half**n * t) / mpmath.pi
        return +y


def oracle_h(kind: int, n: int, z: complex) -> mpmath.mpc:
    """Hankel function H_n^(kind)(z) = J_n(z) +- i Y_n(z)."""
    if kind not in (1, 2):
        raise ValueError("kind must be 1 or 2")
    sgn = 1 if kind == 1 else -1
    with mpmath.workdps(working_digits(z)):
        return oracle_j(n, z) + sgn * 1j * oracle_y(n, z)


def oracle_i(n: int, x: float) -> mpmath.mpf:
    """Modified Bessel I_n(x) for real x."""
    n = abs(_check_order(n))
    with mpmath.workdps(working_digits(x)):
        half = mpmath.mpf(x) / 2
        s, _ = _series(n, half * half, 1)
        return +(half**n * s)


def oracle_k(n: int, x: float) -> mpmath.mpf:
    """Modified Bessel K_n(x) for real x > 0."""
    n = abs(_check_order(n))
    if x <= 0:
        raise ValueError("K_n needs x > 0")
    with mpmath.workdps(working_digits(x)):
        half = mpmath.mpf(x) / 2
        w = half * half
        s, t = _series(n, w, 1)
        i_n = half**n * s
        finite = mpmath.mpf(0)
        for k in range(n):
            finite += (-1) ** k * mpmath.factorial(n - k - 1) / mpmath.factorial(k) * half ** (2 * k - n)
        k_n = finite / 2 + (-1) ** (n + 1) * mpmath.log(half) * i_n + (-1) ** n * half**n * t / 2
        return +k_n


def oracle_j_zero(n: int, k: int, step: float = 0.05, tol: float = 1e-14) -> float:
    """k-th positive zero of J_n by scanning for sign changes and bisecting."""
    n = abs(_check_order(n))
    if k < 1:
        raise ValueError("k must be >= 1")
    found = 0
    x0 = step
    f0 = float(oracle_j(n, x0).real)
    while True:
        x1 = x0 + step
        f1 = float(oracle_j(n, x1).real)
        if f0 == 0.0:
            found += 1
            if found == k:
                return x0
        elif f0 * f1 < 0:
            found += 1
            if found == k:
                lo, hi, flo = x0, x1, f0
                while hi - lo > tol:
                    mid = 0.5 * (lo + hi)
                    fm = float(oracle_j(n, mid).real)
                    if fm == 0.0:
                        return mid
                    if flo * fm < 0:
                        hi = mid
                    else:
                        lo, flo = mid, fm
                return 0.5 * (lo + hi)
        x0, f0 = x1, f1
