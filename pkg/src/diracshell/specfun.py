"""Integer-order Bessel, Neumann, Hankel and modified Bessel functions.

The numerics are delegated to :mod:`scipy.special` (AMOS/Cephes), wrapped with
the domain rules the rest of the package relies on:

* principal branch, cut along the negative real axis. A zero imaginary part
  carrying a negative sign (``complex(x, -0.0)`` with ``x < 0``) selects the
  lower lip of the cut; scipy itself always returns the upper lip.
* negative integer orders are reflected onto non-negative ones.
* arguments whose ``exp(|Im z|)`` would exceed ~1e300 raise
  :class:`SpecfunRangeError` instead of leaking ``inf``/``nan``.

All functions accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

__all__ = [
    "SpecfunError",
    "SpecfunDomainError",
    "SpecfunRangeError",
    "bessel_j",
    "bessel_y",
    "hankel",
    "bessel_i",
    "bessel_k",
    "bessel_j_zero",
    "bessel_j_zeros",
    "OVERFLOW_EXPONENT",
]

# exp(690.77) ~ 1e300
OVERFLOW_EXPONENT = math.log(1e300)


class SpecfunError(ArithmeticError):
    pass


class SpecfunDomainError(SpecfunError, ValueError):
    """Argument outside the domain of the function (e.g. Y_l at z = 0)."""


class SpecfunRangeError(SpecfunError, OverflowError):
    """Result would overflow double precision."""


def _order(l) -> int:
    if isinstance(l, (bool, np.bool_)) or int(l) != l:
        raise SpecfunDomainError(f"integer order required, got {l!r}")
    return int(l)


def _guard(z, name: str) -> None:
    if not np.all(np.isfinite(z)):
        raise SpecfunDomainError(f"{name}: non-finite argument")
    if np.any(np.abs(np.imag(z)) > OVERFLOW_EXPONENT):
        raise SpecfunRangeError(f"{name}: |Im z| exceeds the overflow guard {OVERFLOW_EXPONENT:.1f}")


def _lower_lip(z):
    """Mask of points sitting on the lower lip of the negative real axis."""
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        return np.zeros(z.shape, dtype=bool)
    return (z.real < 0) & (z.imag == 0) & np.signbit(z.imag)


def _finish(out, name: str):
    if not np.all(np.isfinite(out)):
        raise SpecfunRangeError(f"{name}: result not representable")
    if np.ndim(out) == 0:
        return out.item() if isinstance(out, np.ndarray) else out
    return out


def bessel_j(l: int, z):
    """Bessel function of the first kind J_l(z)."""
    n = _order(l)
    _guard(z, "bessel_j")
    sign = -1 if (n < 0 and n % 2) else 1
    # entire in z: both lips of the cut agree
    out = sign * special.jv(abs(n), z)
    return _finish(np.asarray(out), "bessel_j")


def bessel_y(l: int, z):
    """Bessel function of the second kind Y_l(z), principal branch."""
    n = _order(l)
    _guard(z, "bessel_y")
    za = np.asarray(z)
    if np.any(za == 0):
        raise SpecfunDomainError("bessel_y: logarithmic singularity at z = 0")
    if not np.iscomplexobj(za) and np.any(za < 0):
        raise SpecfunDomainError("bessel_y: real argument on the branch cut; pass a complex value")
    m = abs(n)
    out = np.asarray(special.yv(m, za))
    lower = _lower_lip(za)
    if np.any(lower):
        # Y_m(x e^{-i pi}) = (-1)^m [Y_m(x) - 2i J_m(x)] for x > 0
        x = -za.real[lower]
        out = out.astype(complex)
        out[lower] = (-1) ** m * (special.yv(m, x) - 2j * special.jv(m, x))
    if n < 0 and m % 2:
        out = -out
    return _finish(out, "bessel_y")


def hankel(kind: int, l: int, z):
    """Hankel function H_l^(1)(z) = J_l + iY_l or H_l^(2)(z) = J_l - iY_l."""
    if kind not in (1, 2):
        raise SpecfunDomainError("hankel kind must be 1 or 2")
    n = _order(l)
    _guard(z, "hankel")
    za = np.asarray(z)
    if np.any(za == 0):
        raise SpecfunDomainError("hankel: singular at z = 0")
    if not np.iscomplexobj(za) and np.any(za < 0):
        raise SpecfunDomainError("hankel: real argument on the branch cut; pass a complex value")
    m = abs(n)
    zc = za.astype(complex)
    fn = special.hankel1 if kind == 1 else special.hankel2
    out = np.asarray(fn(m, zc))
    lower = _lower_lip(za)
    if np.any(lower):
        out = out.astype(complex)
        sgn = 1 if kind == 1 else -1
        x = -za.real[lower]
        jm = special.jv(m, x)
        ylow = special.yv(m, x) - 2j * jm
        out[lower] = (-1) ** m * (jm + sgn * 1j * ylow)
    if n < 0 and m % 2:
        out = -out
    return _finish(out, "hankel")


def _positive(x, name: str):
    xa = np.asarray(x)
    if np.iscomplexobj(xa):
        raise SpecfunDomainError(f"{name}: real argument required")
    if np.any(~(xa > 0)):
        raise SpecfunDomainError(f"{name}: x must be > 0")
    if np.any(xa > OVERFLOW_EXPONENT):
        raise SpecfunRangeError(f"{name}: x exceeds the overflow guard")
    return xa


def bessel_i(l: int, x):
    """Modified Bessel function of the first kind I_l(x), x > 0."""
    n = abs(_order(l))
    xa = _positive(x, "bessel_i")
    return _finish(np.asarray(special.iv(n, xa)), "bessel_i")


def bessel_k(l: int, x):
    """Modified Bessel function of the second kind K_l(x), x > 0."""
    n = abs(_order(l))
    xa = _positive(x, "bessel_k")
    out = np.asarray(special.kv(n, xa))
    if np.any(out <= 0):
        raise SpecfunRangeError("bessel_k: underflow")
    return _finish(out, "bessel_k")


def bessel_j_zeros(l: int, count: int) -> np.ndarray:
    """The first ``count`` positive zeros of J_l, ascending."""
    n = abs(_order(l))
    if count < 1:
        raise SpecfunDomainError("count must be >= 1")
    return np.asarray(special.jn_zeros(n, int(count)), dtype=float)


def bessel_j_zero(l: int, k: int) -> float:
    """k-th positive zero j_{l,k} of J_l."""
    n = _order(l)
    if n < 0:
        raise SpecfunDomainError("order must be >= 0")
    if int(k) != k or k < 1:
        raise SpecfunDomainError("k must be a positive integer")
    return float(bessel_j_zeros(n, int(k))[-1])
