"""Contact interaction on the circle r = R: strengths, matching matrix, walls.

The matching matrix connects the lateral limits of the radial spinor
``Phi = (phi1, i*phi2)``::

    Phi(R+) = Lambda Phi(R-),   Lambda = e^{i phi} [[a, i b], [-i c, d]],  ad - bc = 1

Strengths are the four real intensities of the singular potentials
``B delta(r-R)``, ``A0 delta(r-R)``, ``Ar delta(r-R)`` and ``Atheta delta(r-R)``
(natural units).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

__all__ = [
    "Strengths",
    "LambdaParams",
    "BoundaryCondition",
    "ImpermeableError",
    "PERMEABILITY_TOL",
    "permeability",
    "lambda_from_strengths",
    "match_spinor",
    "boundary_conditions_impermeable",
    "wall_from_lambda_limit",
    "delta_shell_wall",
    "canonical_case",
    "CASES",
]

PERMEABILITY_TOL = 1e-12

CaseKind = Literal["scalar", "electrostatic", "magnetic", "delta", "delta_prime"]
CASES: tuple[str, ...] = ("scalar", "electrostatic", "magnetic", "delta", "delta_prime")


@dataclass(frozen=True)
class Strengths:
    B: float = 0.0
    A0: float = 0.0
    Ar: float = 0.0
    Atheta: float = 0.0

    def __post_init__(self):
        for name in ("B", "A0", "Ar", "Atheta"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"strength {name} must be finite, got {v!r}")
            object.__setattr__(self, name, float(v))

    @property
    def discriminant(self) -> float:
        """B^2 - 4 - A0^2 + Atheta^2, the quantity deciding permeability when Ar = 0."""
        return self.B**2 - 4.0 - self.A0**2 + self.Atheta**2


@dataclass(frozen=True)
class LambdaParams:
    phi: float
    a: float
    b: float
    c: float
    d: float

    @classmethod
    def identity(cls) -> "LambdaParams":
        return cls(0.0, 1.0, 0.0, 0.0, 1.0)

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self) -> np.ndarray:
        """The full 2x2 complex matrix including the phase factor."""
        return np.exp(1j * self.phi) * np.array(
            [[self.a, 1j * self.b], [-1j * self.c, self.d]], dtype=complex
        )

    def negated(self) -> "LambdaParams":
        return LambdaParams(self.phi, -self.a, -self.b, -self.c, -self.d)


@dataclass(frozen=True)
class BoundaryCondition:
    """Decoupled wall conditions ``alpha*phi1 + beta*phi2 = 0`` on each side of r = R.

    ``phi1``, ``phi2`` are the components of ``Phi = (phi1, i*phi2)``.
    """

    inner: tuple[float, float]
    outer: tuple[float, float]
    label: str = ""

    def __post_init__(self):
        for side in (self.inner, self.outer):
            if side[0] == 0 and side[1] == 0:
                raise ValueError("boundary condition coefficients cannot both vanish")

    def describe(self) -> str:
        return f"inner: {_describe_side(*self.inner)}; outer: {_describe_side(*self.outer)}"


def _describe_side(alpha: float, beta: float) -> str:
    if beta == 0:
        return "phi1(R)=0"
    if alpha == 0:
        return "phi2(R)=0"
    ratio = -alpha / beta
    if abs(ratio - 1) < 1e-12:
        return "phi2=+phi1"
    if abs(ratio + 1) < 1e-12:
        return "phi2=-phi1"
    return f"phi2={ratio:+.15g}*phi1"


class ImpermeableError(ValueError):
    """Strengths make the circle an impenetrable wall; no matching matrix exists."""

    def __init__(self, strengths: Strengths, boundary: BoundaryCondition):
        super().__init__(f"impermeable wall for {strengths}: {boundary.describe()}")
        self.strengths = strengths
        self.boundary = boundary


def permeability(s: Strengths) -> bool:
    """True when the contact interaction transmits across r = R."""
    return s.Ar != 0.0 or abs(s.discriminant) >= PERMEABILITY_TOL


def _numerator(s: Strengths) -> tuple[float, float, float, float]:
    """Un-normalised (a, b, c, d) before dividing by the norm and fixing the sign."""
    B, A0, Ar, At = s.B, s.A0, s.Ar, s.Atheta
    a = A0**2 - Ar**2 - B**2 - (At + 2.0) ** 2
    b = 4.0 * (A0 - B)
    c = -4.0 * (A0 + B)
    d = A0**2 - Ar**2 - B**2 - (At - 2.0) ** 2
    return a, b, c, d


def lambda_from_strengths(s: Strengths) -> LambdaParams:
    """Matching-matrix parameters for permeable strengths, with phi in [0, pi)."""
    if not permeability(s):
        raise ImpermeableError(s, boundary_conditions_impermeable(s))
    D = s.B**2 - 4.0 - s.A0**2 + s.Ar**2 + s.Atheta**2
    norm = math.hypot(D, 4.0 * s.Ar)
    theta = math.atan2(4.0 * s.Ar, D)
    sign = 1.0
    if theta < 0 or theta >= math.pi:
        # e^{i theta} = -e^{i(theta + pi)}: the sign flip of (a, b, c, d) absorbs the shift
        theta = theta + math.pi if theta < 0 else theta - math.pi
        sign = -1.0
        if theta >= math.pi:
            # tiny negative angle rounded up to pi: e^{i pi} * (-1) = 1
            theta, sign = 0.0, 1.0
    a, b, c, d = (sign * v / norm for v in _numerator(s))
    if theta == 0.0:
        theta = 0.0  # drop a negative zero
    return LambdaParams(theta, a, b, c, d)


def match_spinor(lam: LambdaParams, inner) -> np.ndarray:
    """Map the spinor vector ``Phi(R-) = (phi1, i*phi2)`` to ``Phi(R+)``.

    Accepts a length-2 vector or an array of shape ``(2, ...)``.
    """
    v = np.asarray(inner, dtype=complex)
    return np.tensordot(lam.matrix, v, axes=1)


def wall_from_lambda_limit(numerator, label: str = "") -> BoundaryCondition:
    """Wall conditions from the rank-one limit of a diverging matching matrix.

    ``numerator`` is the finite 2x2 matrix ``N`` with ``Lambda ~ N / eps`` as
    ``eps -> 0``. Finiteness of ``Phi(R+) = Lambda Phi(R-)`` forces
    ``N Phi(R-) = 0`` (inner condition) and ``Phi(R+)`` parallel to the range
    of ``N`` (outer condition).
    """
    N = np.asarray(numerator, dtype=complex)
    if np.linalg.matrix_rank(N, tol=1e-12 * max(1.0, np.abs(N).max())) != 1:
        raise ValueError("wall limit needs a rank-one numerator matrix")
    rows = np.abs(N).sum(axis=1)
    row = N[int(np.argmax(rows))]
    cols = np.abs(N).sum(axis=0)
    col = N[:, int(np.argmax(cols))]
    # row . (phi1, i phi2) = 0  ->  alpha = row0, beta = i row1
    inner = _real_pair(row[0], 1j * row[1])
    # (phi1, i phi2) ~ col  ->  col1 * phi1 - col0 * (i phi2) = 0
    outer = _real_pair(col[1], -1j * col[0])
    return BoundaryCondition(inner, outer, label)


def _real_pair(alpha: complex, beta: complex) -> tuple[float, float]:
    ref = alpha if abs(alpha) >= abs(beta) else beta
    alpha, beta = alpha / ref, beta / ref
    if abs(alpha.imag) > 1e-9 or abs(beta.imag) > 1e-9:
        raise ValueError("wall condition is not real; spinor components cannot decouple")
    al, be = alpha.real, beta.real
    if abs(al) < 1e-14:
        al = 0.0
    if abs(be) < 1e-14:
        be = 0.0
    if be != 0.0:
        al, be = al / be, 1.0
    else:
        al = 1.0
    return (al + 0.0, be + 0.0)


def boundary_conditions_impermeable(s: Strengths) -> BoundaryCondition:
    """Inner/outer wall conditions for strengths that fail the permeability test.

    Scalar walls B = +-2 give ``phi2 = s phi1`` inside and ``phi2 = -s phi1``
    outside (s = sign B); magnetic walls Atheta = -2 / +2 kill ``phi2``/``phi1``
    inside and ``phi1``/``phi2`` outside. Other impermeable corners use the
    same rank-one limit of the numerator matrix.
    """
    if permeability(s):
        raise ValueError(f"strengths {s} are permeable; use lambda_from_strengths")
    a, b, c, d = _numerator(s)
    N = np.array([[a, 1j * b], [-1j * c, d]], dtype=complex)
    if not np.any(np.abs(N) > 1e-12):
        raise ValueError(f"degenerate wall for {s}: every matching parameter vanishes")
    return wall_from_lambda_limit(N, label=f"B={s.B:g} A0={s.A0:g} Ar={s.Ar:g} Atheta={s.Atheta:g}")


def delta_shell_wall() -> BoundaryCondition:
    """The |A0| = |B| -> infinity limit of the delta shell: phi1 vanishes on both sides."""
    # Lambda / A0 -> [[0, 0], [-2i, 0]]
    return wall_from_lambda_limit([[0, 0], [-2j, 0]], label="delta shell, |A0| -> inf")


def canonical_case(kind: str, g=0.0) -> Strengths:
    """Strengths for the five named shells.

    ``g`` is the single strength for scalar (B), electrostatic (A0), delta
    (A0 = B) and delta_prime (A0 = -B); magnetic takes an ``(Ar, Atheta)`` pair.
    """
    if kind == "scalar":
        return Strengths(B=float(g))
    if kind == "electrostatic":
        return Strengths(A0=float(g))
    if kind == "magnetic":
        Ar, At = g
        if Ar == 0 and At == 0:
            raise ValueError("magnetic shell needs Ar and Atheta not both zero")
        return Strengths(Ar=float(Ar), Atheta=float(At))
    if kind == "delta":
        return Strengths(B=float(g), A0=float(g))
    if kind == "delta_prime":
        return Strengths(B=-float(g), A0=float(g))
    raise ValueError(f"unknown case {kind!r}; expected one of {CASES}")
