"""Dirac particle in 2+1 dimensions with a contact interaction on a circle.

Submodules:

* :mod:`~diracshell.specfun` -- integer-order Bessel-family functions
* :mod:`~diracshell.interaction` -- strengths, matching matrix, walls
* :mod:`~diracshell.spectrum` -- bound, threshold and confined states
* :mod:`~diracshell.scattering` -- phase shifts and Wigner time delays
* :mod:`~diracshell.resonance` -- complex resonances, loci, continuation
* :mod:`~diracshell.cli` -- command-line front end
"""

__version__ = "0.1.0"

from .interaction import (  # noqa: E402
    BoundaryCondition,
    ImpermeableError,
    LambdaParams,
    Strengths,
    canonical_case,
    lambda_from_strengths,
    permeability,
)
from .spectrum import BoundState, PhysicalParams, bound_states  # noqa: E402

__all__ = [
    "__version__",
    "BoundaryCondition",
    "BoundState",
    "ImpermeableError",
    "LambdaParams",
    "PhysicalParams",
    "Strengths",
    "bound_states",
    "canonical_case",
    "lambda_from_strengths",
    "permeability",
]
