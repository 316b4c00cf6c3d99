"""Extension theory of isometries in finite-dimensional Pontryagin spaces.

Unitary boundary pairs and their Weyl functions, unitary colligations,
negative-squares estimates for Schur-type kernels, Kreĭn-type resolvent
formulas, generalized coresolvents via coupling, and realization of rational
generalized Schur functions.
"""

from .boundary import (BoundaryPair, direct_pair, from_colligation, gamma1, gamma2, mobius,
                       theta, transpose, weyl)
from .colligation import UnitaryColligation, characteristic_function, random_colligation, validate
from .config import Tolerances, set_tolerance_scale, tol
from .exceptions import KreinWeylError
from .extensions import ExtensionParameter, build_extension, coresolvent, resolvent
from .gencores import couple, generalized_coresolvent, regularity_index
from .kernels import SamplerConfig, negative_squares, s_kernel
from .pspace import PontryaginSpace, Subspace
from .realize import RationalFunctionData, realize
from .relation import LinearRelation, adjoint, classify

__all__ = [
    "BoundaryPair", "direct_pair", "from_colligation", "gamma1", "gamma2", "mobius",
    "theta", "transpose", "weyl",
    "UnitaryColligation", "characteristic_function", "random_colligation", "validate",
    "Tolerances", "set_tolerance_scale", "tol",
    "KreinWeylError",
    "ExtensionParameter", "build_extension", "coresolvent", "resolvent",
    "couple", "generalized_coresolvent", "regularity_index",
    "SamplerConfig", "negative_squares", "s_kernel",
    "PontryaginSpace", "Subspace",
    "RationalFunctionData", "realize",
    "LinearRelation", "adjoint", "classify",
]

__version__ = "0.1.0"
