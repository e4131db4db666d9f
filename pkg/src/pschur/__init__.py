"""Schur multipliers of finite p-groups given by power-commutator presentations.

Engines: a tails computation (Hopf's formula), the Blackburn-Evens subspace method
for class-2 groups, and a brute-force cohomology oracle.  The catalog holds the
p-groups whose multiplier attains corank t(G) = log_p|G| + 1.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    GroupSizeError,
    InconsistentPresentation,
    InputError,
    InternalError,
    ParameterError,
    ParseError,
    PreconditionError,
    PschurError,
)
from .groups import PcGroup, Subgroup  # noqa: F401
from .linalg import AbelianInvariants  # noqa: F401
from .multiplier import MultiplierResult, blackburn_evens, schur_tails  # noqa: F401
from .pcgroup import PcPresentation, parse_dsl  # noqa: F401
