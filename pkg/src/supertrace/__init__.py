"""Exact verification engine for a superalgebraic local index formula.

Everything is computed over ℚ — polynomial symbols, configuration-space
integrals, Berezin integration, star products — so every identity the
package checks is checked exactly, never to a tolerance.
"""

from .algebra import (
    AlgebraContext,
    SPoly,
    berezin,
    make_context,
    parity,
    partial,
    phi_embed,
    plain_mul,
    star,
    super_bracket,
    theta,
    upsilon,
)
from .bernoulli import (
    I_closed,
    Itilde_closed,
    bernoulli_number,
    bernoulli_poly,
    integrate_psi_cube,
    psi_region_poly,
)
from .cocycle import (
    Cocycle2n,
    TensorChain,
    check_relative,
    hh0_dimension,
    hochschild_boundary,
    tau,
)
from .poly import PolyQ
from .supermatrix import SuperMatrix, berezinian

__version__ = "1.0.0"

__all__ = [
    "AlgebraContext",
    "Cocycle2n",
    "I_closed",
    "Itilde_closed",
    "PolyQ",
    "SPoly",
    "SuperMatrix",
    "TensorChain",
    "berezin",
    "berezinian",
    "bernoulli_number",
    "bernoulli_poly",
    "check_relative",
    "hh0_dimension",
    "hochschild_boundary",
    "integrate_psi_cube",
    "make_context",
    "parity",
    "partial",
    "phi_embed",
    "plain_mul",
    "psi_region_poly",
    "star",
    "super_bracket",
    "tau",
    "theta",
    "upsilon",
    "__version__",
]
