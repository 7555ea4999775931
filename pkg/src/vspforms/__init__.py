"""Exact computations for forms of the quintic del Pezzo threefold.

The package covers conic arithmetic over the rationals (with certificates),
apolarity and trisecant lines for the variety VSP(f), base schemes of
quadratic involutions of the plane, intersection numbers on P^1-bundles over
P^2, and the cylinder decision procedure. Everything is exact.
"""

from vspforms.errors import (
    ContractError,
    FactorizationLimitError,
    SearchLimitError,
    UnsupportedFieldError,
)

__version__ = "0.1.0"

__all__ = [
    "ContractError",
    "FactorizationLimitError",
    "SearchLimitError",
    "UnsupportedFieldError",
    "__version__",
]
