"""Numerical laboratory for a boundary-condition spectral construction
that recovers the nontrivial Riemann zeros.

Layers: scalar special functions (special), an extended-precision
adaptive quadrature engine (quad), zero location and counting on the
critical strip (spectrum), the eigenfunction/adjoint amplitude layer
with norms and the bilinear Gram pairing (states), truncated operator
matrices in the Laguerre coefficient basis (operators), and a CLI
front end (cli).
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401
