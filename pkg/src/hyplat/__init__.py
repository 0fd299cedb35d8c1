"""hyplat: exact arithmetic for quadratic-form lattices and their gluings.

Subpackages / modules:

- ``hyplat.algebra``     exact number-field arithmetic (power bases, Sturm
  isolation, multiquadratic composita, quadratic extensions)
- ``hyplat.linalg``      exact matrices, subspaces and symmetric
  diagonalization over those fields
- ``hyplat.quadform``    quadratic spaces: admissibility, local invariants,
  rational isometry / similarity / commensurability
- ``hyplat.hybrid``      building blocks glued along a shared hypersurface
  form: rationality transport, fields of definition, angles
- ``hyplat.coxeter``     Coxeter diagrams: exact Gram matrices, signature
  classification, arithmeticity and splittability
- ``hyplat.linkfields``  belted sums of links and invariant trace-field
  degree bookkeeping
- ``hyplat.cli``         the ``hyplat`` command-line front end
"""

from __future__ import annotations

__version__ = "0.1.0"
