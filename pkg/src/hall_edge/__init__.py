"""hall_edge: numerical laboratory for a planar charged particle, its
truncated second-quantized edge currents, bosonized vertex correlators,
and Laughlin-type wave functions.

Subpackages are plain modules; import what you need:

    from hall_edge import single_particle, fock_space, bosonization, laughlin
"""

from . import errors

__version__ = "0.1.0"

__all__ = ["errors", "__version__"]
