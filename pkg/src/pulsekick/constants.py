"""Physical constants (CODATA 2018), SI units.

All internal computation in this package is done in SI double precision.
These are the only copies of the constants; every module imports from here.
"""

HBAR = 1.054571817e-34
"""Reduced Planck constant (J s)."""

C_LIGHT = 299792458.0
"""Speed of light in vacuum (m/s), exact."""

EPSILON_0 = 8.8541878128e-12
"""Vacuum permittivity (F/m)."""
