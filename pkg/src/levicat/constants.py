"""Physical constants in SI units (CODATA, quoted to 7 significant figures).

All internal computation is strict SI; unit conversions happen once, at the
configuration boundary (see :mod:`levicat.config`).
"""

# Reduced Planck constant [J s]
HBAR = 1.054572e-34

# Boltzmann constant [J / K] (exact by SI definition)
K_B = 1.380649e-23

# Newtonian gravitational constant [m^3 / (kg s^2)]
G_NEWTON = 6.674300e-11

# Atomic mass unit [kg]
AMU = 1.660539e-27
