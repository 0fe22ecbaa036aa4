"""Physical constants in the unit system used throughout the package:
energies in eV, lengths in nm, times in ns (pulse widths) or s (rates),
voltages in V, currents in A.
"""

K_B = 8.617333262e-5       # Boltzmann constant, eV/K
E_CHARGE = 1.602176634e-19  # elementary charge, C
HBAR = 6.582119569e-16      # reduced Planck constant, eV*s
