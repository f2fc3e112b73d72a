"""Central numerical tolerances.

Double precision with d <= 8 leaves at least three digits of headroom under
these thresholds. They are not configurable at run time.
"""

# Hermiticity of an input matrix (max-abs deviation from its adjoint).
TAU_HERM = 1e-9

# Trace of a state and normalization of instruments/channels.
TAU_TR = 1e-9

# Smallest eigenvalue still accepted as positive semidefinite.
TAU_PSD = 1e-9

# Eigenvalues at or below this contribute nothing to entropies and supports.
TAU_EIG = 1e-12

# Outcome probabilities below this carry no conditional state.
TAU_PROB = 1e-12

# Choi / frame-operator rank threshold.
TAU_RANK = 1e-9

# Overlaps |<psi_i|psi_j>| below this are exact zeros for path connectivity.
TAU_OVERLAP = 1e-12

# Pure-state test on a density operator: 1 - Tr[rho^2].
TAU_PURE = 1e-9
