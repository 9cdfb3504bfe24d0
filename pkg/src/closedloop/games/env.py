# Singular values below this fraction of the largest are treated as zero when
# forming pseudoinverses
PINV_RTOL = 1e-12

# Polar factor is undefined below this ratio of smallest to largest singular
# value
POLAR_RTOL = 1e-12

# Dykstra alternating projections onto the per-class energy constraints
DYKSTRA_MAX_SWEEPS = 100
DYKSTRA_TOL = 1e-10
# A result still this close to feasible after the sweep cap is accepted with
# a warning instead of raising
DYKSTRA_ACCEPT = 1e-8

# Bisection on the Lagrange multiplier of a single energy constraint
BISECT_MAX_ITER = 200
BISECT_MAX_DOUBLINGS = 200

# Relative rank cutoff used when checking assumptions on data blocks
ASSUMPTION_RANK_RTOL = 1e-8

# Sampled encoders and tolerance for the sequential-game runtime checks
SG_SAMPLES = 8
SG_TOL = 1e-8

# An energy constraint within this fraction of its budget counts as active
# when ascent directions are restricted to the tangent cone
ACTIVE_RTOL = 1e-6
