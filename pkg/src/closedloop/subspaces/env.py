# Baseline union-of-subspaces setup: three classes of 500 samples in 50
# dimensions on subspaces of dimension 3, 4 and 5
BASELINE_N_PER_CLASS = [500, 500, 500]
BASELINE_D_X = 50
BASELINE_SUBSPACE_DIMS = [3, 4, 5]

# Perturbation strengths: large nu gives near-orthogonal (benign) subspaces,
# small nu keeps every subspace close to the shared basis Q (correlated)
NU_BENIGN = 1e6
NU_CORRELATED = 0.1

# Ambient noise variance of the noisy variant
SIGMA_SQ_NOISY = 0.01

# Single-subspace baseline
SINGLE_N = 500
SINGLE_D_S = 10

# Seed streams, spawned from one SeedSequence in this order: the shared
# orthonormal basis, the per-class column selections, then three streams per
# class (Theta_j, xi_j, tau_j)
STREAM_BASIS = 0
STREAM_SELECTION = 1
STREAMS_PER_CLASS = 3

# Relative singular value cutoff for the rank diagnostics
RANK_RTOL = 1e-8
