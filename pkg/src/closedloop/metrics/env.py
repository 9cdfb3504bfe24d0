# Verifier thresholds for trained pairs. A singular value counts as nonzero
# above RANK_RTOL * sigma_1.
RANK_RTOL = 1e-3
SPECTRAL_TOL = 0.2
ORTHOGONALITY_TOL = 0.05
ALIGNMENT_TOL = 0.05
ISOMETRY_TOL = 0.01
ISOMETRY_FRACTION = 0.99

# Noisy data: sigma_{d_S_j} / sigma_{d_S_j + 1} above this counts as d_S_j
# dominant directions
DOMINANCE_MIN = 3.0

# Tolerance for analytic constructions
ORACLE_TOL = 1e-6

# Sample pairs closer than this are left out of the isometry ratios
ISOMETRY_MIN_DISTANCE = 1e-12

MODE_AUTO = "auto"
MODE_STRICT = "strict"
MODE_RELAXED = "relaxed"
MODES = (MODE_AUTO, MODE_STRICT, MODE_RELAXED)

STATUS_PASS = "pass"
STATUS_PARTIAL = "partial"
STATUS_FAIL = "fail"

# SVG heatmaps are block-averaged down to at most this many cells per side
HEATMAP_MAX_CELLS = 150
HISTOGRAM_BINS = 50
