import copy

DEFAULT_OUTPUT_DIR = "closedloop-out"
DEFAULT_PRESET = "benign"
DEFAULT_THREADS = 1

DATASET_CSV = "dataset.csv"
CONFIG_JSON = "config.json"
SUMMARY_CSV = "summary.csv"
SEED_DIR = "seed-{}"

_MSP_GAME = {"kind": "msp", "d_z": 40, "eps_sq": 1.0}
_SSP_GAME = {"kind": "ssp", "d_z": 40, "eps_sq": 1.0}

# minibatch noise keeps the class spectra jittering around the equilibrium,
# so the multiple-subspace runs report the mean of their last epoch
_MSP_TRAIN = {"average_last_epoch": True}

_K5 = {
    "n_per_class": [500, 500, 500, 500, 500],
    "subspace_dims": [3, 4, 5, 6, 7],
}

_SINGLE = {
    "n_per_class": [500],
    "d_x": 50,
    "subspace_dims": [10],
    "nu": 0.0,
    "sigma_sq": 0.0,
}

# Sweeps over the benign baseline and the single-subspace baseline
NOISE_SWEEP = [0.01, 0.025, 0.05]
EPS_SWEEP = [1.0, 0.75, 0.5, 0.25]
SWEEP_SIGMA_SQ = 0.01


def _msp(generation, game=None):
    return {"generation": generation, "game": game or _MSP_GAME, "train": _MSP_TRAIN}


def _ssp(generation, game=None):
    return {"generation": generation, "game": game or _SSP_GAME}


# Presets hold only the keys that differ from the dataclass defaults
PRESETS = {
    "benign": _msp({"nu": 1e6, "sigma_sq": 0.0}),
    "correlated": _msp({"nu": 0.1, "sigma_sq": 0.0}),
    "noisy": _msp({"nu": 0.1, "sigma_sq": 0.01}),
    "benign-k5": _msp({**_K5, "nu": 1e6, "sigma_sq": 0.0}),
    "correlated-k5": _msp({**_K5, "nu": 0.1, "sigma_sq": 0.0}),
    **{
        f"benign-noise-{sigma_sq:g}": _msp({"nu": 1e6, "sigma_sq": sigma_sq})
        for sigma_sq in NOISE_SWEEP
    },
    **{
        f"benign-eps-{eps_sq:g}": _msp(
            {"nu": 1e6, "sigma_sq": SWEEP_SIGMA_SQ}, {**_MSP_GAME, "eps_sq": eps_sq}
        )
        for eps_sq in EPS_SWEEP
    },
    "single": _ssp(_SINGLE),
    "single-wide-dx": _ssp({**_SINGLE, "d_x": 80}),
    "single-wide-dz": _ssp(_SINGLE, {**_SSP_GAME, "d_z": 60}),
    "single-wide-ds": _ssp({**_SINGLE, "subspace_dims": [40]}),
    "single-noisy": _ssp({**_SINGLE, "sigma_sq": 0.1}),
    **{
        f"single-eps-{eps_sq:g}": _ssp(
            {**_SINGLE, "sigma_sq": SWEEP_SIGMA_SQ}, {**_SSP_GAME, "eps_sq": eps_sq}
        )
        for eps_sq in EPS_SWEEP
    },
}


def preset(name):
    return copy.deepcopy(PRESETS[name])
