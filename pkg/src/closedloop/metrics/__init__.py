from . import data, env, measures, render, verify
from .measures import (
    alignment_residuals,
    class_spectra,
    cosine_heatmap,
    isometry_ratios,
    spectral_dominance,
)
from .verify import (
    EquilibriumReport,
    Thresholds,
    judge,
    verify_msp_equilibrium,
    verify_ssp_equilibrium,
)

__all__ = [
    "data",
    "env",
    "measures",
    "render",
    "verify",
    "EquilibriumReport",
    "Thresholds",
    "alignment_residuals",
    "class_spectra",
    "cosine_heatmap",
    "isometry_ratios",
    "judge",
    "spectral_dominance",
    "verify_msp_equilibrium",
    "verify_ssp_equilibrium",
]
