from . import checks, core, data, env, oracle, projections
from .core import (
    GameKind,
    GameSpec,
    LinearDecoder,
    LinearEncoder,
    bind_game,
    decoder_gradient,
    decoder_utility,
    encoder_gradient,
    encoder_utility,
    project_decoder_ssp,
    project_encoder_msp,
    project_encoder_ssp,
    pseudoinverse_decoder,
)
from .oracle import oracle_msp_encoder, oracle_ssp_encoder

__all__ = [
    "checks",
    "core",
    "data",
    "env",
    "oracle",
    "projections",
    "GameKind",
    "GameSpec",
    "LinearDecoder",
    "LinearEncoder",
    "bind_game",
    "decoder_gradient",
    "decoder_utility",
    "encoder_gradient",
    "encoder_utility",
    "oracle_msp_encoder",
    "oracle_ssp_encoder",
    "project_decoder_ssp",
    "project_encoder_msp",
    "project_encoder_ssp",
    "pseudoinverse_decoder",
]
