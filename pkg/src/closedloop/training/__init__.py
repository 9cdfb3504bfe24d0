from . import data, env, gdmax, optim
from .gdmax import (
    TrainConfig,
    TrainHistory,
    gdmax_train,
    inner_decoder_solve,
    stratified_batch,
)
from .optim import adam_step, gd_step

__all__ = [
    "data",
    "env",
    "gdmax",
    "optim",
    "TrainConfig",
    "TrainHistory",
    "adam_step",
    "gd_step",
    "gdmax_train",
    "inner_decoder_solve",
    "stratified_batch",
]
