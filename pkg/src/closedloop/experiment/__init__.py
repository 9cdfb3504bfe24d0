from . import commands, config, env
from .commands import run_all, run_generate, run_report, run_train, run_verify
from .config import ExperimentConfig, GameConfig, resolve_config

__all__ = [
    "commands",
    "config",
    "env",
    "ExperimentConfig",
    "GameConfig",
    "resolve_config",
    "run_all",
    "run_generate",
    "run_report",
    "run_train",
    "run_verify",
]
