from . import errors, experiment, files, games, metrics, rates, subspaces, training

__version__ = "0.1.0"

__all__ = [
    "errors",
    "experiment",
    "files",
    "games",
    "metrics",
    "rates",
    "subspaces",
    "training",
]
