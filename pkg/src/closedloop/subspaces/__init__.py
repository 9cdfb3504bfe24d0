from . import data, dataset, env, generate
from .data import load_dataset, save_dataset
from .dataset import ClassMoments, GenerationConfig, LabeledDataset
from .generate import generate as generate_dataset

__all__ = [
    "data",
    "dataset",
    "env",
    "generate",
    "load_dataset",
    "save_dataset",
    "ClassMoments",
    "GenerationConfig",
    "LabeledDataset",
    "generate_dataset",
]
