"""
Experiment configuration, schema "v1".

A config is one JSON object with the sections `generation`, `game`, `train`
and `thresholds`, plus `schema` and `output_dir`. Every section rejects
unknown keys and falls back to defaults for missing ones. Resolution order:
preset, then the `--config` file (section by section), then `--seed` and
`--output-dir`.
"""

import argparse
from dataclasses import asdict, dataclass, field, replace

from .. import files
from ..errors import ConfigError, InvalidConfig
from ..games.core import GameKind, GameSpec
from ..metrics.verify import Thresholds
from ..rates import Precision
from ..subspaces.dataset import GenerationConfig
from ..training.gdmax import TrainConfig
from . import env


@dataclass(frozen=True)
class GameConfig:
    kind: str = GameKind.MSP.value
    d_z: int = 40
    eps_sq: float = 1.0

    def __post_init__(self):
        if self.kind not in [k.value for k in GameKind]:
            raise InvalidConfig(f"game.kind: must be one of {[k.value for k in GameKind]}")
        if isinstance(self.d_z, bool) or not isinstance(self.d_z, int) or self.d_z < 1:
            raise InvalidConfig("game.d_z: must be a positive integer")
        if isinstance(self.eps_sq, bool) or not isinstance(self.eps_sq, (int, float)):
            raise InvalidConfig("game.eps_sq: must be a number")
        if not self.eps_sq > 0:
            raise InvalidConfig("game.eps_sq: must be positive")

    @classmethod
    def from_dict(cls, data, prefix="game", path=None):
        return files.dataclass_from_dict(cls, data, prefix, path)


SECTIONS = {
    "generation": GenerationConfig,
    "game": GameConfig,
    "train": TrainConfig,
    "thresholds": Thresholds,
}


@dataclass(frozen=True)
class ExperimentConfig:
    generation: GenerationConfig = field(default_factory=GenerationConfig)
    game: GameConfig = field(default_factory=GameConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    thresholds: Thresholds = field(default_factory=Thresholds)
    output_dir: str = env.DEFAULT_OUTPUT_DIR
    schema: str = files.SCHEMA

    @classmethod
    def from_dict(cls, data, path=None):
        if not isinstance(data, dict):
            raise ConfigError("<root>", "expected an object", path)
        allowed = set(SECTIONS) | {"output_dir", "schema"}
        for key in data:
            if key not in allowed:
                raise ConfigError(key, "unknown key", path)
        schema = data.get("schema", files.SCHEMA)
        if schema != files.SCHEMA:
            raise ConfigError("schema", f"unsupported schema {schema!r}", path)
        output_dir = data.get("output_dir", env.DEFAULT_OUTPUT_DIR)
        if not isinstance(output_dir, str) or not output_dir:
            raise ConfigError("output_dir", "must be a non-empty path", path)
        sections = {
            name: section.from_dict(data.get(name, {}), prefix=name, path=path)
            for name, section in SECTIONS.items()
        }
        return cls(output_dir=output_dir, schema=schema, **sections)

    def to_dict(self):
        out = {
            "schema": self.schema,
            "output_dir": self.output_dir,
            "generation": self.generation.to_dict(),
            "game": asdict(self.game),
            "train": self.train.to_dict(),
            "thresholds": self.thresholds.to_dict(),
        }
        return out

    @property
    def seed(self):
        return self.generation.seed

    @property
    def config_hash(self):
        data = self.to_dict()
        del data["output_dir"]
        return files.config_hash(data)

    def stamp(self):
        return {"config_hash": self.config_hash, "seed": self.seed}

    def spec(self):
        return GameSpec(
            kind=self.game.kind,
            d_x=self.generation.d_x,
            d_z=self.game.d_z,
            precision=Precision(float(self.game.eps_sq)),
        )

    def with_seed(self, seed):
        """
        Same experiment with `seed` driving both data generation and training.
        """
        return replace(
            self,
            generation=replace(self.generation, seed=seed),
            train=replace(self.train, seed=seed),
        )

    def with_output_dir(self, output_dir):
        return replace(self, output_dir=output_dir)


def merge(base, overlay):
    """
    Overlays `overlay` on `base` one level deep: sections are merged key by
    key, everything else is replaced.
    """
    out = dict(base)
    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = {**out[key], **value}
        else:
            out[key] = value
    return out


def resolve_config(preset=None, config_path=None, seed=None, output_dir=None):
    name = preset or env.DEFAULT_PRESET
    if name not in env.PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}, choose from {sorted(env.PRESETS)}")
    data = env.preset(name)
    if config_path is not None:
        overlay = files.read_json(config_path)
        if not isinstance(overlay, dict):
            raise ConfigError("<root>", "expected an object", config_path)
        data = merge(data, overlay)
    cfg = ExperimentConfig.from_dict(data, path=config_path)
    if seed is not None:
        cfg = cfg.with_seed(seed)
    if output_dir is not None:
        cfg = cfg.with_output_dir(output_dir)
    return cfg


def seed_type(value):
    try:
        seed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {value!r}")
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError(f"seed {seed} is not an unsigned 64-bit integer")
    return seed


def add_common_arguments(parser):
    parser.add_argument(
        "-c",
        "--config",
        default=None,
        help="Path to a v1 experiment config (JSON)",
    )
    parser.add_argument(
        "-p",
        "--preset",
        default=env.DEFAULT_PRESET,
        choices=sorted(env.PRESETS),
        help="Built-in experiment the config file is overlaid on",
    )
    parser.add_argument(
        "-s",
        "--seed",
        type=seed_type,
        default=None,
        help="Seed for data generation and training",
    )
    parser.add_argument(
        "--seeds",
        type=seed_type,
        nargs="+",
        default=None,
        help="Run once per seed, each in its own seed-<s> subdirectory",
    )
    parser.add_argument(
        "-o",
        "--output-dir",
        default=None,
        help="Directory for all artifacts",
    )
    parser.add_argument(
        "-t",
        "--threads",
        type=int,
        default=env.DEFAULT_THREADS,
        help="Seeds run concurrently with --seeds",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings only")


def config_from_args(args):
    return resolve_config(
        preset=args.preset,
        config_path=args.config,
        seed=args.seed,
        output_dir=args.output_dir,
    )
