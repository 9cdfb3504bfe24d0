from dataclasses import asdict, dataclass, field

import numpy as np

from .. import files
from ..errors import InvalidConfig, ShapeMismatch
from ..rates import ClassPartition
from . import env


@dataclass(frozen=True)
class GenerationConfig:
    n_per_class: list = field(default_factory=lambda: list(env.BASELINE_N_PER_CLASS))
    d_x: int = env.BASELINE_D_X
    subspace_dims: list = field(
        default_factory=lambda: list(env.BASELINE_SUBSPACE_DIMS)
    )
    nu: float = env.NU_BENIGN
    sigma_sq: float = 0.0
    seed: int = 0

    def __post_init__(self):
        validate_generation(self)

    @property
    def k(self):
        return len(self.n_per_class)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data, prefix="generation", path=None):
        return files.dataclass_from_dict(cls, data, prefix, path)


def validate_generation(cfg):
    def fail(key, message):
        raise InvalidConfig(f"generation.{key}: {message}")

    if not cfg.n_per_class:
        fail("n_per_class", "at least one class is required")
    if len(cfg.subspace_dims) != len(cfg.n_per_class):
        fail(
            "subspace_dims",
            f"{len(cfg.subspace_dims)} dims for {len(cfg.n_per_class)} classes",
        )
    if any(not _is_int(n) or n < 1 for n in cfg.n_per_class):
        fail("n_per_class", "class sizes must be positive integers")
    if not _is_int(cfg.d_x) or cfg.d_x < 1:
        fail("d_x", "must be a positive integer")
    if any(not _is_int(d) or d < 1 for d in cfg.subspace_dims):
        fail("subspace_dims", "subspace dimensions must be positive integers")
    if max(cfg.subspace_dims) > cfg.d_x:
        fail("subspace_dims", f"{max(cfg.subspace_dims)} exceeds d_x={cfg.d_x}")
    if not np.isfinite(cfg.nu) or cfg.nu < 0:
        fail("nu", "must be a finite non-negative number")
    if not np.isfinite(cfg.sigma_sq) or cfg.sigma_sq < 0:
        fail("sigma_sq", "must be a finite non-negative number")
    if not _is_int(cfg.seed) or not 0 <= cfg.seed < 2**64:
        fail("seed", "must be an unsigned 64-bit integer")


def _is_int(v):
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """
    Data matrix X (d_x x n, columns sorted by class), its class partition,
    the perturbed unit-norm bases that generated each class and the config
    that produced it.
    """

    X: np.ndarray
    partition: ClassPartition
    bases: list
    config: GenerationConfig

    @property
    def d_x(self):
        return self.X.shape[0]

    @property
    def n(self):
        return self.X.shape[1]

    @property
    def k(self):
        return self.partition.k

    @property
    def subspace_dims(self):
        return [B.shape[1] for B in self.bases]

    def class_blocks(self):
        return self.partition.split(self.X)


@dataclass(frozen=True, eq=False)
class ClassMoments:
    """
    Per-class second moments M_j = X_j X_j^T and counts n_j. Every utility in
    the games depends on the data only through these.
    """

    moments: list
    counts: list

    @classmethod
    def from_columns(cls, X, partition):
        blocks = partition.split(X)
        return cls(
            moments=[B @ B.T for B in blocks],
            counts=[B.shape[1] for B in blocks],
        )

    @classmethod
    def from_dataset(cls, ds):
        return cls.from_columns(ds.X, ds.partition)

    @property
    def k(self):
        return len(self.counts)

    @property
    def n(self):
        return int(sum(self.counts))

    @property
    def d_x(self):
        return self.moments[0].shape[0]

    def total(self):
        return sum(self.moments)

    def pooled(self):
        """
        Single-class view: the whole sample as one class.
        """
        return ClassMoments(moments=[self.total()], counts=[self.n])


def check_matches(ds, d_x):
    if ds.d_x != d_x:
        raise ShapeMismatch(f"dataset has d_x={ds.d_x}, game expects {d_x}")


def subspace_ranks(ds, rtol=env.RANK_RTOL):
    """
    Numerical rank of each class block X_j.
    """
    return [_rank(Xj, rtol) for Xj in ds.class_blocks()]


def bases_rank(ds, rtol=env.RANK_RTOL):
    """
    Numerical rank of the concatenated class bases; equals sum(d_S_j) exactly
    when the class subspaces are linearly independent.
    """
    return _rank(np.hstack(ds.bases), rtol)


def span_residuals(ds):
    """
    Largest distance from a column of X_j to span(bases[j]), per class.
    """
    out = []
    for Xj, B in zip(ds.class_blocks(), ds.bases):
        Qb, _ = np.linalg.qr(B)
        resid = Xj - Qb @ (Qb.T @ Xj)
        out.append(float(np.max(np.linalg.norm(resid, axis=0))))
    return out


def _rank(A, rtol):
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))
