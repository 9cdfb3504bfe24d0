import numpy as np
import pytest

from closedloop.rates import ClassPartition, Precision
from closedloop.subspaces.dataset import GenerationConfig, LabeledDataset
from closedloop.subspaces.generate import generate


def central_difference(fun, A, step=1e-6):
    """
    Gradient of the scalar function `fun` at A by central differences, one
    entry at a time.
    """
    A = np.asarray(A, dtype=np.float64)
    grad = np.zeros_like(A)
    for idx in np.ndindex(A.shape):
        E = np.zeros_like(A)
        E[idx] = step
        grad[idx] = (fun(A + E) - fun(A - E)) / (2 * step)
    return grad


def relative_error(a, b):
    scale = max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)
    return float(np.linalg.norm(a - b) / scale)


def make_dataset(**kwargs):
    return generate(GenerationConfig(**kwargs))


def dataset_from_blocks(blocks, bases=None):
    """
    LabeledDataset from explicit class blocks; bases default to orthonormal
    bases of each block's column span.
    """
    X = np.hstack(blocks)
    if bases is None:
        bases = []
        for B in blocks:
            U, s, _ = np.linalg.svd(B, full_matrices=False)
            bases.append(U[:, : int(np.sum(s > 1e-10 * s[0]))])
    cfg = GenerationConfig(
        n_per_class=[B.shape[1] for B in blocks],
        d_x=X.shape[0],
        subspace_dims=[b.shape[1] for b in bases],
    )
    return LabeledDataset(
        X=X,
        partition=ClassPartition.from_counts(cfg.n_per_class),
        bases=bases,
        config=cfg,
    )


@pytest.fixture
def unit_precision():
    return Precision(1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def toy_dataset():
    # two classes in R^6, small enough for entrywise finite differences
    return make_dataset(n_per_class=[6, 8], d_x=6, subspace_dims=[2, 2], nu=1.0, seed=3)


@pytest.fixture(scope="session")
def toy_single_dataset():
    return make_dataset(n_per_class=[9], d_x=6, subspace_dims=[3], nu=0.0, seed=5)


@pytest.fixture(scope="session")
def small_dataset():
    # three incoherent classes satisfying every multiple-subspace assumption
    # with d_z = 15
    return make_dataset(
        n_per_class=[60, 60, 60], d_x=20, subspace_dims=[2, 3, 4], nu=1e6, seed=11
    )


@pytest.fixture(scope="session")
def baseline_dataset():
    return make_dataset(nu=1e6, sigma_sq=0.0, seed=0)


@pytest.fixture(scope="session")
def single_dataset():
    return make_dataset(n_per_class=[500], d_x=50, subspace_dims=[10], nu=0.0, seed=0)
