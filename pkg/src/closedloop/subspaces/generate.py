"""
Synthetic union-of-subspaces data.

One random orthonormal basis Q (d_x x max_j d_S_j) is shared by all classes.
Class j picks d_S_j of its columns without replacement, perturbs them with
(I + nu Theta_j), normalizes the columns and draws n_j samples on the
resulting subspace, plus isotropic ambient noise of total variance sigma^2.
"""

import logging

import numpy as np

from ..rates import ClassPartition
from . import env
from .dataset import LabeledDataset

log = logging.getLogger(__name__)


def streams(seed, k):
    """
    Independent PCG64 generators for one dataset, in the fixed order Q,
    selections, then (Theta_j, xi_j, tau_j) for each class.
    """
    children = np.random.SeedSequence(seed).spawn(2 + env.STREAMS_PER_CLASS * k)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def orthonormal_basis(rng, d_x, width):
    Q, _ = np.linalg.qr(rng.standard_normal((d_x, width)))
    return Q


def perturbed_basis(Q_j, theta, nu):
    B = Q_j + nu * (theta @ Q_j)
    return B / np.linalg.norm(B, axis=0, keepdims=True)


def generate(cfg):
    k = cfg.k
    rngs = streams(cfg.seed, k)
    d_x = cfg.d_x
    Q = orthonormal_basis(rngs[env.STREAM_BASIS], d_x, max(cfg.subspace_dims))
    select = rngs[env.STREAM_SELECTION]
    noise_scale = np.sqrt(cfg.sigma_sq / d_x)

    blocks = []
    bases = []
    for j, (n_j, d_j) in enumerate(zip(cfg.n_per_class, cfg.subspace_dims)):
        theta_rng, xi_rng, tau_rng = rngs[2 + env.STREAMS_PER_CLASS * j :][:3]
        cols = select.choice(Q.shape[1], size=d_j, replace=False)
        theta = theta_rng.standard_normal((d_x, d_x))
        basis = perturbed_basis(Q[:, cols], theta, cfg.nu)
        xi = xi_rng.standard_normal((d_j, n_j))
        tau = tau_rng.standard_normal((d_x, n_j))
        blocks.append(basis @ xi + noise_scale * tau)
        bases.append(basis)
        log.debug("class %d: columns %s of Q, %d samples", j, cols.tolist(), n_j)

    X = np.hstack(blocks)
    partition = ClassPartition.from_counts(cfg.n_per_class)
    log.info(
        "generated %d samples in R^%d on %d subspaces (nu=%g, sigma^2=%g)",
        X.shape[1],
        d_x,
        k,
        cfg.nu,
        cfg.sigma_sq,
    )
    return LabeledDataset(X=X, partition=partition, bases=bases, config=cfg)
