"""
Measurements on representations: cosine heatmaps, class spectra, alignment
residuals, isometry ratios and cross-class Gram norms.
"""

import numpy as np
import scipy.spatial.distance

from ..errors import ShapeMismatch
from ..rates import check_partition
from . import env


def cosine_heatmap(Z):
    """
    n x n matrix of |cos| between columns of Z. Zero columns score 0 against
    everything, themselves included.
    """
    Z = np.asarray(Z, dtype=np.float64)
    norms = np.linalg.norm(Z, axis=0)
    nonzero = norms > 0
    unit = np.zeros_like(Z)
    unit[:, nonzero] = Z[:, nonzero] / norms[nonzero]
    C = np.abs(unit.T @ unit)
    C = np.clip(0.5 * (C + C.T), 0.0, 1.0)
    np.fill_diagonal(C, nonzero.astype(np.float64))
    return C


def class_spectra(Z, part):
    """
    Singular values of every class block, non-increasing.
    """
    check_partition(Z, part)
    return [np.linalg.svd(Zj, compute_uv=False) for Zj in part.split(Z)]


def numerical_rank(s, rtol):
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def alignment_residuals(Z, Zhat, part, rank_tol=env.RANK_RTOL):
    """
    Distance from every column of Z to the span of its class block of Zhat,
    in the column order of Z. The span keeps singular directions with
    sigma > rank_tol * sigma_1.
    """
    Z = np.asarray(Z, dtype=np.float64)
    Zhat = np.asarray(Zhat, dtype=np.float64)
    if Z.shape != Zhat.shape:
        raise ShapeMismatch(f"Z is {Z.shape} but Zhat is {Zhat.shape}")
    check_partition(Z, part)
    out = np.empty(Z.shape[1])
    for j in range(part.k):
        idx = part.indices(j)
        Zj = Z[:, idx]
        U, s, _ = np.linalg.svd(Zhat[:, idx], full_matrices=False)
        U = U[:, : numerical_rank(s, rank_tol)]
        out[idx] = np.linalg.norm(Zj - U @ (U.T @ Zj), axis=0)
    return out


def relative_residuals(Z, residuals):
    norms = np.linalg.norm(np.asarray(Z, dtype=np.float64), axis=0)
    rel = np.zeros_like(residuals)
    nonzero = norms > 0
    rel[nonzero] = residuals[nonzero] / norms[nonzero]
    return rel


def isometry_pairs(X, Z, min_distance=env.ISOMETRY_MIN_DISTANCE):
    """
    (i, j, ratio) for every unordered sample pair i < j whose distance in X
    is at least `min_distance`, ratio = ||z_i - z_j|| / ||x_i - x_j||.
    """
    X = np.asarray(X, dtype=np.float64)
    Z = np.asarray(Z, dtype=np.float64)
    if X.shape[1] != Z.shape[1]:
        raise ShapeMismatch(f"X has {X.shape[1]} columns but Z has {Z.shape[1]}")
    dx = scipy.spatial.distance.pdist(X.T)
    dz = scipy.spatial.distance.pdist(Z.T)
    i, j = np.triu_indices(X.shape[1], k=1)
    keep = dx >= min_distance
    return i[keep], j[keep], dz[keep] / dx[keep]


def isometry_ratios(X, Z, min_distance=env.ISOMETRY_MIN_DISTANCE):
    return isometry_pairs(X, Z, min_distance)[2]


def cross_gram(Z, part):
    """
    k x k matrix of ||Z_j^T Z_l||_F / (||Z_j||_F ||Z_l||_F); zero blocks give 0.
    """
    blocks = part.split(np.asarray(Z, dtype=np.float64))
    norms = [np.linalg.norm(B) for B in blocks]
    out = np.zeros((part.k, part.k))
    for a in range(part.k):
        for b in range(part.k):
            if norms[a] > 0 and norms[b] > 0:
                out[a, b] = np.linalg.norm(blocks[a].T @ blocks[b]) / (norms[a] * norms[b])
    return out


def spectral_dominance(spectra, dims):
    """
    sigma_{d_j} / sigma_{d_j + 1} per class; infinite when there is no
    (d_j + 1)-th value or it is zero.
    """
    out = []
    for s, d in zip(spectra, dims):
        s = np.asarray(s, dtype=np.float64)
        if s.size < d:
            out.append(0.0)
        elif s.size == d or s[d] <= 0:
            out.append(float("inf") if s[d - 1] > 0 else 0.0)
        else:
            out.append(float(s[d - 1] / s[d]))
    return out
