"""
Analytic equilibrium candidates, used as test oracles and as references in
reports.
"""

import logging

import numpy as np
import scipy.linalg

from ..errors import AssumptionViolated
from ..subspaces.dataset import bases_rank
from . import env
from .core import LinearDecoder, LinearEncoder, pseudoinverse_decoder

log = logging.getLogger(__name__)


def class_frames(ds, rtol=env.ASSUMPTION_RANK_RTOL):
    """
    Top d_S_j left singular vectors and singular values of each class block.
    Raises AssumptionViolated when a block has fewer than d_S_j directions.
    """
    frames = []
    for j, (Xj, d_j) in enumerate(zip(ds.class_blocks(), ds.subspace_dims)):
        U, s, _ = np.linalg.svd(Xj, full_matrices=False)
        if s.size < d_j or s[d_j - 1] <= rtol * s[0]:
            raise AssumptionViolated(
                "informative data", f"class {j} spans fewer than {d_j} directions"
            )
        frames.append((U[:, :d_j], s[:d_j]))
    return frames


def oracle_msp_encoder(ds, d_z, p):
    """
    Encoder that sends each class subspace onto its own block of coordinate
    axes of R^{d_z} with every nonzero singular value of F X_j equal to
    sqrt(n_j / d_S_j), so ||F X_j||_F^2 = n_j and distinct classes land on
    orthogonal blocks. The decoder is the pseudoinverse.
    """
    dims = ds.subspace_dims
    total = sum(dims)
    if total > min(ds.d_x, d_z):
        raise AssumptionViolated(
            "large enough representation space",
            f"sum of subspace dims {total} > min(d_x, d_z) = {min(ds.d_x, d_z)}",
        )
    if bases_rank(ds) != total:
        raise AssumptionViolated(
            "incoherent class data", f"class bases span fewer than {total} dimensions"
        )
    counts = ds.partition.class_counts
    worst = min(counts[j] / ds.n * d_z**2 / d**2 for j, d in enumerate(dims))
    if p.eps_sq**2 > worst:
        log.warning("eps^4=%g exceeds the high coding precision bound %g", p.eps_sq**2, worst)

    frames = class_frames(ds)
    U = np.hstack([u for u, _ in frames])
    target = np.zeros((d_z, total))
    offset = 0
    for j, (_, s) in enumerate(frames):
        d_j = dims[j]
        scale = np.sqrt(counts[j] / d_j) / s
        target[offset : offset + d_j, offset : offset + d_j] = np.diag(scale)
        offset += d_j
    # F U = target, minimum-norm solution; exact because U has full column rank
    Ft, *_ = scipy.linalg.lstsq(U.T, target.T)
    enc = LinearEncoder(Ft.T)
    return enc, pseudoinverse_decoder(enc)


def oracle_ssp_encoder(ds, d_z):
    """
    Semi-orthogonal encoder whose row space contains the data subspace, so it
    is an isometry on it. The decoder is its transpose, which is both its
    pseudoinverse and semi-orthogonal.
    """
    d_s = ds.subspace_dims[0]
    if d_s > min(ds.d_x, d_z):
        raise AssumptionViolated(
            "large enough representation space",
            f"d_S={d_s} > min(d_x, d_z) = {min(ds.d_x, d_z)}",
        )
    if d_z >= ds.d_x:
        F = np.eye(d_z, ds.d_x)
    else:
        (U, _), = class_frames(ds)
        rest = scipy.linalg.null_space(U.T)[:, : d_z - d_s]
        F = np.hstack([U, rest]).T
    return LinearEncoder(F), LinearDecoder(F.T.copy())
