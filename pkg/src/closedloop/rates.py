"""
Coding rate and rate reduction of representation matrices.

A representation matrix Z is d_z x n with one sample per column. All logs are
natural logs. The rate only depends on Z through its second moment ZZ^T, so
every function here has a moment form as well; the games use the moment form
because class moments are cheap to keep around while training.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InvalidInput, PartitionMismatch, ShapeMismatch


@dataclass(frozen=True)
class Precision:
    eps_sq: float

    def __post_init__(self):
        if not np.isfinite(self.eps_sq) or self.eps_sq <= 0:
            raise InvalidInput(f"eps_sq must be positive, got {self.eps_sq}")


@dataclass(frozen=True, eq=False)
class ClassPartition:
    """
    Class membership of the columns of a representation matrix. Labels are
    0-based class indices; every class in 0..k-1 must own at least one column.
    """

    labels: np.ndarray
    k: int
    class_counts: np.ndarray

    @classmethod
    def from_labels(cls, labels, k=None):
        labels = np.array(labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise PartitionMismatch("labels must be a non-empty vector")
        if labels.min() < 0:
            raise PartitionMismatch("labels must be non-negative")
        if k is None:
            k = int(labels.max()) + 1
        if labels.max() >= k:
            raise PartitionMismatch(f"label {labels.max()} out of range for k={k}")
        counts = np.bincount(labels, minlength=k)
        if np.any(counts == 0):
            empty = [int(j) for j in np.flatnonzero(counts == 0)]
            raise PartitionMismatch(f"classes without samples: {empty}")
        labels.setflags(write=False)
        counts.setflags(write=False)
        return cls(labels=labels, k=int(k), class_counts=counts)

    @classmethod
    def from_counts(cls, counts):
        """
        Partition of class-sorted columns, `counts[j]` columns per class.
        """
        labels = np.repeat(np.arange(len(counts)), counts)
        return cls.from_labels(labels, k=len(counts))

    @property
    def n(self):
        return int(self.labels.size)

    def indices(self, j):
        return np.flatnonzero(self.labels == j)

    def split(self, Z):
        check_partition(Z, self)
        return [Z[:, self.indices(j)] for j in range(self.k)]


def check_rep(Z, name="Z"):
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[0] < 1 or Z.shape[1] < 1:
        raise InvalidInput(f"{name} must be a non-empty matrix, got shape {Z.shape}")
    if not np.all(np.isfinite(Z)):
        raise InvalidInput(f"{name} has non-finite entries")
    return Z


def check_partition(Z, part):
    if part.n != Z.shape[1]:
        raise PartitionMismatch(
            f"partition has {part.n} labels but the matrix has {Z.shape[1]} columns"
        )


def _alpha(d, n, p):
    return d / (n * p.eps_sq)


def _half_logdet(gram, alpha):
    # eigenvalues of a PSD Gram; round-off negatives are clipped
    eig = scipy.linalg.eigvalsh(gram)
    return 0.5 * float(np.sum(np.log1p(alpha * np.clip(eig, 0.0, None))))


def coding_rate_from_moment(S, n, p):
    """
    R of any Z with ZZ^T = S and n columns.
    """
    return _half_logdet(S, _alpha(S.shape[0], n, p))


def rate_kernel(S, n, p):
    """
    alpha (I + alpha S)^-1 with alpha = d/(n eps^2). For S = ZZ^T the gradient
    of R at Z is rate_kernel(S, n, p) @ Z.
    """
    d = S.shape[0]
    alpha = _alpha(d, n, p)
    return alpha * scipy.linalg.solve(
        np.eye(d) + alpha * S, np.eye(d), assume_a="pos"
    )


def coding_rate(Z, p):
    Z = check_rep(Z)
    d, n = Z.shape
    alpha = _alpha(d, n, p)
    # det(I + a ZZ^T) = det(I + a Z^T Z); use the smaller side
    if n < d:
        return _half_logdet(Z.T @ Z, alpha)
    return _half_logdet(Z @ Z.T, alpha)


def rate_reduction_classwise(Z, part, p):
    Z = check_rep(Z)
    check_partition(Z, part)
    n = Z.shape[1]
    compressed = sum(
        (Zj.shape[1] / n) * coding_rate(Zj, p) for Zj in part.split(Z)
    )
    return coding_rate(Z, p) - compressed


def rate_reduction_pair(Z1, Z2, p):
    Z1 = check_rep(Z1, "Z1")
    Z2 = check_rep(Z2, "Z2")
    if Z1.shape != Z2.shape:
        raise ShapeMismatch(
            f"pairwise rate reduction needs equal shapes, got {Z1.shape} and {Z2.shape}"
        )
    joint = coding_rate(np.hstack([Z1, Z2]), p)
    return joint - 0.5 * coding_rate(Z1, p) - 0.5 * coding_rate(Z2, p)


def grad_coding_rate(Z, p):
    Z = check_rep(Z)
    d, n = Z.shape
    alpha = _alpha(d, n, p)
    if n < d:
        # push-through: (I + a ZZ^T)^-1 Z = Z (I + a Z^T Z)^-1
        inner = np.eye(n) + alpha * (Z.T @ Z)
        return alpha * scipy.linalg.solve(inner, Z.T, assume_a="pos").T
    return rate_kernel(Z @ Z.T, n, p) @ Z


def classwise_upper_bound(Z, part, p):
    """
    Upper bound on rate_reduction_classwise built from the singular values of
    each class block alone:

        1/(2n) sum_j sum_p [ n log(1 + a s_jp^2) - n_j log(1 + a_j s_jp^2) ]

    with a = d/(n eps^2), a_j = d/(n_j eps^2). Tight exactly when the class
    blocks are mutually orthogonal (Z_j^T Z_l = 0 for j != l).
    """
    Z = check_rep(Z)
    check_partition(Z, part)
    d, n = Z.shape
    alpha = _alpha(d, n, p)
    total = 0.0
    for Zj in part.split(Z):
        nj = Zj.shape[1]
        sq = np.linalg.svd(Zj, compute_uv=False) ** 2
        alpha_j = _alpha(d, nj, p)
        total += float(
            np.sum(n * np.log1p(alpha * sq) - nj * np.log1p(alpha_j * sq))
        )
    return total / (2 * n)
