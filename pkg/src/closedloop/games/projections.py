"""
Projections onto the players' constraint sets.

The multiple-subspace encoder set is the intersection of the per-class
energy constraints tr(F M_j F^T) <= n_j. Each one is an ellipsoidal cylinder
with an exact projection F (I + lam M_j)^-1, the multiplier found by
bisection; the intersection is reached with Dykstra's alternating
projections. Semi-orthogonal sets use the polar factor of the SVD.

Both sets also provide the tangent projection used to restrict ascent
directions before an optimizer step.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from ..errors import ProjectionDidNotConverge, RankDeficient
from . import env

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EnergyConstraint:
    """
    tr(F M F^T) <= budget, with M = V diag(mu) V^T stored by its
    eigendecomposition so that every evaluation is a weighted column norm.
    """

    mu: np.ndarray
    V: np.ndarray
    budget: float

    @classmethod
    def from_moment(cls, M, budget):
        mu, V = scipy.linalg.eigh(0.5 * (M + M.T))
        return cls(mu=np.clip(mu, 0.0, None), V=V, budget=float(budget))

    def energy(self, F):
        B = F @ self.V
        return float(np.sum(np.sum(B * B, axis=0) * self.mu))

    def violation(self, F):
        return max(0.0, self.energy(F) - self.budget) / self.budget

    def is_active(self, F, rtol=env.ACTIVE_RTOL):
        return self.energy(F) >= (1.0 - rtol) * self.budget

    def normal(self, F):
        """
        Half the gradient of tr(F M F^T), ie. F M.
        """
        return ((F @ self.V) * self.mu) @ self.V.T

    def project(self, F):
        B = F @ self.V
        w = np.sum(B * B, axis=0)

        def energy(lam):
            return float(np.sum(w * self.mu / (1.0 + lam * self.mu) ** 2))

        if energy(0.0) <= self.budget:
            return F

        hi = 1.0
        for _ in range(env.BISECT_MAX_DOUBLINGS):
            if energy(hi) <= self.budget:
                break
            hi *= 2.0
        lo = 0.0
        # keep `hi` on the feasible side so the result never overshoots
        for _ in range(env.BISECT_MAX_ITER):
            if self.budget - energy(hi) <= env.DYKSTRA_TOL * self.budget:
                break
            if hi - lo <= 1e-15 * hi:
                break
            mid = 0.5 * (lo + hi)
            if energy(mid) > self.budget:
                lo = mid
            else:
                hi = mid
        return (B / (1.0 + hi * self.mu)) @ self.V.T


@dataclass(frozen=True, eq=False)
class EnergyConstraints:
    constraints: list

    @classmethod
    def from_moments(cls, moments):
        return cls(
            [
                EnergyConstraint.from_moment(M, n_j)
                for M, n_j in zip(moments.moments, moments.counts)
            ]
        )

    @classmethod
    def from_pairs(cls, moments, budgets):
        return cls([EnergyConstraint.from_moment(M, b) for M, b in zip(moments, budgets)])

    def violation(self, F):
        return max(c.violation(F) for c in self.constraints)

    def tangent(self, F, D):
        """
        Projection of the direction D onto the tangent cone of the constraint
        set at F: D minus its nearest point in the cone spanned by the outward
        normals F M_i of the constraints that sit at their budget. Directions
        that point into the set come back unchanged.
        """
        normals = [c.normal(F) for c in self.constraints if c.is_active(F)]
        if not normals:
            return D
        A = np.stack([N.ravel() for N in normals], axis=1)
        weights, _ = scipy.optimize.nnls(A, D.ravel())
        return D - (A @ weights).reshape(D.shape)

    def project(self, F, max_sweeps=env.DYKSTRA_MAX_SWEEPS):
        """
        Dykstra's alternating projections onto the intersection of the
        energy constraints. Returns F itself when it is already feasible.
        """
        if self.violation(F) == 0.0:
            return F
        x = F.copy()
        increments = [np.zeros_like(F) for _ in self.constraints]
        worst = np.inf
        for sweep in range(1, max_sweeps + 1):
            x_prev = x
            for i, c in enumerate(self.constraints):
                y = c.project(x + increments[i])
                increments[i] = x + increments[i] - y
                x = y
            worst = self.violation(x)
            change = np.linalg.norm(x - x_prev)
            if worst <= env.DYKSTRA_TOL and change <= env.DYKSTRA_TOL * (
                1.0 + np.linalg.norm(x)
            ):
                log.debug("dykstra converged in %d sweeps", sweep)
                return x
        if worst <= env.DYKSTRA_ACCEPT:
            log.warning(
                "dykstra hit %d sweeps; accepting violation %.2e", max_sweeps, worst
            )
            return x
        raise ProjectionDidNotConverge(worst, max_sweeps)


def project_onto_constraints(F, moments, budgets):
    """
    Euclidean projection of F onto {F : tr(F M_i F^T) <= b_i for all i}.
    """
    return EnergyConstraints.from_pairs(moments, budgets).project(np.asarray(F, dtype=np.float64))


def polar(A):
    """
    Nearest semi-orthogonal matrix to A in Frobenius norm, U V^T from the
    thin SVD A = U S V^T.
    """
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    if s[0] == 0.0 or s[-1] < env.POLAR_RTOL * s[0]:
        raise RankDeficient(
            "polar factor undefined: singular values span [{:.3e}, {:.3e}]".format(
                s[-1], s[0]
            )
        )
    return U @ Vt


def stiefel_tangent(W, D):
    """
    Projection of D onto the tangent space of the semi-orthogonal matrices
    at W. With orthonormal columns this is D - W sym(W^T D), with orthonormal
    rows sym(D W^T) W is removed instead.
    """
    rows, cols = W.shape
    if rows >= cols:
        S = W.T @ D
        return D - W @ (0.5 * (S + S.T))
    S = D @ W.T
    return D - (0.5 * (S + S.T)) @ W


def semi_orthogonality_error(A):
    """
    Max-abs deviation of the thinner-side Gram from the identity.
    """
    rows, cols = A.shape
    gram = A @ A.T if rows <= cols else A.T @ A
    return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))
