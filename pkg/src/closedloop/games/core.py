"""
Closed-loop transcription games between a linear encoder f(x) = Fx and a
linear decoder g(z) = Gz.

Every game has the sequential shape

    u_enc(F, G) = E(F) - C(F, G)        (encoder, moves first)
    u_dec(F, G) = C(F, G)               (decoder, moves second)

with compatibility C(F, G) = -sum_j dR(F X_j, F G F X_j) over the game's
classes. The multiple-subspace game uses the class-wise rate reduction of FX
as expressiveness E and bounds each class energy ||F X_j||_F^2 <= n_j. The
single-subspace game pools all samples into one class, uses the coding rate
R(FX) as E and restricts both players to semi-orthogonal maps.

Utilities and gradients are evaluated from the class second moments
M_j = X_j X_j^T (see ClassMoments): with S_j = F M_j F^T and A = F G every
term is a function of d_z x d_z matrices.
"""

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .. import rates
from ..errors import AssumptionViolated, InvalidInput, ShapeMismatch
from ..rates import Precision
from ..subspaces.dataset import ClassMoments, check_matches
from . import env, projections


class GameKind(enum.Enum):
    MSP = "msp"
    SSP = "ssp"


@dataclass(frozen=True)
class GameSpec:
    kind: GameKind
    d_x: int
    d_z: int
    precision: Precision

    def __post_init__(self):
        if not isinstance(self.kind, GameKind):
            object.__setattr__(self, "kind", GameKind(self.kind))
        if self.d_x < 1 or self.d_z < 1:
            raise InvalidInput(f"d_x and d_z must be positive, got {self.d_x}, {self.d_z}")


@dataclass(frozen=True, eq=False)
class LinearEncoder:
    F: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "F", rates.check_rep(self.F, "F"))

    @property
    def d_z(self):
        return self.F.shape[0]

    @property
    def d_x(self):
        return self.F.shape[1]

    def __call__(self, X):
        return self.F @ X


@dataclass(frozen=True, eq=False)
class LinearDecoder:
    G: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "G", rates.check_rep(self.G, "G"))

    def __call__(self, Z):
        return self.G @ Z


def pseudoinverse_decoder(enc):
    """
    Moore-Penrose pseudoinverse of the encoder matrix, via the SVD with
    singular values under PINV_RTOL * sigma_max treated as zero.
    """
    U, s, Vt = np.linalg.svd(enc.F, full_matrices=False)
    cutoff = env.PINV_RTOL * (s[0] if s.size else 0.0)
    inv = np.zeros_like(s)
    keep = s > cutoff
    inv[keep] = 1.0 / s[keep]
    return LinearDecoder((Vt.T * inv) @ U.T)


def _sym(S):
    return 0.5 * (S + S.T)


def pair_terms(F, G, M, n_j, p, grads=True):
    """
    dR(F X_j, F G F X_j) for a class with moment M = X_j X_j^T and its
    gradients with respect to F and G.

    Returns (value, grad_F, grad_G); the gradients are None when `grads` is
    False.
    """
    A = F @ G
    FM = F @ M
    S = _sym(FM @ F.T)
    T = _sym(A @ S @ A.T)
    value = (
        rates.coding_rate_from_moment(S + T, 2 * n_j, p)
        - 0.5 * rates.coding_rate_from_moment(S, n_j, p)
        - 0.5 * rates.coding_rate_from_moment(T, n_j, p)
    )
    if not grads:
        return value, None, None
    K_joint = rates.rate_kernel(S + T, 2 * n_j, p)
    # d/dZ_j and d/dW_j with W_j = A Z_j, as left multipliers
    L_z = K_joint - 0.5 * rates.rate_kernel(S, n_j, p)
    L_w = K_joint - 0.5 * rates.rate_kernel(T, n_j, p)
    L_w_AS = L_w @ A @ S
    grad_F = L_z @ FM + L_w_AS @ G.T + A.T @ L_w @ A @ FM
    grad_G = F.T @ L_w_AS
    return value, grad_F, grad_G


class Game:
    """
    A bound game: spec plus the dataset the encoder constraint set is built
    from. Subclasses define the expressiveness, which classes the
    compatibility runs over, and the two players' constraint sets.
    """

    KIND = None

    def __init__(self, spec, moments):
        self.spec = spec
        self.precision = spec.precision
        self.moments = moments

    def check_shapes(self, F, G=None):
        if F.shape != (self.spec.d_z, self.spec.d_x):
            raise ShapeMismatch(
                f"encoder is {F.shape}, game expects {(self.spec.d_z, self.spec.d_x)}"
            )
        if G is not None and G.shape != (self.spec.d_x, self.spec.d_z):
            raise ShapeMismatch(
                f"decoder is {G.shape}, game expects {(self.spec.d_x, self.spec.d_z)}"
            )

    def classes(self, moments):
        return moments

    def expressiveness(self, F, moments):
        raise NotImplementedError()

    def expressiveness_grad(self, F, moments):
        raise NotImplementedError()

    def compatibility(self, F, G, moments, grads=False):
        """
        C(F, G) and, when `grads` is set, its gradients in F and G.
        """
        classes = self.classes(moments)
        value = 0.0
        grad_F = np.zeros_like(F) if grads else None
        grad_G = np.zeros_like(G) if grads else None
        for M, n_j in zip(classes.moments, classes.counts):
            v, gF, gG = pair_terms(F, G, M, n_j, self.precision, grads=grads)
            value -= v
            if grads:
                grad_F -= gF
                grad_G -= gG
        return value, grad_F, grad_G

    def encoder_utility(self, F, G, moments):
        self.check_shapes(F, G)
        return self.expressiveness(F, moments) - self.compatibility(F, G, moments)[0]

    def decoder_utility(self, F, G, moments):
        self.check_shapes(F, G)
        return self.compatibility(F, G, moments)[0]

    def encoder_gradient(self, F, G, moments):
        self.check_shapes(F, G)
        _, grad_F, _ = self.compatibility(F, G, moments, grads=True)
        return self.expressiveness_grad(F, moments) - grad_F

    def decoder_gradient(self, F, G, moments):
        self.check_shapes(F, G)
        return self.compatibility(F, G, moments, grads=True)[2]

    def decoder_value_and_gradient(self, F, G, moments):
        value, _, grad_G = self.compatibility(F, G, moments, grads=True)
        return value, grad_G

    def project_encoder(self, F):
        raise NotImplementedError()

    def project_decoder(self, G):
        return G

    def encoder_direction(self, F, grad):
        """
        The part of an encoder ascent direction the constraint set lets the
        encoder follow at F.
        """
        return grad

    def decoder_direction(self, G, grad):
        return grad

    def violation(self, F):
        raise NotImplementedError()


class MultipleSubspaceGame(Game):
    KIND = GameKind.MSP

    @cached_property
    def constraints(self):
        return projections.EnergyConstraints.from_moments(self.moments)

    def expressiveness(self, F, moments):
        p = self.precision
        total = rates.coding_rate_from_moment(_sym(F @ moments.total() @ F.T), moments.n, p)
        for M, n_j in zip(moments.moments, moments.counts):
            total -= (n_j / moments.n) * rates.coding_rate_from_moment(
                _sym(F @ M @ F.T), n_j, p
            )
        return total

    def expressiveness_grad(self, F, moments):
        p = self.precision
        FM = F @ moments.total()
        grad = rates.rate_kernel(_sym(FM @ F.T), moments.n, p) @ FM
        for M, n_j in zip(moments.moments, moments.counts):
            FMj = F @ M
            grad -= (n_j / moments.n) * (
                rates.rate_kernel(_sym(FMj @ F.T), n_j, p) @ FMj
            )
        return grad

    def project_encoder(self, F):
        return self.constraints.project(F)

    def encoder_direction(self, F, grad):
        return self.constraints.tangent(F, grad)

    def violation(self, F):
        return self.constraints.violation(F)


class SingleSubspaceGame(Game):
    KIND = GameKind.SSP

    def classes(self, moments):
        return moments.pooled()

    def expressiveness(self, F, moments):
        return rates.coding_rate_from_moment(
            _sym(F @ moments.total() @ F.T), moments.n, self.precision
        )

    def expressiveness_grad(self, F, moments):
        FM = F @ moments.total()
        return rates.rate_kernel(_sym(FM @ F.T), moments.n, self.precision) @ FM

    def project_encoder(self, F):
        return projections.polar(F)

    def project_decoder(self, G):
        return projections.polar(G)

    def encoder_direction(self, F, grad):
        return projections.stiefel_tangent(F, grad)

    def decoder_direction(self, G, grad):
        return projections.stiefel_tangent(G, grad)

    def violation(self, F):
        return projections.semi_orthogonality_error(F)


GAMES = {
    GameKind.MSP: MultipleSubspaceGame,
    GameKind.SSP: SingleSubspaceGame,
}


def bind_game(spec, ds):
    """
    Binds a game to a dataset. The multiple-subspace game needs at least two
    classes, the single-subspace game exactly one.
    """
    check_matches(ds, spec.d_x)
    if spec.kind is GameKind.MSP and ds.k < 2:
        raise AssumptionViolated("multiple classes", f"k={ds.k}, need k >= 2")
    if spec.kind is GameKind.SSP and ds.k != 1:
        raise AssumptionViolated("single class", f"k={ds.k}, need k = 1")
    return GAMES[spec.kind](spec, ClassMoments.from_dataset(ds))


def encoder_utility(spec, enc, dec, ds):
    game = bind_game(spec, ds)
    return game.encoder_utility(enc.F, dec.G, game.moments)


def decoder_utility(spec, enc, dec, ds):
    game = bind_game(spec, ds)
    return game.decoder_utility(enc.F, dec.G, game.moments)


def encoder_gradient(spec, enc, dec, ds):
    game = bind_game(spec, ds)
    return game.encoder_gradient(enc.F, dec.G, game.moments)


def decoder_gradient(spec, enc, dec, ds):
    game = bind_game(spec, ds)
    return game.decoder_gradient(enc.F, dec.G, game.moments)


def project_encoder_msp(enc, ds):
    check_matches(ds, enc.d_x)
    constraints = projections.EnergyConstraints.from_moments(ClassMoments.from_dataset(ds))
    return LinearEncoder(constraints.project(enc.F))


def project_encoder_ssp(enc):
    return LinearEncoder(projections.polar(enc.F))


def project_decoder_ssp(dec):
    return LinearDecoder(projections.polar(dec.G))
