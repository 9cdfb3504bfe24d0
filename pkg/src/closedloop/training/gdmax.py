"""
Stochastic projected GDMax.

Every outer step takes one encoder ascent step on a class-stratified
minibatch, projects the encoder onto its constraint set (built from the full
dataset) and then solves the decoder's problem on the full data. The inner
solve keeps the best decoder it has seen, so u_dec never decreases across it.

Both players feed their optimizer only the component of the gradient tangent
to their constraint set at the current iterate, as Riemannian Adam does.
"""

import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import files
from ..errors import Diverged, InvalidConfig
from ..games.core import LinearDecoder, LinearEncoder, bind_game, pseudoinverse_decoder
from ..rates import ClassPartition
from ..subspaces.dataset import ClassMoments
from . import env, optim

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    outer_epochs: int = env.DEFAULT_OUTER_EPOCHS
    lr_encoder: float = env.DEFAULT_LR_ENCODER
    lr_decoder: float = env.DEFAULT_LR_DECODER
    inner_iters: int = env.DEFAULT_INNER_ITERS
    batch_size: int = env.DEFAULT_BATCH_SIZE
    seed: int = 0
    optimizer: str = env.OPTIMIZER_ADAM
    adam_betas: tuple = env.ADAM_BETAS
    adam_eps: float = env.ADAM_EPS
    inner_tol: float = env.INNER_GRAD_TOL
    average_last_epoch: bool = env.AVERAGE_LAST_EPOCH

    def __post_init__(self):
        if isinstance(self.adam_betas, (list, tuple)):
            object.__setattr__(self, "adam_betas", tuple(self.adam_betas))
        validate_train(self)

    def to_dict(self):
        out = asdict(self)
        out["adam_betas"] = list(self.adam_betas)
        return out

    @classmethod
    def from_dict(cls, data, prefix="train", path=None):
        return files.dataclass_from_dict(cls, data, prefix, path)


def validate_train(cfg):
    def fail(key, message):
        raise InvalidConfig(f"train.{key}: {message}")

    for key in ("outer_epochs", "inner_iters", "batch_size"):
        value = getattr(cfg, key)
        if not _is_int(value) or value < 1:
            fail(key, "must be a positive integer")
    for key in ("lr_encoder", "lr_decoder", "adam_eps", "inner_tol"):
        value = getattr(cfg, key)
        if not _is_real(value) or not value > 0:
            fail(key, "must be a positive number")
    if not _is_int(cfg.seed) or not 0 <= cfg.seed < 2**64:
        fail("seed", "must be an unsigned 64-bit integer")
    if cfg.optimizer not in optim.OPTIMIZERS:
        fail("optimizer", f"must be one of {sorted(optim.OPTIMIZERS)}")
    if not isinstance(cfg.average_last_epoch, bool):
        fail("average_last_epoch", "must be true or false")
    betas = cfg.adam_betas
    if (
        not isinstance(betas, tuple)
        or len(betas) != 2
        or not all(_is_real(b) and 0.0 <= b < 1.0 for b in betas)
    ):
        fail("adam_betas", "must be two numbers in [0, 1)")


def _is_int(v):
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


def _is_real(v):
    return isinstance(v, (int, float, np.number)) and not isinstance(v, bool) and np.isfinite(v)


HISTORY_COLUMNS = [
    "step",
    "epoch",
    "encoder_utility",
    "decoder_utility",
    "violation",
    "encoder_grad_norm",
    "decoder_grad_norm",
    "inner_steps",
]


@dataclass
class TrainHistory:
    """
    One row per outer step, in HISTORY_COLUMNS order. `elapsed` holds the
    wall-clock seconds since training started at the end of each step; it is
    kept out of `rows` so the rows are reproducible.
    """

    rows: list = field(default_factory=list)
    elapsed: list = field(default_factory=list)

    def append(self, row, elapsed):
        self.rows.append(row)
        self.elapsed.append(elapsed)

    def column(self, name):
        i = HISTORY_COLUMNS.index(name)
        return [row[i] for row in self.rows]

    def __len__(self):
        return len(self.rows)


def stratified_batch(partition, batch_size, rng):
    """
    Column indices of a class-stratified minibatch: ceil(b n_j / n) columns
    of every class, drawn without replacement and grouped by class. Returns
    (indices, per-class counts).
    """
    n = partition.n
    counts = []
    picks = []
    for j in range(partition.k):
        members = partition.indices(j)
        n_j = members.size
        size = min(n_j, -(-batch_size * n_j // n))
        picks.append(np.sort(rng.choice(members, size=size, replace=False)))
        counts.append(size)
    return np.concatenate(picks), counts


def batch_moments(ds, indices, counts):
    return ClassMoments.from_columns(ds.X[:, indices], ClassPartition.from_counts(counts))


def _finite(*values):
    return all(np.all(np.isfinite(v)) for v in values)


def _solve_decoder(game, F, G0, cfg, step=None):
    """
    Returns (G, u_dec, steps, grad_norm) for the best decoder seen, starting
    the optimizer from a fresh state at G0. Gradients are restricted to the
    decoder set's tangent space before the optimizer sees them, and
    `grad_norm` is the norm of that restricted gradient.
    """
    moments = game.moments
    rule = optim.OPTIMIZERS[cfg.optimizer]
    state = optim.init_state(cfg.optimizer, G0.shape, cfg.adam_betas, cfg.adam_eps)

    G = G0
    value, grad = game.decoder_value_and_gradient(F, G, moments)
    if not _finite(value, grad):
        raise Diverged(LinearEncoder(F), LinearDecoder(G0), step)
    direction = game.decoder_direction(G, grad)
    best_G, best_value, best_norm = G, value, float(np.linalg.norm(direction))
    steps = 0
    for _ in range(cfg.inner_iters):
        if float(np.linalg.norm(direction)) < cfg.inner_tol:
            break
        state, update = rule(state, direction, cfg.lr_decoder)
        candidate = G + update
        if not _finite(candidate):
            raise Diverged(LinearEncoder(F), LinearDecoder(best_G), step)
        G = game.project_decoder(candidate)
        steps += 1
        value, grad = game.decoder_value_and_gradient(F, G, moments)
        if not _finite(value, grad):
            raise Diverged(LinearEncoder(F), LinearDecoder(best_G), step)
        direction = game.decoder_direction(G, grad)
        if value > best_value:
            best_G, best_value, best_norm = G, value, float(np.linalg.norm(direction))
    return best_G, best_value, steps, best_norm


def inner_decoder_solve(spec, enc, dec0, ds, cfg):
    """
    Decoder ascent on u_dec with the encoder held fixed, evaluated on the full
    dataset: at most `cfg.inner_iters` optimizer steps, stopping early once the
    gradient norm drops below `cfg.inner_tol`.
    """
    game = bind_game(spec, ds)
    game.check_shapes(enc.F, dec0.G)
    G, _, _, _ = _solve_decoder(game, enc.F, dec0.G, cfg)
    return LinearDecoder(G)


def initial_pair(game, rng):
    """
    Gaussian encoder with entries of standard deviation 1/sqrt(d_x), projected
    onto the game's encoder set, and its pseudoinverse as decoder.
    """
    d_z, d_x = game.spec.d_z, game.spec.d_x
    F = game.project_encoder(rng.standard_normal((d_z, d_x)) / np.sqrt(d_x))
    G = game.project_decoder(pseudoinverse_decoder(LinearEncoder(F)).G)
    return F, G


def gdmax_train(spec, ds, cfg):
    game = bind_game(spec, ds)
    if cfg.batch_size > ds.n:
        raise InvalidConfig(f"train.batch_size: {cfg.batch_size} exceeds n={ds.n}")

    rng = np.random.default_rng(cfg.seed)
    rule = optim.OPTIMIZERS[cfg.optimizer]
    F, G = initial_pair(game, rng)
    state = optim.init_state(cfg.optimizer, F.shape, cfg.adam_betas, cfg.adam_eps)
    steps_per_epoch = -(-ds.n // cfg.batch_size)
    history = TrainHistory()
    started = time.perf_counter()

    log.info(
        "training %s: %d epochs x %d steps, batch %d, %d inner iterations",
        spec.kind.value,
        cfg.outer_epochs,
        steps_per_epoch,
        cfg.batch_size,
        cfg.inner_iters,
    )
    tail = np.zeros_like(F)
    step = 0
    for epoch in range(cfg.outer_epochs):
        for _ in range(steps_per_epoch):
            indices, counts = stratified_batch(ds.partition, cfg.batch_size, rng)
            batch = batch_moments(ds, indices, counts)
            grad_F = game.encoder_gradient(F, G, batch)
            if not _finite(grad_F):
                raise Diverged(LinearEncoder(F), LinearDecoder(G), step)
            direction = game.encoder_direction(F, grad_F)
            state, update = rule(state, direction, cfg.lr_encoder)
            candidate = F + update
            if not _finite(candidate):
                raise Diverged(LinearEncoder(F), LinearDecoder(G), step)

            F_next = game.project_encoder(candidate)
            try:
                G_next, u_dec, inner_steps, dec_norm = _solve_decoder(
                    game, F_next, G, cfg, step=step
                )
            except Diverged as e:
                raise Diverged(LinearEncoder(F), LinearDecoder(G), step) from e
            u_enc = game.encoder_utility(F_next, G_next, game.moments)
            if not _finite(u_enc, u_dec):
                raise Diverged(LinearEncoder(F), LinearDecoder(G), step)
            F, G = F_next, G_next
            if epoch == cfg.outer_epochs - 1:
                tail += F

            row = [
                step,
                epoch,
                float(u_enc),
                float(u_dec),
                game.violation(F),
                float(np.linalg.norm(direction)),
                dec_norm,
                inner_steps,
            ]
            history.append(row, time.perf_counter() - started)
            log.debug(
                "step %d: u_enc=%.6g u_dec=%.3e violation=%.2e inner=%d",
                step,
                u_enc,
                u_dec,
                row[4],
                inner_steps,
            )
            step += 1
        log.info(
            "epoch %d/%d: u_enc=%.6g u_dec=%.3e",
            epoch + 1,
            cfg.outer_epochs,
            history.rows[-1][2],
            history.rows[-1][3],
        )
    if cfg.average_last_epoch and steps_per_epoch > 1:
        F, G = _average_tail(game, tail / steps_per_epoch, F, G, cfg, step)
    return LinearEncoder(F), LinearDecoder(G), history


def _average_tail(game, mean, F, G, cfg, step):
    """
    Projects the mean of the last epoch's encoders back onto the encoder set
    and solves the decoder for it, warm-started at the last decoder.
    """
    F_mean = game.project_encoder(mean)
    try:
        G_mean, u_dec, _, _ = _solve_decoder(game, F_mean, G, cfg, step=step)
    except Diverged as e:
        raise Diverged(LinearEncoder(F), LinearDecoder(G), step) from e
    log.info(
        "averaged encoder: u_enc=%.6g u_dec=%.3e",
        game.encoder_utility(F_mean, G_mean, game.moments),
        u_dec,
    )
    return F_mean, G_mean
