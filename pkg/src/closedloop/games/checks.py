"""
Runtime checks of the assumptions under which the games' equilibria are
characterized. Each check returns an AssumptionCheck instead of raising, so
reports can show every item side by side.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import ClosedLoopError
from ..subspaces.dataset import bases_rank, subspace_ranks
from . import env
from .core import GameKind, LinearEncoder, pseudoinverse_decoder
from .oracle import oracle_msp_encoder, oracle_ssp_encoder


@dataclass
class AssumptionCheck:
    name: str
    passed: bool
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def check_msp_assumptions(ds, spec):
    dims = ds.subspace_dims
    counts = [int(c) for c in ds.partition.class_counts]
    ranks = subspace_ranks(ds, rtol=env.ASSUMPTION_RANK_RTOL)
    total = sum(dims)
    span = bases_rank(ds, rtol=env.ASSUMPTION_RANK_RTOL)
    bound = min(c / ds.n * spec.d_z**2 / d**2 for c, d in zip(counts, dims))
    eps4 = spec.precision.eps_sq**2
    return [
        AssumptionCheck("multiple classes", ds.k >= 2, {"k": ds.k}),
        AssumptionCheck(
            "informative data",
            ranks == dims,
            {"ranks": ranks, "subspace_dims": dims},
        ),
        AssumptionCheck(
            "large enough representation space",
            total <= min(ds.d_x, spec.d_z),
            {"sum_dims": total, "d_x": ds.d_x, "d_z": spec.d_z},
        ),
        AssumptionCheck(
            "incoherent class data",
            span == total,
            {"span_dim": span, "sum_dims": total},
        ),
        AssumptionCheck(
            "high coding precision",
            eps4 <= bound,
            {"eps4": eps4, "bound": bound},
        ),
    ]


def check_ssp_assumptions(ds, spec):
    d_s = ds.subspace_dims[0]
    (rank,) = subspace_ranks(ds, rtol=env.ASSUMPTION_RANK_RTOL)
    return [
        AssumptionCheck("informative data", rank == d_s, {"rank": rank, "d_S": d_s}),
        AssumptionCheck(
            "large enough representation space",
            d_s <= min(ds.d_x, spec.d_z),
            {"d_S": d_s, "d_x": ds.d_x, "d_z": spec.d_z},
        ),
    ]


def sample_encoders(game, count, seed):
    rng = np.random.default_rng(seed)
    d_z, d_x = game.spec.d_z, game.spec.d_x
    return [
        LinearEncoder(game.project_encoder(rng.standard_normal((d_z, d_x)) / np.sqrt(d_x)))
        for _ in range(count)
    ]


def check_sg_assumptions(game, ds, encoders=None, seed=0, tol=env.SG_TOL):
    """
    The three sequential-game conditions, made checkable:

    - an expressiveness maximizer exists: the analytic construction for the
      game succeeds on this dataset;
    - compatibility can be maximized: the pseudoinverse decoder reaches the
      upper bound C = 0 for every sampled encoder;
    - the decoder's best value does not depend on the encoder: the best
      responses of all sampled encoders agree within `tol`.
    """
    if encoders is None:
        encoders = sample_encoders(game, env.SG_SAMPLES, seed)

    try:
        if game.KIND is GameKind.MSP:
            oracle_msp_encoder(ds, game.spec.d_z, game.precision)
        else:
            oracle_ssp_encoder(ds, game.spec.d_z)
        maximizer = AssumptionCheck("expressiveness can be maximized", True)
    except ClosedLoopError as e:
        maximizer = AssumptionCheck(
            "expressiveness can be maximized", False, {"reason": str(e)}
        )

    best = []
    for enc in encoders:
        dec = game.project_decoder(pseudoinverse_decoder(enc).G)
        best.append(game.decoder_utility(enc.F, dec, game.moments))
    best = np.array(best)
    return [
        maximizer,
        AssumptionCheck(
            "compatibility can be maximized",
            bool(np.all(np.abs(best) <= tol)),
            {"best_responses": best.tolist(), "tol": tol},
        ),
        AssumptionCheck(
            "constant best response",
            bool(np.ptp(best) <= tol),
            {"spread": float(np.ptp(best)), "tol": tol},
        ),
    ]
