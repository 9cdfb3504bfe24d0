import numpy as np
import pytest
from conftest import make_dataset

from closedloop.errors import AssumptionViolated
from closedloop.games.core import LinearDecoder, LinearEncoder
from closedloop.games.oracle import oracle_msp_encoder, oracle_ssp_encoder
from closedloop.games.projections import semi_orthogonality_error
from closedloop.metrics import measures
from closedloop.metrics.verify import Thresholds, verify_msp_equilibrium, verify_ssp_equilibrium
from closedloop.rates import Precision


@pytest.fixture(scope="module")
def baseline_oracle(baseline_dataset):
    return oracle_msp_encoder(baseline_dataset, 40, Precision(1.0))


def test_msp_oracle_structure(baseline_dataset, baseline_oracle):
    enc, _ = baseline_oracle
    ds = baseline_dataset
    Z = enc(ds.X)
    cross = measures.cross_gram(Z, ds.partition)
    off = cross[~np.eye(ds.k, dtype=bool)]
    assert off.max() < 1e-8
    for Zj, n_j in zip(ds.partition.split(Z), ds.partition.class_counts):
        assert np.linalg.norm(Zj) ** 2 == pytest.approx(n_j, rel=1e-8)


def test_msp_oracle_passes_verification(baseline_dataset, baseline_oracle):
    enc, dec = baseline_oracle
    report = verify_msp_equilibrium(enc, dec, baseline_dataset, Precision(1.0), Thresholds.oracle())
    assert report.passed, report.checks
    assert all(c["branch"] == "equal" for c in report.classes)
    assert report.checks["dominant"]


@pytest.mark.parametrize("seed", range(20))
def test_msp_oracle_passes_across_seeds(seed):
    ds = make_dataset(n_per_class=[60, 60, 60], d_x=20, subspace_dims=[2, 3, 4], nu=1e6, seed=seed)
    enc, dec = oracle_msp_encoder(ds, 15, Precision(1.0))
    report = verify_msp_equilibrium(enc, dec, ds, Precision(1.0), Thresholds.oracle())
    assert report.passed, report.checks


def test_zero_pair_is_not_injective(baseline_dataset):
    enc = LinearEncoder(np.zeros((40, 50)))
    dec = LinearDecoder(np.zeros((50, 40)))
    report = verify_msp_equilibrium(enc, dec, baseline_dataset, Precision(1.0))
    assert report.status == "fail"
    assert not report.checks["injective"]


def test_zero_decoder_is_not_consistent(baseline_dataset, baseline_oracle):
    enc, _ = baseline_oracle
    dec = LinearDecoder(np.zeros((50, 40)))
    report = verify_msp_equilibrium(enc, dec, baseline_dataset, Precision(1.0))
    assert report.status == "fail"
    assert not report.checks["consistent"]
    assert report.checks["injective"]


def test_zeroed_encoder_row_breaks_rank(baseline_dataset, baseline_oracle):
    enc, _ = baseline_oracle
    F = enc.F.copy()
    F[0] = 0.0
    enc = LinearEncoder(F)
    dec = LinearDecoder(np.linalg.pinv(F))
    report = verify_msp_equilibrium(enc, dec, baseline_dataset, Precision(1.0))
    assert not report.checks["injective"]
    assert report.classes[0]["rank"] == baseline_dataset.subspace_dims[0] - 1


def test_msp_oracle_needs_room(baseline_dataset):
    with pytest.raises(AssumptionViolated, match="large enough representation space"):
        oracle_msp_encoder(baseline_dataset, 10, Precision(1.0))


@pytest.mark.parametrize("d_z", [40, 60])
def test_ssp_oracle(single_dataset, d_z):
    enc, dec = oracle_ssp_encoder(single_dataset, d_z)
    assert enc.F.shape == (d_z, 50)
    assert semi_orthogonality_error(enc.F) < 1e-10
    np.testing.assert_array_equal(dec.G, enc.F.T)
    report = verify_ssp_equilibrium(enc, dec, single_dataset, Thresholds.oracle())
    assert report.passed, report.checks
    assert report.evidence["isometry_pairs"] == 500 * 499 // 2


def test_ssp_oracle_needs_room(single_dataset):
    with pytest.raises(AssumptionViolated):
        oracle_ssp_encoder(single_dataset, 5)
