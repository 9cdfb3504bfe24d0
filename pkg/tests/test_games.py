import numpy as np
import pytest
from conftest import central_difference, relative_error

from closedloop import files, rates
from closedloop.errors import AssumptionViolated, ParseError, RankDeficient, ShapeMismatch
from closedloop.games import core, data
from closedloop.games.core import GameKind, GameSpec, LinearDecoder, LinearEncoder
from closedloop.games.projections import polar
from closedloop.rates import Precision


def msp_spec(ds, d_z, eps_sq=1.0):
    return GameSpec(GameKind.MSP, ds.d_x, d_z, Precision(eps_sq))


def ssp_spec(ds, d_z, eps_sq=1.0):
    return GameSpec(GameKind.SSP, ds.d_x, d_z, Precision(eps_sq))


def test_spec_accepts_kind_names():
    spec = GameSpec("ssp", 4, 3, Precision(1.0))
    assert spec.kind is GameKind.SSP


def test_pseudoinverse_examples(rng):
    Q, _ = np.linalg.qr(rng.standard_normal((6, 4)))
    F = Q.T
    np.testing.assert_allclose(core.pseudoinverse_decoder(LinearEncoder(F)).G, F.T, atol=1e-12)

    zero = core.pseudoinverse_decoder(LinearEncoder(np.zeros((3, 5))))
    np.testing.assert_array_equal(zero.G, np.zeros((5, 3)))


def test_pseudoinverse_penrose_conditions(rng):
    F = rng.standard_normal((5, 3)) @ rng.standard_normal((3, 8))
    P = core.pseudoinverse_decoder(LinearEncoder(F)).G
    assert np.linalg.norm(F @ P @ F - F) < 1e-8
    assert np.linalg.norm(P @ F @ P - P) < 1e-8
    assert np.linalg.norm((F @ P).T - F @ P) < 1e-8
    assert np.linalg.norm((P @ F).T - P @ F) < 1e-8


def test_pseudoinverse_decoder_zeroes_every_pair_term(toy_dataset, rng):
    spec = msp_spec(toy_dataset, 4)
    enc = LinearEncoder(rng.standard_normal((4, 6)))
    dec = core.pseudoinverse_decoder(enc)
    expressiveness = rates.rate_reduction_classwise(
        enc(toy_dataset.X), toy_dataset.partition, spec.precision
    )
    assert core.decoder_utility(spec, enc, dec, toy_dataset) == pytest.approx(0.0, abs=1e-8)
    assert core.encoder_utility(spec, enc, dec, toy_dataset) == pytest.approx(
        expressiveness, abs=1e-8
    )


def test_utilities_match_direct_evaluation(toy_dataset, rng):
    spec = msp_spec(toy_dataset, 4)
    F = rng.standard_normal((4, 6))
    G = rng.standard_normal((6, 4))
    p = spec.precision
    Z = F @ toy_dataset.X
    W = F @ G @ Z
    pairs = sum(
        rates.rate_reduction_pair(Zj, Wj, p)
        for Zj, Wj in zip(toy_dataset.partition.split(Z), toy_dataset.partition.split(W))
    )
    enc, dec = LinearEncoder(F), LinearDecoder(G)
    assert core.decoder_utility(spec, enc, dec, toy_dataset) == pytest.approx(-pairs, rel=1e-9)
    expected = rates.rate_reduction_classwise(Z, toy_dataset.partition, p) + pairs
    assert core.encoder_utility(spec, enc, dec, toy_dataset) == pytest.approx(expected, rel=1e-9)


def test_ssp_utilities_match_direct_evaluation(toy_single_dataset, rng):
    ds = toy_single_dataset
    spec = ssp_spec(ds, 4)
    F = polar(rng.standard_normal((4, 6)))
    G = polar(rng.standard_normal((6, 4)))
    Z = F @ ds.X
    pair = rates.rate_reduction_pair(Z, F @ G @ Z, spec.precision)
    enc, dec = LinearEncoder(F), LinearDecoder(G)
    assert core.decoder_utility(spec, enc, dec, ds) == pytest.approx(-pair, rel=1e-9)
    assert core.encoder_utility(spec, enc, dec, ds) == pytest.approx(
        rates.coding_rate(Z, spec.precision) + pair, rel=1e-9
    )


def test_zero_encoder(toy_dataset, rng):
    spec = msp_spec(toy_dataset, 4)
    enc = LinearEncoder(np.zeros((4, 6)))
    dec = LinearDecoder(rng.standard_normal((6, 4)))
    assert core.encoder_utility(spec, enc, dec, toy_dataset) == pytest.approx(0.0, abs=1e-12)
    assert core.decoder_utility(spec, enc, dec, toy_dataset) == pytest.approx(0.0, abs=1e-12)


def test_zero_decoder_is_strictly_worse(toy_dataset, rng):
    spec = msp_spec(toy_dataset, 4)
    enc = LinearEncoder(rng.standard_normal((4, 6)))
    dec = LinearDecoder(np.zeros((6, 4)))
    assert core.decoder_utility(spec, enc, dec, toy_dataset) < -1e-3


def test_decoder_optimum_on_feasible_encoders(small_dataset, rng):
    spec = msp_spec(small_dataset, 15)
    game = core.bind_game(spec, small_dataset)
    for _ in range(100):
        F = game.project_encoder(rng.standard_normal((15, 20)))
        enc = LinearEncoder(F)
        best = core.decoder_utility(spec, enc, core.pseudoinverse_decoder(enc), small_dataset)
        assert abs(best) < 1e-8
        dec = LinearDecoder(rng.standard_normal((20, 15)))
        assert core.decoder_utility(spec, enc, dec, small_dataset) <= 1e-10
        assert core.encoder_utility(spec, enc, dec, small_dataset) >= (
            rates.rate_reduction_classwise(enc(small_dataset.X), small_dataset.partition, spec.precision)
            - 1e-9
        )


@pytest.mark.parametrize("kind", [GameKind.MSP, GameKind.SSP])
def test_gradients_match_finite_differences(kind, toy_dataset, toy_single_dataset, rng):
    ds = toy_dataset if kind is GameKind.MSP else toy_single_dataset
    spec = GameSpec(kind, 6, 4, Precision(1.0))
    for _ in range(100):
        F = rng.standard_normal((4, 6))
        G = rng.standard_normal((6, 4))
        enc, dec = LinearEncoder(F), LinearDecoder(G)

        numeric = central_difference(
            lambda A: core.encoder_utility(spec, LinearEncoder(A), dec, ds), F
        )
        analytic = core.encoder_gradient(spec, enc, dec, ds)
        assert relative_error(analytic, numeric) < 1e-5

        numeric = central_difference(
            lambda B: core.decoder_utility(spec, enc, LinearDecoder(B), ds), G
        )
        analytic = core.decoder_gradient(spec, enc, dec, ds)
        assert relative_error(analytic, numeric) < 1e-5


def test_encoder_gradient_at_zero(toy_dataset, rng):
    spec = msp_spec(toy_dataset, 4)
    F = np.zeros((4, 6))
    dec = LinearDecoder(rng.standard_normal((6, 4)))
    numeric = central_difference(
        lambda A: core.encoder_utility(spec, LinearEncoder(A), dec, toy_dataset), F
    )
    analytic = core.encoder_gradient(spec, LinearEncoder(F), dec, toy_dataset)
    np.testing.assert_allclose(analytic, numeric, atol=1e-6)


def test_bind_game_checks_class_count(toy_dataset, toy_single_dataset):
    with pytest.raises(AssumptionViolated, match="multiple classes"):
        core.bind_game(msp_spec(toy_single_dataset, 4), toy_single_dataset)
    with pytest.raises(AssumptionViolated, match="single class"):
        core.bind_game(ssp_spec(toy_dataset, 4), toy_dataset)


def test_shape_mismatch(toy_dataset):
    spec = msp_spec(toy_dataset, 4)
    enc = LinearEncoder(np.ones((3, 6)))
    dec = LinearDecoder(np.ones((6, 3)))
    with pytest.raises(ShapeMismatch):
        core.encoder_utility(spec, enc, dec, toy_dataset)
    other = GameSpec(GameKind.MSP, 5, 4, Precision(1.0))
    with pytest.raises(ShapeMismatch):
        core.bind_game(other, toy_dataset)


def test_ssp_projections(rng):
    np.testing.assert_allclose(
        core.project_encoder_ssp(LinearEncoder(np.diag([2.0, 3.0]))).F, np.eye(2), atol=1e-12
    )
    F = core.project_encoder_ssp(LinearEncoder(rng.standard_normal((4, 6)))).F
    np.testing.assert_allclose(F @ F.T, np.eye(4), atol=1e-10)
    np.testing.assert_allclose(core.project_encoder_ssp(LinearEncoder(F)).F, F, atol=1e-10)
    G = core.project_decoder_ssp(LinearDecoder(rng.standard_normal((6, 4)))).G
    np.testing.assert_allclose(G.T @ G, np.eye(4), atol=1e-10)
    with pytest.raises(RankDeficient):
        core.project_encoder_ssp(LinearEncoder(np.zeros((3, 4))))


def test_semi_orthogonal_maps_shrink_spectra(rng):
    for _ in range(20):
        F = polar(rng.standard_normal((4, 6)))
        X = rng.standard_normal((6, 10))
        s_fx = np.linalg.svd(F @ X, compute_uv=False)
        s_x = np.linalg.svd(X, compute_uv=False)
        assert np.all(s_fx <= s_x[: s_fx.size] + 1e-10)


def test_pair_round_trip(tmp_path, rng):
    spec = GameSpec(GameKind.MSP, 6, 4, Precision(0.5))
    enc = LinearEncoder(rng.standard_normal((4, 6)))
    dec = LinearDecoder(rng.standard_normal((6, 4)))
    data.save_pair(spec, enc, dec, tmp_path, stamp={"config_hash": "x", "seed": 1})
    loaded_spec, loaded_enc, loaded_dec = data.load_pair(tmp_path)
    assert loaded_spec == spec
    np.testing.assert_array_equal(loaded_enc.F, enc.F)
    np.testing.assert_array_equal(loaded_dec.G, dec.G)


def test_pair_with_wrong_shape_is_rejected(tmp_path, rng):
    spec = GameSpec(GameKind.SSP, 6, 4, Precision(1.0))
    enc = LinearEncoder(rng.standard_normal((4, 6)))
    dec = LinearDecoder(rng.standard_normal((6, 4)))
    data.save_pair(spec, enc, dec, tmp_path)
    files.write_matrix(tmp_path / data.ENCODER_CSV, rng.standard_normal((3, 6)))
    with pytest.raises(ParseError, match="encoder shape"):
        data.load_pair(tmp_path)


def test_pair_without_sidecar(tmp_path):
    with pytest.raises(ParseError, match="missing"):
        data.load_pair(tmp_path)
