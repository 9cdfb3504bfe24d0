import asyncio
import logging
import os

from .. import fanout, files
from ..errors import (
    EXIT_PASS,
    EXIT_RUNTIME,
    EXIT_VERIFY_FAILED,
    ClosedLoopError,
    ConfigError,
    Diverged,
)
from ..games import checks
from ..games.core import GameKind, bind_game
from ..games.data import load_pair, save_pair
from ..metrics import data as report_data
from ..metrics import env as metrics_env
from ..metrics.verify import verify_msp_equilibrium, verify_ssp_equilibrium
from ..subspaces.data import load_dataset, save_dataset
from ..subspaces.generate import generate as generate_dataset
from ..training import data as history_data
from ..training.gdmax import gdmax_train
from . import config, env

log = logging.getLogger(__name__)

DONE = "done"


def dataset_path(cfg):
    return os.path.join(cfg.output_dir, env.DATASET_CSV)


def _done(**extra):
    return {"status": DONE, "exit_code": EXIT_PASS, **extra}


def _write_config(cfg, output_dir):
    data = cfg.to_dict()
    del data["output_dir"]
    files.write_json(os.path.join(output_dir, env.CONFIG_JSON), {**data, **cfg.stamp()})


def run_generate(cfg):
    output_dir = files.prepare_output_dir(cfg.output_dir)
    ds = generate_dataset(cfg.generation)
    save_dataset(ds, dataset_path(cfg), stamp=cfg.stamp())
    _write_config(cfg, output_dir)
    return _done(n=ds.n, k=ds.k)


def load_matching_dataset(cfg):
    """
    Loads the dataset in the output directory, refusing one that was
    generated from a different generation config than `cfg` carries.
    """
    path = dataset_path(cfg)
    ds = load_dataset(path)
    if ds.config != cfg.generation:
        raise ConfigError(
            "generation",
            f"{path} was generated from a different config (seed {ds.config.seed}); "
            "run generate again",
        )
    return ds


def ensure_dataset(cfg):
    path = dataset_path(cfg)
    if os.path.exists(path):
        ds = load_dataset(path)
        if ds.config == cfg.generation:
            return ds
        log.warning("dataset at %s was generated from another config, regenerating", path)
    else:
        log.info("no dataset at %s, generating one", path)
    run_generate(cfg)
    return load_dataset(path)


def assumption_checks(spec, ds):
    if spec.kind is GameKind.MSP:
        return checks.check_msp_assumptions(ds, spec)
    return checks.check_ssp_assumptions(ds, spec)


def run_train(cfg):
    ds = ensure_dataset(cfg)
    spec = cfg.spec()
    for check in assumption_checks(spec, ds):
        if not check.passed:
            log.warning("assumption '%s' does not hold: %s", check.name, check.evidence)

    stamp = cfg.stamp()
    try:
        enc, dec, history = gdmax_train(spec, ds, cfg.train)
    except Diverged as e:
        # keep the last good pair around for inspection
        save_pair(spec, e.encoder, e.decoder, cfg.output_dir, stamp, {"diverged_at": e.step})
        raise
    save_pair(spec, enc, dec, cfg.output_dir, stamp)
    history_data.save_history(history, cfg.output_dir, stamp)
    return _done(steps=len(history))


def _outcome(report):
    ok = report.status == metrics_env.STATUS_PASS or (
        report.status == metrics_env.STATUS_PARTIAL
        and report.mode == metrics_env.MODE_RELAXED
    )
    return {
        "status": report.status,
        "exit_code": EXIT_PASS if ok else EXIT_VERIFY_FAILED,
        **{f"check_{k}": v for k, v in report.checks.items()},
    }


def run_verify(cfg):
    ds = load_matching_dataset(cfg)
    spec, enc, dec = load_pair(cfg.output_dir)
    if spec.kind is GameKind.MSP:
        report = verify_msp_equilibrium(enc, dec, ds, spec.precision, cfg.thresholds)
    else:
        report = verify_ssp_equilibrium(enc, dec, ds, cfg.thresholds)

    game = bind_game(spec, ds)
    found = assumption_checks(spec, ds) + checks.check_sg_assumptions(game, ds, seed=cfg.seed)
    report.extra["assumptions"] = [c.to_dict() for c in found]
    report_data.save_report(report, cfg.output_dir, cfg.stamp())
    log.info("verification %s: %s", report.status, report.checks)
    return _outcome(report)


def run_report(cfg):
    ds = load_matching_dataset(cfg)
    _, enc, dec = load_pair(cfg.output_dir)
    written = report_data.write_report_tables(
        enc, dec, ds, cfg.output_dir, stamp=cfg.stamp(), rank_tol=cfg.thresholds.rank_rtol
    )
    log.info("wrote %s", ", ".join(written))

    outcome = _done(files=len(written))
    if os.path.exists(os.path.join(cfg.output_dir, history_data.HISTORY_CSV)):
        history = history_data.load_history(cfg.output_dir)
        if len(history):
            outcome["encoder_utility"] = history.column("encoder_utility")[-1]
            outcome["decoder_utility"] = history.column("decoder_utility")[-1]
    if os.path.exists(os.path.join(cfg.output_dir, report_data.METRICS_JSON)):
        outcome.update(_outcome(report_data.load_report(cfg.output_dir)))
    return outcome


def run_all(cfg):
    run_generate(cfg)
    run_train(cfg)
    outcome = run_verify(cfg)
    run_report(cfg)
    return outcome


def status_line(name, cfg, outcome):
    return "{} {} seed={} config_hash={} exit={}".format(
        name, outcome["status"], cfg.seed, cfg.config_hash[:12], outcome["exit_code"]
    )


SUMMARY_COLUMNS = ["seed", "status", "exit_code", "config_hash"]


def fan_out(name, job, cfg, seeds, threads):
    seeded = [
        (
            cfg.with_seed(seed),
            os.path.join(cfg.output_dir, env.SEED_DIR.format(seed)),
        )
        for seed in seeds
    ]
    outcomes = asyncio.run(fanout.run_seeds(job, seeded, max_concurrent=threads))
    rows = []
    for (seed_cfg, _), outcome in zip(seeded, outcomes):
        print(status_line(name, seed_cfg, outcome))
        rows.append(
            [seed_cfg.seed, outcome["status"], outcome["exit_code"], seed_cfg.config_hash]
        )
    files.prepare_output_dir(cfg.output_dir)
    files.write_rows(os.path.join(cfg.output_dir, env.SUMMARY_CSV), SUMMARY_COLUMNS, rows)
    return max(outcome["exit_code"] for outcome in outcomes)


def command(name, job):
    def run(args):
        try:
            cfg = config.config_from_args(args)
            if args.seeds:
                return fan_out(name, job, cfg, args.seeds, args.threads)
            outcome = job(cfg)
        except ClosedLoopError as e:
            log.error("%s", e)
            return e.exit_code
        except Exception:
            log.exception("%s failed", name)
            return EXIT_RUNTIME
        print(status_line(name, cfg, outcome))
        return outcome["exit_code"]

    return run


COMMANDS = {
    "generate": (run_generate, "Generate a union-of-subspaces dataset"),
    "train": (run_train, "Train an encoder/decoder pair with GDMax"),
    "verify": (run_verify, "Check the trained pair against the equilibrium properties"),
    "report": (run_report, "Write heatmaps, spectra, residuals and isometry ratios"),
    "all": (run_all, "Generate, train, verify and report in one go"),
}


def init_parsers(parsers):
    for name, (job, help_text) in COMMANDS.items():
        parser = parsers.add_parser(name, help=help_text)
        parser.set_defaults(func=command(name, job))
        config.add_common_arguments(parser)
